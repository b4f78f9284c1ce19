import numpy as np
import pytest

from bcfeedback.awgn import AwgnChannelSpec, AwgnParams


def random_awgn_params(rng: np.random.Generator) -> AwgnParams:
    """A valid parameter point spread over several decades of SNR."""
    ch = AwgnChannelSpec(
        P=float(10 ** rng.uniform(-1, 3)),
        sigma2=float(rng.uniform(0.2, 3.0)),
        sigmaf2=float(rng.choice([0.0, rng.uniform(0.0, 3.0)])),
        rho=float(rng.uniform(-1.0, 1.0)),
    )
    return AwgnParams(ch, float(rng.uniform(0.01, 0.99)), float(rng.uniform(0.01, 0.99)),
                      float(rng.uniform(0.01, 1.0)), float(ch.P * rng.uniform(0.01, 0.99)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
