"""Achievable rate regions for two-receiver broadcast channels with feedback."""
from .info import (
    AtomEvaluator, GaussianCov, InfoAtom, InfoError, JointPmf, entropy, eval_atom,
    gaussian_mutual_info, marginalize, mutual_info,
)
from .polytope import (
    RatePolytope, contains, max_sum_rate, max_weighted_sum, region_diff, region_equal, slice_r0,
)
from .awgn import (
    AwgnChannelSpec, AwgnMoments, AwgnParams, awgn_rate_region, awgn_sum_rate,
    build_covariance, compute_moments, corollary_terms_closed_form, corollary_terms_oracle,
    marton_no_feedback_sum_rate,
)
from .regions import (
    Kernel, TwoBlockModel, build_two_block, check_consistency, corollary1_region,
    theorem1_region, dueck_region_closed_form, blackwell_region_closed_form, marton_region,
    fme_theorem1_report,
)
from .optimizer import OptBudget, OptResult, optimize_sum_rate, sweep
from .kernels import BACKEND

__version__ = "0.1.0"
