"""Scalar AWGN broadcast channel with noisy feedback from receiver 1.

Two evaluation paths produce the same mutual-information terms:

* closed forms in the moments of the transmitter's error estimate
  (``corollary_terms_closed_form``), and
* log-determinants of the exact two-block covariance
  (``corollary_terms_oracle``), built from independent unit Gaussians.

Term keys use ASCII names with ``~`` marking the previous block, e.g.
``"I(C0;U~S~|C0~V~)"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from . import _awgn_py
from .info import GaussianCov, gaussian_mutual_info, names_of
from .polytope import RatePolytope, max_sum_rate

PARAM_MARGIN = 1e-9

# reported sum rates for noiseless feedback, rho = 0, sigma^2 = 1, and those
# of the comparison scheme behind ``compare --against bhaskaran-ref``
REPORTED_SUM_RATES = {10: 1.842, 100: 3.612, 1000: 5.378}
REFERENCE_SCHEME_SUM_RATES = {10: 1.852, 100: 3.452, 1000: 5.105}

ASSEMBLY_KEYS = ("I(Y~;U~|C0~)", "I(Z~;V~|C0~)")
TERM_KEYS = _awgn_py.TERM_KEYS + ASSEMBLY_KEYS


class AwgnModelError(ValueError):
    pass


@dataclass(frozen=True)
class AwgnChannelSpec:
    P: float
    sigma2: float = 1.0
    sigmaf2: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if not self.P > 0:
            raise AwgnModelError(f"P must be > 0, got {self.P}")
        if not self.sigma2 > 0:
            raise AwgnModelError(f"sigma2 must be > 0, got {self.sigma2}")
        if not self.sigmaf2 >= 0:
            raise AwgnModelError(f"sigmaf2 must be >= 0, got {self.sigmaf2}")
        if not -1.0 <= self.rho <= 1.0:
            raise AwgnModelError(f"rho must lie in [-1, 1], got {self.rho}")

    @property
    def snr(self) -> float:
        return self.P / self.sigma2

    @classmethod
    def from_snr(cls, snr: float, sigmaf2: float = 0.0, rho: float = 0.0,
                 sigma2: float = 1.0) -> "AwgnChannelSpec":
        return cls(P=snr * sigma2, sigma2=sigma2, sigmaf2=sigmaf2, rho=rho)


@dataclass(frozen=True)
class AwgnParams:
    channel: AwgnChannelSpec
    alpha: float
    beta: float
    D: float
    P1: float

    def __post_init__(self):
        m = PARAM_MARGIN
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not m <= v <= 1.0 - m:
                raise AwgnModelError(f"{name} must lie in (0, 1), got {v}")
        if not m <= self.D <= 1.0:
            raise AwgnModelError(f"D must lie in (0, 1], got {self.D}")
        P = self.channel.P
        if not m * P <= self.P1 <= (1.0 - m) * P:
            raise AwgnModelError(f"P1 must lie in (0, P), got {self.P1} with P={P}")

    def args(self) -> tuple[float, ...]:
        c = self.channel
        return (c.P, c.sigma2, c.sigmaf2, c.rho, self.alpha, self.beta, self.D, self.P1)

    def with_(self, **kw) -> "AwgnParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class AwgnMoments:
    Mu: float
    EdV: float
    EdU: float
    EdZ: float
    EdY: float
    a1: float
    b1: float
    a2: float
    b2: float
    varT_CV: float
    varT_CU: float
    varT_CZ: float
    varT_CY: float
    varT_CVZ: float
    varT_CUY: float


def compute_moments(params: AwgnParams) -> AwgnMoments:
    vals = _awgn_py.moments(*params.args())
    return AwgnMoments(*(float(v) for v in vals))


# --------------------------------------------------------------------------
# covariance oracle

# independent unit-variance Gaussians the two blocks are built from
_BASE = ("Q1~", "Q2~", "C0~", "E1~", "E2~", "Ef~", "zeta0", "Q1", "Q2", "E1", "E2", "Ef")

COV_NAMES = (
    "Q1~", "Q2~", "C0~", "U~", "V~", "X~", "Y~", "Z~", "S~", "T1~",
    "zeta", "C0", "Q1", "Q2", "U", "V", "X", "Y", "Z", "S",
)


def _unit(name: str) -> np.ndarray:
    v = np.zeros(len(_BASE))
    v[_BASE.index(name)] = 1.0
    return v


def _project(x: np.ndarray, obs: list[np.ndarray]) -> np.ndarray:
    """Coefficients of E[x | obs] over the base (identity covariance)."""
    O = np.vstack(obs)
    w = np.linalg.solve(O @ O.T, O @ x)
    return w @ O


def _block_vectors(params: AwgnParams) -> dict[str, np.ndarray]:
    c = params.channel
    P, s2, sf2, rho = c.P, c.sigma2, c.sigmaf2, c.rho
    a, b, D, P1 = params.alpha, params.beta, params.D, params.P1
    s = math.sqrt(s2)
    vec: dict[str, np.ndarray] = {}

    def block(t: str, c0: np.ndarray) -> None:
        q1, q2 = _unit("Q1" + t), _unit("Q2" + t)
        n1 = s * _unit("E1" + t)
        n2 = s * (rho * _unit("E1" + t) + math.sqrt(max(0.0, 1.0 - rho * rho)) * _unit("E2" + t))
        nf = math.sqrt(sf2) * _unit("Ef" + t)
        v = math.sqrt((1 - a) * P1) * q2
        u = math.sqrt(a * P1) * q1 + b * v
        x = math.sqrt(P - P1) * c0 + math.sqrt((1 - a) * P1) * q2 + math.sqrt(a * P1) * q1
        y = x + n1
        vec.update({
            "Q1" + t: q1, "Q2" + t: q2, "C0" + t: c0, "U" + t: u, "V" + t: v,
            "X" + t: x, "Y" + t: y, "Z" + t: x + n2, "S" + t: y + nf,
        })

    block("~", _unit("C0~"))
    # receiver 1's estimation error, as estimated by the transmitter
    err = vec["U~"] - _project(vec["U~"], [vec["Y~"], vec["C0~"]])
    delta = _project(err, [vec["U~"], vec["V~"], vec["C0~"], vec["S~"]])
    mu = float(delta @ delta)
    if not mu > 0:
        raise AwgnModelError("tilde block: transmitter error estimate has zero variance")
    vec["T1~"] = delta / math.sqrt(mu)
    vec["zeta"] = math.sqrt(D) * _unit("zeta0")
    block("", math.sqrt(1.0 - D) * vec["T1~"] + vec["zeta"])
    return vec


def build_covariance(params: AwgnParams) -> GaussianCov:
    """Exact joint covariance of both blocks of the construction."""
    vec = _block_vectors(params)
    M = np.vstack([vec[n] for n in COV_NAMES])
    return GaussianCov(COV_NAMES, M @ M.T)


def delta_variance(params: AwgnParams) -> float:
    """E[Delta^2] straight from the covariance construction."""
    vec = _block_vectors(params)
    err = vec["U~"] - _project(vec["U~"], [vec["Y~"], vec["C0~"]])
    delta = _project(err, [vec["U~"], vec["V~"], vec["C0~"], vec["S~"]])
    return float(delta @ delta)


ORACLE_SETS = {
    "I(U;V)": ("U", "V", ""),
    "I(U;Y|C0)": ("U", "Y", "C0"),
    "I(V;Z|C0)": ("V", "Z", "C0"),
    "I(C0;U~S~|C0~V~)": ("C0", "U~ S~", "C0~ V~"),
    "I(C0;V~S~|C0~U~)": ("C0", "V~ S~", "C0~ U~"),
    "I(C0;Y~|C0~U~)": ("C0", "Y~", "C0~ U~"),
    "I(C0;Z~|C0~V~)": ("C0", "Z~", "C0~ V~"),
    "I(C0;U~|C0~Y~)": ("C0", "U~", "C0~ Y~"),
    "I(C0;V~|C0~Z~)": ("C0", "V~", "C0~ Z~"),
    "I(C0;Y|C0~Y~)": ("C0", "Y", "C0~ Y~"),
    "I(C0;Z|C0~Z~)": ("C0", "Z", "C0~ Z~"),
    "I(C0;Y|C0~U~Y~)": ("C0", "Y", "C0~ U~ Y~"),
    "I(C0;Z|C0~V~Z~)": ("C0", "Z", "C0~ V~ Z~"),
    "I(Y~;U~|C0~)": ("Y~", "U~", "C0~"),
    "I(Z~;V~|C0~)": ("Z~", "V~", "C0~"),
}


def _oracle(cov: GaussianCov, key: str) -> float:
    a, b, c = ORACLE_SETS[key]
    return gaussian_mutual_info(cov, names_of(a), names_of(b), names_of(c))


def corollary_terms_closed_form(params: AwgnParams) -> dict[str, float]:
    vals = _awgn_py.closed_terms(*params.args())
    terms = {k: float(v) for k, v in zip(_awgn_py.TERM_KEYS, vals)}
    cov = build_covariance(params)
    for k in ASSEMBLY_KEYS:
        terms[k] = _oracle(cov, k)
    return terms


def corollary_terms_oracle(params: AwgnParams) -> dict[str, float]:
    cov = build_covariance(params)
    return {k: _oracle(cov, k) for k in TERM_KEYS}


# --------------------------------------------------------------------------
# region assembly

REGION_LABELS = ("R0<=T1", "R0<=T2", "R0+R1", "R0+R2", "R0+R1+R2 (a)",
                 "R0+R1+R2 (b)", "2R0+R1+R2")
_REGION_COEFFS = ((1, 0, 0), (1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, 1, 1), (2, 1, 1))


def assemble_bounds(t: dict[str, float]) -> tuple[float, ...]:
    """Right-hand sides of the region with a constant common auxiliary.

    With W constant every conditioning on W~ drops, and
    I(C0 Z~; V~ | C0~) = I(Z~; V~ | C0~) + I(C0; V~ | C0~ Z~) (chain rule).
    """
    T1 = t["I(C0;Y~|C0~U~)"] + t["I(C0;Y|C0~U~Y~)"] - t["I(C0;V~S~|C0~U~)"]
    T2 = t["I(C0;Z~|C0~V~)"] + t["I(C0;Z|C0~V~Z~)"] - t["I(C0;U~S~|C0~V~)"]
    B1 = t["I(U;Y|C0)"] + t["I(C0;Y|C0~Y~)"] + t["I(C0;Y~|C0~U~)"] - t["I(C0;V~S~|C0~U~)"]
    B2 = t["I(V;Z|C0)"] + t["I(C0;Z|C0~Z~)"] + t["I(C0;Z~|C0~V~)"] - t["I(C0;U~S~|C0~V~)"]
    iz = t["I(Z~;V~|C0~)"] + t["I(C0;V~|C0~Z~)"]
    iy = t["I(Y~;U~|C0~)"] + t["I(C0;U~|C0~Y~)"]
    B3 = B1 + iz - t["I(U;V)"]
    B4 = B2 + iy - t["I(U;V)"]
    B5 = B1 + B2 - t["I(U;V)"]
    return T1, T2, B1, B2, B3, B4, B5


def awgn_rate_region(params: AwgnParams, use_oracle: bool = False) -> RatePolytope:
    terms = (corollary_terms_oracle if use_oracle else corollary_terms_closed_form)(params)
    rhs = assemble_bounds(terms)
    rows = [c + (r,) for c, r in zip(_REGION_COEFFS, rhs)]
    meta = {
        "source": "oracle" if use_oracle else "closed_form",
        "params": {f.name: getattr(params, f.name) for f in fields(params) if f.name != "channel"},
        "channel": {f.name: getattr(params.channel, f.name) for f in fields(params.channel)},
        "time_sharing": "single distribution; convex hull not taken",
    }
    return RatePolytope.from_rows(rows, REGION_LABELS, meta)


def awgn_sum_rate(params: AwgnParams) -> float:
    """max R1 + R2 over the region at R0 = 0 (0.0 when the region is empty)."""
    return max_sum_rate(awgn_rate_region(params))


def marton_no_feedback_sum_rate(channel: AwgnChannelSpec) -> float:
    return 0.5 * math.log2(1.0 + channel.P / channel.sigma2)


def cut_set_sum_rate(params: AwgnParams) -> float:
    """I(X; Y Z) from the oracle covariance; no scheme beats it."""
    cov = build_covariance(params)
    c = params.channel
    if c.rho in (-1.0, 1.0):
        return gaussian_mutual_info(cov, "X", "Y")
    return gaussian_mutual_info(cov, "X", "Y Z")
