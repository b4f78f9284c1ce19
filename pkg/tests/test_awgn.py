import math

import numpy as np
import pytest

from bcfeedback.awgn import (
    REFERENCE_SCHEME_SUM_RATES, REPORTED_SUM_RATES, TERM_KEYS, AwgnChannelSpec, AwgnModelError, AwgnParams,
    assemble_bounds, awgn_rate_region, awgn_sum_rate, build_covariance, compute_moments,
    corollary_terms_closed_form, corollary_terms_oracle, cut_set_sum_rate, delta_variance,
    marton_no_feedback_sum_rate,
)
from bcfeedback.polytope import contains, max_sum_rate
from conftest import random_awgn_params


def params(snr=10.0, sigmaf2=0.0, rho=0.0, alpha=0.4, beta=0.2, D=0.3, p1_frac=0.2):
    ch = AwgnChannelSpec.from_snr(snr, sigmaf2, rho)
    return AwgnParams(ch, alpha, beta, D, p1_frac * ch.P)


# the optimizer's SNR-10 optimum, kept fixed so region checks need no search
OPT10 = dict(alpha=0.4339745653462325, beta=0.18834210511284383, D=0.26603980482498946,
             p1_frac=0.19786180467537562)


def test_channel_validation():
    with pytest.raises(AwgnModelError):
        AwgnChannelSpec(P=0.0)
    with pytest.raises(AwgnModelError):
        AwgnChannelSpec(P=1.0, sigma2=-1.0)
    with pytest.raises(AwgnModelError):
        AwgnChannelSpec(P=1.0, sigmaf2=-0.1)
    with pytest.raises(AwgnModelError):
        AwgnChannelSpec(P=1.0, rho=1.5)


def test_params_validation():
    ch = AwgnChannelSpec(P=10.0)
    with pytest.raises(AwgnModelError):
        AwgnParams(ch, 0.0, 0.5, 0.5, 5.0)
    with pytest.raises(AwgnModelError):
        AwgnParams(ch, 0.5, 1.0, 0.5, 5.0)
    with pytest.raises(AwgnModelError):
        AwgnParams(ch, 0.5, 0.5, 0.0, 5.0)
    with pytest.raises(AwgnModelError):
        AwgnParams(ch, 0.5, 0.5, 0.5, 10.0)
    AwgnParams(ch, 0.5, 0.5, 1.0, 5.0)  # D = 1 is allowed


def test_noiseless_feedback_edy_zero():
    assert compute_moments(params(sigmaf2=0.0)).EdY == 0.0


def test_full_correlation_edz_zero():
    assert compute_moments(params(rho=1.0, sigmaf2=0.0)).EdZ == 0.0


def test_mu_matches_covariance(rng):
    for _ in range(50):
        p = random_awgn_params(rng)
        assert compute_moments(p).Mu == pytest.approx(delta_variance(p), rel=1e-10, abs=1e-12)


def test_conditional_variances_in_unit_interval(rng):
    for _ in range(200):
        m = compute_moments(random_awgn_params(rng))
        assert m.Mu > 0
        for k in ("varT_CV", "varT_CU", "varT_CZ", "varT_CY", "varT_CVZ", "varT_CUY"):
            assert -1e-9 <= getattr(m, k) <= 1 + 1e-9


def test_covariance_c0_unit_variance(rng):
    for _ in range(20):
        cov = build_covariance(random_awgn_params(rng))
        assert cov.var("C0") == pytest.approx(1.0, abs=1e-12)
        assert cov.var("T1~") == pytest.approx(1.0, abs=1e-12)


def test_covariance_d_one_decouples_c0():
    cov = build_covariance(params(D=1.0))
    i = cov.index("C0")
    for n in ("Q1~", "Q2~", "C0~", "U~", "V~", "X~", "Y~", "Z~", "S~", "T1~"):
        assert abs(cov.cov[i, cov.index(n)]) < 1e-15


def test_covariance_feedback_correlation():
    p = params(sigmaf2=0.7)
    cov = build_covariance(p)
    c = p.channel
    var_y = c.P + c.sigma2
    assert cov.corr("Y~", "S~") == pytest.approx(math.sqrt(var_y) / math.sqrt(var_y + c.sigmaf2),
                                                 abs=1e-12)


def test_c0_independent_of_rest_given_t1():
    from bcfeedback.info import gaussian_mutual_info
    cov = build_covariance(params(sigmaf2=0.3, rho=0.2))
    assert gaussian_mutual_info(cov, "C0", "Q1 Q2", "T1~") < 1e-12
    assert gaussian_mutual_info(cov, "C0", "Y~ Z~ Q1~", "T1~") < 1e-12


def test_uv_independent_as_beta_vanishes():
    assert corollary_terms_closed_form(params(beta=1e-6))["I(U;V)"] < 1e-10


def test_v_z_given_c0_formula():
    ch = AwgnChannelSpec.from_snr(10.0)
    p = AwgnParams(ch, 0.5, 0.3, 0.4, ch.P * (1 - 1e-9))
    P, s2 = ch.P, ch.sigma2
    expect = 0.5 * math.log2((P + s2) / (0.5 * P + s2))
    assert corollary_terms_closed_form(p)["I(V;Z|C0)"] == pytest.approx(expect, abs=1e-8)
    assert corollary_terms_oracle(p)["I(V;Z|C0)"] == pytest.approx(expect, abs=1e-8)


def test_u_y_given_c0_oracle_matches_formula(rng):
    for _ in range(20):
        p = random_awgn_params(rng)
        a, b, P1, s2 = p.alpha, p.beta, p.P1, p.channel.sigma2
        den = P1 + s2
        f = 0.5 * math.log2(den * (a + b * b * (1 - a))
                            / (den * (a + b * b * (1 - a)) - P1 * (a + b * (1 - a)) ** 2))
        assert corollary_terms_oracle(p)["I(U;Y|C0)"] == pytest.approx(f, abs=1e-8)


def test_d_one_resolution_term_zero():
    t = corollary_terms_oracle(params(D=1.0, sigmaf2=0.4))
    assert t["I(C0;V~S~|C0~U~)"] < 1e-12


def test_dual_path_random_points(rng):
    worst = 0.0
    for _ in range(200):
        p = random_awgn_params(rng)
        a, b = corollary_terms_closed_form(p), corollary_terms_oracle(p)
        assert set(a) == set(b) == set(TERM_KEYS)
        worst = max(worst, max(abs(a[k] - b[k]) for k in TERM_KEYS))
    assert worst < 1e-8


def test_terms_nonnegative(rng):
    for _ in range(100):
        t = corollary_terms_closed_form(random_awgn_params(rng))
        assert min(t.values()) >= 0.0


RX1_RESOLUTION = ("I(C0;Y~|C0~U~)", "I(C0;U~|C0~Y~)", "I(C0;V~S~|C0~U~)", "I(C0;U~S~|C0~V~)")


def test_feedback_noise_monotone_resolution_terms(rng):
    grid = [0.0, 0.05, 0.1, 0.3, 1.0, 3.0]
    for _ in range(10):
        base = random_awgn_params(rng)
        c = base.channel
        pts = [base.with_(channel=AwgnChannelSpec(c.P, c.sigma2, s, c.rho)) for s in grid]
        terms = [corollary_terms_oracle(p) for p in pts]
        for key in RX1_RESOLUTION:
            vals = [t[key] for t in terms]
            assert all(b <= a + 1e-10 for a, b in zip(vals, vals[1:])), key


def test_full_correlation_delta_uncorrelated_with_z():
    from bcfeedback.info import gaussian_mutual_info
    p = params(rho=1.0, sigmaf2=0.0)
    m = compute_moments(p)
    assert m.EdZ == 0.0
    assert m.varT_CZ == pytest.approx(1.0, abs=1e-15)
    assert gaussian_mutual_info(build_covariance(p), "C0", "Z~", "C0~") < 1e-12


def test_region_contains_origin_and_d_one():
    poly = awgn_rate_region(params(D=1.0))
    assert contains(poly, (0.0, 0.0, 0.0))
    assert len(poly.b) == 7


def test_region_dual_path_coefficients(rng):
    for _ in range(30):
        p = random_awgn_params(rng)
        a, b = awgn_rate_region(p), awgn_rate_region(p, use_oracle=True)
        np.testing.assert_array_equal(a.A, b.A)
        np.testing.assert_allclose(a.b, b.b, atol=1e-8)


def test_region_at_optimum_sum_rate():
    poly = awgn_rate_region(params(**OPT10))
    assert max_sum_rate(poly) == pytest.approx(1.842, abs=0.01)
    assert poly.meta["time_sharing"]


def test_sum_rate_below_cut_set(rng):
    for _ in range(100):
        p = random_awgn_params(rng)
        assert awgn_sum_rate(p) <= cut_set_sum_rate(p) + 1e-9


def test_kernel_bounds_match_assembly(rng):
    from bcfeedback import kernels
    for _ in range(50):
        p = random_awgn_params(rng)
        np.testing.assert_allclose(kernels.bounds(*p.args()),
                                   assemble_bounds(corollary_terms_oracle(p)), atol=1e-8)
        assert kernels.sum_rate(*p.args()) == pytest.approx(awgn_sum_rate(p), abs=1e-9)


def test_no_feedback_baseline():
    assert marton_no_feedback_sum_rate(AwgnChannelSpec.from_snr(10)) == pytest.approx(
        0.5 * math.log2(11), abs=1e-15)
    assert marton_no_feedback_sum_rate(AwgnChannelSpec.from_snr(10)) == pytest.approx(1.729716, abs=1e-6)
    assert marton_no_feedback_sum_rate(AwgnChannelSpec.from_snr(100)) == pytest.approx(3.329106, abs=1e-6)
    assert marton_no_feedback_sum_rate(AwgnChannelSpec.from_snr(1e-12)) < 1e-11


def test_reference_constants():
    assert REPORTED_SUM_RATES == {10: 1.842, 100: 3.612, 1000: 5.378}
    assert REFERENCE_SCHEME_SUM_RATES == {10: 1.852, 100: 3.452, 1000: 5.105}
