"""Closed-form AWGN feedback terms, pure-Python/numpy backend.

Every function accepts scalars or broadcastable numpy arrays. The compiled
twin in ``_awgn_kernel.pyx`` must produce the same numbers; keep the two in
step.
"""
import numpy as np

# order of the values returned by closed_terms()
TERM_KEYS = (
    "I(U;V)",
    "I(U;Y|C0)",
    "I(V;Z|C0)",
    "I(C0;U~S~|C0~V~)",
    "I(C0;V~S~|C0~U~)",
    "I(C0;Y~|C0~U~)",
    "I(C0;Z~|C0~V~)",
    "I(C0;U~|C0~Y~)",
    "I(C0;V~|C0~Z~)",
    "I(C0;Y|C0~Y~)",
    "I(C0;Z|C0~Z~)",
    "I(C0;Y|C0~U~Y~)",
    "I(C0;Z|C0~V~Z~)",
)

MOMENT_KEYS = (
    "Mu", "EdV", "EdU", "EdZ", "EdY", "a1", "b1", "a2", "b2",
    "varT_CV", "varT_CU", "varT_CZ", "varT_CY", "varT_CVZ", "varT_CUY",
)

EMPTY_TOL = 1e-9


def moments(P, s2, sf2, rho, a, b, D, P1):
    ab = 1.0 - a
    bb = 1.0 - b
    den = P1 + s2
    # gain of the receiver-1 LMMSE estimate of U~ from its output
    g = P1 * (a + ab * b) / den
    cq1 = (s2 + bb * ab * P1) / den
    cq2 = (b * s2 - a * bb * P1) / den
    Mu = a * P1 * cq1 ** 2 + ab * P1 * cq2 ** 2 + g ** 2 * s2 ** 2 / (s2 + sf2)
    EdV = ab * P1 * cq2
    EdU = a * P1 * cq1 + b * ab * P1 * cq2
    EdZ = g * s2 * (1.0 - s2 * rho / (s2 + sf2))
    EdY = g * s2 * (sf2 / (s2 + sf2))
    varU = a * P1 + b * b * ab * P1
    covUY = a * P1 + b * ab * P1
    a1 = EdV * den - EdZ * ab * P1
    b1 = EdZ * ab * P1 - EdV * ab * P1
    a2 = EdU * den - EdY * covUY
    b2 = EdY * varU - EdU * covUY
    vCV = 1.0 - EdV ** 2 / (Mu * ab * P1)
    vCU = 1.0 - EdU ** 2 / (Mu * varU)
    vCZ = 1.0 - EdZ ** 2 / (Mu * den)
    vCY = 1.0 - EdY ** 2 / (Mu * den)
    vCVZ = 1.0 - (a1 * EdV + b1 * EdZ) / (Mu * ab * P1 * (a * P1 + s2))
    vCUY = 1.0 - (a2 * EdU + b2 * EdY) / (Mu * (den * varU - covUY ** 2))
    return (Mu, EdV, EdU, EdZ, EdY, a1, b1, a2, b2, vCV, vCU, vCZ, vCY, vCVZ, vCUY)


def closed_terms(P, s2, sf2, rho, a, b, D, P1):
    (_, _, _, _, _, _, _, _, _, vCV, vCU, vCZ, vCY, vCVZ, vCUY) = moments(
        P, s2, sf2, rho, a, b, D, P1)
    ab = 1.0 - a
    den = P1 + s2
    lg = np.log2

    def q(v):
        return (1.0 - D) * v + D

    snr_c0 = (P - P1) / den
    return (
        0.5 * lg(1.0 + b * b * ab / a),
        0.5 * lg(den * (a + b * b * ab) / (den * (a + b * b * ab) - P1 * (a + b * ab) ** 2)),
        0.5 * lg(den / (a * P1 + s2)),
        0.5 * lg(1.0 + (1.0 - D) / D * vCV),
        0.5 * lg(1.0 + (1.0 - D) / D * vCU),
        0.5 * lg(q(vCU) / q(vCUY)),
        0.5 * lg(q(vCV) / q(vCVZ)),
        0.5 * lg(q(vCY) / q(vCUY)),
        0.5 * lg(q(vCZ) / q(vCVZ)),
        0.5 * lg(1.0 + snr_c0 * q(vCY)),
        0.5 * lg(1.0 + snr_c0 * q(vCZ)),
        0.5 * lg(1.0 + snr_c0 * q(vCUY)),
        0.5 * lg(1.0 + snr_c0 * q(vCVZ)),
    )


def bounds(P, s2, sf2, rho, a, b, D, P1):
    """(T1, T2, B01, B02, B012a, B012b, B2012) of the single-distribution region.

    The two assembly terms I(Y~;U~|C0~), I(Z~;V~|C0~) equal I(U;Y|C0) and
    I(V;Z|C0) because both blocks share one marginal.
    """
    (iuv, iuy, ivz, i_us, i_vs, i_yt, i_zt, i_ut, i_vt,
     i_y_y, i_z_z, i_y_uy, i_z_vz) = closed_terms(P, s2, sf2, rho, a, b, D, P1)
    T1 = i_yt + i_y_uy - i_vs
    T2 = i_zt + i_z_vz - i_us
    B1 = iuy + i_y_y + i_yt - i_vs
    B2 = ivz + i_z_z + i_zt - i_us
    B3 = B1 + ivz + i_vt - iuv
    B4 = B2 + iuy + i_ut - iuv
    B5 = B1 + B2 - iuv
    return T1, T2, B1, B2, B3, B4, B5


def sum_rate(P, s2, sf2, rho, a, b, D, P1):
    """max R1 + R2 at R0 = 0; 0 for an empty region, -inf if undefined."""
    with np.errstate(all="ignore"):
        T1, T2, B1, B2, B3, B4, B5 = bounds(P, s2, sf2, rho, a, b, D, P1)
        s = np.minimum(np.minimum(B1 + B2, B3), np.minimum(B4, B5))
        lo = np.minimum(np.minimum(np.minimum(T1, T2), np.minimum(B1, B2)),
                        np.minimum(np.minimum(B3, B4), B5))
        out = np.where(lo < -EMPTY_TOL, 0.0, np.maximum(s, 0.0))
        out = np.where(np.isfinite(s) & np.isfinite(lo), out, -np.inf)
    if np.ndim(out) == 0:
        return float(out)
    return out


def sum_rate_batch(P, s2, sf2, rho, a, b, D, P1):
    a, b, D, P1 = (np.asarray(x, dtype=float) for x in (a, b, D, P1))
    return np.asarray(sum_rate(P, s2, sf2, rho, a, b, D, P1), dtype=float)
