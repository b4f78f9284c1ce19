# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closed-form AWGN sum-rate kernel (twin of ``_awgn_py``)."""
import numpy as np
from libc.math cimport log2, isfinite, INFINITY

cdef double EMPTY_TOL = 1e-9


cdef inline double _q(double v, double D) nogil:
    return (1.0 - D) * v + D


cdef void _bounds(double P, double s2, double sf2, double rho, double a,
                  double b, double D, double P1, double* out) noexcept nogil:
    cdef double ab = 1.0 - a
    cdef double bb = 1.0 - b
    cdef double den = P1 + s2
    cdef double g = P1 * (a + ab * b) / den
    cdef double cq1 = (s2 + bb * ab * P1) / den
    cdef double cq2 = (b * s2 - a * bb * P1) / den
    cdef double Mu = a * P1 * cq1 * cq1 + ab * P1 * cq2 * cq2 + g * g * s2 * s2 / (s2 + sf2)
    cdef double EdV = ab * P1 * cq2
    cdef double EdU = a * P1 * cq1 + b * ab * P1 * cq2
    cdef double EdZ = g * s2 * (1.0 - s2 * rho / (s2 + sf2))
    cdef double EdY = g * s2 * (sf2 / (s2 + sf2))
    cdef double varU = a * P1 + b * b * ab * P1
    cdef double covUY = a * P1 + b * ab * P1
    cdef double a1 = EdV * den - EdZ * ab * P1
    cdef double b1 = EdZ * ab * P1 - EdV * ab * P1
    cdef double a2 = EdU * den - EdY * covUY
    cdef double b2 = EdY * varU - EdU * covUY
    cdef double vCV = 1.0 - EdV * EdV / (Mu * ab * P1)
    cdef double vCU = 1.0 - EdU * EdU / (Mu * varU)
    cdef double vCZ = 1.0 - EdZ * EdZ / (Mu * den)
    cdef double vCY = 1.0 - EdY * EdY / (Mu * den)
    cdef double vCVZ = 1.0 - (a1 * EdV + b1 * EdZ) / (Mu * ab * P1 * (a * P1 + s2))
    cdef double vCUY = 1.0 - (a2 * EdU + b2 * EdY) / (Mu * (den * varU - covUY * covUY))
    cdef double snr_c0 = (P - P1) / den

    cdef double iuv = 0.5 * log2(1.0 + b * b * ab / a)
    cdef double iuy = 0.5 * log2(den * (a + b * b * ab)
                                 / (den * (a + b * b * ab) - P1 * (a + b * ab) * (a + b * ab)))
    cdef double ivz = 0.5 * log2(den / (a * P1 + s2))
    cdef double i_us = 0.5 * log2(1.0 + (1.0 - D) / D * vCV)
    cdef double i_vs = 0.5 * log2(1.0 + (1.0 - D) / D * vCU)
    cdef double i_yt = 0.5 * log2(_q(vCU, D) / _q(vCUY, D))
    cdef double i_zt = 0.5 * log2(_q(vCV, D) / _q(vCVZ, D))
    cdef double i_ut = 0.5 * log2(_q(vCY, D) / _q(vCUY, D))
    cdef double i_vt = 0.5 * log2(_q(vCZ, D) / _q(vCVZ, D))
    cdef double i_y_y = 0.5 * log2(1.0 + snr_c0 * _q(vCY, D))
    cdef double i_z_z = 0.5 * log2(1.0 + snr_c0 * _q(vCZ, D))
    cdef double i_y_uy = 0.5 * log2(1.0 + snr_c0 * _q(vCUY, D))
    cdef double i_z_vz = 0.5 * log2(1.0 + snr_c0 * _q(vCVZ, D))

    cdef double B1 = iuy + i_y_y + i_yt - i_vs
    cdef double B2 = ivz + i_z_z + i_zt - i_us
    out[0] = i_yt + i_y_uy - i_vs
    out[1] = i_zt + i_z_vz - i_us
    out[2] = B1
    out[3] = B2
    out[4] = B1 + ivz + i_vt - iuv
    out[5] = B2 + iuy + i_ut - iuv
    out[6] = B1 + B2 - iuv


cdef double _sum_rate(double P, double s2, double sf2, double rho, double a,
                      double b, double D, double P1) noexcept nogil:
    cdef double v[7]
    cdef double s, lo
    cdef int i
    _bounds(P, s2, sf2, rho, a, b, D, P1, v)
    s = v[2] + v[3]
    for i in range(4, 7):
        if v[i] < s:
            s = v[i]
    lo = v[0]
    for i in range(1, 7):
        if v[i] < lo:
            lo = v[i]
    if not (isfinite(s) and isfinite(lo)):
        return -INFINITY
    if lo < -EMPTY_TOL:
        return 0.0
    return s if s > 0.0 else 0.0


def bounds(double P, double s2, double sf2, double rho, double a, double b,
           double D, double P1):
    cdef double v[7]
    _bounds(P, s2, sf2, rho, a, b, D, P1, v)
    return (v[0], v[1], v[2], v[3], v[4], v[5], v[6])


def sum_rate(double P, double s2, double sf2, double rho, double a, double b,
             double D, double P1):
    return _sum_rate(P, s2, sf2, rho, a, b, D, P1)


def sum_rate_batch(double P, double s2, double sf2, double rho, a, b, D, P1):
    a_, b_, D_, P1_ = np.broadcast_arrays(
        np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64),
        np.asarray(D, dtype=np.float64), np.asarray(P1, dtype=np.float64))
    shape = a_.shape
    cdef double[::1] av = np.ascontiguousarray(a_).ravel()
    cdef double[::1] bv = np.ascontiguousarray(b_).ravel()
    cdef double[::1] Dv = np.ascontiguousarray(D_).ravel()
    cdef double[::1] Pv = np.ascontiguousarray(P1_).ravel()
    out = np.empty(av.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = av.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _sum_rate(P, s2, sf2, rho, av[i], bv[i], Dv[i], Pv[i])
    return out.reshape(shape)
