# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the _fallback integrand kernels.

Scalar loop over z with the special functions taken from
scipy.special.cython_special; keeps results numerically identical to the
NumPy fallback up to floating-point roundoff.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, pow, M_PI
from scipy.special.cython_special cimport hyp2f1 as c_hyp2f1
from scipy.special.cython_special cimport gammaln as c_gammaln
from scipy.special.cython_special cimport poch as c_poch
from scipy.special.cython_special cimport gamma as c_gamma

cdef double EXP_FLOOR = -700.0
cdef int MAX_ORDER = 40


cdef inline double hyp_neg(double a, double b, double c, double x) noexcept nogil:
    if x < 0.0:
        return pow(1.0 - x, -a) * c_hyp2f1(a, c - b, c, x / (x - 1.0))
    return c_hyp2f1(a, b, c, x)


cdef double bell_exp(double g0, double* x, int n) noexcept nogil:
    # exp(g0) * B_n(x_1..x_n) via the Bell recurrence with a binomial row.
    cdef double b[41]
    cdef double comb[41]
    cdef double acc
    cdef int m, i
    b[0] = 1.0
    for m in range(n):
        # binomial row C(m, i)
        comb[0] = 1.0
        for i in range(1, m + 1):
            comb[i] = comb[i - 1] * (m - i + 1) / i
        acc = 0.0
        for i in range(m + 1):
            acc += comb[i] * b[m - i] * x[i]
        b[m + 1] = acc
    return exp(g0) * b[n]


def integrand_lower(z, double s, double T, double alpha, double d,
                    int m_d, double m_i, double inv_snr, double lam, bint nc):
    if not (1 <= m_d < MAX_ORDER):
        raise ValueError("m_d out of kernel range")
    cdef cnp.ndarray[double, ndim=1] zz = np.ascontiguousarray(z, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(zz)
    cdef double[::1] zv = zz
    cdef double[::1] ov = out
    cdef int k, n, npts = zv.shape[0]
    cdef double beta = 2.0 / alpha
    cdef double pref = d * d * c_gamma(1.0 - beta) * pow(m_d / m_i, beta)
    cdef double w = pref * exp(c_gammaln(beta + m_i) - c_gammaln(m_i))
    cdef double pi_lam = M_PI * lam
    cdef double c0 = 0.0
    cdef double cn[41]
    cdef double an
    cdef double zi, tp, sP, zb, g0, e0, argn
    cdef double x[41]
    if nc:
        for n in range(1, m_d + 1):
            cn[n] = w * c_poch(beta - n + 1.0, n)
    else:
        c0 = pref * exp(c_gammaln(beta + 2.0 * m_i) - c_gammaln(2.0 * m_i))
        for n in range(1, m_d + 1):
            an = 1.0 if n % 2 == 0 else -1.0
            cn[n] = (pref * an * c_poch(-beta, n) * c_poch(m_i, n)
                     * exp(c_gammaln(beta + 2.0 * m_i) - c_gammaln(2.0 * m_i + n)))
    with nogil:
        for k in range(npts):
            zi = zv[k]
            tp = T - zi
            if tp < 1e-300:
                tp = 1e-300
            sP = s * tp
            zb = pow(zi, beta)
            if nc:
                e0 = w * (pow(sP, beta) + zb)
            else:
                e0 = pow(sP, beta) * c0 * hyp_neg(-beta, m_i, 2.0 * m_i, 1.0 - zi / sP)
            g0 = -sP * m_d * inv_snr - zi * m_d * inv_snr - pi_lam * e0
            if g0 <= EXP_FLOOR:
                ov[k] = 0.0
                continue
            if nc:
                for n in range(1, m_d + 1):
                    x[n - 1] = -pi_lam * cn[n] * zb
            else:
                argn = 1.0 - sP / zi
                for n in range(1, m_d + 1):
                    x[n - 1] = -pi_lam * cn[n] * zb * hyp_neg(-beta + n, m_i, 2.0 * m_i + n, argn)
            x[0] -= zi * m_d * inv_snr
            ov[k] = bell_exp(g0, x, m_d) / zi
    return out


def integrand_upper(z, double T, double alpha, double d,
                    int m_d, double m_i, double inv_snr, double lam):
    if not (1 <= m_d < MAX_ORDER):
        raise ValueError("m_d out of kernel range")
    cdef cnp.ndarray[double, ndim=1] zz = np.ascontiguousarray(z, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(zz)
    cdef double[::1] zv = zz
    cdef double[::1] ov = out
    cdef int k, n, npts = zv.shape[0]
    cdef double beta = 2.0 / alpha
    cdef double pref = d * d * c_gamma(1.0 - beta) * pow(m_d / m_i, beta)
    cdef double w = pref * exp(c_gammaln(beta + m_i) - c_gammaln(m_i))
    cdef double pi_lam = M_PI * lam
    cdef double pw[41]
    cdef double zi, zb, g0
    cdef double x[41]
    for n in range(1, m_d + 1):
        pw[n] = w * c_poch(beta - n + 1.0, n)
    with nogil:
        for k in range(npts):
            zi = zv[k]
            zb = pow(zi, beta)
            g0 = -zi * m_d * inv_snr - pi_lam * w * zb
            if g0 <= EXP_FLOOR:
                ov[k] = 0.0
                continue
            for n in range(1, m_d + 1):
                x[n - 1] = -pi_lam * pw[n] * zb
            x[0] -= zi * m_d * inv_snr
            ov[k] = bell_exp(g0, x, m_d) / zi
    return out
