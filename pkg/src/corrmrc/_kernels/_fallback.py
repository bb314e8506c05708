"""Pure-NumPy integrand kernels (fallback when the extension is absent).

These evaluate, over an array of z values, the m_d-th t-derivative at t = 1
of exp(-(T-z)^+ s m_d/SNR - z t m_d/SNR - pi*lam*E(z, s, t)) divided by z,
where E is the exact-model exponent (with its hypergeometric lower branch)
or the no-correlation exponent.  Must stay numerically identical (up to
roundoff) to the compiled twin in _compiled.pyx.
"""
import math

import numpy as np
from scipy import special as _sc

_EXP_FLOOR = -700.0


def _hyp2f1(a, b, c, x):
    # Pfaff transform for negative arguments, same policy as specfun.hyp2f1
    out = np.empty_like(x)
    neg = x < 0
    if neg.any():
        xn = x[neg]
        out[neg] = (1.0 - xn) ** (-a) * _sc.hyp2f1(a, c - b, c, xn / (xn - 1.0))
    pos = ~neg
    if pos.any():
        out[pos] = _sc.hyp2f1(a, b, c, x[pos])
    return out


def _bell(derivs):
    """Complete Bell polynomial of vector-valued derivative lists."""
    n = len(derivs)
    b = [np.ones_like(derivs[0])]
    for m in range(n):
        acc = np.zeros_like(derivs[0])
        for i in range(m + 1):
            acc += math.comb(m, i) * b[m - i] * derivs[i]
        b.append(acc)
    return b[n]


def _shared_factors(alpha, d, m_d, m_i):
    beta = 2.0 / alpha
    pref = d * d * math.gamma(1.0 - beta) * (m_d / m_i) ** beta
    w_single = pref * math.exp(_sc.gammaln(beta + m_i) - _sc.gammaln(m_i))
    return beta, pref, w_single


def integrand_lower(z, s, T, alpha, d, m_d, m_i, inv_snr, lam, nc):
    """Integrand on 0 < z < T (both exponent branches are z-dependent here)."""
    z = np.asarray(z, dtype=float)
    beta, pref, w = _shared_factors(alpha, d, m_d, m_i)
    pi_lam = math.pi * lam
    tp = np.maximum(T - z, 1e-300)
    sP = s * tp
    zb = z ** beta
    if nc:
        e0 = w * (sP ** beta + zb)
        derivs = [
            -pi_lam * w * zb * _sc.poch(beta - n + 1.0, n) for n in range(1, m_d + 1)
        ]
    else:
        c0 = pref * math.exp(_sc.gammaln(beta + 2 * m_i) - _sc.gammaln(2 * m_i))
        e0 = sP ** beta * c0 * _hyp2f1(-beta, m_i, 2 * m_i, 1.0 - z / sP)
        argn = 1.0 - sP / z
        derivs = []
        for n in range(1, m_d + 1):
            cn = (
                pref
                * (-1.0) ** n
                * _sc.poch(-beta, n)
                * _sc.poch(m_i, n)
                * math.exp(_sc.gammaln(beta + 2 * m_i) - _sc.gammaln(2 * m_i + n))
            )
            derivs.append(-pi_lam * cn * zb * _hyp2f1(-beta + n, m_i, 2 * m_i + n, argn))
    g0 = -sP * m_d * inv_snr - z * m_d * inv_snr - pi_lam * e0
    derivs[0] = derivs[0] - z * m_d * inv_snr
    alive = g0 > _EXP_FLOOR
    out = np.zeros_like(z)
    if alive.any():
        out[alive] = np.exp(g0[alive]) * _bell([dv[alive] for dv in derivs])[...] / z[alive]
    return out


def integrand_upper(z, T, alpha, d, m_d, m_i, inv_snr, lam):
    """Integrand on z >= T; s-independent (identical for exact and NC models)."""
    z = np.asarray(z, dtype=float)
    beta, _, w = _shared_factors(alpha, d, m_d, m_i)
    pi_lam = math.pi * lam
    zb = z ** beta
    g0 = -z * m_d * inv_snr - pi_lam * w * zb
    derivs = [
        -pi_lam * w * zb * _sc.poch(beta - n + 1.0, n) for n in range(1, m_d + 1)
    ]
    derivs[0] = derivs[0] - z * m_d * inv_snr
    alive = g0 > _EXP_FLOOR
    out = np.zeros_like(z)
    if alive.any():
        out[alive] = np.exp(g0[alive]) * _bell([dv[alive] for dv in derivs]) / z[alive]
    return out
