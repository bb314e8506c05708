"""Point-process exponent functions and their analytic t-derivatives.

The success-probability integrands contain exp(-pi*lam*E(z, s, t)) where E
is the spatial-average exponent of the interference field: the exact model
couples the two branches through a hypergeometric term, the no-correlation
model splits into a plain sum of the two fractional powers.  Everything
here is a pure scalar function; the array-valued twins used inside the
quadrature live in corrmrc._kernels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError, SystemConfig, validate
from . import specfun

__all__ = [
    "ExponentDerivatives",
    "exponent_A",
    "exponent_A_t_derivs",
    "exponent_B",
    "exponent_B_t_derivs",
    "frac_moment_H",
]


@dataclass(frozen=True)
class ExponentDerivatives:
    """Exponent value at (z, s, t=1) and its t-derivatives up to order n_max."""

    value: float
    t_derivs: tuple[float, ...]

    def __post_init__(self):
        if len(self.t_derivs) < 1:
            raise DomainError("ExponentDerivatives requires at least one derivative")


def _check_point(z: float, s: float, t: float, T: float) -> None:
    if z < 0:
        raise DomainError(f"z must be >= 0 (got {z})")
    if not (s > 0 and t > 0):
        raise DomainError(f"s and t must be positive (got s={s}, t={t})")
    if not T > 0:
        raise DomainError(f"threshold T must be positive (got {T})")


def _prefactor(cfg: SystemConfig) -> tuple[float, float]:
    beta = 2.0 / cfg.alpha
    return beta, cfg.d * cfg.d * math.gamma(1.0 - beta) * (cfg.m_d / cfg.m_i) ** beta


def exponent_A(z: float, s: float, t: float, T: float, cfg: SystemConfig) -> float:
    """Exact-model exponent A(z, s, t).

    For 0 <= z < T the two branch weights couple through a regularized
    hypergeometric with argument 1 - z t / ((T-z) s); at and above z = T
    only the second branch survives and A collapses to the elementary
    fractional-moment form (the z -> T limit of the lower branch equals it
    by Gauss summation, so the boundary takes the closed branch).
    """
    validate(cfg)
    _check_point(z, s, t, T)
    beta, pref = _prefactor(cfg)
    if z >= T:
        return (z * t) ** beta * pref * math.exp(
            _lgamma(beta + cfg.m_i) - _lgamma(cfg.m_i)
        )
    arg = 1.0 - (z * t) / ((T - z) * s)
    # Gamma(beta+2m_i) * reg_2F1(..., 2m_i, .) assembled via log-gamma so the
    # pair of huge gamma factors cancels before overflow at large m_i.
    return (
        (s * (T - z)) ** beta
        * pref
        * math.exp(_lgamma(beta + 2.0 * cfg.m_i) - _lgamma(2.0 * cfg.m_i))
        * specfun.hyp2f1(-beta, cfg.m_i, 2.0 * cfg.m_i, arg)
    )


def exponent_A_t_derivs(
    z: float, s: float, T: float, cfg: SystemConfig, n_max: int
) -> ExponentDerivatives:
    """A(z, s, 1) together with d^n A / dt^n at t = 1 for n = 1..n_max.

    Below the threshold each order n carries the alternating-sign prefactor
    (-1)^n (-2/alpha)_n (m_i)_n and a regularized hypergeometric at
    argument 1 - (T-z)s/z; at and above the threshold the derivatives
    follow the pure power law with (2/alpha - n + 1)_n.
    """
    validate(cfg)
    _check_point(z, s, 1.0, T)
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1 (got {n_max})")
    beta, pref = _prefactor(cfg)
    value = exponent_A(z, s, 1.0, T, cfg)
    derivs = []
    if z >= T:
        w = pref * math.exp(_lgamma(beta + cfg.m_i) - _lgamma(cfg.m_i))
        zb = z ** beta
        for n in range(1, n_max + 1):
            derivs.append(w * zb * specfun.pochhammer(beta - n + 1.0, n))
    else:
        arg = 1.0 - (T - z) * s / z if z > 0 else -math.inf
        zb = z ** beta
        for n in range(1, n_max + 1):
            if z == 0.0:
                derivs.append(0.0)
                continue
            coef = (
                (-1.0) ** n
                * pref
                * specfun.pochhammer(-beta, n)
                * specfun.pochhammer(cfg.m_i, n)
                * math.exp(_lgamma(beta + 2.0 * cfg.m_i) - _lgamma(2.0 * cfg.m_i + n))
            )
            derivs.append(
                coef * zb * specfun.hyp2f1(-beta + n, cfg.m_i, 2.0 * cfg.m_i + n, arg)
            )
    return ExponentDerivatives(value=value, t_derivs=tuple(derivs))


def exponent_B(z: float, s: float, t: float, T: float, cfg: SystemConfig) -> float:
    """No-correlation-model exponent B(z, s, t): the decoupled branch sum."""
    validate(cfg)
    _check_point(z, s, t, T)
    beta, pref = _prefactor(cfg)
    w = pref * math.exp(_lgamma(beta + cfg.m_i) - _lgamma(cfg.m_i))
    return w * ((s * max(T - z, 0.0)) ** beta + (z * t) ** beta)


def exponent_B_t_derivs(
    z: float, s: float, T: float, cfg: SystemConfig, n_max: int
) -> ExponentDerivatives:
    """B(z, s, 1) and its t-derivatives at t = 1 (power rule on (zt)^(2/alpha))."""
    validate(cfg)
    _check_point(z, s, 1.0, T)
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1 (got {n_max})")
    beta, pref = _prefactor(cfg)
    w = pref * math.exp(_lgamma(beta + cfg.m_i) - _lgamma(cfg.m_i))
    zb = z ** beta
    value = exponent_B(z, s, 1.0, T, cfg)
    derivs = tuple(
        w * zb * specfun.pochhammer(beta - n + 1.0, n) for n in range(1, n_max + 1)
    )
    return ExponentDerivatives(value=value, t_derivs=derivs)


def frac_moment_H(
    s: float, t: float, psi1: float, psi2: float, cfg: SystemConfig
) -> float:
    """E[(s psi1 h1 + t psi2 h2)^(2/alpha)] for independent Gamma(m_i, 1/m_i) gains.

    Closed form of the fractional-moment identity; used as the independent
    cross-check of exponent_A, which equals d^2 Gamma(1-2/alpha) times this
    with psi1 = (T-z)^+ m_d and psi2 = z m_d.
    """
    validate(cfg)
    if psi1 < 0 or psi2 < 0 or (psi1 == 0 and psi2 == 0):
        raise DomainError("psi1, psi2 must be >= 0 and not both zero")
    if not (s > 0 and t > 0):
        raise DomainError(f"s and t must be positive (got s={s}, t={t})")
    beta = 2.0 / cfg.alpha
    m_i = cfg.m_i
    p, q = s * psi1, t * psi2
    if p < q:  # symmetric in the two weighted gains; larger prefactor is better conditioned
        p, q = q, p
    if q == 0.0:
        return (p / m_i) ** beta * math.exp(_lgamma(beta + m_i) - _lgamma(m_i))
    return (
        (p / m_i) ** beta
        * math.exp(_lgamma(beta + 2.0 * m_i) - _lgamma(2.0 * m_i))
        * specfun.hyp2f1(-beta, m_i, 2.0 * m_i, 1.0 - q / p)
    )


def _lgamma(x: float) -> float:
    return math.lgamma(x)
