"""Special functions used by every analytic formula in this package.

Gamma family, regularized incomplete gamma, Pochhammer symbol, Beta, and the
Gaussian hypergeometric 2F1 (plain and regularized) for real arguments
z <= 1.  Evaluation is backed by scipy.special; the one place scipy needs
help is 2F1 at negative argument, where its internal 1/z transformation
cancels catastrophically for large (b, c).  We therefore route every z < 0
through the Pfaff transformation

    2F1(a, b, c, z) = (1-z)^(-a) * 2F1(a, c-b, c, z/(z-1)),

which maps (-inf, 0) into (0, 1) where the library is well conditioned.
Measured against mpmath over the parameter families this package uses, the
result is better than 1e-10 relative for z >= -1e6 and degrades gracefully
(about 1e-4 at z = -1e12); quadrature only probes arguments beyond -1e6 in
endpoint corners that carry negligible integral mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sc

from .core import DomainError

__all__ = [
    "Hyp2F1Params",
    "reg_upper_gamma",
    "lower_gamma",
    "pochhammer",
    "beta",
    "hyp2f1",
    "reg_hyp2f1",
]


class NonConvergenceError(RuntimeError):
    """The hypergeometric evaluation did not produce a finite value."""


def reg_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a).

    For integer a this equals sum_{k<a} x^k e^(-x) / k!.
    """
    if not a > 0:
        raise DomainError(f"reg_upper_gamma requires a > 0 (got {a})")
    if not x >= 0:
        raise DomainError(f"reg_upper_gamma requires x >= 0 (got {x})")
    return float(_sc.gammaincc(a, x))


def lower_gamma(a: float, x: float) -> float:
    """Lower incomplete gamma gamma(a, x); gamma(a,x) + Gamma(a,x) = Gamma(a)."""
    if not a > 0:
        raise DomainError(f"lower_gamma requires a > 0 (got {a})")
    if not x >= 0:
        raise DomainError(f"lower_gamma requires x >= 0 (got {x})")
    return float(_sc.gamma(a) * _sc.gammainc(a, x))


def pochhammer(a: float, n: int) -> float:
    """Pochhammer symbol (a)_n as the explicit product a(a+1)...(a+n-1).

    The product form stays exact at the negative-integer zeros where the
    Gamma-ratio definition degenerates.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"pochhammer requires integer n >= 0 (got {n})")
    out = 1.0
    for i in range(int(n)):
        out *= a + i
    return out


def beta(x: float, y: float) -> float:
    """Beta function Gamma(x)Gamma(y)/Gamma(x+y) for x, y > 0."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta requires positive arguments (got {x}, {y})")
    return float(_sc.beta(x, y))


@dataclass(frozen=True)
class Hyp2F1Params:
    """Validated parameter bundle for 2F1(a, b, c; z), real z <= 1.

    z = 1 is allowed only in the Gauss-summable case c - a - b > 0.  The
    plain form has poles at non-positive integer c; the regularized form is
    defined everywhere.
    """

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        _check_arg(self.a, self.b, self.c, self.z)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.z)


def _is_nonpositive_int(c: float) -> bool:
    return c <= 0 and c == int(c)


def _check_arg(a: float, b: float, c: float, z: float) -> None:
    if z > 1:
        raise DomainError(f"2F1 argument must satisfy z <= 1 (got {z})")
    if z == 1 and not (c - a - b > 0):
        raise DomainError(
            f"2F1 diverges at z = 1 unless c - a - b > 0 (got c-a-b = {c - a - b})"
        )


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gaussian hypergeometric 2F1(a, b, c; z) on (-inf, 1]."""
    _check_arg(a, b, c, z)
    if _is_nonpositive_int(c):
        raise DomainError(f"plain 2F1 has a pole at non-positive integer c (got {c})")
    if z < 0:
        # Pfaff transform; keeps the library away from its unstable region.
        val = (1.0 - z) ** (-a) * float(_sc.hyp2f1(a, c - b, c, z / (z - 1.0)))
    else:
        val = float(_sc.hyp2f1(a, b, c, z))
    if not math.isfinite(val):
        raise NonConvergenceError(f"2F1({a}, {b}, {c}; {z}) did not converge")
    return val


def reg_hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Regularized hypergeometric 2F1(a, b, c; z) / Gamma(c).

    Defined for every real c: at non-positive integer c = -n the limit
    (DLMF 15.2.5) is (a)_{n+1} (b)_{n+1} / (n+1)! * z^{n+1}
    * 2F1(a+n+1, b+n+1, n+2; z).
    """
    _check_arg(a, b, c, z)
    if _is_nonpositive_int(c):
        n = int(-c)
        pref = pochhammer(a, n + 1) * pochhammer(b, n + 1) / math.factorial(n + 1)
        return pref * z ** (n + 1) * hyp2f1(a + n + 1, b + n + 1, n + 2, z)
    return hyp2f1(a, b, c, z) * float(_sc.rgamma(c))
