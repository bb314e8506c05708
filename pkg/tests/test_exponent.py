import math

import numpy as np
import pytest
from scipy import integrate as si

from corrmrc import exponent, specfun
from corrmrc.core import DomainError, SystemConfig

CFG = SystemConfig(lam=1e-3, alpha=3.5, d=1.0, m_d=4, m_i=1.5, snr=math.inf)
CFG_RAY = SystemConfig(lam=1e-3, alpha=4.0, d=1.0, m_d=1, m_i=1.0, snr=math.inf)
T = 1.0


def a_moment_oracle(z, s, t, T, cfg):
    """A via the fractional-moment integral of the product Laplace transform.

    E[H^b] = b/Gamma(1-b) * int_0^inf (1 - L_H(u)) u^(-1-b) du with
    L_H(u) = (1 + u s psi1/m_i)^(-m_i) (1 + u t psi2/m_i)^(-m_i); an
    evaluation path with no hypergeometric function in it.
    """
    beta = 2.0 / cfg.alpha
    p1 = max(T - z, 0.0) * cfg.m_d
    p2 = z * cfg.m_d

    def f(u):
        lh = (1 + u * s * p1 / cfg.m_i) ** -cfg.m_i * (1 + u * t * p2 / cfg.m_i) ** -cfg.m_i
        return (1.0 - lh) * u ** (-1.0 - beta)

    scale = 1.0 / max(s * p1 + t * p2, 1e-12)
    v1, _ = si.quad(f, 0.0, scale, epsabs=1e-12, epsrel=1e-10, limit=400)
    v2, _ = si.quad(f, scale, np.inf, epsabs=1e-12, epsrel=1e-10, limit=400)
    moment = beta / math.gamma(1.0 - beta) * (v1 + v2)
    return cfg.d ** 2 * math.gamma(1.0 - beta) * moment


def test_branch_above_threshold_is_elementary():
    # z >= T: (zt)^(2/a) d^2 Gamma(1-2/a) (m_d/m_i)^(2/a) Gamma(2/a+m_i)/Gamma(m_i)
    cfg = SystemConfig(lam=1e-3, alpha=4.0, d=1.0, m_d=1, m_i=1.0, snr=math.inf)
    z = 3.7
    want = math.sqrt(z) * math.gamma(0.5) * math.gamma(1.5)
    assert exponent.exponent_A(z, 1.0, 1.0, 1.0, cfg) == pytest.approx(want, rel=1e-13)


def test_value_at_zero_offset_is_gauss_summable():
    # z = 0 puts the hypergeometric argument exactly at 1
    beta = 2.0 / CFG.alpha
    got = exponent.exponent_A(0.0, 1.0, 1.0, T, CFG)
    want = (
        (T * 1.0) ** beta
        * CFG.d ** 2
        * math.gamma(1 - beta)
        * (CFG.m_d / CFG.m_i) ** beta
        * math.gamma(beta + 2 * CFG.m_i)
        * specfun.reg_hyp2f1(-beta, CFG.m_i, 2 * CFG.m_i, 1.0)
    )
    assert got == pytest.approx(want, rel=1e-12)


def test_continuity_at_threshold():
    cfg = SystemConfig(lam=1e-3, alpha=3.5, d=1.0, m_d=2, m_i=1.5, snr=math.inf)
    for s in (0.8, 1.0, 1.2):
        for t in (0.8, 1.0, 1.2):
            at_T = exponent.exponent_A(T, s, t, T, cfg)
            below = exponent.exponent_A(T * (1 - 1e-9), s, t, T, cfg)
            assert abs(below - at_T) <= 1e-8


def test_value_matches_moment_integral_oracle():
    for (z, s, t) in [(0.3, 1.0, 1.0), (0.7, 0.9, 1.1), (0.15, 1.2, 0.8), (1.5, 1.0, 1.0)]:
        got = exponent.exponent_A(z, s, t, T, CFG)
        want = a_moment_oracle(z, s, t, T, CFG)
        assert got == pytest.approx(want, rel=2e-7)


def test_value_equals_scaled_fractional_moment():
    beta = 2.0 / CFG.alpha
    scale = CFG.d ** 2 * math.gamma(1.0 - beta)
    for z in np.linspace(0.05, 0.95, 7):
        for s, t in [(0.8, 1.2), (1.0, 1.0), (1.2, 0.9)]:
            p1 = (T - z) * CFG.m_d
            p2 = z * CFG.m_d
            got = exponent.exponent_A(float(z), s, t, T, CFG)
            want = scale * exponent.frac_moment_H(s, t, p1, float(p2), CFG)
            assert got == pytest.approx(want, rel=1e-8)


def test_monotone_in_scale_factors():
    zs = np.linspace(0.05, 1.4, 12)
    for z in zs:
        base = exponent.exponent_A(float(z), 1.0, 1.0, T, CFG)
        assert exponent.exponent_A(float(z), 1.1, 1.0, T, CFG) >= base - 1e-12
        assert exponent.exponent_A(float(z), 1.0, 1.1, T, CFG) >= base - 1e-12
    vals = [exponent.exponent_A(float(z), 1.0, 1.0, T, CFG) for z in np.linspace(1.0, 3.0, 9)]
    assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(vals, vals[1:]))


def fd_t_derivative(z, s, T, cfg, n, h=1e-3):
    def f(t):
        return exponent.exponent_A(z, s, t, T, cfg)

    def central(hh):
        coef = [(-1) ** k * math.comb(n, k) for k in range(n + 1)]
        pts = [f(1.0 + (n / 2 - k) * hh) for k in range(n + 1)]
        return sum(c * p for c, p in zip(coef, pts)) / hh ** n

    d1, d2 = central(h), central(h / 2)
    return d2 + (d2 - d1) / 3.0


def test_t_derivatives_match_finite_differences():
    # the difference step grows with the order to keep roundoff (~eps/h^n)
    # below the comparison tolerance
    steps = {1: 1e-4, 2: 1e-3, 3: 1e-2, 4: 3e-2}
    for (z, s) in [(0.25, 1.0), (0.6, 0.9), (0.85, 1.1)]:
        der = exponent.exponent_A_t_derivs(z, s, T, CFG, n_max=4)
        for n in range(1, 5):
            fd = fd_t_derivative(z, s, T, CFG, n, h=steps[n])
            assert der.t_derivs[n - 1] == pytest.approx(fd, rel=1e-5)


def test_t_derivative_order_two_interior_rayleigh():
    der = exponent.exponent_A_t_derivs(0.4, 1.0, 1.0, CFG_RAY, n_max=2)
    fd = fd_t_derivative(0.4, 1.0, 1.0, CFG_RAY, 2)
    assert der.t_derivs[1] == pytest.approx(fd, rel=1e-5)


def test_derivs_value_entry_consistent():
    der = exponent.exponent_A_t_derivs(0.3, 1.05, T, CFG, n_max=3)
    assert der.value == pytest.approx(exponent.exponent_A(0.3, 1.05, 1.0, T, CFG), rel=1e-13)


def test_power_law_above_threshold():
    # first derivative above the threshold is (2/alpha) * A / t, and signs
    # alternate with the descending Pochhammer factor afterwards
    beta = 2.0 / CFG.alpha
    z = 2.0
    der = exponent.exponent_A_t_derivs(z, 1.0, T, CFG, n_max=4)
    assert der.t_derivs[0] == pytest.approx(beta * der.value, rel=1e-12)
    for n in range(1, 5):
        expected_sign = math.copysign(1.0, specfun.pochhammer(beta - n + 1, n))
        assert math.copysign(1.0, der.t_derivs[n - 1]) == expected_sign
    derB = exponent.exponent_B_t_derivs(z, 1.0, T, CFG, n_max=4)
    assert derB.t_derivs == pytest.approx(der.t_derivs, rel=1e-12)


def test_nc_exponent_has_no_s_dependence_above_threshold():
    assert exponent.exponent_B(2.0, 0.8, 1.0, T, CFG) == pytest.approx(
        exponent.exponent_B(2.0, 1.2, 1.0, T, CFG), rel=1e-14
    )


def test_nc_dominates_exact_between_zero_and_threshold():
    for z in np.linspace(0.02, 0.98, 25):
        a = exponent.exponent_A(float(z), 1.0, 1.0, T, CFG)
        b = exponent.exponent_B(float(z), 1.0, 1.0, T, CFG)
        assert b >= a - 1e-12
    # equality at the edges
    for z in (0.0, T):
        a = exponent.exponent_A(z, 1.0, 1.0, T, CFG)
        b = exponent.exponent_B(z, 1.0, 1.0, T, CFG)
        assert b == pytest.approx(a, rel=1e-10)


def test_nc_large_shape_limit():
    # Gamma(2/a + m)/(m^(2/a) Gamma(m)) -> 1 as the interferer shape grows
    cfg = SystemConfig(lam=1e-3, alpha=3.5, d=1.0, m_d=1, m_i=1e4, snr=math.inf)
    beta = 2.0 / cfg.alpha
    z, s, t = 0.4, 1.0, 1.0
    limit = math.gamma(1 - beta) * cfg.d ** 2 * cfg.m_d ** beta * (
        (s * (T - z)) ** beta + (z * t) ** beta
    )
    assert exponent.exponent_B(z, s, t, T, cfg) == pytest.approx(limit, rel=1e-3)


def test_frac_moment_single_gamma_closed_form():
    beta = 2.0 / CFG.alpha
    got = exponent.frac_moment_H(1.0, 1.0, 0.0, 0.4, CFG)
    want = (0.4 / CFG.m_i) ** beta * math.gamma(beta + CFG.m_i) / math.gamma(CFG.m_i)
    assert got == pytest.approx(want, rel=1e-13)


def test_frac_moment_symmetry():
    got1 = exponent.frac_moment_H(1.0, 1.0, 0.6, 0.4, CFG)
    got2 = exponent.frac_moment_H(1.0, 1.0, 0.4, 0.6, CFG)
    assert got1 == pytest.approx(got2, rel=1e-13)
    got3 = exponent.frac_moment_H(0.9, 0.9, 0.5, 0.5, CFG)
    got4 = exponent.frac_moment_H(0.9, 0.9, 0.5, 0.5, CFG)
    assert got3 == got4


def test_frac_moment_monte_carlo_oracle():
    cfg = SystemConfig(lam=1e-3, alpha=4.0, d=1.0, m_d=1, m_i=1.5, snr=math.inf)
    rng = np.random.default_rng(1234)
    n = 10_000_000
    h1 = rng.gamma(1.5, 1 / 1.5, size=n)
    h2 = rng.gamma(1.5, 1 / 1.5, size=n)
    samples = np.sqrt(0.6 * h1 + 0.4 * h2)
    mc, se = samples.mean(), samples.std() / math.sqrt(n)
    got = exponent.frac_moment_H(1.0, 1.0, 0.6, 0.4, cfg)
    assert abs(got - mc) <= 3 * se


def test_domain_errors():
    with pytest.raises(DomainError):
        exponent.exponent_A(-0.1, 1.0, 1.0, T, CFG)
    with pytest.raises(DomainError):
        exponent.exponent_A(0.5, 0.0, 1.0, T, CFG)
    with pytest.raises(DomainError):
        exponent.frac_moment_H(1.0, 1.0, 0.0, 0.0, CFG)
