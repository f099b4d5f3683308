import math

import numpy as np
import pytest

from lshift import HydrogenState, kernel_point, m_nl, series_coefficients
from lshift.kernel import (
    MAX_PRINCIPAL_N,
    bracket_taylor,
    integrand_1s,
    integrand_2p,
    integrand_2s2p,
    integrand_general,
    make_integrand,
    multinomial_terms,
    nu_minus_one,
)


def closed_u_series_coeffs(b, d, order):
    """Independent oracle: u(x) solves the quadratic x u^2 - (d + b x) u + 1 = 0;
    the root regular at x=0 is ((d+bx) - sqrt((d+bx)^2 - 4x)) / (2x).  Its
    sympy expansion gives A and the A_k without any fixed-point iteration."""
    import sympy as sy

    x = sy.symbols("x")
    expr = ((d + b * x) - sy.sqrt((d + b * x) ** 2 - 4 * x)) / (2 * x)
    series = sy.series(expr, x, 0, order).removeO()
    poly = sy.Poly(series, x)
    return [float(poly.coeff_monomial(x**k)) for k in range(order)]


# ---------- kernel points and coefficient series ----------


def test_kernel_point_invariants():
    pt = kernel_point(1.0, 1.0, HydrogenState(1, 0))
    assert pt.d == pytest.approx(math.cosh(0.5) + math.sinh(0.5) * math.cosh(1.0), rel=1e-15)
    assert pt.b == pytest.approx(math.cosh(0.5) - math.sinh(0.5) * math.cosh(1.0), rel=1e-15)
    # d*b = cosh^2(s/2) - sinh^2(s/2) cosh^2(phi)
    assert pt.d * pt.b == pytest.approx(
        math.cosh(0.5) ** 2 - math.sinh(0.5) ** 2 * math.cosh(1.0) ** 2, rel=1e-13
    )
    assert pt.nu == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert pt.d >= 1.0


def test_kernel_point_boundaries():
    pt0 = kernel_point(0.0, 2.0, HydrogenState(1, 0))
    assert pt0.b == 1.0 and pt0.d == 1.0
    # phi -> 0 limit collapses to pure exponentials
    pt = kernel_point(3.0, 1e-12, HydrogenState(1, 0))
    assert pt.b == pytest.approx(math.exp(-1.5), rel=1e-9)
    assert pt.d == pytest.approx(math.exp(1.5), rel=1e-9)


def test_kernel_point_errors():
    state = HydrogenState(1, 0)
    with pytest.raises(ValueError):
        kernel_point(-0.1, 1.0, state)
    with pytest.raises(ValueError):
        kernel_point(1.0, 0.0, state)
    with pytest.raises(OverflowError):
        kernel_point(5000.0, 1.0, state)


def test_series_coefficients_closed_forms():
    pt = kernel_point(1.3, 0.7, HydrogenState(2, 0))
    cs = series_coefficients(pt, 3)
    assert cs.a == pytest.approx(1.0 / pt.d**2, rel=1e-14)
    assert cs.a_k(1) == pytest.approx(-(2.0 / pt.d) * (pt.b - 1.0 / pt.d), rel=1e-13)


def test_series_coefficients_at_s_zero():
    pt = kernel_point(0.0, 1.3, HydrogenState(1, 0))
    cs = series_coefficients(pt, 4)
    assert cs.a == pytest.approx(1.0, abs=1e-15)
    for k in range(1, 5):
        assert cs.a_k(k) == pytest.approx(0.0, abs=1e-14)


def test_series_coefficients_against_quadratic_root_oracle():
    pt = kernel_point(1.0, 1.0, HydrogenState(3, 0))
    cs = series_coefficients(pt, 3)
    u = closed_u_series_coeffs(pt.b, pt.d, 5)
    # w = x u(x)^2 = A x (1 + A_1 x + A_2 x^2 + ...)
    v = np.convolve(u, u)
    assert cs.a == pytest.approx(v[0], rel=1e-12)
    assert cs.a_k(1) == pytest.approx(v[1] / v[0], rel=1e-11)
    assert cs.a_k(2) == pytest.approx(v[2] / v[0], rel=1e-10)
    assert cs.a_k(3) == pytest.approx(v[3] / v[0], rel=1e-9)


# ---------- multinomial matrix elements ----------


def test_m_nl_small_identities():
    pt = kernel_point(0.8, 1.1, HydrogenState(2, 0))
    cs = series_coefficients(pt, 2)
    a, a1 = cs.a, cs.a_k(1)
    assert m_nl(pt, 1, 0) == pytest.approx(a, rel=1e-14)
    assert m_nl(pt, 2, 0) == pytest.approx(a * a + a * a1, rel=1e-13)
    assert m_nl(pt, 2, 1) == pytest.approx(a * a, rel=1e-14)


def test_m_nl_against_series_power_oracle():
    # M_nl = sum_{j=l+1}^{n} [x^{n-j}] (u(x)^2)^j with u from the quadratic root
    pt = kernel_point(0.9, 0.8, HydrogenState(4, 0))
    u = np.array(closed_u_series_coeffs(pt.b, pt.d, 8))
    v = np.convolve(u, u)[:8]
    for n, l in [(1, 0), (2, 0), (2, 1), (3, 1), (4, 0), (4, 3)]:
        acc = 0.0
        power = np.array([1.0])
        for j in range(1, n + 1):
            power = np.convolve(power, v)[:8]
            if j >= l + 1:
                acc += power[n - j]
        assert m_nl(pt, n, l) == pytest.approx(acc, rel=1e-11), (n, l)


def test_m_nl_truncation_insensitive():
    # extending the coefficient series beyond A_{n-1} must not change M_nl
    pt = kernel_point(1.7, 0.5, HydrogenState(4, 0))
    for n, l in [(2, 0), (3, 0), (4, 2)]:
        base = m_nl(pt, n, l)
        cs_long = series_coefficients(pt, n + 2)
        acc = 0.0
        for r, ms, q, coeff in multinomial_terms(n, l):
            term = coeff * cs_long.a**q
            for k, m in enumerate(ms, start=1):
                if m:
                    term *= cs_long.a_k(k) ** m
            acc += term
        assert acc == pytest.approx(base, rel=1e-12)


def test_m_nl_validation():
    pt = kernel_point(1.0, 1.0, HydrogenState(1, 0))
    with pytest.raises(ValueError):
        m_nl(pt, 2, 2)
    with pytest.raises(ValueError):
        multinomial_terms(MAX_PRINCIPAL_N + 1, 0)


# ---------- integrands: closed forms vs the generic route ----------


def test_integrand_1s_equals_general():
    rng = np.random.RandomState(7)
    s = rng.uniform(0.02, 25.0, 100)
    phi = rng.uniform(0.05, 5.0, 100)
    state = HydrogenState(1, 0)
    for si, pi in zip(s, phi):
        a = integrand_1s(si, pi)
        b = integrand_general(si, pi, state)
        assert b == pytest.approx(a, rel=1e-12), (si, pi)


def test_integrand_1s_spot_value():
    # independent arithmetic at s=1, phi=1
    s, phi = 1.0, 1.0
    expected = (
        math.exp(s * math.exp(-phi))
        / math.sinh(s / 2.0) ** 2
        / (1.0 / math.tanh(s / 2.0) + math.cosh(phi)) ** 3
    )
    assert integrand_1s(s, phi) == pytest.approx(expected, rel=1e-14)


def test_integrand_2s2p_equals_difference():
    rng = np.random.RandomState(11)
    for _ in range(40):
        s = rng.uniform(0.05, 15.0)
        phi = rng.uniform(0.05, 4.0)
        w20 = make_integrand(phi, 2, 0)(s)
        w21 = make_integrand(phi, 2, 1)(s)
        assert integrand_2s2p(s, phi) == pytest.approx(w20 - w21, rel=1e-10)
        assert make_integrand(phi, 2, 0, l_at_most=1)(s) == pytest.approx(w20 - w21, rel=1e-12)


def test_integrand_2p_equals_general():
    rng = np.random.RandomState(13)
    for _ in range(40):
        s = rng.uniform(0.05, 15.0)
        phi = rng.uniform(0.05, 4.0)
        assert integrand_2p(s, phi) == pytest.approx(
            integrand_general(s, phi, HydrogenState(2, 1)), rel=1e-10
        )


def test_integrand_2s2p_positive():
    rng = np.random.RandomState(17)
    for phi in rng.uniform(0.01, 5.5, 20):
        s = rng.uniform(0.01, 30.0, 50)
        assert np.all(integrand_2s2p(s, float(phi)) > 0.0)


def test_derivative_identity_against_finite_difference():
    # analytic bracket derivative vs 5-point central difference of
    # sinh^2(s/2) M_10 = (coth(s/2) + cosh phi)^{-2}
    def bracket(s, phi):
        return 1.0 / (1.0 / math.tanh(s / 2.0) + math.cosh(phi)) ** 2

    for s in np.geomspace(0.01, 20.0, 12):
        for phi in np.linspace(0.05, 5.0, 8):
            h = 1e-3 * max(0.05, min(s, 1.0))
            fd = (
                -bracket(s + 2 * h, phi)
                + 8 * bracket(s + h, phi)
                - 8 * bracket(s - h, phi)
                + bracket(s - 2 * h, phi)
            ) / (12 * h)
            analytic = integrand_1s(s, phi) * math.exp(-s * math.exp(-phi))
            assert analytic == pytest.approx(fd, rel=1e-8), (s, phi)


def test_integrand_vanishes_at_small_s():
    # 1S and 2P vanish linearly, 2S-2P cubically; series-expansion slopes
    s = np.array([1e-4, 2e-4])
    phi = 0.9
    w1 = integrand_1s(s, phi)
    assert w1[1] / w1[0] == pytest.approx(2.0, rel=1e-3)
    assert abs(w1[0]) < 1e-3
    w2p = integrand_2p(s, phi)
    assert w2p[1] / w2p[0] == pytest.approx(2.0, rel=1e-3)
    w22 = integrand_2s2p(s, phi)
    assert w22[1] / w22[0] == pytest.approx(8.0, rel=1e-2)


def test_integrand_small_s_slope_oracle():
    # leading 1S behavior: W ~ s/2 * (higher-order in s corrections)
    phi = 1.3
    s = 1e-6
    assert integrand_1s(s, phi) == pytest.approx(s / 2.0, rel=1e-3)


def test_integrand_large_s_tail():
    # decay rate e^{(nu-1)s}: doubling s multiplies by e^{(nu-1)s}
    phi = 0.5
    num1 = nu_minus_one(phi, 1)
    w = integrand_1s(np.array([40.0, 50.0]), phi)
    assert w[1] / w[0] == pytest.approx(math.exp(num1 * 10.0), rel=1e-8)
    # and the evaluation stays finite far beyond cosh overflow range
    assert np.isfinite(integrand_general(3000.0, 0.01, HydrogenState(1, 0)))


def test_integrand_1s_decays_with_phi():
    vals = [integrand_1s(1.0, p) for p in (1.0, 3.0, 6.0, 10.0)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


def test_integrand_validation():
    with pytest.raises(ValueError):
        integrand_1s(-1.0, 1.0)
    with pytest.raises(ValueError):
        integrand_1s(1.0, 0.0)
    with pytest.raises(ValueError):
        integrand_general(1.0, 1.0, HydrogenState(MAX_PRINCIPAL_N + 1, 0))


def test_bracket_taylor_matches_closed_form_tail():
    # For (1,0): P(eps) = (1-eps)^2 / (4 D^2) with D = ((1+c) + eps(1-c))/2;
    # check the first Taylor coefficients against sympy
    import sympy as sy

    phi = 0.8
    c = math.cosh(phi)
    eps = sy.symbols("eps")
    d_red = ((1 + c) + eps * (1 - c)) / 2
    p_expr = (1 - eps) ** 2 / (4 * d_red**2)
    series = sy.Poly(sy.series(p_expr, eps, 0, 5).removeO(), eps)
    got = bracket_taylor(phi, 1, 0, 5)
    for k in range(5):
        assert got[k] == pytest.approx(float(series.coeff_monomial(eps**k)), rel=1e-11)
