"""Closed-form integrands for the radiative-shift spectral density.

The SO(4,2) treatment of the Coulomb problem reduces the self-energy of a
hydrogenic level (n, l) to a double integral

    shift ~ int dphi e^phi sinh(phi) int_0^inf ds e^{nu s}
            d/ds [ sinh^2(s/2) M_nl(s, phi) ],      nu = n e^{-phi},

with no sum over intermediate states.  M_nl is a matrix element generated
by two hyperbolic coefficients

    d = cosh(s/2) + sinh(s/2) cosh(phi)
    b = cosh(s/2) - sinh(s/2) cosh(phi)

through a power-series inversion: writing x for the generating-function
bookkeeping variable, the series u(x) solving

    u = (1 - b x u + x u^2) / d

yields e^{-psi} = A x (1 + A_1 x + A_2 x^2 + ...) with A = u_0^2 = 1/d^2,
and M_nl is a multinomial sum over products of A and the A_k.

Numerical scheme
----------------
Everything is evaluated in eps = e^{-s}.  Since d and b scale like
e^{s/2}, the reduced variables

    D = ((1 + cosh phi) + eps (1 - cosh phi)) / 2 = e^{-s/2} d
    B = ((1 - cosh phi) + eps (1 + cosh phi)) / 2 = e^{-s/2} b

stay O(1) for every s, and the bracket P(s) = sinh^2(s/2) M_nl becomes a
smooth function of eps alone.  The integrand is then

    e^{nu s} dP/ds = -exp((nu - 1) s) dP/d eps,

where exp((nu - 1) s) is formed directly from s, so the evaluation never
overflows or underflows on the whole half-line.  dP/d eps is exact: the
pipeline runs on first-order jets, never on finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import HydrogenState
from .series import Jet, TruncatedSeries

__all__ = [
    "MAX_PRINCIPAL_N",
    "KernelPoint",
    "CoefficientSeries",
    "kernel_point",
    "series_coefficients",
    "m_nl",
    "multinomial_terms",
    "integrand_general",
    "integrand_1s",
    "integrand_2s2p",
    "integrand_2p",
    "make_integrand",
    "make_bracket_derivative",
    "bracket_taylor",
    "nu_minus_one",
]

# Partition enumeration grows quickly with n; levels past this cap are out
# of the supported range.
MAX_PRINCIPAL_N = 10


@dataclass(frozen=True)
class KernelPoint:
    """One (s, phi) evaluation point with its cached hyperbolic quantities."""

    s: float
    phi: float
    b: float
    d: float
    nu: float


@dataclass(frozen=True)
class CoefficientSeries:
    """Expansion coefficients (A, A_1, ..., A_kmax) at a fixed (s, phi)."""

    coefficients: tuple[float, ...]

    @property
    def a(self) -> float:
        return self.coefficients[0]

    def a_k(self, k: int) -> float:
        """A_k for k >= 1."""
        return self.coefficients[k]


def kernel_point(s: float, phi: float, state: HydrogenState) -> KernelPoint:
    """Build a KernelPoint, validating s >= 0 and phi > 0.

    b and d are stored unscaled, so for s beyond ~1400 the cosh overflows;
    that range error is raised before any precision is silently lost.  The
    production integrand path does not go through this representation.
    """
    if s < 0:
        raise ValueError(f"s={s} must be >= 0")
    if phi <= 0:
        raise ValueError(f"phi={phi} must be > 0")
    try:
        ch, sh = math.cosh(s / 2.0), math.sinh(s / 2.0)
        cp = math.cosh(phi)
        d = ch + sh * cp
        b = ch - sh * cp
    except OverflowError as exc:
        raise OverflowError(f"hyperbolic overflow at s={s}; use the eps-scaled path") from exc
    nu = state.n * math.exp(-phi)
    return KernelPoint(s=s, phi=phi, b=b, d=d, nu=nu)


def _u_series(b_like, d_like, sq_scale, order: int):
    """Solve u = (1 - b x u + sq_scale x u^2) / d as a truncated series in x.

    Coefficient k stabilizes after k iterations, so ``order`` sweeps are
    exact.  Works for any coefficient ring (floats, arrays, jets, series).
    """
    inv_d = 1.0 / d_like
    u = [inv_d] + [0.0] * (order - 1)
    for _ in range(order - 1):
        sq = _convolve(u, u)
        new = [inv_d]
        for k in range(1, order):
            new.append((sq_scale * sq[k - 1] - b_like * u[k - 1]) * inv_d)
        u = new
    return u


def _convolve(a, b):
    n = len(a)
    out = [0.0] * n
    for i in range(n):
        ai = a[i]
        for j in range(n - i):
            out[i + j] = out[i + j] + ai * b[j]
    return out


def series_coefficients(point: KernelPoint, k_max: int) -> CoefficientSeries:
    """Coefficients A, A_1 ... A_{k_max} of e^{-psi} = A x (1 + sum A_k x^k).

    Obtained by fixed-point inversion of the generating identity
    e^{psi/2} = d e^{x.../2} + b e^{-.../2} - e^{-psi/2}; the first two
    entries reproduce the closed forms A = 1/d^2 and
    A_1 = -(2/d)(b - 1/d) exactly.
    """
    if k_max < 1:
        raise ValueError(f"k_max={k_max} must be >= 1")
    u = _u_series(point.b, point.d, 1.0, k_max + 1)
    sq = _convolve(u, u)
    a0 = sq[0]
    return CoefficientSeries(coefficients=(a0, *(sq[k] / a0 for k in range(1, k_max + 1))))


@lru_cache(maxsize=None)
def multinomial_terms(n: int, l_above: int, l_at_most: int | None = None):
    """Multinomial expansion terms of M_nl (or of a difference of two M's).

    Each term is (r, multiplicities, q, coefficient) where r counts plain
    A factors, multiplicities[k-1] counts A_k factors, the weights satisfy
    r + sum_k (k+1) m_k = n, and q = r + sum_k m_k obeys q > l_above (and
    q <= l_at_most when given, which selects M_{n,l_above} - M_{n,l_at_most}).
    The term value is coefficient * A^q * prod_k A_k^{m_k} with
    coefficient = q! / (r! prod_k m_k!).
    """
    if n < 1:
        raise ValueError(f"n={n} must be >= 1")
    if n > MAX_PRINCIPAL_N:
        raise ValueError(f"n={n} beyond the supported cap {MAX_PRINCIPAL_N}")
    if l_above >= n:
        raise ValueError(f"need l < n, got l={l_above}, n={n}")
    terms = []

    def rec(k: int, remaining: int, ms: list[int]) -> None:
        if k > n - 1:
            r = remaining
            q = r + sum(ms)
            if q > l_above and (l_at_most is None or q <= l_at_most):
                coeff = math.factorial(q) // math.factorial(r)
                for m in ms:
                    coeff //= math.factorial(m)
                trimmed = tuple(ms)
                while trimmed and trimmed[-1] == 0:
                    trimmed = trimmed[:-1]
                terms.append((r, trimmed, q, coeff))
            return
        for m in range(remaining // (k + 1) + 1):
            rec(k + 1, remaining - (k + 1) * m, ms + [m])

    rec(1, n, [])
    return tuple(terms)


def m_nl(point: KernelPoint, n: int, l: int) -> float:
    """Matrix element M_nl at a kernel point via the multinomial sum.

    M_10 = A, M_20 = A^2 + A A_1, M_21 = A^2, and so on.
    """
    if not n >= l + 1 >= 1:
        raise ValueError(f"need n >= l+1 >= 1, got n={n}, l={l}")
    coeffs = series_coefficients(point, max(1, n - 1))
    a = coeffs.a
    total = 0.0
    for r, ms, q, coeff in multinomial_terms(n, l):
        term = coeff * a**q
        for k, m in enumerate(ms, start=1):
            if m:
                term *= coeffs.a_k(k) ** m
        total += term
    return total


def _bracket(eps, cosh_phi: float, n: int, terms):
    """P = sinh^2(s/2) M (or an M-difference) as a function of eps = e^{-s}.

    ``eps`` may be a float, ndarray, Jet, or TruncatedSeries; the return
    value lives in the same ring.  The assembly keeps every factor O(1):
    A^q prod A_k^{m_k} = eps^q s0^r prod s_k^{m_k} with s_k the x^k
    coefficient of u(x)^2, and one power of eps cancels against
    sinh^2(s/2) = (1-eps)^2/(4 eps).
    """
    half_sum = 0.5 * (1.0 + cosh_phi)
    half_dif = 0.5 * (1.0 - cosh_phi)
    d_red = half_sum + eps * half_dif
    b_red = half_dif + eps * half_sum
    u = _u_series(b_red, d_red, eps, n)
    sq = _convolve(u, u)
    one_m = 1.0 - eps
    prefactor = one_m * one_m * 0.25
    total = 0.0
    for r, ms, q, coeff in terms:
        term = coeff * eps ** (q - 1) * sq[0] ** r
        for k, m in enumerate(ms, start=1):
            if m:
                term = term * sq[k] ** m
        total = total + term
    return prefactor * total


def nu_minus_one(phi, n: int):
    """nu - 1 = n e^{-phi} - 1 computed without cancellation as expm1(ln n - phi)."""
    out = np.expm1(math.log(n) - np.asarray(phi, dtype=float))
    return float(out) if out.ndim == 0 else out


def make_integrand(phi: float, n: int, l: int, l_at_most: int | None = None):
    """Vectorized s-integrand for level (n, l) at fixed phi.

    Returns f with f(s) = e^{nu s} d/ds [ sinh^2(s/2) M ], stable for all
    s in [0, inf).  With ``l_at_most`` the M-difference integrand (e.g.
    the 2S-2P combination for (n, l, l_at_most) = (2, 0, 1)) is produced.
    """
    if phi <= 0:
        raise ValueError(f"phi={phi} must be > 0")
    cosh_phi = math.cosh(phi)
    terms = multinomial_terms(n, l, l_at_most)
    num1 = float(nu_minus_one(phi, n))

    def integrand(s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise ValueError("s must be >= 0")
        jet = Jet.seed(np.exp(-s))
        p = _bracket(jet, cosh_phi, n, terms)
        out = -np.exp(num1 * s) * p.der
        return float(out) if out.ndim == 0 else out

    return integrand


def integrand_general(s, phi: float, state: HydrogenState):
    """e^{nu s} d/ds [ sinh^2(s/2) M_nl(s) ] for an arbitrary supported level.

    The s-derivative is analytic (jet propagation through the series
    inversion), never a finite difference.  Accepts scalar or array s.
    """
    return make_integrand(phi, state.n, state.l)(s)


def make_bracket_derivative(phi: float, n: int, l: int, l_at_most: int | None = None):
    """Vectorized g with g(s) = dP/d eps evaluated at eps = e^{-s}.

    The full integrand is -exp((nu-1)s) g(s); exposing g alone lets the
    analytic-continuation path subtract the eps-Taylor tail of g before
    multiplying by the (possibly growing) exponential.
    """
    if phi <= 0:
        raise ValueError(f"phi={phi} must be > 0")
    cosh_phi = math.cosh(phi)
    terms = multinomial_terms(n, l, l_at_most)

    def derivative(s):
        s = np.asarray(s, dtype=float)
        jet = Jet.seed(np.exp(-s))
        p = _bracket(jet, cosh_phi, n, terms)
        out = np.asarray(p.der, dtype=float)
        return float(out) if out.ndim == 0 else out

    return derivative


def bracket_taylor(phi: float, n: int, l: int, order: int, l_at_most: int | None = None) -> list[float]:
    """Taylor coefficients p_0..p_{order-1} of P(eps) about eps = 0.

    These drive the analytic continuation of the s-integral below the
    nu = 1 convergence threshold: the large-s tail of the integrand is
    -sum_j (j+1) p_{j+1} e^{(nu-1-j)s}, each term integrating to a simple
    rational function of nu with poles at the intermediate-level energies.
    """
    cosh_phi = math.cosh(phi)
    terms = multinomial_terms(n, l, l_at_most)
    eps = TruncatedSeries.variable(order, var="eps")
    p = _bracket(eps, cosh_phi, n, terms)
    if isinstance(p, TruncatedSeries):
        coeffs = list(p.coeffs[:order]) + [0.0] * (order - len(p.coeffs))
    else:  # degenerate: P independent of eps
        coeffs = [float(p)] + [0.0] * (order - 1)
    return [float(c) for c in coeffs]


# Closed forms, written in eps = e^{-s} with W = (1 + eps) + cosh(phi)(1 - eps)
# so that the exponential growth of e^{nu s} is absorbed exactly.


def integrand_1s(s, phi):
    """Ground-state integrand e^{s e^{-phi}} csch^2(s/2) (coth(s/2) + cosh phi)^{-3}.

    Identical to integrand_general for (n, l) = (1, 0); kept as an
    independent closed form for cross-checking.
    """
    s, phi = np.asarray(s, dtype=float), float(phi)
    _check_closed_form_args(s, phi)
    eps = np.exp(-s)
    w = (1.0 + eps) + math.cosh(phi) * (1.0 - eps)
    out = 4.0 * np.exp(np.expm1(-phi) * s) * (1.0 - eps) / w**3
    return float(out) if out.ndim == 0 else out


def integrand_2s2p(s, phi):
    """Combined 2S-2P integrand, normalized to M_20 - M_21 of the generic route.

    W_{2S-2P} = 4 sinh^2(phi) e^{2 s e^{-phi}} csch^2(s/2)
                (cosh phi + coth(s/2))^{-5},
    positive for all s, phi > 0.
    """
    s, phi = np.asarray(s, dtype=float), float(phi)
    _check_closed_form_args(s, phi)
    eps = np.exp(-s)
    w = (1.0 + eps) + math.cosh(phi) * (1.0 - eps)
    sp = math.sinh(phi)
    out = 16.0 * sp * sp * np.exp(nu_minus_one(phi, 2) * s) * (1.0 - eps) ** 3 / w**5
    return float(out) if out.ndim == 0 else out


def integrand_2p(s, phi):
    """2P integrand, normalized to M_21 of the generic route.

    W_2P = -e^{2 s e^{-phi}} csch^4(s/2)
           (cosh phi sinh s + cosh s - 3) / [2 (cosh phi + coth(s/2))^5].
    Its E-integral weight is negative: the dominant virtual transition is
    downward, 2P -> 1S.
    """
    s, phi = np.asarray(s, dtype=float), float(phi)
    _check_closed_form_args(s, phi)
    eps = np.exp(-s)
    cp = math.cosh(phi)
    w = (1.0 + eps) + cp * (1.0 - eps)
    bracket = cp * (1.0 - eps * eps) + 1.0 + eps * eps - 6.0 * eps
    out = -4.0 * np.exp(nu_minus_one(phi, 2) * s) * bracket * (1.0 - eps) / w**5
    return float(out) if out.ndim == 0 else out


def _check_closed_form_args(s, phi) -> None:
    if np.any(s < 0):
        raise ValueError("s must be >= 0")
    if phi <= 0:
        raise ValueError(f"phi={phi} must be > 0")
