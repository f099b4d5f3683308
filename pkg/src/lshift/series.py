"""Small algebraic helpers: first-order jets and truncated power series.

The shift integrands are assembled from rational expressions in
eps = e^{-s} whose s-derivative must be exact (finite differencing is
reserved for tests).  A ``Jet`` carries (value, d/d eps) through ordinary
arithmetic; a ``TruncatedSeries`` carries a whole Taylor expansion.  Both
are coefficient-agnostic: coefficients may be floats, numpy arrays, jets,
or nested series, which lets one evaluation pipeline serve point values,
derivatives, and analytic tail expansions alike.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "TruncatedSeries"]

_SCALAR_TYPES = (int, float, np.ndarray, np.floating, np.integer)


class Jet:
    """First-order Taylor pair (value, derivative) with ring arithmetic."""

    __slots__ = ("val", "der")
    __array_ufunc__ = None  # keep numpy from broadcasting over us
    __array_priority__ = 1000

    def __init__(self, val, der):
        self.val = val
        self.der = der

    @classmethod
    def seed(cls, value) -> "Jet":
        """Jet representing the differentiation variable itself."""
        one = np.ones_like(value) if isinstance(value, np.ndarray) else 1.0
        return cls(value, one)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.der + other.der)
        if isinstance(other, _SCALAR_TYPES):
            return Jet(self.val + other, self.der)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.der)

    def __sub__(self, other):
        return self.__add__(-other if isinstance(other, Jet) else -1 * other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val * other.val, self.der * other.val + self.val * other.der)
        if isinstance(other, _SCALAR_TYPES):
            return Jet(self.val * other, self.der * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            inv = 1.0 / other.val
            return Jet(self.val * inv, (self.der - self.val * other.der * inv) * inv)
        if isinstance(other, _SCALAR_TYPES):
            return Jet(self.val / other, self.der / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            inv = 1.0 / self.val
            return Jet(other * inv, -other * self.der * inv * inv)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("jet powers must be nonnegative integers")
        if n == 0:
            return 1.0
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def __repr__(self):
        return f"Jet({self.val!r}, {self.der!r})"


class TruncatedSeries:
    """Power series truncated at a fixed order, tagged by variable name.

    Series in the same variable multiply by convolution; anything else
    (scalars, arrays, jets, series in another variable) acts coefficient-
    wise.  Division by a series requires an invertible constant term.
    """

    __slots__ = ("coeffs", "var")
    __array_ufunc__ = None
    __array_priority__ = 1001

    def __init__(self, coeffs, var: str = "x", order: int | None = None):
        coeffs = list(coeffs)
        if order is not None:
            coeffs = coeffs[:order] + [0.0] * (order - len(coeffs))
        if not coeffs:
            raise ValueError("series needs at least one coefficient")
        self.coeffs = coeffs
        self.var = var

    @classmethod
    def variable(cls, order: int, var: str = "x") -> "TruncatedSeries":
        if order < 2:
            raise ValueError("variable series needs order >= 2")
        return cls([0.0, 1.0] + [0.0] * (order - 2), var=var)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def _same(self, other) -> bool:
        return isinstance(other, TruncatedSeries) and other.var == self.var

    def __add__(self, other):
        if self._same(other):
            n = max(self.order, other.order)
            a = self.coeffs + [0.0] * (n - self.order)
            b = other.coeffs + [0.0] * (n - other.order)
            return TruncatedSeries([x + y for x, y in zip(a, b)], var=self.var)
        c = list(self.coeffs)
        c[0] = c[0] + other
        return TruncatedSeries(c, var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], var=self.var)

    def __sub__(self, other):
        return self.__add__(-other if self._same(other) else -1 * other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if self._same(other):
            n = max(self.order, other.order)
            out = [0.0] * n
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    if i + j < n:
                        out[i + j] = out[i + j] + a * b
            return TruncatedSeries(out, var=self.var)
        return TruncatedSeries([c * other for c in self.coeffs], var=self.var)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        q0 = 1.0 / self.coeffs[0]
        out = [q0] + [0.0] * (self.order - 1)
        for k in range(1, self.order):
            acc = 0.0
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -q0 * acc
        return TruncatedSeries(out, var=self.var)

    def __truediv__(self, other):
        if self._same(other):
            return self * other.reciprocal()
        return TruncatedSeries([c / other for c in self.coeffs], var=self.var)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("series powers must be nonnegative integers")
        if n == 0:
            return 1.0
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs!r}, var={self.var!r})"
