"""Truncated Taylor jets in two real deformation parameters.

A :class:`JetPoly` is ``sum c[d1, d2] * e1^d1 * e2^d2`` over ``d1 + d2 <= 2`` with
:class:`~websterlab.sphere.SpherePoly` coefficients.  The parameters are real, so
conjugation acts on coefficients only.
"""

from __future__ import annotations

from typing import Callable

from gmpy2 import mpq

from websterlab.scalars import Coefficient, IntegralValue
from websterlab.sphere import SpherePoly, integrate

ORDER = 2
DEGREES = tuple((d1, d - d1) for d in range(ORDER + 1) for d1 in range(d, -1, -1))


class JetOrderError(ValueError):
    """Raised when a request goes beyond the fixed truncation order."""

    def __init__(self, msg: str = "jet order exceeded"):
        super().__init__(msg)


def _check_degree(deg) -> tuple[int, int]:
    d1, d2 = deg
    if d1 < 0 or d2 < 0 or d1 + d2 > ORDER:
        raise JetOrderError()
    return (d1, d2)


class JetPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: dict | None = None):
        c = {}
        for deg, v in (coeffs or {}).items():
            deg = _check_degree(deg)
            v = SpherePoly.coerce(v)
            if not v.is_zero():
                c[deg] = v
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("JetPoly is immutable")

    def __reduce__(self):
        return (JetPoly, (self._c,))

    @classmethod
    def lift(cls, x) -> "JetPoly":
        if isinstance(x, JetPoly):
            return x
        return cls({(0, 0): SpherePoly.coerce(x)})

    @classmethod
    def param(cls, index: int, value=1) -> "JetPoly":
        """The formal parameter ``e1`` (index 0) or ``e2`` (index 1), times ``value``."""
        deg = (1, 0) if index == 0 else (0, 1)
        return cls({deg: SpherePoly.coerce(value)})

    @classmethod
    def zero(cls) -> "JetPoly":
        return cls()

    @property
    def coeffs(self) -> dict:
        return self._c

    @property
    def base(self) -> SpherePoly:
        return self._c.get((0, 0), SpherePoly.zero())

    def extract_coefficient(self, d1: int, d2: int = 0) -> SpherePoly:
        deg = _check_degree((d1, d2))
        return self._c.get(deg, SpherePoly.zero())

    def __getitem__(self, deg) -> SpherePoly:
        return self.extract_coefficient(*deg)

    def is_zero(self) -> bool:
        return not self._c

    def is_jet(self) -> bool:
        return any(d != (0, 0) for d in self._c)

    def __add__(self, other):
        if not isinstance(other, JetPoly):
            try:
                other = JetPoly.lift(other)
            except TypeError:
                return NotImplemented
        out = dict(self._c)
        for d, v in other._c.items():
            out[d] = out[d] + v if d in out else v
        return JetPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return JetPoly({d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, JetPoly):
            try:
                other = JetPoly.lift(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return JetPoly.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (SpherePoly, JetPoly)):
            other = JetPoly.lift(other)
            out: dict = {}
            for (a1, a2), u in self._c.items():
                for (b1, b2), v in other._c.items():
                    if a1 + b1 + a2 + b2 > ORDER:
                        continue
                    d = (a1 + b1, a2 + b2)
                    p = u * v
                    out[d] = out[d] + p if d in out else p
            return JetPoly(out)
        try:
            c = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return JetPoly({d: v.scale(c) for d, v in self._c.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (SpherePoly, JetPoly)):
            return self * JetPoly.lift(other).inverse()
        return self * (Coefficient(1) / Coefficient.coerce(other))

    def __rtruediv__(self, other):
        return JetPoly.lift(other) * self.inverse()

    def conj(self) -> "JetPoly":
        return JetPoly({d: v.conj() for d, v in self._c.items()})

    def real_part(self) -> "JetPoly":
        return (self + self.conj()) * mpq(1, 2)

    def is_real(self) -> bool:
        return self == self.conj()

    def base_constant(self) -> Coefficient:
        """Degree-(0,0) part as a scalar; raises unless it is constant."""
        return self.base.constant_value()

    def _nilpotent_part(self) -> "JetPoly":
        return JetPoly({d: v for d, v in self._c.items() if d != (0, 0)})

    def _series(self, f0: Coefficient, derivs: list[Coefficient]) -> "JetPoly":
        # g(b + n) = g(b) + g'(b) n + g''(b)/2 n^2 with n nilpotent of order 3
        n = self._nilpotent_part()
        n2 = n * n
        return JetPoly.lift(f0) + n * derivs[0] + n2 * (derivs[1] * mpq(1, 2))

    def inverse(self) -> "JetPoly":
        """Multiplicative inverse; the base value must be a nonzero constant."""
        try:
            b = self.base_constant()
        except ValueError:
            raise ValueError("jet inverse needs a constant base value") from None
        if b.is_zero():
            raise ZeroDivisionError("jet with zero base value is not invertible")
        inv = Coefficient(1) / b
        return self._series(inv, [-(inv * inv), inv * inv * inv * 2])

    def sqrt(self) -> "JetPoly":
        """Square root of a jet with a positive rational-square constant base."""
        b = self.base_constant()
        if not b.is_real() or b.re <= 0:
            raise ValueError("square root needs a positive real base")
        r = _rational_sqrt(b.re)
        if r is None:
            raise ValueError("base value is not a rational square")
        return self._series(Coefficient(r), [Coefficient(1 / (2 * r)), Coefficient(-1 / (4 * r * r * r))])

    def map(self, op: Callable[[SpherePoly], SpherePoly]) -> "JetPoly":
        """Apply a linear operator coefficient-wise."""
        return JetPoly({d: op(v) for d, v in self._c.items()})

    def integrate(self, measure: str = "euclidean") -> dict:
        return {d: integrate(v, measure) for d, v in self._c.items()}

    def truncate(self, order: int) -> "JetPoly":
        return JetPoly({d: v for d, v in self._c.items() if sum(d) <= order})

    def __eq__(self, other):
        if not isinstance(other, JetPoly):
            try:
                other = JetPoly.lift(other)
            except TypeError:
                return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        inner = ", ".join(f"{d}: {v}" for d, v in sorted(self._c.items()))
        return f"JetPoly({{{inner}}})"


def _rational_sqrt(q: mpq):
    from gmpy2 import is_square, isqrt

    n, d = int(q.numerator), int(q.denominator)
    if n < 0 or not is_square(n) or not is_square(d):
        return None
    return mpq(int(isqrt(n)), int(isqrt(d)))


class JetIntegral:
    """Jet of exact integrals, one :class:`IntegralValue` per degree."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict):
        object.__setattr__(self, "_c", {d: v for d, v in coeffs.items() if not v.is_zero()})

    @classmethod
    def of(cls, jet: JetPoly, measure: str = "euclidean") -> "JetIntegral":
        return cls(jet.integrate(measure))

    def extract_coefficient(self, d1: int, d2: int = 0) -> IntegralValue:
        deg = _check_degree((d1, d2))
        return self._c.get(deg, IntegralValue.zero())

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __repr__(self):
        inner = ", ".join(f"{d}: {v}" for d, v in sorted(self._c.items()))
        return f"JetIntegral({{{inner}}})"
