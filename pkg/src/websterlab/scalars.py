"""Exact Gaussian-rational scalars and pi^2-valued integrals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

_ZERO = mpq(0)


def to_mpq(x) -> mpq:
    """Convert an int, Fraction, mpq or ``"p/q"`` string to an exact rational."""
    if isinstance(x, type(_ZERO)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, float):
        # exact binary value; only used by the flagged floating mode
        return mpq(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q: mpq) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Coefficient:
    """Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_mpq(re))
        object.__setattr__(self, "im", to_mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("Coefficient is immutable")

    def __reduce__(self):
        return (Coefficient, (self.re, self.im))

    @classmethod
    def coerce(cls, x) -> "Coefficient":
        if isinstance(x, Coefficient):
            return x
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "Coefficient":
        """Inverse of :func:`str` for the ``"a + b i"`` display format."""
        s = text.replace(" ", "")
        if not s.endswith("i"):
            return cls(s)
        body = s[:-1]
        # split at the last sign that is not the leading one
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            im = body if body not in ("", "+", "-") else body + "1"
            return cls(0, im)
        re, im = body[:cut], body[cut:]
        if im in ("+", "-"):
            im += "1"
        return cls(re, im)

    @property
    def pair(self) -> tuple[mpq, mpq]:
        return (self.re, self.im)

    def conj(self) -> "Coefficient":
        return Coefficient(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return Coefficient(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return Coefficient(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return Coefficient.coerce(other) - self

    def __mul__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return Coefficient(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero coefficient")
        return self * Coefficient(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        return Coefficient.coerce(other) / self

    def __eq__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Coefficient({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return format_rational(re)
        mag = format_rational(abs(im))
        imag = "i" if mag == "1" else f"{mag} i"
        if re == 0:
            return imag if im > 0 else f"-{imag}"
        return f"{format_rational(re)} {'+' if im > 0 else '-'} {imag}"


class IntegralValue:
    """Exact integral ``coeff * (pi^2)**pi2_power``."""

    __slots__ = ("coeff", "pi2_power")

    def __init__(self, coeff=0, pi2_power: int = 1):
        coeff = Coefficient.coerce(coeff)
        if coeff.is_zero():
            pi2_power = 0
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "pi2_power", int(pi2_power))

    def __setattr__(self, name, value):
        raise AttributeError("IntegralValue is immutable")

    def __reduce__(self):
        return (IntegralValue, (self.coeff, self.pi2_power))

    @classmethod
    def zero(cls) -> "IntegralValue":
        return cls(0, 0)

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, IntegralValue):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.pi2_power != other.pi2_power:
            raise ValueError("cannot add integrals with different powers of pi^2")
        return IntegralValue(self.coeff + other.coeff, self.pi2_power)

    __radd__ = __add__

    def __neg__(self):
        return IntegralValue(-self.coeff, self.pi2_power)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, IntegralValue):
            return NotImplemented
        return IntegralValue(self.coeff * Coefficient.coerce(scalar), self.pi2_power)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return IntegralValue(self.coeff / Coefficient.coerce(scalar), self.pi2_power)

    def ratio(self, other: "IntegralValue") -> Coefficient:
        """Exact quotient of two integrals carrying the same power of pi^2."""
        if other.is_zero():
            raise ZeroDivisionError("ratio by a zero integral")
        if self.is_zero():
            return Coefficient(0)
        if self.pi2_power != other.pi2_power:
            raise ValueError("ratio of integrals with different powers of pi^2")
        return self.coeff / other.coeff

    def conj(self) -> "IntegralValue":
        return IntegralValue(self.coeff.conj(), self.pi2_power)

    def sign(self) -> str:
        if not self.coeff.is_real():
            raise ValueError("sign of a non-real integral")
        re = self.coeff.re
        return "+" if re > 0 else "-" if re < 0 else "0"

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, IntegralValue):
            return NotImplemented
        return self.coeff == other.coeff and (self.is_zero() or self.pi2_power == other.pi2_power)

    def __hash__(self):
        return hash((self.coeff, self.pi2_power if not self.is_zero() else 0))

    def __float__(self):
        import math

        if not self.coeff.is_real():
            raise ValueError("float of a non-real integral")
        return float(self.coeff.re) * math.pi ** (2 * self.pi2_power)

    def __repr__(self):
        return f"IntegralValue({str(self.coeff)!r}, pi2_power={self.pi2_power})"

    def __str__(self):
        if self.is_zero():
            return "0"
        c = str(self.coeff)
        if self.pi2_power == 0:
            return c
        if not self.coeff.is_real() and not (self.coeff.re == 0):
            c = f"({c})"
        suffix = "pi^2" if self.pi2_power == 1 else f"pi^{2 * self.pi2_power}"
        if c == "1":
            return suffix
        if c == "-1":
            return f"-{suffix}"
        return f"{c} * {suffix}"

    def to_json(self) -> dict:
        return {
            "re": format_rational(self.coeff.re),
            "im": format_rational(self.coeff.im),
            "pi2_power": self.pi2_power,
        }

    @classmethod
    def from_json(cls, data: dict) -> "IntegralValue":
        return cls(Coefficient(data["re"], data["im"]), data["pi2_power"])

    @classmethod
    def parse(cls, text: str) -> "IntegralValue":
        """Inverse of :func:`str`: ``"16 * pi^2"``, ``"-pi^2"``, ``"(1 + i) * pi^4"``, ``"0"``."""
        s = text.strip()
        if "pi^" not in s:
            return cls(Coefficient.parse(s), 0)
        head, _, power = s.rpartition("pi^")
        head = head.strip().removesuffix("*").strip()
        if head in ("", "-"):
            head += "1"
        coeff = Coefficient.parse(head.removeprefix("(").removesuffix(")"))
        return cls(coeff, int(power) // 2)
