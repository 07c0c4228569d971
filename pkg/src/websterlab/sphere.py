"""Polynomial functions on S^3 = {|z1|^2 + |z2|^2 = 1} with exact coefficients.

A monomial is stored by its exponent quadruple ``(a1, a2, b1, b2)`` standing for
``z1^a1 z2^a2 zb1^b1 zb2^b2`` (``zb`` = complex conjugate).  The normal form
eliminates every product ``z2 zb2`` through ``z2 zb2 = 1 - z1 zb1``, so each
stored monomial has ``min(a2, b2) == 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator

from gmpy2 import mpq

from websterlab.scalars import Coefficient, IntegralValue, format_rational

Exps = tuple[int, int, int, int]

_HALF = mpq(1, 2)


def _cadd(acc: dict, key, re, im) -> None:
    old = acc.get(key)
    if old is None:
        acc[key] = (re, im)
    else:
        acc[key] = (old[0] + re, old[1] + im)


@lru_cache(maxsize=None)
def _reduce_monomial(key: Exps) -> tuple[tuple[Exps, int], ...]:
    a1, a2, b1, b2 = key
    k = min(a2, b2)
    if k == 0:
        return ((key, 1),)
    # z2^k zb2^k = (1 - z1 zb1)^k
    return tuple(
        ((a1 + j, a2 - k, b1 + j, b2 - k), (-1) ** j * comb(k, j)) for j in range(k + 1)
    )


def _normalize_terms(raw: dict) -> dict:
    out: dict = {}
    for key, (re, im) in raw.items():
        if re == 0 and im == 0:
            continue
        for nkey, c in _reduce_monomial(key):
            _cadd(out, nkey, re * c, im * c)
    return {k: v for k, v in out.items() if v[0] != 0 or v[1] != 0}


class SpherePoly:
    """Immutable exact polynomial function on S^3 in normal form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None, *, normalized: bool = False):
        raw = dict(terms or {})
        object.__setattr__(self, "_terms", raw if normalized else _normalize_terms(raw))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SpherePoly is immutable")

    def __reduce__(self):
        return (SpherePoly, (self._terms,))

    # -- construction -------------------------------------------------

    @classmethod
    def normalize(cls, raw: Iterable[tuple[Exps, object]]) -> "SpherePoly":
        """Build the normal form from ``(exponents, coefficient)`` pairs."""
        acc: dict = {}
        for exps, c in raw:
            exps = tuple(int(e) for e in exps)
            if len(exps) != 4 or min(exps) < 0:
                raise ValueError(f"bad exponent quadruple {exps}")
            co = Coefficient.coerce(c)
            _cadd(acc, exps, co.re, co.im)
        return cls(acc)

    @classmethod
    def const(cls, c) -> "SpherePoly":
        co = Coefficient.coerce(c)
        return cls({(0, 0, 0, 0): co.pair})

    @classmethod
    def zero(cls) -> "SpherePoly":
        return cls({}, normalized=True)

    @classmethod
    def one(cls) -> "SpherePoly":
        return cls.const(1)

    @classmethod
    def monomial(cls, a1: int, a2: int, b1: int, b2: int, c=1) -> "SpherePoly":
        return cls.normalize([((a1, a2, b1, b2), c)])

    @classmethod
    def coerce(cls, x) -> "SpherePoly":
        if isinstance(x, SpherePoly):
            return x
        return cls.const(x)

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self) -> Iterator[tuple[Exps, Coefficient]]:
        for k in sorted(self._terms):
            yield k, Coefficient(*self._terms[k])

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0, 0, 0) for k in self._terms)

    def constant_value(self) -> Coefficient:
        """Value of a constant polynomial; raises for non-constants."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return Coefficient(*self._terms.get((0, 0, 0, 0), (0, 0)))

    def is_real(self) -> bool:
        return self == self.conj()

    def degree(self) -> int:
        return max((sum(k) for k in self._terms), default=0)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(k[0] + k[1], k[2] + k[3]) for k in self._terms}

    def evaluate(self, z1: complex, z2: complex) -> complex:
        w1, w2 = z1.conjugate(), z2.conjugate()
        total = 0j
        for (a1, a2, b1, b2), (re, im) in self._terms.items():
            total += complex(float(re), float(im)) * z1**a1 * z2**a2 * w1**b1 * w2**b2
        return total

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SpherePoly):
            try:
                other = SpherePoly.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self._terms)
        for k, (re, im) in other._terms.items():
            _cadd(out, k, re, im)
        return SpherePoly({k: v for k, v in out.items() if v[0] != 0 or v[1] != 0}, normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return SpherePoly({k: (-re, -im) for k, (re, im) in self._terms.items()}, normalized=True)

    def __sub__(self, other):
        if not isinstance(other, SpherePoly):
            try:
                other = SpherePoly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return SpherePoly.coerce(other) - self

    def scale(self, c) -> "SpherePoly":
        co = Coefficient.coerce(c)
        cr, ci = co.re, co.im
        if cr == 0 and ci == 0:
            return SpherePoly.zero()
        return SpherePoly(
            {k: (re * cr - im * ci, re * ci + im * cr) for k, (re, im) in self._terms.items()},
            normalized=True,
        )

    def __mul__(self, other):
        if not isinstance(other, SpherePoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if not self._terms or not other._terms:
            return SpherePoly.zero()
        acc: dict = {}
        for (a1, a2, b1, b2), (r1, i1) in self._terms.items():
            for (c1, c2, d1, d2), (r2, i2) in other._terms.items():
                re = r1 * r2 - i1 * i2
                im = r1 * i2 + i1 * r2
                key = (a1 + c1, a2 + c2, b1 + d1, b2 + d2)
                if key[1] and key[3]:
                    for nkey, c in _reduce_monomial(key):
                        _cadd(acc, nkey, re * c, im * c)
                else:
                    _cadd(acc, key, re, im)
        return SpherePoly({k: v for k, v in acc.items() if v[0] != 0 or v[1] != 0}, normalized=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(Coefficient(1) / Coefficient.coerce(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = SpherePoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "SpherePoly":
        return SpherePoly(
            {(b1, b2, a1, a2): (re, -im) for (a1, a2, b1, b2), (re, im) in self._terms.items()},
            normalized=True,
        )

    def real_part(self) -> "SpherePoly":
        return (self + self.conj()).scale(_HALF)

    def __eq__(self, other):
        if not isinstance(other, SpherePoly):
            try:
                other = SpherePoly.const(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"SpherePoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        names = ("z1", "z2", "zb1", "zb2")
        for k, c in self.items():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e
            )
            cs = str(c)
            if not c.is_real() and c.re != 0:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out

    # -- serialization ------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(k), "re": format_rational(c.re), "im": format_rational(c.im)}
            for k, c in self.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "SpherePoly":
        return cls.normalize(
            (tuple(d["exponents"]), Coefficient(d["re"], d["im"])) for d in data
        )


Z1 = SpherePoly.monomial(1, 0, 0, 0)
Z2 = SpherePoly.monomial(0, 1, 0, 0)
ZB1 = SpherePoly.monomial(0, 0, 1, 0)
ZB2 = SpherePoly.monomial(0, 0, 0, 1)


def _apply_linear(f: SpherePoly, rule) -> SpherePoly:
    acc: dict = {}
    for key, (re, im) in f.terms.items():
        for nkey, (cr, ci) in rule(key):
            nre = re * cr - im * ci
            nim = re * ci + im * cr
            for rkey, c in _reduce_monomial(nkey):
                _cadd(acc, rkey, nre * c, nim * c)
    return SpherePoly({k: v for k, v in acc.items() if v[0] != 0 or v[1] != 0}, normalized=True)


_ONE = mpq(1)
_ZERO = mpq(0)


def _z1_rule(key):
    # Z1 = zb2 d/dz1 - zb1 d/dz2
    a1, a2, b1, b2 = key
    out = []
    if a1:
        out.append(((a1 - 1, a2, b1, b2 + 1), (mpq(a1), _ZERO)))
    if a2:
        out.append(((a1, a2 - 1, b1 + 1, b2), (mpq(-a2), _ZERO)))
    return out


def _z1bar_rule(key):
    # Zb1 = z2 d/dzb1 - z1 d/dzb2
    a1, a2, b1, b2 = key
    out = []
    if b1:
        out.append(((a1, a2 + 1, b1 - 1, b2), (mpq(b1), _ZERO)))
    if b2:
        out.append(((a1 + 1, a2, b1, b2 - 1), (mpq(-b2), _ZERO)))
    return out


def _t_rule(key):
    # T = (i/2)(z.d/dz - zb.d/dzb)
    a1, a2, b1, b2 = key
    w = a1 + a2 - b1 - b2
    return [(key, (_ZERO, mpq(w, 2)))] if w else []


def apply_Z1(f: SpherePoly) -> SpherePoly:
    """``Z1 = zb2 d/dz1 - zb1 d/dz2``, dual to ``z2 dz1 - z1 dz2``."""
    return _apply_linear(f, _z1_rule)


def apply_Z1bar(f: SpherePoly) -> SpherePoly:
    return _apply_linear(f, _z1bar_rule)


def apply_T(f: SpherePoly) -> SpherePoly:
    """Reeb field of the standard contact form, ``(i/2)(z.d/dz - zb.d/dzb)``."""
    return _apply_linear(f, _t_rule)


# Background frame in the order (T, Z1, Zb1); dual coframe (theta, theta^1, theta^1bar).
FRAME_OPS = (apply_T, apply_Z1, apply_Z1bar)


# -- integration -------------------------------------------------------

EUCLIDEAN = "euclidean"
CONTACT = "contact"
# theta ^ d theta = 8 dV on the unit sphere
CONTACT_FACTOR = 8


def monomial_integral(key: Exps) -> mpq:
    """Coefficient of pi^2 in the Euclidean integral of a monomial over S^3."""
    a1, a2, b1, b2 = key
    if a1 != b1 or a2 != b2:
        return mpq(0)
    return mpq(2 * factorial(a1) * factorial(a2), factorial(a1 + a2 + 1))


def integrate(f: SpherePoly, measure: str = EUCLIDEAN) -> IntegralValue:
    if measure not in (EUCLIDEAN, CONTACT):
        raise ValueError(f"unknown measure {measure!r}")
    re = mpq(0)
    im = mpq(0)
    for key, (cr, ci) in f.terms.items():
        w = monomial_integral(key)
        if w:
            re += cr * w
            im += ci * w
    c = Coefficient(re, im)
    if measure == CONTACT:
        c = c * CONTACT_FACTOR
    return IntegralValue(c, 1)


def inner(f: SpherePoly, g: SpherePoly, measure: str = EUCLIDEAN) -> IntegralValue:
    """Hermitian L^2 pairing ``int f * conj(g)``."""
    return integrate(f * g.conj(), measure)


# -- harmonic modes ----------------------------------------------------


@dataclass(frozen=True, order=True)
class ModeSpec:
    """Bidegree (p, q) of a harmonic mode H_{p,q}."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("mode degrees must be non-negative")

    @property
    def lam(self) -> mpq:
        return mpq(1, 2) * (self.p * self.q + mpq(self.p + self.q, 2))

    @property
    def eigenvalue(self) -> mpq:
        """``pq + (p+q)/2``, the eigenvalue of ``-Delta_b`` on this mode for the standard structure."""
        return self.p * self.q + mpq(self.p + self.q, 2)

    @property
    def mu(self) -> mpq:
        return mpq(self.p - self.q, 2)

    @property
    def m(self) -> int:
        return self.p - self.q

    @property
    def dimension(self) -> int:
        return self.p + self.q + 1

    def __str__(self):
        return f"({self.p},{self.q})"


def _harmonic_weight_vector(p: int, q: int, k: int) -> dict:
    """Harmonic bidegree-(p,q) polynomial of torus weight ``a1 - b1 = k``.

    Monomials ``z1^(b+k) z2^(p-b-k) zb1^b zb2^(q-b)``; the Laplacian
    ``d2/dz1dzb1 + d2/dz2dzb2`` gives the recurrence
    ``c_b (b+k) b + c_{b-1} (p-b+1-k)(q-b+1) = 0``.
    """
    lo = max(0, -k)
    hi = min(q, p - k)
    coeffs = {lo: mpq(1)}
    for b in range(lo + 1, hi + 1):
        coeffs[b] = -coeffs[b - 1] * (p - b + 1 - k) * (q - b + 1) / ((b + k) * b)
    return {(b + k, p - b - k, b, q - b): (c, mpq(0)) for b, c in coeffs.items()}


def ambient_harmonic_basis(mode: ModeSpec) -> list[SpherePoly]:
    """Harmonic polynomials before restriction; terms keep their ambient exponents."""
    p, q = mode.p, mode.q
    return [
        SpherePoly(_harmonic_weight_vector(p, q, k), normalized=True) for k in range(p, -q - 1, -1)
    ]


def harmonic_basis(mode: ModeSpec | tuple[int, int]) -> list[SpherePoly]:
    """Orthogonal basis of H_{p,q} restricted to S^3, one vector per torus weight."""
    if not isinstance(mode, ModeSpec):
        mode = ModeSpec(*mode)
    return [SpherePoly(f.terms) for f in ambient_harmonic_basis(mode)]


def ambient_laplacian(f: SpherePoly) -> SpherePoly:
    """``d2/dz1dzb1 + d2/dz2dzb2`` applied to stored (ambient) exponents, no reduction."""
    acc: dict = {}
    for (a1, a2, b1, b2), (re, im) in f.terms.items():
        if a1 and b1:
            _cadd(acc, (a1 - 1, a2, b1 - 1, b2), re * a1 * b1, im * a1 * b1)
        if a2 and b2:
            _cadd(acc, (a1, a2 - 1, b1, b2 - 1), re * a2 * b2, im * a2 * b2)
    return SpherePoly({k: v for k, v in acc.items() if v[0] != 0 or v[1] != 0}, normalized=True)
