"""Pseudohermitian structures on S^3: coframes, structure equations, covariant derivatives.

Everything is expressed in the background coframe ``(theta, theta^1, theta^1bar)``
with ``theta = i sum(z dzb - zb dz)`` and ``theta^1 = z2 dz1 - z1 dz2``, whose dual
frame ``(T, Z1, Zb1)`` acts through :data:`websterlab.sphere.FRAME_OPS`.  Field
components are :class:`~websterlab.jets.JetPoly`; a plain structure is a jet
with only a degree-(0,0) part.

Conventions (Lee):

* ``d theta = i h11bar theta^1 ^ theta^1bar``
* ``d theta^1 = theta^1 ^ omega + A^1_1bar theta ^ theta^1bar``, ``A^1_1bar = h^{1 1bar} A_1bar1bar``
* ``omega + conj(omega) = d log h11bar``
* ``d omega = R h11bar theta^1 ^ theta^1bar  (mod theta)``

Note that ``d theta = 2i theta^1 ^ theta^1bar`` for the background pair, so the
unitary coframe of the standard sphere is ``(theta, (1+i) theta^1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from websterlab.jets import JetOrderError, JetPoly, ORDER
from websterlab.scalars import Coefficient, to_mpq
from websterlab.sphere import FRAME_OPS, SpherePoly, Z1 as _z1, Z2 as _z2, ZB1 as _w1, ZB2 as _w2

I = Coefficient(0, 1)
PAIRS = ((0, 1), (0, 2), (1, 2))


class StructureError(ValueError):
    pass


def _jet(x) -> JetPoly:
    return JetPoly.lift(x)


# -- vectors and forms -------------------------------------------------


@dataclass(frozen=True)
class Vector:
    """Complex vector field ``c[0] T + c[1] Z1 + c[2] Zb1`` on the background frame."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(_jet(x) for x in self.c))

    def __call__(self, f) -> JetPoly:
        f = _jet(f)
        out = JetPoly.zero()
        for coeff, op in zip(self.c, FRAME_OPS):
            if not coeff.is_zero():
                out = out + coeff * f.map(op)
        return out

    def conj(self) -> "Vector":
        return Vector((self.c[0].conj(), self.c[2].conj(), self.c[1].conj()))

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(tuple(a + b for a, b in zip(self.c, other.c)))

    def scale(self, f) -> "Vector":
        f = _jet(f) if isinstance(f, (SpherePoly, JetPoly)) else f
        return Vector(tuple(a * f for a in self.c))


@dataclass(frozen=True)
class OneForm:
    """``c_theta theta + c_1 theta^1 + c_1bar theta^1bar`` on the background coframe."""

    c_theta: JetPoly
    c_1: JetPoly
    c_1bar: JetPoly

    def __post_init__(self):
        for name in ("c_theta", "c_1", "c_1bar"):
            object.__setattr__(self, name, _jet(getattr(self, name)))

    @property
    def c(self) -> tuple:
        return (self.c_theta, self.c_1, self.c_1bar)

    @classmethod
    def of(cls, *c) -> "OneForm":
        return cls(*c)

    def __call__(self, v: Vector) -> JetPoly:
        out = JetPoly.zero()
        for a, b in zip(self.c, v.c):
            if not a.is_zero() and not b.is_zero():
                out = out + a * b
        return out

    def conj(self) -> "OneForm":
        return OneForm(self.c_theta.conj(), self.c_1bar.conj(), self.c_1.conj())

    def is_real(self) -> bool:
        return self == self.conj()

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(*(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(*(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return OneForm(*(-a for a in self.c))

    def scale(self, f) -> "OneForm":
        return OneForm(*(a * f for a in self.c))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.c)

    def to_json(self) -> dict:
        from websterlab.serialize import field_to_json

        return {k: field_to_json(getattr(self, k)) for k in ("c_theta", "c_1", "c_1bar")}


@dataclass(frozen=True)
class TwoForm:
    """Components on ``theta^theta^1, theta^theta^1bar, theta^1^theta^1bar``."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(_jet(x) for x in self.c))

    def __call__(self, x: Vector, y: Vector) -> JetPoly:
        out = JetPoly.zero()
        for (p, q), w in zip(PAIRS, self.c):
            if w.is_zero():
                continue
            out = out + w * (x.c[p] * y.c[q] - x.c[q] * y.c[p])
        return out

    def __add__(self, other):
        return TwoForm(tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        return TwoForm(tuple(a - b for a, b in zip(self.c, other.c)))

    def scale(self, f) -> "TwoForm":
        return TwoForm(tuple(a * f for a in self.c))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.c)


def wedge(a: OneForm, b: OneForm) -> TwoForm:
    return TwoForm(tuple(a.c[p] * b.c[q] - a.c[q] * b.c[p] for p, q in PAIRS))


def wedge3(a: OneForm, w: TwoForm) -> JetPoly:
    """Coefficient of ``theta ^ theta^1 ^ theta^1bar`` in ``a ^ w``."""
    return a.c[0] * w.c[2] - a.c[1] * w.c[1] + a.c[2] * w.c[0]


def to_coordinates(a: OneForm) -> tuple[SpherePoly, SpherePoly, SpherePoly, SpherePoly]:
    """Coefficients of ``dz1, dz2, dzb1, dzb2`` for a form with plain (non-jet) components.

    Defined up to multiples of ``d|z|^2``, which vanishes on the sphere.
    """
    ct, c1, c1b = (x.base for x in a.c)
    i = I
    return (
        ct * _w1.scale(-i) + c1 * _z2,
        ct * _w2.scale(-i) - c1 * _z1,
        ct * _z1.scale(i) + c1b * _w2,
        ct * _z2.scale(i) - c1b * _w1,
    )


def dfun(f) -> OneForm:
    f = _jet(f)
    return OneForm(*(f.map(op) for op in FRAME_OPS))


# -- background structure constants -----------------------------------

_COORDS = (_z1, _z2, _w1, _w2)


def _bracket_on_coords(b: int, c: int) -> list[SpherePoly]:
    eb, ec = FRAME_OPS[b], FRAME_OPS[c]
    return [eb(ec(x)) - ec(eb(x)) for x in _COORDS]


def coframe_on_coords(v: Sequence[SpherePoly]) -> tuple[SpherePoly, SpherePoly, SpherePoly]:
    """Background coframe evaluated on a vector given by its action on z1, z2, zb1, zb2."""
    vz1, vz2, vw1, vw2 = v
    th = (_z1 * vw1 + _z2 * vw2 - _w1 * vz1 - _w2 * vz2).scale(I)
    t1 = _z2 * vz1 - _z1 * vz2
    t1b = _w2 * vw1 - _w1 * vw2
    return th, t1, t1b


@lru_cache(maxsize=1)
def background_structure_constants() -> tuple[TwoForm, TwoForm, TwoForm]:
    """``d`` of the background coframe, derived from coordinate brackets.

    ``d alpha(E_b, E_c) = -alpha([E_b, E_c])`` for the frame fields ``E``.
    """
    comps: list[list] = [[], [], []]
    for b, c in PAIRS:
        vals = coframe_on_coords(_bracket_on_coords(b, c))
        for a in range(3):
            v = vals[a]
            if not v.is_constant():
                raise AssertionError("background brackets are not constant")
            comps[a].append(-v)
    return tuple(TwoForm(tuple(cs)) for cs in comps)


def dform(a: OneForm) -> TwoForm:
    consts = background_structure_constants()
    out = [JetPoly.zero()] * 3
    for idx, fa in enumerate(a.c):
        if fa.is_zero():
            continue
        df = dfun(fa)
        # df ^ theta^idx
        for b in range(3):
            if b == idx or df.c[b].is_zero():
                continue
            p, q = (b, idx) if b < idx else (idx, b)
            sign = 1 if b < idx else -1
            k = PAIRS.index((p, q))
            out[k] = out[k] + df.c[b] * sign
        out = [o + fa * w for o, w in zip(out, consts[idx].c)]
    return TwoForm(tuple(out))


BACKGROUND_THETA = OneForm(1, 0, 0)
BACKGROUND_THETA1 = OneForm(0, 1, 0)
UNITARY_THETA1 = OneForm(0, Coefficient(1, 1), 0)


# -- 3x3 jet matrices --------------------------------------------------


def _det3(m) -> JetPoly:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _inv3(m):
    det = _det3(m)
    try:
        dinv = det.inverse()
    except (ValueError, ZeroDivisionError):
        raise StructureError("coframe is degenerate or has a non-constant determinant") from None
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != i]
            c = [x for x in range(3) if x != j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    return [[cof[j][i] * dinv for j in range(3)] for i in range(3)]


def reeb_field(theta: OneForm) -> Vector:
    """Unique ``T`` with ``theta(T) = 1`` and ``d theta(T, .) = 0``."""
    b01, b02, b12 = dform(theta).c
    k = Vector((b12, -b02, b01))
    norm = theta(k)
    try:
        return k.scale(norm.inverse())
    except (ValueError, ZeroDivisionError):
        raise StructureError("theta is not a contact form with invertible volume") from None


def coframe_from_frame(t: Vector, z1: Vector) -> tuple[OneForm, OneForm]:
    """Dual coframe ``(theta, theta^1)`` of the frame ``(T, Z1, Zb1)``."""
    frame = [t, z1, z1.conj()]
    # columns of F are frame vectors; rows of F^-1 are the dual forms
    f = [[frame[col].c[row] for col in range(3)] for row in range(3)]
    inv = _inv3(f)
    return OneForm(*inv[0]), OneForm(*inv[1])


# -- tensors -----------------------------------------------------------

DIRECTIONS = {"1": 1, "1b": 2, "0": 0}


class Tensor:
    """Scalar component of a tensor with ``k`` lower 1- and ``l`` lower 1bar-indices."""

    __slots__ = ("value", "k", "l", "structure")

    def __init__(self, value, k: int, l: int, structure: "PHStructure"):
        self.value = _jet(value)
        self.k = k
        self.l = l
        self.structure = structure

    @property
    def weight(self) -> tuple[int, int]:
        return (self.k, self.l)

    def _wrap(self, value, k, l) -> "Tensor":
        return Tensor(value, k, l, self.structure)

    def conj(self) -> "Tensor":
        return self._wrap(self.value.conj(), self.l, self.k)

    def cov(self, *dirs: str) -> "Tensor":
        """Successive covariant derivatives, e.g. ``t.cov("1b", "1b")`` = ``t_{,1bar 1bar}``."""
        t = self
        for d in dirs:
            t = covd(t, d, self.structure)
        return t

    def lower(self, k: int, l: int) -> "Tensor":
        """Contract balanced index pairs with ``h^{1 1bar}`` down to weight ``(k, l)``."""
        n = self.k - k
        if n < 0 or self.l - l != n:
            raise ValueError(f"cannot contract weight {self.weight} to {(k, l)}")
        v = self.value
        for _ in range(n):
            v = v * self.structure.h_inv
        return self._wrap(v, k, l)

    def scalar(self) -> JetPoly:
        if self.k != self.l:
            raise ValueError(f"weight {self.weight} is not a scalar")
        return self.lower(0, 0).value

    def _align(self, other: "Tensor") -> tuple["Tensor", "Tensor"]:
        k = min(self.k, other.k)
        l = min(self.l, other.l)
        if self.k - k != self.l - l or other.k - k != other.l - l:
            raise ValueError(f"incompatible weights {self.weight} and {other.weight}")
        return self.lower(k, l), other.lower(k, l)

    def __add__(self, other):
        if not isinstance(other, Tensor):
            if _jet(other).is_zero():
                return self
            other = self._wrap(other, 0, 0)
        a, b = self._align(other)
        return a._wrap(a.value + b.value, a.k, a.l)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.value, self.k, self.l)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Tensor) else -_jet(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return self._wrap(self.value * other.value, self.k + other.k, self.l + other.l)
        return self._wrap(self.value * other, self.k, self.l)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def abs2(self) -> JetPoly:
        return (self * self.conj()).scalar()

    def __repr__(self):
        return f"Tensor({self.value!r}, weight={self.weight})"


def covd(t: Tensor, direction: str, structure: "PHStructure") -> Tensor:
    """``X(v) - k omega(X) v - l conj(omega)(X) v`` for ``X`` in ``{Z1, Zb1, T}``."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    x = structure.frame[DIRECTIONS[direction]]
    val = x(t.value)
    if t.k:
        val = val - structure.omega(x) * t.value * t.k
    if t.l:
        val = val - structure.omega.conj()(x) * t.value * t.l
    k, l = t.k, t.l
    if direction == "1":
        k += 1
    elif direction == "1b":
        l += 1
    return Tensor(val, k, l, structure)


# -- solved structures -------------------------------------------------


@dataclass(frozen=True, eq=False)
class PHStructure:
    theta: OneForm
    theta1: OneForm
    frame: tuple  # (T, Z1, Zb1)
    h11bar: JetPoly
    h_inv: JetPoly
    omega: OneForm
    A11: JetPoly
    R: JetPoly
    volume: JetPoly  # theta ^ d theta relative to the standard one
    report: dict = field(default_factory=dict)
    label: str = ""
    params: dict = field(default_factory=dict)

    @property
    def is_jet(self) -> bool:
        return any(
            x.is_jet() for x in (self.h11bar, self.A11, self.R, self.volume, *self.theta.c, *self.theta1.c)
        )

    @property
    def T(self) -> Vector:
        return self.frame[0]

    @property
    def Z1(self) -> Vector:
        return self.frame[1]

    @property
    def Z1bar(self) -> Vector:
        return self.frame[2]

    def tensor(self, value, k: int = 0, l: int = 0) -> Tensor:
        return Tensor(value, k, l, self)

    @property
    def torsion(self) -> Tensor:
        return Tensor(self.A11, 2, 0, self)

    @property
    def curvature(self) -> Tensor:
        return Tensor(self.R, 0, 0, self)

    @property
    def A_up(self) -> JetPoly:
        """``A^1_1bar = h^{1 1bar} A_1bar1bar``."""
        return self.h_inv * self.A11.conj()

    def torsion_norm2(self) -> JetPoly:
        return self.torsion.abs2()

    def omega_of_T(self) -> JetPoly:
        return self.omega(self.T)

    def residuals_zero(self) -> bool:
        return all(identity_residuals(self).values())

    def at_order(self, d1: int, d2: int = 0) -> dict:
        return {
            "h11bar": self.h11bar[d1, d2],
            "A11": self.A11[d1, d2],
            "R": self.R[d1, d2],
        }


def solve_structure(theta: OneForm, theta1: OneForm, *, label: str = "", params: dict | None = None) -> PHStructure:
    """Derive ``(h11bar, omega, A11, R)`` from an admissible coframe."""
    if not theta.is_real():
        raise StructureError("theta must be a real form")
    theta1bar = theta1.conj()
    m = [list(theta.c), list(theta1.c), list(theta1bar.c)]
    inv = _inv3(m)
    frame = tuple(Vector(tuple(inv[r][col] for r in range(3))) for col in range(3))
    t, z1, z1b = frame

    def in_frame(w: TwoForm) -> tuple[JetPoly, JetPoly, JetPoly]:
        return w(t, z1), w(t, z1b), w(z1, z1b)

    dth = in_frame(dform(theta))
    if not (dth[0].is_zero() and dth[1].is_zero()):
        raise StructureError("coframe not adapted")
    h = dth[2] * (-I)
    if not h.is_real():
        raise StructureError("coframe not adapted")
    try:
        h0 = h.base_constant()
    except ValueError:
        raise StructureError("Levi form must have a constant base value") from None
    if h0.re <= 0:
        raise StructureError("not strictly pseudoconvex")
    h_inv = h.inverse()

    p01, p02, p12 = in_frame(dform(theta1))
    a = -p01
    c = p12
    dlogh = [z(h) * h_inv for z in frame]
    b = dlogh[1] - c.conj()
    omega = theta.scale(a) + theta1.scale(b) + theta1bar.scale(c)
    a_up = p02
    a11 = (h * a_up).conj()

    q01, q02, q12 = in_frame(dform(omega))
    r = q12 * h_inv

    vol = wedge3(theta, dform(theta)) * wedge3(BACKGROUND_THETA, dform(BACKGROUND_THETA)).inverse()

    structure_residual = dform(theta1) - wedge(theta1, omega) - wedge(theta, theta1bar).scale(a_up)
    report = {
        "structure_equation": structure_residual,
        "levi_reality": h - h.conj(),
        "normalization_theta": (a + a.conj()) - dlogh[0],
        "curvature_reality": r - r.conj(),
        "domega_theta_1": q01,
        "domega_theta_1bar": q02,
    }
    return PHStructure(
        theta=theta,
        theta1=theta1,
        frame=frame,
        h11bar=h,
        h_inv=h_inv,
        omega=omega,
        A11=a11,
        R=r,
        volume=vol,
        report=report,
        label=label,
        params=dict(params or {}),
    )


INFORMATIONAL = ("domega_theta_1", "domega_theta_1bar")


def identity_residuals(st: PHStructure) -> dict[str, bool]:
    """Exact-zero status of each solver identity; the ``d omega`` theta-parts are left out."""
    return {k: v.is_zero() for k, v in st.report.items() if k not in INFORMATIONAL}


def standard_structure() -> PHStructure:
    """Round sphere ``(theta_hat, (1+i)(z2 dz1 - z1 dz2))`` with ``h11bar = 1``."""
    return solve_structure(BACKGROUND_THETA, UNITARY_THETA1, label="standard")


def _exact_sqrt(q: mpq):
    from websterlab.jets import _rational_sqrt

    return _rational_sqrt(q)


def rossi_structure(s, *, float_mode: bool = False) -> PHStructure:
    """Rossi sphere ``theta_(s)^1 = (1+s^2) theta^1 - s sqrt(1+s^2) theta^1bar`` on the unitary ``theta^1``."""
    s = to_mpq(s)
    c = _exact_sqrt(1 + s * s)
    approximate = False
    if c is None:
        if not float_mode:
            raise StructureError("irrational Levi normalization")
        import math

        c = to_mpq(math.sqrt(float(1 + s * s)))
        approximate = True
    u = Coefficient(1, 1)
    theta1 = OneForm(0, u * (1 + s * s), u.conj() * (-s * c))
    params = {"s": s}
    if approximate:
        params["approximate"] = True
    return solve_structure(BACKGROUND_THETA, theta1, label="rossi", params=params)


# -- deformations ------------------------------------------------------


def _check_order(order: int) -> None:
    if order > ORDER or order < 0:
        raise JetOrderError()


def deform_contact(st: PHStructure, h, *, order: int = ORDER, param: int = 0) -> PHStructure:
    """Jet of the structure along ``theta_e = exp(2 e h) theta`` with ``J`` fixed.

    The adapted ``theta^1_e = exp(e h)(theta^1 - theta^1(T_e) theta_e)``.
    """
    _check_order(order)
    h = JetPoly.lift(h)
    if not h.is_real():
        raise StructureError("contact perturbation must be real")
    eps = JetPoly.param(param)
    factor = (JetPoly.lift(1) + eps * h * 2 + eps * eps * h * h * 2).truncate(order)
    # e^(e h) keeps h11bar fixed, so omega is in the gauge of the conformal-change formulas
    half = (JetPoly.lift(1) + eps * h + eps * eps * h * h * mpq(1, 2)).truncate(order)
    theta = st.theta.scale(factor)
    t = reeb_field(theta)
    theta1 = (st.theta1 - theta.scale(st.theta1(t))).scale(half)
    return solve_structure(theta, theta1, label=f"{st.label}+contact", params=st.params)


def deform_cr(st: PHStructure, e11, *, order: int = ORDER, param: int = 0) -> PHStructure:
    """Jet along ``Zb1(e) = Zb1 + i e E^1_1bar Z1`` with ``theta`` fixed.

    ``E^1_1bar = h^{1 1bar} conj(E11)``; the first-order change of ``J`` is ``2E``.
    """
    _check_order(order)
    e11 = JetPoly.lift(e11)
    eps = JetPoly.param(param)
    coeff = (eps * st.h_inv * e11 * (-I)).truncate(order)
    z1 = st.Z1 + st.Z1bar.scale(coeff)
    theta, theta1 = coframe_from_frame(st.T, z1)
    return solve_structure(theta, theta1, label=f"{st.label}+cr", params=st.params)


def sublaplacian(u, st: PHStructure) -> JetPoly:
    """``h^{1 1bar}(u_{,1 1bar} + u_{,1bar 1})``."""
    t = st.tensor(u)
    return (t.cov("1", "1b") + t.cov("1b", "1")).scalar()
