"""Homogeneous CR 3-manifolds with constant invariants.

Values are sympy expressions so that surds such as ``sqrt(1 + s^2)`` stay exact
for any rational parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp


class ModelError(ValueError):
    pass


class UnknownModel(ModelError):
    def __init__(self, name: str):
        super().__init__(f"unknown model {name!r}")


def exact(x) -> sp.Expr:
    """Parse ``"3/4"``, ints, Fractions or sympy numbers into an exact sympy number."""
    if isinstance(x, float):
        raise ModelError("floating-point parameters are not exact")
    try:
        v = sp.nsimplify(sp.sympify(str(x), rational=True))
    except (sp.SympifyError, TypeError) as exc:
        raise ModelError(f"invalid parameter {x!r}") from exc
    if not v.is_real or not v.is_number:
        raise ModelError(f"invalid parameter {x!r}")
    return v


@dataclass(frozen=True)
class HomogeneousModel:
    name: str
    params: dict
    R: sp.Expr
    A11: sp.Expr
    h11bar: sp.Expr = sp.Integer(1)
    notes: tuple = field(default=())

    @property
    def h_inv(self) -> sp.Expr:
        return 1 / self.h11bar

    @property
    def omega_T(self) -> sp.Expr:
        """``omega(T)`` for ``omega = c theta``: ``d omega = c i h theta^1^theta^1bar = R h theta^1^theta^1bar``."""
        return sp.simplify(self.R / sp.I)

    @property
    def torsion_norm2(self) -> sp.Expr:
        return sp.simplify(self.h_inv**2 * self.A11 * sp.conjugate(self.A11))

    @property
    def density(self) -> sp.Expr:
        return sp.simplify(self.R**2 - self.torsion_norm2)

    def cov(self, value, k: int, l: int, dirs: str) -> tuple[sp.Expr, int, int]:
        """Covariant derivative of a constant component; only ``omega(T)`` is nonzero."""
        for d in dirs:
            if d == "0":
                value = -k * self.omega_T * value - l * sp.conjugate(self.omega_T) * value
            elif d == "1":
                value, k = sp.Integer(0), k + 1
            elif d == "b":
                value, l = sp.Integer(0), l + 1
            else:
                raise ValueError(f"unknown direction {d!r}")
        return sp.simplify(value), k, l


def standard() -> HomogeneousModel:
    return HomogeneousModel("standard", {}, sp.Integer(1), sp.Integer(0))


def e2() -> HomogeneousModel:
    return HomogeneousModel("e2", {}, sp.Rational(1, 2), sp.I / 2)


def sl2r(t) -> HomogeneousModel:
    t = exact(t)
    if t == 0 or t == -1:
        raise ModelError("parameter excluded")
    den = 4 * sp.Abs(t) * (1 + t)
    notes = ("formula extension",) if t < 0 else ()
    return HomogeneousModel(
        "sl2r",
        {"t": t},
        sp.simplify(-(1 + 6 * t + t**2) / den),
        sp.simplify(sp.I * (1 - t) ** 2 / den),
        notes=notes,
    )


def rossi(s) -> HomogeneousModel:
    """Rossi sphere on the coframe ``(theta_hat, (1+s^2) theta^1 - s sqrt(1+s^2) theta^1bar)``."""
    s = exact(s)
    c = sp.sqrt(1 + s**2)
    h = 1 / (1 + s**2)
    # A_{1bar1bar} = h * A^1_1bar with A^1_1bar = 2 i s c
    a11 = sp.conjugate(h * 2 * sp.I * s * c)
    return HomogeneousModel("rossi", {"s": s}, sp.simplify(1 + 2 * s**2), sp.simplify(a11), sp.simplify(h))


MODELS = {"standard": standard, "e2": e2, "sl2r": sl2r, "rossi": rossi}
PARAMS = {"standard": (), "e2": (), "sl2r": ("t",), "rossi": ("s",)}


def get_model(name: str, **params) -> HomogeneousModel:
    if name not in MODELS:
        raise UnknownModel(name)
    need = PARAMS[name]
    missing = [p for p in need if params.get(p) is None]
    if missing:
        raise ModelError(f"model {name!r} needs parameter {missing[0]!r}")
    return MODELS[name](*(params[p] for p in need))


def catalog(rossi_s=("0", "3/4", "5/12"), sl2r_t=("1/4", "1", "4")) -> list[HomogeneousModel]:
    out = [standard(), e2()]
    out += [rossi(s) for s in rossi_s]
    out += [sl2r(t) for t in sl2r_t]
    return out


@dataclass(frozen=True)
class ModelReport:
    model: HomogeneousModel
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _zero(x) -> bool:
    return sp.simplify(x) == 0


def model_checks(m: HomogeneousModel) -> ModelReport:
    a = m.A11
    ab = sp.conjugate(a)
    r = m.R
    hi = m.h_inv
    a1, *_ = m.cov(a, 2, 0, "1")
    a1b, *_ = m.cov(a, 2, 0, "b")
    a0, *_ = m.cov(a, 2, 0, "0")
    a_1_1b, *_ = m.cov(a, 2, 0, "1b")
    a_1b_1, *_ = m.cov(a, 2, 0, "b1")
    ab_11, *_ = m.cov(ab, 0, 2, "11")
    a_bb, *_ = m.cov(a, 2, 0, "bb")
    # omega(T) forced by i A_{11,0} + 2R A_11 = 0 when A_11 != 0
    w = sp.Symbol("w")
    forced = sp.solve(sp.I * (-2 * w * a) + 2 * r * a, w) if not _zero(a) else []
    # R is constant so all its covariant derivatives vanish
    pe = -sp.I * a1b
    el_j = -sp.I / 2 * (a_1_1b - a_1b_1)
    el_theta = -sp.I * hi**2 * (ab_11 - a_bb)
    torsion_identity = sp.I * a0 + 2 * r * a - (a_1_1b - a_1b_1)
    checks = {
        "parallel_torsion": _zero(a1) and _zero(a1b),
        "pseudo_einstein": _zero(pe),
        "el_J": _zero(el_j),
        "el_theta": _zero(el_theta),
        "torsion_identity": _zero(torsion_identity),
        "omega_T": _zero(m.omega_T + sp.I * r) and all(_zero(w - m.omega_T) for w in forced),
        "r2_identity": _zero(-sp.I * r * a + a0 / 2),
    }
    return ModelReport(m, checks)


def rossi_to_bj_param(s) -> sp.Expr:
    """``t = (sqrt(1+s^2) - s)^2``."""
    s = exact(s)
    return sp.nsimplify(sp.expand((sp.sqrt(1 + s**2) - s) ** 2))


def format_exact(x) -> str:
    """Gaussian rationals in the ``"a + b i"`` style; other expressions via sympy."""
    from websterlab.scalars import Coefficient

    x = sp.nsimplify(sp.simplify(x))
    re, im = sp.re(x), sp.im(x)
    if re.is_Rational and im.is_Rational:
        return str(Coefficient(str(re), str(im)))
    return str(x)
