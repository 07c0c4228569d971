"""Second variations of the energy at critical points, closed-form mode spectra and scans.

Every quadratic form is evaluated as written and can be compared against the
jet route, where ``d^2 E = 2 * (e^2 Taylor coefficient)`` along the deformation
path and the mixed derivative is the plain ``e1 e2`` coefficient.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from websterlab.jets import JetPoly
from websterlab.scalars import Coefficient, IntegralValue
from websterlab.sphere import CONTACT, ModeSpec, SpherePoly, harmonic_basis, integrate
from websterlab.structures import PHStructure, StructureError, deform_cr, standard_structure, sublaplacian
from websterlab.variational import _integrate, jet_energy, residuals

I = Coefficient(0, 1)


class NonCriticalError(StructureError):
    def __init__(self):
        super().__init__("second variation undefined at non-critical point")


def require_critical(st: PHStructure) -> None:
    if st.is_jet or not residuals(st).is_critical:
        raise NonCriticalError()


# -- theta direction ---------------------------------------------------


def hess_theta_density(st: PHStructure, h) -> JetPoly:
    t = st.tensor(h)
    r, a = st.curvature, st.torsion
    h1, h1b = t.cov("1"), t.cov("1b")
    grad2 = (h1 * h1b) * 2
    lap = st.tensor(sublaplacian(h, st))
    h11 = t.cov("1", "1")
    out = (
        r * grad2 * -16
        + a.conj() * h1 * h1 * Coefficient(0, 8)
        - a * h1b * h1b * Coefficient(0, 8)
        + lap * lap * 32
        - h11 * h11.conj() * 8
    )
    return out.scalar()


def hess_theta(st: PHStructure, h) -> IntegralValue:
    """``int -16R|grad_b h|^2 + 8i A_{1bar1bar} h_1^2 - 8i A_11 h_1bar^2 + 32 (Delta_b h)^2 - 8|h_11|^2``.

    ``|grad_b h|^2 = 2 h^{1 1bar} h_1 h_1bar`` so that it integrates to ``-int h Delta_b h``.
    """
    require_critical(st)
    return _integrate(hess_theta_density(st, h), st)


# -- J direction -------------------------------------------------------


def hess_J_raw_density(st: PHStructure, e11, as_printed: bool = False) -> JetPoly:
    """Density of the unreduced second variation in ``J``.

    The leading ``(delta R)_{,1bar1bar}`` term carries the ``2i`` of the first
    variation; ``as_printed=True`` drops it, which makes that term integrate to zero.
    """
    lead = Coefficient(1) if as_printed else Coefficient(0, 2)
    e = st.tensor(e11, 2, 0)
    eb = e.conj()
    r, a = st.curvature, st.torsion
    ab = a.conj()
    inner = eb.cov("1", "1") * -I + e.cov("1b", "1b") * I - ab * e - a * eb
    bracket = (
        inner.cov("1b", "1b") * lead
        - (e.cov("1b", "1b") - ab * e) * ab * Coefficient(0, 2)
        + (eb.cov("1", "1") - a * eb) * ab * Coefficient(0, 2)
        + r * eb.cov("0") * Coefficient(0, 2)
        + eb.cov("0", "0")
        - ab * (ab * e + a * eb) * 2
    )
    term = (bracket * e).scalar()
    return term + term.conj()


def hess_J_raw(st: PHStructure, e11, as_printed: bool = False) -> IntegralValue:
    """Full second variation in ``J`` before any slice reduction.

    Variations of the connection form are not included, so off the standard
    sphere this can differ from :func:`hess_J_gradient`.
    """
    require_critical(st)
    return _integrate(hess_J_raw_density(st, e11, as_printed), st)


def hess_J_density(st: PHStructure, e11) -> JetPoly:
    e = st.tensor(e11, 2, 0)
    eb = e.conj()
    r, a = st.curvature, st.torsion
    ab = a.conj()
    e0, e1 = e.cov("0"), e.cov("1")
    eb1 = eb.cov("1")
    sym = (
        e0 * e0.conj() * -2
        - r * eb1 * eb1.conj() * 4
        + r * e1 * e1.conj() * 4
        + (r * r * 8 - a * ab * 4) * e * eb
    ).scalar()
    e1b = e.cov("1b")
    part = (
        (e1b * e1b * Coefficient(2, 2) - e1 * eb1 * Coefficient(0, 2) + e * e * ab * Coefficient(-2, 2)) * ab
    ).scalar()
    return sym + part + part.conj()


def hess_J_gradient(st: PHStructure, e11) -> IntegralValue:
    """Second variation in ``J`` by differentiating the first-variation gradient along the jet.

    ``d^2 E = int d(2i R_{,1bar1bar} - 2R A_{1bar1bar} + i A_{1bar1bar,0}) E_11 + conjugate``
    with every covariant derivative taken on the deformed structure.
    """
    require_critical(st)
    d = deform_cr(st, e11)
    r, a = d.curvature, d.torsion
    grad = r.cov("1b", "1b") * Coefficient(0, 2) - a.conj() * r * 2 + a.conj().cov("0") * I
    term = (st.tensor(grad.value[1, 0], 0, 2) * st.tensor(e11, 2, 0)).scalar()
    return _integrate(term + term.conj(), st)


def hess_J(st: PHStructure, e11) -> IntegralValue:
    """Slice-reduced second variation in ``J``, evaluated as written."""
    require_critical(st)
    return _integrate(hess_J_density(st, e11), st)


def slice_residual(st: PHStructure, e11) -> JetPoly:
    """``(i E_{11,1bar1bar} - A_11 E_{1bar1bar}) - (-i E_{1bar1bar,11} - A_{1bar1bar} E_11)``."""
    e = st.tensor(e11, 2, 0)
    eb = e.conj()
    a = st.torsion
    lhs = e.cov("1b", "1b") * I - a * eb
    rhs = eb.cov("1", "1") * -I - a.conj() * e
    return (lhs - rhs).value


def reduction_identity_sides(st: PHStructure, e11) -> tuple[IntegralValue, IntegralValue]:
    """Both sides of ``int 2i R E_{1bar1bar,0} E_11 = int 4R^2|E|^2 - 2R|E_{1bar1bar,1}|^2 + 2R|E_{11,1}|^2``."""
    e = st.tensor(e11, 2, 0)
    eb = e.conj()
    r = st.curvature
    lhs = (r * eb.cov("0") * e * Coefficient(0, 2)).scalar()
    e1, eb1 = e.cov("1"), eb.cov("1")
    rhs = (r * r * e * eb * 4 - r * eb1 * eb1.conj() * 2 + r * e1 * e1.conj() * 2).scalar()
    return _integrate(lhs, st), _integrate(rhs, st)


# -- mixed -------------------------------------------------------------


def hess_mixed_density(st: PHStructure, h, e11) -> JetPoly:
    t = st.tensor(h)
    e = st.tensor(e11, 2, 0)
    ab = st.torsion.conj()
    lap = st.tensor(sublaplacian(h, st))
    bracket = (
        (lap * 6 - t.cov("0") * Coefficient(0, 2)) * ab
        - lap.cov("1b", "1b") * Coefficient(0, 8)
        + t.cov("1b", "1b", "0") * 2
    )
    term = (bracket * e).scalar()
    return term + term.conj()


def hess_mixed(st: PHStructure, h, e11) -> IntegralValue:
    """``int {(6 Delta_b h - 2i h_0) A_{1bar1bar} - 8i (Delta_b h)_{,1bar1bar} + 2 h_{,1bar1bar0}} E_11 + conjugate``."""
    require_critical(st)
    return _integrate(hess_mixed_density(st, h, e11), st)


# -- jet values --------------------------------------------------------


def jet_second_theta(st: PHStructure, h) -> IntegralValue:
    return jet_energy(st, contact=h).extract_coefficient(2, 0) * 2


def jet_second_J(st: PHStructure, e11) -> IntegralValue:
    return jet_energy(st, cr=e11).extract_coefficient(2, 0) * 2


def jet_mixed(st: PHStructure, h, e11) -> IntegralValue:
    return jet_energy(st, contact=h, cr=e11).extract_coefficient(1, 1)


# -- closed forms and spectra ------------------------------------------


def closed_form_theta(mode: ModeSpec) -> Fraction:
    """``(60/4) L^2 - (12/4)(p-q)^2 - (24/2) L`` with ``L = pq + (p+q)/2``."""
    lam = Fraction(mode.p * mode.q) + Fraction(mode.p + mode.q, 2)
    return Fraction(60, 4) * lam**2 - Fraction(12, 4) * (mode.p - mode.q) ** 2 - Fraction(24, 2) * lam


def closed_form_theta_eigen(mode: ModeSpec) -> Fraction:
    """Same reduction with the sublaplacian eigenvalue of this engine, ``-Delta_b f = (pq + (p+q)/2) f``."""
    lam = Fraction(mode.p * mode.q) + Fraction(mode.p + mode.q, 2)
    return 60 * lam**2 - 3 * (mode.p - mode.q) ** 2 - 24 * lam


def closed_form_J(mode: ModeSpec) -> Fraction:
    m = mode.m
    return Fraction(-m * (m + 4), 2)


def representative(mode: ModeSpec) -> SpherePoly:
    """Basis element of top torus weight; ``int f^2 = 0`` unless ``p = q = 0``."""
    return harmonic_basis(mode)[0]


def _sign(x) -> str:
    return "+" if x > 0 else "-" if x < 0 else "0"


@dataclass(frozen=True)
class SpectrumEntry:
    mode: ModeSpec
    variation_kind: str
    closed_form: Fraction
    quad_form_value: IntegralValue
    jet_value: IntegralValue
    norm: IntegralValue
    raw_value: IntegralValue | None = None
    slice_zero: bool | None = None

    @property
    def sign(self) -> str:
        return _sign(self.closed_form)

    @property
    def true_sign(self) -> str:
        return self.jet_value.sign()

    @property
    def jet_match(self) -> bool:
        return self.quad_form_value == self.jet_value

    @property
    def closed_form_match(self) -> bool:
        return self.quad_form_value == self.norm * self.closed_form

    @property
    def applicable(self) -> bool:
        """Whether the closed form is expected to hold for this mode."""
        if self.variation_kind == "J":
            return bool(self.slice_zero)
        return True

    @property
    def observed_coefficient(self) -> Coefficient:
        return self.jet_value.ratio(self.norm) if not self.jet_value.is_zero() else Coefficient(0)


def spectrum(mode: ModeSpec, kind: str) -> SpectrumEntry:
    st = standard_structure()
    f = representative(mode)
    norm = integrate(f * f.conj(), CONTACT)
    if kind == "theta":
        h = f + f.conj()
        return SpectrumEntry(mode, kind, closed_form_theta(mode), hess_theta(st, h), jet_second_theta(st, h), norm)
    if kind == "J":
        return SpectrumEntry(
            mode,
            kind,
            closed_form_J(mode),
            hess_J(st, f),
            jet_second_J(st, f),
            norm,
            raw_value=hess_J_raw(st, f),
            slice_zero=slice_residual(st, f).is_zero(),
        )
    raise ValueError(f"unknown variation kind {kind!r}")


def scan_modes(max_degree: int, kinds=("theta", "J")) -> list[tuple[ModeSpec, str]]:
    out = []
    for d in range(max_degree + 1):
        for p in range(d + 1):
            for kind in kinds:
                out.append((ModeSpec(p, d - p), kind))
    return out


def _spectrum_task(args):
    return spectrum(*args)


def thread_cap() -> int:
    env = os.environ.get("WEBSTERLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def scan(max_degree: int, kinds=("theta", "J"), workers: int | None = None) -> list[SpectrumEntry]:
    """All modes with ``p + q <= max_degree`` ordered by ``(p+q, p)``, theta before J."""
    tasks = scan_modes(max_degree, kinds)
    workers = min(workers or thread_cap(), len(tasks))
    if workers <= 1:
        return [_spectrum_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_spectrum_task, tasks))
