"""Energy ``E = int (R^2 - |A|^2) theta ^ d theta``, its residuals and first variations."""

from __future__ import annotations

from dataclasses import dataclass

from websterlab.jets import JetIntegral, JetOrderError, JetPoly, ORDER
from websterlab.scalars import Coefficient, IntegralValue
from websterlab.sphere import CONTACT
from websterlab.structures import (
    PHStructure,
    Tensor,
    deform_contact,
    deform_cr,
    sublaplacian,
)

I = Coefficient(0, 1)


def _integrate(density: JetPoly, st: PHStructure):
    """Integrate against ``theta ^ d theta`` of ``st``; a jet structure gives a :class:`JetIntegral`."""
    jet = JetIntegral.of(density * st.volume, CONTACT)
    if st.is_jet or density.is_jet():
        return jet
    return jet.extract_coefficient(0, 0)


def energy_density(st: PHStructure) -> JetPoly:
    return st.R * st.R - st.torsion_norm2()


def energy(st: PHStructure):
    return _integrate(energy_density(st), st)


def _gradients(st: PHStructure) -> tuple[Tensor, Tensor]:
    r = st.curvature
    a = st.torsion
    return r, a


def pe_residual(st: PHStructure) -> Tensor:
    """``R_{,1} - i A_{11,1bar}``."""
    r, a = _gradients(st)
    return r.cov("1") - a.cov("1b") * I


def el_j_residual(st: PHStructure) -> Tensor:
    """``R_{,11} - (i/2)(A_{11,1 1bar} - A_{11,1bar 1})``."""
    r, a = _gradients(st)
    return r.cov("1", "1") - (a.cov("1", "1b") - a.cov("1b", "1")) * Coefficient(0, "1/2")


def el_theta_residual(st: PHStructure) -> Tensor:
    """``-4 Delta_b R - i(A_{1bar1bar,11} - A_{11,1bar1bar})``."""
    r, a = _gradients(st)
    lap = st.tensor(sublaplacian(st.R, st))
    return lap * -4 - (a.conj().cov("1", "1") - a.cov("1b", "1b")) * I


def r2_residual(st: PHStructure) -> Tensor:
    """``R_{,11} - i R A_11 + (1/2) A_{11,0}``."""
    r, a = _gradients(st)
    return r.cov("1", "1") - a * r * I + a.cov("0") * Coefficient("1/2")


@dataclass(frozen=True)
class ResidualReport:
    pe: JetPoly
    el_J: JetPoly
    el_theta: JetPoly

    @property
    def is_critical(self) -> bool:
        return self.el_J.is_zero() and self.el_theta.is_zero()

    @property
    def is_pseudo_einstein(self) -> bool:
        return self.pe.is_zero()

    def failing(self) -> list[str]:
        return [name for name in ("pe", "el_J", "el_theta") if not getattr(self, name).is_zero()]


def residuals(st: PHStructure) -> ResidualReport:
    return ResidualReport(
        pe=pe_residual(st).value,
        el_J=el_j_residual(st).value,
        el_theta=el_theta_residual(st).scalar(),
    )


def first_variation_J_density(st: PHStructure, e11) -> JetPoly:
    r, a = _gradients(st)
    e = st.tensor(e11, 2, 0)
    grad = r.cov("1b", "1b") * Coefficient(0, 2) - a.conj() * r * 2 + a.conj().cov("0") * I
    term = (grad * e).scalar()
    return term + term.conj()


def first_variation_J(st: PHStructure, e11):
    """``int (2i R_{,1bar1bar} - 2R A_{1bar1bar} + i A_{1bar1bar,0}) E_11 + conjugate``."""
    return _integrate(first_variation_J_density(st, e11), st)


def first_variation_theta_density(st: PHStructure, h) -> JetPoly:
    _, a = _gradients(st)
    lap = sublaplacian(st.R, st)
    torsion = (a.conj().cov("1", "1") - a.cov("1b", "1b")).scalar()
    return (lap * -8 - torsion * Coefficient(0, 2)) * JetPoly.lift(h)


def first_variation_theta(st: PHStructure, h):
    """``int {-8 Delta_b R - 2i(A_{1bar1bar,11} - A_{11,1bar1bar})} h``."""
    return _integrate(first_variation_theta_density(st, h), st)


def jet_structure(st: PHStructure, *, contact=None, cr=None, order: int = ORDER) -> PHStructure:
    """Deform by ``cr`` in the second parameter, then by ``contact`` in the first.

    With only one deformation it uses the first parameter.
    """
    if order > ORDER:
        raise JetOrderError()
    out = st
    if cr is not None:
        out = deform_cr(out, cr, order=order, param=1 if contact is not None else 0)
    if contact is not None:
        out = deform_contact(out, contact, order=order, param=0)
    return out


def jet_energy(st: PHStructure, *, contact=None, cr=None, order: int = ORDER) -> JetIntegral:
    """Energy along the deformation as a jet; coefficients are Taylor coefficients."""
    d = jet_structure(st, contact=contact, cr=cr, order=order)
    out = energy(d)
    if isinstance(out, IntegralValue):
        return JetIntegral({(0, 0): out})
    return out
