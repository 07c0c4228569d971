"""JSON encodings of fields, jets and solved structures.

A scalar field that is constant is written as its exact string (``"17/8"``,
``"15/8 i"``); otherwise it is the term list of :meth:`SpherePoly.to_json`.
"""

from __future__ import annotations

from websterlab.jets import JetPoly
from websterlab.sphere import SpherePoly


def field_to_json(f, float_mode: bool = False):
    if isinstance(f, JetPoly):
        if not f.is_jet():
            return field_to_json(f.base, float_mode)
        return jet_to_json(f, float_mode)
    f = SpherePoly.coerce(f)
    if f.is_constant():
        c = f.constant_value()
        if float_mode:
            return float(c.re) if c.is_real() else [float(c.re), float(c.im)]
        return str(c)
    return f.to_json()


def jet_to_json(j: JetPoly, float_mode: bool = False) -> dict:
    return {f"{d1},{d2}": field_to_json(v, float_mode) for (d1, d2), v in sorted(j.coeffs.items())}


def field_from_json(data) -> SpherePoly:
    from websterlab.scalars import Coefficient

    if isinstance(data, str):
        return SpherePoly.const(Coefficient.parse(data))
    return SpherePoly.from_json(data)


def structure_to_json(st, float_mode: bool = False) -> dict:
    from websterlab.structures import identity_residuals

    def enc(x):
        return field_to_json(x, float_mode)

    out = {
        "h11bar": enc(st.h11bar),
        "omega11": {"c_theta": enc(st.omega.c_theta), "c_1": enc(st.omega.c_1), "c_1bar": enc(st.omega.c_1bar)},
        "A11": enc(st.A11),
        "R": enc(st.R),
        "residual_report": identity_residuals(st),
    }
    if st.params.get("approximate"):
        out["approximate"] = True
    return out
