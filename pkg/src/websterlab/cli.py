"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when a check fails (the
failing identity is named on stderr), 2 for an unknown model or a bad parameter.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from websterlab import hessian as hz
from websterlab import lie_models as lm
from websterlab.jets import JetOrderError
from websterlab.scalars import Coefficient, IntegralValue, to_mpq
from websterlab.serialize import field_to_json, structure_to_json
from websterlab.sphere import ModeSpec, SpherePoly
from websterlab.structures import (
    PHStructure,
    StructureError,
    deform_contact,
    deform_cr,
    identity_residuals,
    rossi_structure,
    standard_structure,
)
from websterlab import variational as vz

SPHERE_MODELS = ("standard", "rossi")
BATTERY = [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (3, 0), (2, 2), (0, 3)]


class UsageError(Exception):
    """Maps to exit code 2."""


class CheckFailure(Exception):
    """Maps to exit code 1."""


# -- formatting --------------------------------------------------------


def _scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _num(x, float_mode: bool):
    if float_mode:
        if isinstance(x, IntegralValue):
            return float(x)
        if isinstance(x, Coefficient):
            return float(x.re) if x.is_real() else [float(x.re), float(x.im)]
        if isinstance(x, Fraction):
            return float(x)
    return _scalar(x)


def emit(rows, fmt: str, out, columns=None) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2, sort_keys=False)
        out.write("\n")
        return
    items = rows if isinstance(rows, list) else [rows]
    if fmt == "csv":
        cols = columns or list(items[0].keys())
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in items:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        out.write(buf.getvalue())
        return
    for r in items:
        for k, v in r.items():
            out.write(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")
        if len(items) > 1:
            out.write("\n")


# -- argument handling -------------------------------------------------


def parse_mode(text: str) -> ModeSpec:
    try:
        p, q = (int(x) for x in text.replace("(", "").replace(")", "").split(","))
        return ModeSpec(p, q)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid mode {text!r}; expected p,q") from exc


def build_structure(args) -> PHStructure:
    if args.model not in lm.MODELS:
        raise UsageError(f"unknown model {args.model!r}")
    if args.model not in SPHERE_MODELS:
        raise UsageError(f"model {args.model!r} has no realization on S^3 for this command")
    if args.model == "standard":
        return standard_structure()
    if args.s is None:
        raise UsageError("model 'rossi' needs --s")
    try:
        s = to_mpq(args.s)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid parameter s={args.s!r}") from exc
    try:
        return rossi_structure(s, float_mode=args.float)
    except StructureError as exc:
        raise UsageError(str(exc)) from exc


def lie_model(args) -> lm.HomogeneousModel:
    try:
        return lm.get_model(args.model, s=args.s, t=args.t)
    except lm.UnknownModel as exc:
        raise UsageError(f"unknown model {args.model!r}") from exc
    except lm.ModelError as exc:
        raise UsageError(str(exc)) from exc


def model_label(args) -> dict:
    out = {"model": args.model}
    if args.s is not None:
        out["s"] = args.s
    if args.t is not None:
        out["t"] = args.t
    return out


def _probe(mode: ModeSpec, kind: str) -> SpherePoly:
    f = hz.representative(mode)
    return f + f.conj() if kind == "theta" else f


def _close(a, b, args) -> bool:
    if not args.float:
        return a == b
    fa, fb = complex(a.coeff), complex(b.coeff)
    scale = max(abs(fa), abs(fb), 1.0)
    return abs(fa - fb) <= args.tolerance * scale


# -- verbs -------------------------------------------------------------


def cmd_derive(args, out) -> list[str]:
    if args.model in SPHERE_MODELS or args.model not in lm.MODELS:
        st = build_structure(args)
        report = {**model_label(args), **structure_to_json(st, args.float)}
        emit(report, args.format, out)
        return [k for k, ok in identity_residuals(st).items() if not ok]
    m = lie_model(args)
    emit(_model_row(m), args.format, out)
    return []


def cmd_energy(args, out) -> list[str]:
    st = build_structure(args)
    e = vz.energy(st)
    density = vz.energy_density(st)
    report = {**model_label(args), "energy": _num(e, args.float), "density": field_to_json(density, args.float)}
    emit(report, args.format, out)
    return []


def cmd_residuals(args, out) -> list[str]:
    if args.model in lm.MODELS and args.model not in SPHERE_MODELS:
        m = lie_model(args)
        rep = lm.model_checks(m)
        emit({**model_label(args), **rep.checks}, args.format, out)
        return [k for k, ok in rep.checks.items() if not ok]
    st = build_structure(args)
    rep = vz.residuals(st)
    r2 = vz.r2_residual(st).value
    report = {
        **model_label(args),
        "pe": field_to_json(rep.pe, args.float),
        "el_J": field_to_json(rep.el_J, args.float),
        "el_theta": field_to_json(rep.el_theta, args.float),
        "r2": field_to_json(r2, args.float),
        "is_critical": rep.is_critical,
    }
    emit(report, args.format, out)
    failing = rep.failing()
    if rep.is_critical and not r2.is_zero():
        failing.append("r2")
    return failing


def cmd_first_variation(args, out) -> list[str]:
    st = build_structure(args)
    modes = [parse_mode(m) for m in args.mode] if args.mode else [ModeSpec(*pq) for pq in BATTERY]
    kinds = ("theta", "J") if args.kind == "both" else (args.kind,)
    rows, failing = [], []
    for mode in modes:
        for kind in kinds:
            probe = _probe(mode, kind)
            if kind == "theta":
                value = vz.first_variation_theta(st, probe)
                jet = vz.jet_energy(st, contact=probe).extract_coefficient(1, 0)
            else:
                value = vz.first_variation_J(st, probe)
                jet = vz.jet_energy(st, cr=probe).extract_coefficient(1, 0)
            ok = _close(value, jet, args)
            if not ok:
                failing.append(f"first variation {kind} {mode} = jet order-1 coefficient")
            rows.append(
                {"p": mode.p, "q": mode.q, "kind": kind, "value": _num(value, args.float),
                 "jet": _num(jet, args.float), "match": ok}
            )
    emit(rows, args.format, out)
    return failing


def cmd_hessian(args, out) -> list[str]:
    st = build_structure(args)
    mode = parse_mode(args.mode or "1,1")
    try:
        if args.kind == "mixed":
            h = _probe(mode, "theta")
            e = _probe(parse_mode(args.mode_e or "0,2"), "J")
            value = hz.hess_mixed(st, h, e)
            jet = hz.jet_mixed(st, h, e)
            row = {"kind": "mixed", "mode": str(mode), "mode_e": args.mode_e or "0,2",
                   "quad_form": _num(value, args.float), "jet": _num(jet, args.float)}
            identity = "mixed second variation = e1 e2 jet coefficient"
        elif args.kind == "theta":
            h = _probe(mode, "theta")
            value = hz.hess_theta(st, h)
            jet = hz.jet_second_theta(st, h)
            row = {"kind": "theta", "mode": str(mode), "quad_form": _num(value, args.float),
                   "jet": _num(jet, args.float)}
            if args.model == "standard":
                row["closed_form"] = _scalar(hz.closed_form_theta(mode))
            identity = "theta second variation = 2 x e^2 jet coefficient"
        else:
            e = _probe(mode, "J")
            value = hz.hess_J_raw(st, e)
            jet = hz.jet_second_J(st, e)
            row = {"kind": "J", "mode": str(mode), "quad_form": _num(value, args.float),
                   "reduced": _num(hz.hess_J(st, e), args.float),
                   "gradient_route": _num(hz.hess_J_gradient(st, e), args.float),
                   "slice_zero": hz.slice_residual(st, e).is_zero(), "jet": _num(jet, args.float)}
            if args.model == "standard":
                row["closed_form"] = _scalar(hz.closed_form_J(mode))
            identity = "raw J second variation = 2 x e^2 jet coefficient"
    except hz.NonCriticalError as exc:
        raise CheckFailure(str(exc)) from exc
    ok = _close(value, jet, args)
    row["match"] = ok
    emit({**model_label(args), **row}, args.format, out)
    return [] if ok else [identity]


SCAN_COLUMNS = ["p", "q", "kind", "closed_form", "sign", "quad_form", "jet_match"]


def _scan_row(e: hz.SpectrumEntry, float_mode: bool) -> dict:
    return {
        "p": e.mode.p,
        "q": e.mode.q,
        "kind": e.variation_kind,
        "closed_form": _num(e.closed_form, float_mode),
        "sign": e.sign,
        "quad_form": _num(e.quad_form_value, float_mode),
        "jet_match": e.jet_match,
        "jet_value": _num(e.jet_value, float_mode),
        "closed_form_match": e.closed_form_match,
        "applicable": e.applicable,
        "observed_coefficient": _num(e.observed_coefficient, float_mode),
    }


def cmd_scan(args, out) -> list[str]:
    kinds = ("theta", "J") if args.kind == "both" else (args.kind,)
    workers = min(args.threads or hz.thread_cap(), hz.thread_cap())
    entries = hz.scan(args.max_degree, kinds, workers=workers)
    rows = [_scan_row(e, args.float) for e in entries]
    emit(rows, args.format, out, columns=SCAN_COLUMNS)
    if args.strict:
        return [f"jet agreement at {e.mode} {e.variation_kind}" for e in entries if e.applicable and not e.jet_match]
    return []


def cmd_jet_check(args, out) -> list[str]:
    st = build_structure(args)
    checks = dict(identity_residuals(st))
    rep = vz.residuals(st)
    checks["critical"] = rep.is_critical
    for mode in (ModeSpec(1, 1), ModeSpec(2, 1), ModeSpec(0, 2)):
        h, e = _probe(mode, "theta"), _probe(mode, "J")
        checks[f"gradient theta {mode}"] = _close(
            vz.first_variation_theta(st, h), vz.jet_energy(st, contact=h).extract_coefficient(1, 0), args
        )
        checks[f"gradient J {mode}"] = _close(
            vz.first_variation_J(st, e), vz.jet_energy(st, cr=e).extract_coefficient(1, 0), args
        )
        checks[f"hessian theta {mode}"] = _close(hz.hess_theta(st, h), hz.jet_second_theta(st, h), args)
        checks[f"hessian J gradient route {mode}"] = _close(hz.hess_J_gradient(st, e), hz.jet_second_J(st, e), args)
    dc = deform_contact(st, _probe(ModeSpec(1, 1), "theta"))
    dj = deform_cr(st, _probe(ModeSpec(0, 2), "J"))
    checks["contact jet structure identities"] = all(identity_residuals(dc).values())
    checks["cr jet structure identities"] = all(identity_residuals(dj).values())
    emit({**model_label(args), **checks}, args.format, out)
    return [k for k, ok in checks.items() if not ok]


def _model_row(m: lm.HomogeneousModel) -> dict:
    rep = lm.model_checks(m)
    row = {
        "name": m.name,
        "params": {k: lm.format_exact(v) for k, v in m.params.items()},
        "R": lm.format_exact(m.R),
        "A11": lm.format_exact(m.A11),
        "density": lm.format_exact(m.density),
        "checks_passed": rep.passed,
    }
    if m.notes:
        row["notes"] = list(m.notes)
    return row


def cmd_catalog(args, out) -> list[str]:
    models = lm.catalog()
    rows = [_model_row(m) for m in models]
    emit(rows, args.format, out, columns=["name", "params", "R", "A11", "density", "checks_passed"])
    return [f"catalog checks for {r['name']} {r['params']}" for r in rows if not r["checks_passed"]]


COMMANDS = {
    "derive": cmd_derive,
    "energy": cmd_energy,
    "residuals": cmd_residuals,
    "first-variation": cmd_first_variation,
    "hessian": cmd_hessian,
    "scan": cmd_scan,
    "jet-check": cmd_jet_check,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=("json", "csv", "pretty"), default=None)
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    fmt.add_argument("--pretty", dest="format", action="store_const", const="pretty")
    common.add_argument("--float", action="store_true", help="allow non-Pythagorean s; print floats")
    common.add_argument("--tolerance", type=float, default=1e-10, help="float-mode comparison tolerance")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", default="standard")
    model.add_argument("--s", help="Rossi parameter, e.g. 3/4")
    model.add_argument("--t", help="SL2(R) parameter, e.g. 1/4")

    p = argparse.ArgumentParser(prog="websterlab", description="Exact pseudohermitian invariants on S^3.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("derive", "energy", "residuals", "jet-check"):
        sub.add_parser(name, parents=[common, model])
    fv = sub.add_parser("first-variation", parents=[common, model])
    fv.add_argument("--kind", choices=("theta", "J", "both"), default="both")
    fv.add_argument("--mode", action="append", help="p,q (repeatable); default is a 10-mode battery")
    hs = sub.add_parser("hessian", parents=[common, model])
    hs.add_argument("--kind", choices=("theta", "J", "mixed"), default="theta")
    hs.add_argument("--mode", help="p,q of the probe (h = f + conj f, or E11 = f)")
    hs.add_argument("--mode-e", help="p,q of E11 for --kind mixed")
    sc = sub.add_parser("scan", parents=[common])
    sc.add_argument("--kind", choices=("theta", "J", "both"), default="both")
    sc.add_argument("--max-degree", type=int, default=4)
    sc.add_argument("--threads", type=int, default=None)
    sc.add_argument("--strict", action="store_true", help="fail when an applicable row disagrees with its jet")
    sub.add_parser("catalog", parents=[common])
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.format is None:
        args.format = "csv" if args.command == "scan" else "json"
    for name in ("s", "t", "model"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        failing = COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (CheckFailure, JetOrderError) as exc:
        err.write(f"check failed: {exc}\n")
        return 1
    if failing:
        for name in failing:
            err.write(f"check failed: {name}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
