"""Command line interface: ``affsurf <command> ...``.

Exit codes: 0 ok, 1 internal error or failed verification, 2 parse error,
3 torsion free, 4 not symmetric, 5 not a homogeneous model, 6 a second
square root would be needed.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import catalog as cat
from .classify import classify
from .connection import (IDX, SAMPLE_GRID, Kind, cov_deriv_ricci,
                         cov_deriv_torsion, curvature_of,
                         lie_derivative_of_connection, ricci_of, torsion_of)
from .connfile import read, serialize
from .errors import AffsurfError, ExprSyntaxError
from .expr import lower_exact, lower_numeric, parse
from .gauge import Flip, GaugeLinear, GaugeShear, apply_linear
from .jets import Jet2
from .scalars import RatFn

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "affsurf report",
    "type": "object",
    "required": ["kind", "backend"],
    "properties": {
        "kind": {"enum": ["A", "B", "general"]},
        "backend": {"enum": ["exact", "numeric"]},
        "tensors": {
            "type": "object",
            "properties": {
                "T": {"$ref": "#/definitions/vector"},
                "R": {"type": "object", "additionalProperties": {"$ref": "#/definitions/scalar"}},
                "rho": {"$ref": "#/definitions/matrix"},
                "nabla_rho": {"type": "object", "additionalProperties": {"$ref": "#/definitions/scalar"}},
                "nabla_T": {"$ref": "#/definitions/matrix"},
                "tilde": {
                    "type": "object",
                    "required": ["T", "rho", "nabla_T"],
                    "properties": {
                        "T": {"$ref": "#/definitions/vector"},
                        "rho": {"$ref": "#/definitions/matrix"},
                        "nabla_T": {"$ref": "#/definitions/matrix"},
                    },
                },
                "points": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["at", "T", "rho", "nabla_rho", "nabla_T"],
                        "properties": {
                            "at": {"type": "array", "items": {"type": "number"},
                                   "minItems": 2, "maxItems": 2},
                        },
                    },
                },
            },
        },
        "classification": {
            "type": "object",
            "required": ["theorem", "family", "params", "signature", "witness"],
            "properties": {
                "theorem": {"enum": ["Thm2", "Thm4", "Thm5"]},
                "family": {"type": "integer", "minimum": 1, "maximum": 9},
                "params": {"type": "object", "additionalProperties": {"type": "string"}},
                "signature": {
                    "type": "object",
                    "required": ["rank", "class"],
                    "properties": {
                        "rank": {"enum": [0, 1, 2]},
                        "class": {"enum": ["zero", "positive-semidefinite", "negative-semidefinite",
                                           "positive-definite", "negative-definite", "indefinite"]},
                    },
                },
                "witness": {"type": ["array", "null"], "items": {"type": "object",
                                                                  "required": ["type"]}},
                "notes": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
    "definitions": {
        "scalar": {"type": ["string", "number"]},
        "vector": {"type": "array", "items": {"$ref": "#/definitions/scalar"},
                   "minItems": 2, "maxItems": 2},
        "matrix": {"type": "array", "minItems": 2, "maxItems": 2,
                   "items": {"$ref": "#/definitions/vector"}},
    },
}

VERIFY_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["theorem", "family", "checks", "status"],
        "properties": {
            "theorem": {"type": "string"},
            "family": {"type": ["integer", "string"]},
            "checks": {"type": "array", "items": {
                "type": "object", "required": ["name", "status"],
                "properties": {"status": {"enum": ["pass", "fail"]}}}},
            "status": {"enum": ["pass", "fail"]},
        },
    },
}


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _s(v):
    if isinstance(v, Jet2):
        return v.value
    return str(v)


def _coeff(v, term):
    text = str(v)
    if text == "1":
        return term
    if text == "-1":
        return "-" + term
    if any(op in text.lstrip("-") for op in "+-") or "/" in text:
        text = f"({text})"
    return f"{text} {term}"


def format_ricci(rho):
    """``v dx2⊗dx2`` style rendering of a Ricci tensor."""
    terms = []
    for j in IDX:
        for k in IDX:
            v = rho[(j, k)]
            if isinstance(v, RatFn) and v.is_zero():
                continue
            terms.append(_coeff(v, f"dx{j}⊗dx{k}"))
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def format_torsion(t):
    parts = []
    for k, v in ((1, t.t1), (2, t.t2)):
        if isinstance(v, RatFn) and v.is_zero():
            continue
        parts.append(_coeff(v, f"∂x{k}"))
    if not parts:
        return "0"
    return "(dx1∧dx2)⊗(" + " + ".join(parts).replace("+ -", "- ") + ")"


def exact_tensors(conn):
    t = torsion_of(conn)
    R = curvature_of(conn)
    rho = ricci_of(conn, curvature=R)
    nrho = cov_deriv_ricci(conn)
    nT = cov_deriv_torsion(conn)
    out = {
        "T": [str(t.t1), str(t.t2)],
        "R": {f"{i}{j}{k}{l}": str(v) for (i, j, k, l), v in R.items() if not v.is_zero()},
        "rho": [[str(v) for v in row] for row in rho.matrix()],
        "nabla_rho": {f"{j}{k};{i}": str(v) for (j, k, i), v in nrho.items() if not v.is_zero()},
        "nabla_T": [[str(v) for v in row] for row in nT.matrix()],
    }
    text = [
        f"T = {format_torsion(t)}",
        f"  T^1 = {t.t1}",
        f"  T^2 = {t.t2}",
        "R (nonzero R_ijk^l):" if out["R"] else "R = 0",
    ]
    text += [f"  R_{k[:3]}^{k[3]} = {v}" for k, v in out["R"].items()]
    text.append(f"rho = {format_ricci(rho)}")
    text += [f"  rho_{j}{k} = {rho[(j, k)]}" for j in IDX for k in IDX]
    text.append("nabla rho = 0" if nrho.is_zero() else "nabla rho (nonzero rho_jk;i):")
    text += [f"  rho_{k} = {v}" for k, v in out["nabla_rho"].items()]
    text.append("nabla T (row k = component, column i = direction):")
    text += [f"  T^{k}_;{i} = {nT[(k, i)]}" for k in IDX for i in IDX]
    if conn.kind is Kind.TYPE_B:
        one = RatFn.const(1)
        at1 = lambda v: v.subs({"x1": one})      # noqa: E731
        tt = [at1(t.t1), at1(t.t2)]
        rt = rho.at_x1_equal_1()
        nt = nT.at_x1_equal_1()
        out["tilde"] = {"T": [str(v) for v in tt],
                        "rho": [[str(v) for v in row] for row in rt.matrix()],
                        "nabla_T": [[str(v) for v in row] for row in nt.matrix()]}
        text.append("values at x1 = 1:")
        text.append(f"  T~ = ({tt[0]}, {tt[1]})")
        text.append(f"  rho~ = {format_ricci(rt)}")
        text.append("  nabla T~ = " + str(out["tilde"]["nabla_T"]))
    return out, text


def numeric_tensors(conn, points=SAMPLE_GRID):
    pts = []
    text = [f"sample grid: {len(points)} points"]
    for p in points:
        t = torsion_of(conn, at=p)
        rho = ricci_of(conn, at=p)
        nrho = cov_deriv_ricci(conn, at=p)
        nT = cov_deriv_torsion(conn, at=p)
        residual = max(abs(v) for v in nrho.values().values())
        pts.append({
            "at": list(p),
            "T": [t.t1.value, t.t2.value],
            "rho": [[v.value for v in row] for row in rho.matrix()],
            "nabla_rho": {f"{j}{k};{i}": v for (j, k, i), v in nrho.values().items()},
            "nabla_T": [[v.value for v in row] for row in nT.matrix()],
        })
        text.append(f"at {p}: T = ({t.t1.value:.10g}, {t.t2.value:.10g})  "
                    f"rho = {[[round(v.value, 12) for v in row] for row in rho.matrix()]}  "
                    f"max|nabla rho| = {residual:.3e}  "
                    f"nabla T = {[[round(v.value, 12) for v in row] for row in nT.matrix()]}")
    return {"points": pts}, text


def _kind_name(conn):
    return {Kind.TYPE_A: "A", Kind.TYPE_B: "B", Kind.GENERAL: "general"}[conn.kind]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _parse_bindings(text):
    out = {}
    if not text:
        return out
    for item in text.split(","):
        name, eq, value = item.partition("=")
        if not eq:
            raise ExprSyntaxError(f"expected name=value, got {item!r}")
        out[name.strip()] = Fraction(value.strip())
    return out


def cmd_tensors(args, out):
    conn = read(args.file, _parse_bindings(args.params))
    if conn.backend == "exact":
        data, text = exact_tensors(conn)
    else:
        data, text = numeric_tensors(conn)
    if args.json:
        json.dump({"kind": _kind_name(conn), "backend": conn.backend, "tensors": data}, out, indent=2)
        out.write("\n")
    else:
        out.write(f"kind: {_kind_name(conn)}  backend: {conn.backend}\n")
        out.write("\n".join(text) + "\n")
    return 0


def cmd_classify(args, out):
    conn = read(args.file, _parse_bindings(args.params))
    res = classify(conn)
    if args.json:
        json.dump({"kind": _kind_name(conn), "backend": conn.backend,
                   "classification": res.to_json()}, out, indent=2)
        out.write("\n")
        return 0
    out.write(res.summary() + "\n")
    out.write(f"signature: {res.signature}\n")
    for note in res.notes:
        out.write(f"note: {note}\n")
    if args.witness:
        if res.witness is None:
            out.write("witness: none\n")
        else:
            out.write("witness:\n")
            for i, step in enumerate(res.witness, 1):
                out.write(f"  {i}. {step.describe()}\n")
    return 0


def _numbers(text, n, what):
    items = [s.strip() for s in text.split(",")]
    if len(items) != n:
        raise ExprSyntaxError(f"{what} needs {n} comma-separated numbers")
    try:
        return [Fraction(s) for s in items]
    except ValueError:
        raise ExprSyntaxError(f"bad number in {what}: {text!r}") from None


def cmd_gauge(args, out):
    conn = read(args.file, _parse_bindings(args.params))
    if args.linear:
        a, b, c, d = _numbers(args.linear, 4, "--linear")
        g = GaugeLinear(((a, b), (c, d)))
    elif args.shear:
        a, b = _numbers(args.shear, 2, "--shear")
        g = GaugeShear(a, b)
    else:
        g = Flip()
    out.write(serialize(apply_linear(conn, g)))
    return 0


def cmd_catalog(args, out):
    spec = cat.spec_for(args.theorem, args.family)
    params = {}
    for k, v in _parse_bindings(args.params).items():
        params[k] = int(v) if k in spec.signs else v
    conn = cat.make(spec, params, mode="symbolic")
    title = f" ({spec.title})" if spec.title else ""
    out.write(f"# {spec.key}{title}\n")
    out.write(serialize(conn))
    return 0


def cmd_killing(args, out):
    conn = read(args.file, _parse_bindings(args.params))
    comps = [s.strip() for s in args.field.split(",")]
    if len(comps) != 2:
        raise ExprSyntaxError("--field needs two comma-separated expressions")
    asts = [parse(s, conn.params) for s in comps]
    exact = conn.backend == "exact" and not any(a.transcendental for a in asts)
    if exact:
        X = [lower_exact(a) for a in asts]
        lie = lie_derivative_of_connection(conn, X)
        bad = {k: str(v) for k, v in lie.items() if not v.is_zero()}
        detail = [f"  (L_X nabla)_{j}{k}^{l} = {v}" for (j, k, l), v in bad.items()]
    else:
        X = [lower_numeric(a) for a in asts]
        bad = {}
        for p in SAMPLE_GRID:
            for key, v in lie_derivative_of_connection(conn, X, at=p).items():
                if abs(v.value) >= cat.NUMERIC_TOL:
                    bad[key] = max(bad.get(key, 0.0), abs(v.value))
        detail = [f"  max |(L_X nabla)_{j}{k}^{l}| = {v:.3e}" for (j, k, l), v in bad.items()]
    verdict = "is" if not bad else "is not"
    out.write(f"X = ({comps[0]}) ∂x1 + ({comps[1]}) ∂x2 {verdict} an affine Killing field"
              f" ({'exact' if exact else f'{len(SAMPLE_GRID)} sample points'})\n")
    out.write("\n".join(detail) + ("\n" if detail else ""))
    return 0


def cmd_verify_paper(args, out):
    report = cat.verify_paper(args.golden)
    if args.json:
        json.dump(report.to_json(), out, indent=2)
        out.write("\n")
    else:
        out.write("\n".join(report.lines()) + "\n")
    return 0 if report.ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="affsurf", description="Affine surfaces with torsion.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="connection file")
        sp.add_argument("--params", help="parameter values, e.g. u=2,v=-1")
        return sp

    sp = with_file("tensors", "print T, R, rho, nabla rho and nabla T")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_tensors)

    sp = with_file("classify", "identify the normal form")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--witness", action="store_true", help="print the gauge chain")
    sp.set_defaults(func=cmd_classify)

    sp = with_file("gauge", "apply a gauge transformation; prints a connection file")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--linear", metavar="a,b,c,d", help="x = P y with P = [[a, b], [c, d]]")
    g.add_argument("--shear", metavar="a,b", help="y = (x1, (x2 - b x1)/a)")
    g.add_argument("--flip", action="store_true", help="x2 -> -x2")
    sp.set_defaults(func=cmd_gauge)

    sp = sub.add_parser("catalog", help="print a catalog family as a connection file")
    sp.add_argument("theorem", help="thm1, thm2, thm4, thm5, muv, muv-sym or example1")
    sp.add_argument("family", nargs="?", help="family number")
    sp.add_argument("--params", help="parameter values, e.g. omega=1,epsilon=-1,eta=2")
    sp.set_defaults(func=cmd_catalog)

    sp = with_file("killing", "test a candidate affine Killing field")
    sp.add_argument("--field", required=True, metavar="X1,X2")
    sp.set_defaults(func=cmd_killing)

    sp = sub.add_parser("verify-paper", help="recompute every catalog table")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--golden", help="alternative catalog file")
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except AffsurfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
