"""Normal-form families and the table verification engine.

Families and their expected tensors live in ``data/catalog.txt``.  Keys are
``thm1-5``, ``thm2-2``, ``thm4-6``, ``thm5-9``, ``muv``, ``muv-sym`` and
``example1``.
"""

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product

from .connection import (SAMPLE_GRID, TRIPLES, Kind, cov_deriv_ricci,
                         cov_deriv_torsion, is_affine_killing, ricci_of,
                         torsion_of)
from .connfile import build, parse_params
from .errors import ConnectionFileError, ConstraintViolation, RadicalObstruction
from .expr import evaluate, free_names, lower_exact, lower_numeric, parse
from .scalars import RadicalScalar, RatFn

_THEOREM_NAMES = {"thm1": "Thm1A", "thm2": "Thm2", "thm4": "Thm4", "thm5": "Thm5",
                  "muv": "Muv", "muv-sym": "Muv", "example1": "Example1"}
TABLE_THEOREMS = ("thm2", "thm4", "thm5")
NUMERIC_TOL = 1e-9
ENTRY_TOL = 1e-8

_OPS = {"==": lambda a, b: a == b, "!=": lambda a, b: a != b,
        "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
        ">": lambda a, b: a > b, ">=": lambda a, b: a >= b}
_CONSTRAINT = re.compile(r"^(.*?)\s*(==|!=|<=|>=|<|>)\s*(.*)$")


@dataclass(frozen=True)
class Constraint:
    text: str
    lhs: object
    op: str
    rhs: object
    names: frozenset

    def holds(self, env):
        return _OPS[self.op](evaluate(self.lhs, env), evaluate(self.rhs, env))


@dataclass
class FamilySpec:
    key: str
    kind: Kind
    backend: str = "exact"
    params: tuple = ()
    signs: tuple = ()
    constraints: list = field(default_factory=list)
    body: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    killing: list = field(default_factory=list)
    title: str = ""

    @property
    def group(self):
        return self.key.split("-")[0] if self.key.startswith("thm") else self.key

    @property
    def theorem(self):
        return _THEOREM_NAMES[self.group]

    @property
    def family(self):
        tail = self.key.rsplit("-", 1)[-1]
        return int(tail) if tail.isdigit() else None

    def gamma_asts(self):
        return {t: parse(src, self.params) for t, (src, _, _) in self.body.items()}


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def _default_text():
    return resources.files("affsurf").joinpath("data/catalog.txt").read_text(encoding="utf-8")


def load(path=None):
    """Parse a catalog file into ``{key: FamilySpec}`` (file order kept)."""
    if path is None:
        text = _default_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    specs = {}
    spec = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            spec = FamilySpec(line[1:-1].strip(), Kind.GENERAL)
            specs[spec.key] = spec
            continue
        if spec is None:
            raise ConnectionFileError("entry before the first [key] line", lineno, 1)
        _load_line(spec, line, lineno)
    return specs


def _load_line(spec, line, lineno):
    if line.startswith("Gamma"):
        m = re.match(r"^Gamma\s+([12])\s+([12])\s+([12])\s*=\s*(.*)$", line)
        if not m:
            raise ConnectionFileError(f"cannot parse {line!r}", lineno, 1)
        spec.body[tuple(int(g) for g in m.group(1, 2, 3))] = (m.group(4), lineno, m.start(4) + 1)
        return
    if line.startswith("expect "):
        name, _, rhs = line[len("expect "):].partition("=")
        spec.expect[name.strip()] = [parse(s.strip(), spec.params) for s in rhs.split(",")]
        return
    key, _, value = line.partition(":")
    key, value = key.strip(), value.strip()
    if key == "title":
        spec.title = value
    elif key == "kind":
        spec.kind = {"A": Kind.TYPE_A, "B": Kind.TYPE_B}.get(value, Kind.GENERAL)
    elif key == "backend":
        spec.backend = value
    elif key == "params":
        spec.params = tuple(parse_params(value, lineno)[0])
    elif key == "signs":
        spec.signs = tuple(s.strip() for s in value.split(","))
    elif key == "constraint":
        m = _CONSTRAINT.match(value)
        if not m:
            raise ConnectionFileError(f"bad constraint {value!r}", lineno, 1)
        lhs, rhs = parse(m.group(1), spec.params), parse(m.group(3), spec.params)
        spec.constraints.append(Constraint(value, lhs, m.group(2), rhs,
                                           frozenset(free_names(lhs) | free_names(rhs))))
    elif key == "killing":
        field_src, _, want = value.partition("->")
        comps = [parse(s.strip()) for s in field_src.split(",")]
        spec.killing.append((field_src.strip(), comps, want.strip() == "true"))
    else:
        raise ConnectionFileError(f"unknown catalog key {key!r}", lineno, 1)


_CATALOG = None


def catalog():
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = load()
    return _CATALOG


def spec_for(theorem, family=None):
    """Look up ``("thm4", 6)``, ``"thm4-6"``, ``("Thm4", "6")`` or ``"muv"``."""
    key = str(theorem).lower()
    if family is not None:
        key = f"{key}-{family}"
    try:
        return catalog()[key]
    except KeyError:
        raise KeyError(f"no catalog family {key!r}") from None


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------

def _exact_value(v):
    if isinstance(v, RadicalScalar):
        if not v.is_rational():
            raise RadicalObstruction(f"{v} is irrational; use family_table")
        return v.q
    if isinstance(v, str):
        return Fraction(v)
    return v if isinstance(v, RatFn) else Fraction(v)


def check_constraints(spec, params):
    """Raise ConstraintViolation for any decidable violated constraint."""
    for s in spec.signs:
        if s in params and params[s] not in (1, -1):
            raise ConstraintViolation(f"{s} must be +1 or -1, got {params[s]}")
    env = {k: RadicalScalar.lift(v) if not isinstance(v, RatFn) else v for k, v in params.items()}
    for c in spec.constraints:
        if not c.names <= set(k for k, v in env.items() if not isinstance(v, RatFn)):
            continue
        if not c.holds(env):
            raise ConstraintViolation(f"{spec.key}: constraint {c.text} fails")


def make(spec, params=None, mode="concrete", check=True):
    """Instantiate a family as a :class:`Connection`.

    ``mode="symbolic"`` leaves unbound parameters as polynomial symbols; sign
    parameters must always be given.  ``check=False`` skips the
    admissibility constraints (used to probe family boundaries).
    """
    if not isinstance(spec, FamilySpec):
        spec = spec_for(*spec) if isinstance(spec, tuple) else spec_for(spec)
    params = dict(params or {})
    unknown = set(params) - set(spec.params)
    if unknown:
        raise ConstraintViolation(f"{spec.key} has no parameter(s) {', '.join(sorted(unknown))}")
    for s in spec.signs:
        if s not in params:
            raise ConstraintViolation(f"sign parameter {s} needs a value (+1 or -1)")
    if mode == "concrete":
        missing = [p for p in spec.params if p not in params]
        if missing:
            raise ConstraintViolation(f"missing parameter(s): {', '.join(missing)}")
    elif mode != "symbolic":
        raise ValueError(f"unknown mode {mode!r}")
    if check:
        check_constraints(spec, params)
    if spec.backend == "numeric":
        bound = {k: float(_exact_value(v)) for k, v in params.items()}
        return build(spec.body, spec.kind, "numeric", list(spec.params), bound)
    bound = {k: _exact_value(v) for k, v in params.items()}
    return build(spec.body, spec.kind, "exact", list(spec.params), bound)


def family_table(theorem, family=None, params=None):
    """Christoffel table of a family (``x1 * Gamma`` for Type B) over RadicalScalar.

    Parameters may carry a square root; the table is evaluated exactly.
    """
    spec = theorem if isinstance(theorem, FamilySpec) else spec_for(theorem, family)
    env = {k: RadicalScalar.lift(v) for k, v in (params or {}).items()}
    asts = spec.gamma_asts()
    out = {}
    for t in TRIPLES:
        out[t] = RadicalScalar.lift(evaluate(asts[t], env)) if t in asts else RadicalScalar(0)
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "status": "pass" if self.ok else "fail", "detail": self.detail}


@dataclass
class EntryReport:
    key: str
    theorem: str
    family: object
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def to_json(self):
        return {"theorem": self.theorem, "family": self.family if self.family is not None else self.key,
                "key": self.key, "checks": [c.to_json() for c in self.checks],
                "status": "pass" if self.ok else "fail"}


@dataclass
class Report:
    entries: list
    seconds: float = 0.0

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    def table_entries(self):
        return [e for e in self.entries if e.key.split("-")[0] in TABLE_THEOREMS]

    def lines(self):
        out = []
        for e in self.entries:
            out.append(f"{'PASS' if e.ok else 'FAIL'}  {e.key}")
            for c in e.checks:
                out.append(f"    {'ok  ' if c.ok else 'FAIL'} {c.name}" + (f"  [{c.detail}]" if c.detail else ""))
        tables = self.table_entries()
        good = sum(e.ok for e in tables)
        out.append(f"{good}/{len(tables)} family tables verified")
        others = [e for e in self.entries if e not in tables]
        out.append(f"{sum(e.ok for e in others)}/{len(others)} other entries verified "
                   f"({', '.join(e.key for e in others)})")
        out.append(f"elapsed {self.seconds:.2f} s")
        return out

    def to_json(self):
        return [e.to_json() for e in self.entries]


def _sign_runs(spec):
    if not spec.signs:
        yield {}
        return
    for values in product((1, -1), repeat=len(spec.signs)):
        yield dict(zip(spec.signs, values))


def _label(run):
    return "".join(f" [{k}={'+1' if v > 0 else '-1'}]" for k, v in run.items())


def _cmp(name, got, want):
    bad = [f"{i}: got {g}, expected {w}" for i, (g, w) in enumerate(zip(got, want)) if g != w]
    return Check(name, not bad, "; ".join(bad))


def verify_entry(spec):
    rep = EntryReport(spec.key, spec.theorem, spec.family)
    if spec.backend == "numeric":
        rep.checks.extend(_verify_numeric(spec))
        return rep
    one = RatFn.const(1)
    tilde = spec.kind is Kind.TYPE_B
    for run in _sign_runs(spec):
        conn = make(spec, run, mode="symbolic")
        at1 = (lambda v: v.subs({"x1": one})) if tilde else (lambda v: v)
        suffix = "~" if tilde else ""
        exp = {name: [lower_exact(a, run) for a in asts] for name, asts in spec.expect.items()}
        lab = _label(run)
        t = torsion_of(conn)
        rho = ricci_of(conn)
        nT = cov_deriv_torsion(conn)
        got = {
            "T" + suffix: [at1(t.t1), at1(t.t2)],
            "rho" + suffix: [at1(v) for row in rho.matrix() for v in row],
            "nablaT" + suffix: [at1(v) for row in nT.direction_major() for v in row],
        }
        for name in exp:
            rep.checks.append(_cmp(name + lab, got[name], exp[name]))
        rep.checks.append(Check("nabla rho = 0" + lab, cov_deriv_ricci(conn).is_zero()))
        if spec.group in ("thm4", "thm5"):
            rep.checks.append(Check("nabla T != 0" + lab, not nT.is_zero()))
    return rep


def _verify_numeric(spec):
    conn = make(spec, {}, mode="symbolic")
    checks = []
    if "rho" in spec.expect:
        want = [lower_numeric(a) for a in spec.expect["rho"]]
        worst = 0.0
        for p in SAMPLE_GRID:
            got = [v.value for row in ricci_of(conn, at=p).matrix() for v in row]
            worst = max([worst] + [abs(g - w(*p).value) for g, w in zip(got, want)])
        checks.append(Check("rho", worst < NUMERIC_TOL, f"max residual {worst:.3e} over {len(SAMPLE_GRID)} points"))
    worst = max(abs(v) for p in SAMPLE_GRID for v in cov_deriv_ricci(conn, at=p).values().values())
    checks.append(Check("nabla rho = 0", worst < NUMERIC_TOL, f"max |rho_jk;i| {worst:.3e}"))
    if "nablaT-entry" in spec.expect:
        f = lower_numeric(spec.expect["nablaT-entry"][0])
        matches = None
        for p in SAMPLE_GRID:
            m = cov_deriv_torsion(conn, at=p).values()
            hit = {k for k, v in m.items() if abs(v - f(*p).value) < ENTRY_TOL}
            matches = hit if matches is None else matches & hit
        slots = ", ".join(f"T^{k}_;{i}" for k, i in sorted(matches))
        checks.append(Check("nabla T has exactly one entry equal to the expected function",
                            len(matches) == 1, f"matching slots: {slots or 'none'}"))
    for src, comps, want in spec.killing:
        field_fns = [lower_numeric(c) for c in comps]
        got = is_affine_killing(conn, field_fns)
        checks.append(Check(f"killing ({src}) is {'' if want else 'not '}Killing", got == want))
    return checks


def overlap_checks():
    """Family overlaps and the sign flip noted after the classification tables."""
    from .gauge import Flip, transform_table
    out = []
    h = Fraction(-1, 2)
    for eps in (1, -1):
        a, b = symbolic_table("thm5-8", {"gamma": h, "epsilon": eps}), \
            symbolic_table("thm5-7", {"xi": 0, "epsilon": eps})
        out.append(Check(f"thm5-8 at gamma=-1/2 equals thm5-7 at xi=0 [epsilon={eps:+d}]", a == b))
        a, b = symbolic_table("thm5-9", {"gamma": h, "epsilon": eps}), \
            symbolic_table("thm5-7", {"xi": -1, "epsilon": eps})
        out.append(Check(f"thm5-9 at gamma=-1/2 equals thm5-7 at xi=-1 [epsilon={eps:+d}]", a == b))
        flipped = transform_table(symbolic_table("thm4-6", {"epsilon": eps}), Flip().matrix)
        eta = RatFn.var("eta")
        target = symbolic_table("thm4-6", {"epsilon": eps}, {"eta": -eta})
        out.append(Check(f"thm4-6 under x2 -> -x2 maps eta to -eta [epsilon={eps:+d}]",
                         flipped == target))
        for key in ("thm5-7", "thm5-8", "thm5-9"):
            flipped = transform_table(symbolic_table(key, {"epsilon": eps}), Flip().matrix)
            alpha = RatFn.var("alpha")
            target = symbolic_table(key, {"epsilon": eps}, {"alpha": -alpha})
            out.append(Check(f"{key} under x2 -> -x2 maps alpha to -alpha [epsilon={eps:+d}]",
                             flipped == target))
    return out


def symbolic_table(key, params, substitute=None):
    """Exact table (``x1 * Gamma`` for Type B) with unbound parameters symbolic."""
    spec = spec_for(key)
    conn = make(spec, params, mode="symbolic", check=False)
    x1 = RatFn.var("x1")
    table = {t: (v * x1 if spec.kind is Kind.TYPE_B else v) for t, v in conn.gamma.items()}
    if substitute:
        table = {t: v.subs(substitute) for t, v in table.items()}
    return table


def verify_paper(golden_path=None):
    """Recompute every catalog entry's tensors and compare with the stored ones."""
    start = time.perf_counter()
    specs = load(golden_path) if golden_path else catalog()
    entries = [verify_entry(s) for s in specs.values()]
    if golden_path is None:
        entries.append(EntryReport("overlaps", "Overlaps", None, overlap_checks()))
    return Report(entries, time.perf_counter() - start)
