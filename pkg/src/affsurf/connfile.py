"""Reading and writing connection files.

::

    # comments start with '#'
    kind: A                 # A | B | general
    backend: exact          # exact | numeric
    params: u, v=1          # optional bindings
    Gamma 1 1 1 = 1
    Gamma 1 2 1 = 2*u
    Gamma 2 2 1 = v

Omitted symbols are zero.  For ``kind: B`` the body lists ``x1 * Gamma``;
the 1/x1 factor is inserted on reading and removed on writing.
"""

import re
from fractions import Fraction

from .connection import TRIPLES, Connection, Kind
from .errors import AffsurfError, ConnectionFileError, ExprSyntaxError
from .expr import lower_exact, lower_numeric, parse, to_source
from .scalars import RatFn

_GAMMA = re.compile(r"^Gamma\s+([0-9]+)\s+([0-9]+)\s+([0-9]+)\s*=\s*(.*)$")
_HEADER = re.compile(r"^([A-Za-z_]+)\s*:\s*(.*)$")
_KINDS = {"a": Kind.TYPE_A, "b": Kind.TYPE_B, "general": Kind.GENERAL}


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_params(text, lineno=None, column=1):
    """``"u, v=1"`` -> (names, bindings)."""
    names, bindings = [], {}
    if not text.strip():
        return names, bindings
    for item in text.split(","):
        item = item.strip()
        if "=" in item:
            name, value = (s.strip() for s in item.split("=", 1))
            try:
                bindings[name] = Fraction(value)
            except ValueError:
                raise ConnectionFileError(f"bad parameter value {value!r}", lineno, column) from None
        else:
            name = item
        if not name.isidentifier() or name in ("x1", "x2"):
            raise ConnectionFileError(f"bad parameter name {name!r}", lineno, column)
        if name in names:
            raise ConnectionFileError(f"parameter {name!r} declared twice", lineno, column)
        names.append(name)
    return names, bindings


def parse_text(text, bindings=None):
    """Parse connection-file text into a :class:`Connection`.

    ``bindings`` overrides parameter values from the header.
    """
    header = {"kind": "general", "backend": "exact", "params": ""}
    header_lines = {}
    body = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        m = _GAMMA.match(line)
        if m:
            idx = tuple(int(g) for g in m.group(1, 2, 3))
            if any(i not in (1, 2) for i in idx):
                raise ConnectionFileError("indices must be 1 or 2", lineno, indent + 7)
            if idx in body:
                raise ConnectionFileError(f"Gamma {idx[0]} {idx[1]} {idx[2]} given twice", lineno, 1)
            body[idx] = (m.group(4), lineno, indent + m.start(4) + 1)
            continue
        m = _HEADER.match(line)
        if m and m.group(1) in header:
            header[m.group(1)] = m.group(2).strip()
            header_lines[m.group(1)] = lineno
            continue
        raise ConnectionFileError(f"cannot parse {line!r}", lineno, indent + 1)

    kind = _KINDS.get(header["kind"].lower())
    if kind is None:
        raise ConnectionFileError(f"unknown kind {header['kind']!r}", header_lines.get("kind"), 1)
    backend = header["backend"].lower()
    if backend not in ("exact", "numeric"):
        raise ConnectionFileError(f"unknown backend {backend!r}", header_lines.get("backend"), 1)
    names, bound = parse_params(header["params"], header_lines.get("params"))
    bound.update(bindings or {})
    return build(body, kind, backend, names, bound)


def build(body, kind, backend, names, bound):
    """Lower ``{(i, j, k): (source, line, column)}`` to a connection."""
    gamma = {}
    for idx, (src, lineno, col) in body.items():
        try:
            ast = parse(src, names)
            if backend == "exact":
                value = lower_exact(ast, bound)
                if kind is Kind.TYPE_B:
                    value = value / RatFn.var("x1")
            else:
                fn = lower_numeric(ast, bound)
                value = _over_x1(fn) if kind is Kind.TYPE_B else fn
        except ExprSyntaxError as exc:
            pos = exc.pos or 0
            raise ConnectionFileError(str(exc).split(" at column")[0], lineno, col + pos) from None
        except AffsurfError as exc:
            raise ConnectionFileError(str(exc), lineno, col) from None
        gamma[idx] = value
    return Connection(gamma, kind, backend, tuple(n for n in names if n not in bound))


def _over_x1(fn):
    from .jets import Jet2

    def g(x1, x2):
        return fn(x1, x2) / Jet2.variable(1, (float(x1), float(x2)))
    # g.ast is the x1 * Gamma body, as written in a Type B file
    g.ast = fn.ast
    g.bindings = fn.bindings
    g.over_x1 = True
    return g


def read(path, bindings=None):
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read(), bindings)


def serialize(conn, bindings=None):
    """Text of a connection file that parses back to ``conn``."""
    kind = {Kind.TYPE_A: "A", Kind.TYPE_B: "B", Kind.GENERAL: "general"}[conn.kind]
    lines = [f"kind: {kind}", f"backend: {conn.backend}"]
    params = list(conn.params)
    if conn.backend == "exact":
        for v in conn.gamma.values():
            params += [s for s in sorted(v.free_symbols()) if s not in ("x1", "x2") and s not in params]
    if params or bindings:
        items = params + [f"{k}={v}" for k, v in (bindings or {}).items()]
        lines.append("params: " + ", ".join(items))
    x1 = RatFn.var("x1")
    for idx in TRIPLES:
        v = conn.gamma[idx]
        if conn.backend == "exact":
            if conn.kind is Kind.TYPE_B:
                v = v * x1
            if v.is_zero():
                continue
            text = v.to_str()
        else:
            if not callable(v) and v == 0:
                continue
            ast = getattr(v, "ast", None)
            if ast is None:
                raise ValueError("numeric coefficient without a source expression")
            text = to_source(ast)
        lines.append("Gamma {} {} {} = {}".format(*idx, text))
    return "\n".join(lines) + "\n"
