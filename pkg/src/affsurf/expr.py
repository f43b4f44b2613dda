"""Expression language for Christoffel symbols.

Grammar (``-`` may also be written as the Unicode minus sign)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-'? power
    power  := atom ('^' '-'? integer)?
    atom   := rational | ident | fn '(' expr ')' | '(' expr ')'

``rational`` is an integer, a finite decimal (``0.25``) or ``p/q`` written
without spaces; ``p/q`` is only read as a single literal where doing so
cannot change the value under left-associative division.  Identifiers are
``x1``, ``x2``, declared parameters, or one of the functions in
:data:`FUNCTIONS`.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (ExprSyntaxError, TranscendentalInExactBackend,
                     UnboundParameter, UnknownIdentifier)
from .jets import Jet2
from .scalars import COORDS, RatFn, declare

FUNCTIONS = ("tanh", "cosh", "sinh", "exp", "sin", "cos")


@dataclass(frozen=True)
class Num:
    value: Fraction

    transcendental = False


@dataclass(frozen=True)
class Var:
    name: str

    transcendental = False


@dataclass(frozen=True)
class Neg:
    operand: object

    @property
    def transcendental(self):
        return self.operand.transcendental


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    @property
    def transcendental(self):
        return self.left.transcendental or self.right.transcendental


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    @property
    def transcendental(self):
        return self.base.transcendental


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object

    transcendental = True


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),−])
""", re.VERBOSE)

_RATIO = re.compile(r"(\d+)/(\d+)(?![\d.])")


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            pos = m.end()
            continue
        if kind == "num":
            prev = tokens[-1][1] if tokens else None
            r = _RATIO.match(source, pos)
            after = r.end() if r else None
            if (r and int(r.group(2)) and prev not in ("/", "^")
                    and not source[after:].lstrip().startswith("^")):
                tokens.append(("num", Fraction(int(r.group(1)), int(r.group(2))), pos))
                pos = after
                continue
            tokens.append(("num", Fraction(text), pos))
        elif kind == "op":
            tokens.append(("op", "-" if text == "−" else text, pos))
        else:
            tokens.append((kind, text, pos))
        pos = m.end()
    tokens.append(("end", None, len(source)))
    return tokens


class _Parser:
    def __init__(self, source, params):
        self.source = source
        self.params = set(params)
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, val, pos = self.take()
        if val != text or kind != "op":
            raise ExprSyntaxError(f"expected {text!r}", pos, self.source)

    def error(self, message):
        raise ExprSyntaxError(message, self.peek()[2], self.source)

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.power())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "num" or val.denominator != 1:
                raise ExprSyntaxError("exponent must be an integer", pos, self.source)
            return Pow(base, sign * int(val))
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(val)
        if kind == "ident":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in COORDS or val in self.params:
                return Var(val)
            raise UnknownIdentifier(f"unknown identifier {val!r}", pos, self.source)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", pos, self.source)
        raise ExprSyntaxError(f"unexpected {val!r}", pos, self.source)


def parse(source, declared_params=()):
    """Parse ``source`` into an AST.

    >>> parse("2*u", ["u"])
    BinOp(op='*', left=Num(value=Fraction(2, 1)), right=Var(name='u'))
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0, source)
    return _Parser(source, declared_params).parse()


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def to_source(node):
    """Render an AST so that ``parse(to_source(ast)) == ast``."""
    if isinstance(node, Num):
        v = node.value
        if v < 0:
            raise ValueError("negative literals are written with unary minus")
        return str(v.numerator) if v.denominator == 1 else f"({v})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        if _prec(node.operand) <= 4:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = to_source(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = to_source(node.left)
        if _prec(node.left) < p:
            left = f"({left})"
        right = to_source(node.right)
        rp = _prec(node.right)
        if rp <= p:
            right = f"({right})"
        sep = f" {node.op} " if p == 1 else node.op
        return f"{left}{sep}{right}"
    raise TypeError(f"not an AST node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def free_names(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, (Num,)):
        return set()
    if isinstance(node, (Neg,)):
        return free_names(node.operand)
    if isinstance(node, Pow):
        return free_names(node.base)
    if isinstance(node, Call):
        return free_names(node.arg)
    return free_names(node.left) | free_names(node.right)


def substitute(node, mapping):
    """Replace variables by ASTs: ``mapping`` sends names to nodes."""
    if isinstance(node, Var):
        return mapping.get(node.name, node)
    if isinstance(node, Num):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, mapping))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, mapping), node.exponent)
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, mapping))
    return BinOp(node.op, substitute(node.left, mapping), substitute(node.right, mapping))


def linear_combination(terms):
    """AST of ``sum(c * node)`` over ``(Fraction c, node)`` pairs; zero terms dropped."""
    out = None
    for c, node in terms:
        if c == 0:
            continue
        mag = abs(c)
        term = node if mag == 1 else BinOp("*", Num(mag), node)
        if out is None:
            out = Neg(term) if c < 0 else term
        else:
            out = BinOp("-" if c < 0 else "+", out, term)
    return out if out is not None else Num(Fraction(0))


def evaluate(node, env, call=None):
    """Evaluate over any field-like scalar type.

    ``env`` maps variable names to scalars; ``call(fn, value)`` handles
    function nodes (None forbids them).
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnboundParameter(f"no value for {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, env, call)
    if isinstance(node, Pow):
        return evaluate(node.base, env, call) ** node.exponent
    if isinstance(node, Call):
        if call is None:
            raise TranscendentalInExactBackend(
                f"{node.fn}() has no exact rational-function value")
        return call(node.fn, evaluate(node.arg, env, call))
    a = evaluate(node.left, env, call)
    b = evaluate(node.right, env, call)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


def lower_exact(node, bindings=None):
    """Lower a transcendental-free AST to a :class:`RatFn`.

    ``bindings`` optionally fixes some parameters to exact values; every other
    identifier becomes a polynomial symbol.
    """
    if node.transcendental:
        raise TranscendentalInExactBackend("expression contains a transcendental function")
    bindings = bindings or {}
    env = {}
    names = sorted(free_names(node) - set(COORDS))
    declare(*names)
    for name in COORDS + tuple(names):
        env[name] = RatFn.const(bindings[name]) if name in bindings else RatFn.var(name)
    out = evaluate(node, env)
    return out if isinstance(out, RatFn) else RatFn.const(out)


def lower_numeric(node, param_values=None):
    """Return ``f(x1, x2) -> Jet2`` for the expression.

    Every parameter must be bound in ``param_values``.
    """
    param_values = dict(param_values or {})
    missing = free_names(node) - set(COORDS) - set(param_values)
    if missing:
        raise UnboundParameter(f"unbound parameter(s): {', '.join(sorted(missing))}")
    consts = {k: float(v) for k, v in param_values.items()}

    def fn(x1, x2):
        at = (float(x1), float(x2))
        env = dict(consts)
        env["x1"] = Jet2.variable(1, at)
        env["x2"] = Jet2.variable(2, at)
        out = evaluate(node, env, call=lambda name, v: _lift(v).apply(name))
        return _lift(out)

    fn.ast = node
    fn.bindings = param_values
    return fn


def _lift(v):
    return v if isinstance(v, Jet2) else Jet2.constant(float(v))


def ratfn_to_ast(f):
    """Expression AST of a :class:`RatFn` (via its canonical printout)."""
    return parse(f.to_str(), sorted(f.free_symbols() - set(COORDS)))
