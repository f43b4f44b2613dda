"""Exact scalars.

Rationals are :class:`fractions.Fraction`.  On top of them this module builds

* :class:`Poly` -- sparse multivariate polynomials in the coordinates
  ``x1``, ``x2`` and any declared parameter symbols,
* :class:`RatFn` -- rational functions kept in a canonical reduced form,
* :class:`RadicalScalar` -- numbers ``q*sqrt(r)`` with ``r`` square free.

Variables live in a process-wide registry; ``x1 < x2 < parameters`` in the
order they were first declared.  Monomials are exponent tuples indexed by that
registry with trailing zeros stripped, and the canonical monomial order is
graded lexicographic (the most recently declared variable is the largest).
"""

from fractions import Fraction
from itertools import zip_longest

from .errors import DivisionByZero, RadicalObstruction

COORDS = ("x1", "x2")

_VARS = ["x1", "x2"]
_INDEX = {"x1": 0, "x2": 1}


def var_index(name):
    """Index of ``name`` in the variable registry, registering it if new."""
    idx = _INDEX.get(name)
    if idx is None:
        if not name.isidentifier():
            raise ValueError(f"invalid symbol name {name!r}")
        idx = len(_VARS)
        _VARS.append(name)
        _INDEX[name] = idx
    return idx


def declare(*names):
    for name in names:
        var_index(name)


def var_name(idx):
    return _VARS[idx]


def _trim(m):
    n = len(m)
    while n and not m[n - 1]:
        n -= 1
    return m if n == len(m) else m[:n]


def _mmul(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    return tuple(x + y for x, y in zip_longest(a, b, fillvalue=0))


def _mdiv(a, b):
    if len(b) > len(a):
        return None
    out = list(a)
    for i, e in enumerate(b):
        out[i] -= e
        if out[i] < 0:
            return None
    return _trim(tuple(out))


def _mgcd(a, b):
    return _trim(tuple(min(x, y) for x, y in zip(a, b)))


def _key(m):
    pad = len(_VARS) - len(m)
    return (sum(m), tuple(reversed(m + (0,) * pad)))


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, RadicalScalar) and c.r == 1:
        return c.q
    raise TypeError(f"not an exact rational: {c!r}")


class Poly:
    """Sparse polynomial with :class:`Fraction` coefficients.

    ``terms`` maps monomials (trimmed exponent tuples) to nonzero
    coefficients; two polynomials are equal iff their term maps are.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def const(cls, c):
        c = _frac(c)
        return cls({(): c} if c else {})

    @classmethod
    def var(cls, name):
        idx = var_index(name)
        return cls({(0,) * idx + (1,): Fraction(1)})

    # -- structure -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self):
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def degree_in(self, idx):
        return max((m[idx] if idx < len(m) else 0 for m in self.terms), default=-1)

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def lead(self):
        m = max(self.terms, key=_key)
        return m, self.terms[m]

    def monic(self):
        if not self.terms:
            return self
        _, c = self.lead()
        return self if c == 1 else self.scale(1 / c)

    def scale(self, c):
        c = _frac(c)
        if not c:
            return Poly()
        return Poly({m: v * c for m, v in self.terms.items()})

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_constant():
            return other.scale(self.terms.get((), 0))
        if other.is_constant():
            return self.scale(other.terms.get((), 0))
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mmul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def diff(self, idx):
        out = {}
        for m, c in self.terms.items():
            if idx < len(m) and m[idx]:
                e = m[idx]
                nm = _trim(m[:idx] + (e - 1,) + m[idx + 1:])
                out[nm] = out.get(nm, 0) + c * e
        return Poly({m: c for m, c in out.items() if c})

    def evaluate(self, env):
        """Evaluate with ``env`` mapping variable names to numbers."""
        vals = []
        for name in _VARS:
            vals.append(env.get(name))
        total = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    v = vals[i]
                    if v is None:
                        raise KeyError(var_name(i))
                    t = t * v ** e
            total = total + t
        return total

    def subs(self, mapping):
        """Substitute variables (by name) with :class:`RatFn` or numbers."""
        idx_map = {var_index(k): v for k, v in mapping.items()}
        total = RatFn.const(0)
        cache = {}
        for m, c in self.terms.items():
            t = RatFn.const(c)
            keep = []
            for i, e in enumerate(m):
                if not e:
                    keep.append(0)
                    continue
                if i in idx_map:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = _as_ratfn(idx_map[i]) ** e
                    t = t * cache[key]
                    keep.append(0)
                else:
                    keep.append(e)
            rest = _trim(tuple(keep))
            if rest:
                t = t * RatFn(Poly({rest: Fraction(1)}))
            total = total + t
        return total

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_key, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                var_name(i) if e == 1 else f"{var_name(i)}^{e}"
                for i, e in enumerate(m) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.to_str()!r})"


# ---------------------------------------------------------------------------
# gcd machinery: content / primitive part plus subresultant PRS
# ---------------------------------------------------------------------------

_ONE = Poly({(): Fraction(1)})


def divexact(p, q):
    """Exact quotient ``p / q``; raises ArithmeticError if q does not divide p."""
    if q.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if q.is_constant():
        return p.scale(1 / q.terms[()])
    lm, lc = q.lead()
    rem = dict(p.terms)
    quo = {}
    qterms = list(q.terms.items())
    while rem:
        m = max(rem, key=_key)
        d = _mdiv(m, lm)
        if d is None:
            raise ArithmeticError("inexact polynomial division")
        f = rem[m] / lc
        quo[d] = f
        for qm, qc in qterms:
            mm = _mmul(d, qm)
            v = rem.get(mm, 0) - f * qc
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return Poly(quo)


def _to_uni(p, idx):
    """View ``p`` as a list of coefficients (Polys free of var idx) by degree."""
    coeffs = {}
    for m, c in p.terms.items():
        e = m[idx] if idx < len(m) else 0
        rest = m
        if e:
            rest = _trim(m[:idx] + (0,) + m[idx + 1:])
        coeffs.setdefault(e, {})[rest] = c
    out = [Poly() for _ in range(max(coeffs) + 1)]
    for e, terms in coeffs.items():
        out[e] = Poly(terms)
    return out


def _from_uni(coeffs, idx):
    out = {}
    for e, cp in enumerate(coeffs):
        for m, c in cp.terms.items():
            if e:
                mm = list(m) + [0] * (idx + 1 - len(m))
                mm[idx] = e
                m = tuple(mm)
            out[m] = c
    return Poly(out)


def _content(coeffs):
    g = None
    for c in coeffs:
        if c.is_zero():
            continue
        g = c.monic() if g is None else poly_gcd(g, c)
        if g.is_constant():
            return _ONE
    return g if g is not None else Poly()


def _strip(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(a, b):
    r = list(a)
    lcb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) >= len(b):
        lcr = r[-1]
        shift = len(r) - len(b)
        r = [c * lcb for c in r]
        for i, bc in enumerate(b):
            if not bc.is_zero():
                r[i + shift] = r[i + shift] - lcr * bc
        r.pop()
        _strip(r)
        e -= 1
    if e and r:
        f = lcb ** e
        r = [c * f for c in r]
    return r


def _prs_gcd(a, b, idx):
    """gcd of two polynomials primitive with respect to variable ``idx``."""
    A, B = _to_uni(a, idx), _to_uni(b, idx)
    if len(A) < len(B):
        A, B = B, A
    g = h = _ONE
    while True:
        d = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return _ONE
        div = g * h ** d
        A, B = B, [divexact(c, div) for c in R]
        g = A[-1]
        if d == 1:
            h = g
        elif d > 1:
            h = divexact(g ** d, h ** (d - 1))
    cont = _content(B)
    if not cont.is_constant():
        B = [divexact(c, cont) for c in B]
    return _from_uni(B, idx)


def poly_gcd(p, q):
    """Monic greatest common divisor over Q."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return _ONE
    if len(p.terms) == 1 or len(q.terms) == 1:
        if len(q.terms) == 1:
            p, q = q, p
        (g,) = p.terms
        for m in q.terms:
            g = _mgcd(g, m)
            if not g:
                break
        return Poly({g: Fraction(1)})
    if p == q:
        return p.monic()
    vp, vq = p.variables(), q.variables()
    common = vp & vq
    if not common:
        return _ONE
    only_p, only_q = vp - vq, vq - vp
    if only_p:
        return poly_gcd(_content(_to_uni(p, max(only_p))), q)
    if only_q:
        return poly_gcd(p, _content(_to_uni(q, max(only_q))))
    idx = max(common)
    cp, cq = _content(_to_uni(p, idx)), _content(_to_uni(q, idx))
    pp = p if cp.is_constant() else divexact(p, cp)
    qq = q if cq.is_constant() else divexact(q, cq)
    return (poly_gcd(cp, cq) * _prs_gcd(pp, qq, idx)).monic()


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

def _as_ratfn(x):
    if isinstance(x, RatFn):
        return x
    if isinstance(x, Poly):
        return RatFn(x)
    return RatFn.const(x)


class RatFn:
    """Reduced quotient ``num/den`` of polynomials.

    Canonical form: ``gcd(num, den) = 1`` and ``den`` is monic under the
    graded lexicographic order, so equality is equality of term maps.
    Zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, normalized=False):
        if den is None:
            self.num, self.den = num, _ONE
            return
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if not normalized:
            num, den = _normalize(num, den)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        return cls(Poly.const(c))

    @classmethod
    def var(cls, name):
        return cls(Poly.var(name))

    # -- predicates ------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def free_symbols(self):
        return {var_name(i) for i in self.num.variables() | self.den.variables()}

    def depends_on(self, name):
        return name in self.free_symbols()

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RatFn):
            if isinstance(other, (int, Fraction, Poly)):
                other = _as_ratfn(other)
            else:
                return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            if self.den.is_constant():
                return RatFn(self.num + other.num)
            return RatFn(self.num + other.num, self.den)
        if self.den.is_constant() and other.den.is_constant():
            return RatFn(self.num + other.num)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        if not isinstance(other, RatFn):
            if isinstance(other, (int, Fraction, Poly)):
                other = _as_ratfn(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_ratfn(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFn):
            if isinstance(other, (int, Fraction)):
                c = _frac(other)
                if not c:
                    return RatFn(Poly())
                return RatFn(self.num.scale(c), self.den, normalized=True)
            if isinstance(other, Poly):
                other = RatFn(other)
            else:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFn(Poly())
        if self.den.is_constant() and other.den.is_constant():
            return RatFn(self.num * other.num)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.is_constant() else divexact(self.num, g1)
        d2 = other.den if g1.is_constant() else divexact(other.den, g1)
        n2 = other.num if g2.is_constant() else divexact(other.num, g2)
        d1 = self.den if g2.is_constant() else divexact(self.den, g2)
        num, den = n1 * n2, d1 * d2
        _, lc = den.lead()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return RatFn(num, den, normalized=True)

    __rmul__ = __mul__

    def reciprocal(self):
        if self.num.is_zero():
            raise DivisionByZero("division by zero rational function")
        _, lc = self.num.lead()
        return RatFn(self.den.scale(1 / lc), self.num.scale(1 / lc), normalized=True)

    def __truediv__(self, other):
        if not isinstance(other, RatFn):
            if isinstance(other, (int, Fraction, Poly)):
                other = _as_ratfn(other)
            else:
                return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return _as_ratfn(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        return RatFn(self.num ** n, self.den ** n, normalized=True)

    def __eq__(self, other):
        if isinstance(other, RatFn):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        if isinstance(other, RadicalScalar):
            return other.r == 1 and self == other.q
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus and evaluation ---------------------------------------
    def diff(self, var):
        if var not in COORDS:
            raise ValueError(f"can only differentiate by a coordinate, got {var!r}")
        idx = var_index(var)
        dn = self.num.diff(idx)
        if self.den.is_constant():
            return RatFn(dn)
        dd = self.den.diff(idx)
        if dd.is_zero():
            return RatFn(dn, self.den)
        return RatFn(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, env):
        """Evaluate with ``env`` a name -> number mapping.

        Exact inputs (int/Fraction) give exact output.
        """
        d = self.den.evaluate(env)
        if d == 0:
            raise DivisionByZero(f"denominator {self.den.to_str()} vanishes")
        return self.num.evaluate(env) / d

    def subs(self, mapping):
        """Simultaneous substitution of variables by numbers or RatFns."""
        if not mapping:
            return self
        return self.num.subs(mapping) / self.den.subs(mapping)

    def to_str(self):
        n = self.num.to_str()
        if self.den.is_constant():
            return n
        if len(self.num.terms) > 1:
            n = f"({n})"
        d = self.den.to_str()
        dterms = self.den.terms
        if len(dterms) > 1:
            d = f"({d})"
        else:
            (m, c), = dterms.items()
            if c != 1 or sum(1 for e in m if e) > 1:
                d = f"({d})"
        return f"{n}/{d}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFn({self.to_str()!r})"


def _normalize(num, den):
    if num.is_zero():
        return Poly(), _ONE
    if den.is_constant():
        c = den.terms[()]
        return (num if c == 1 else num.scale(1 / c)), _ONE
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = divexact(num, g), divexact(den, g)
    _, lc = den.lead()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


def ratfn_arith(lhs, rhs, op):
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two rational functions."""
    lhs, rhs = _as_ratfn(lhs), _as_ratfn(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def ratfn_diff(f, var):
    return _as_ratfn(f).diff(var)


def symbols(*names):
    """Declare parameter symbols and return them as RatFns."""
    out = tuple(RatFn.var(n) for n in names)
    return out[0] if len(out) == 1 else out


# ---------------------------------------------------------------------------
# single square-root extensions
# ---------------------------------------------------------------------------

def square_free_split(n):
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` square free (n > 0)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, r = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                r *= p
        p += 1 if p == 2 else 2
    r *= n
    return s, r


class RadicalScalar:
    """The number ``q * sqrt(r)`` for rational ``q`` and square-free ``r >= 1``.

    Products and quotients are closed.  Sums are only defined when both
    operands carry the same radical (zero is compatible with everything);
    mixing radicals raises :class:`RadicalObstruction`.
    """

    __slots__ = ("q", "r")

    def __init__(self, q, r=1):
        q = _frac(q)
        if r < 1:
            raise ValueError("radicand must be positive")
        if r != 1:
            s, r = square_free_split(r)
            q *= s
        if not q:
            r = 1
        self.q, self.r = q, r

    @classmethod
    def sqrt(cls, x):
        """Exact square root of a nonnegative rational."""
        x = _frac(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        if not x:
            return cls(0)
        n, d = x.numerator, x.denominator
        s, r = square_free_split(n * d)
        return cls(Fraction(s, d), r)

    @staticmethod
    def lift(x):
        return x if isinstance(x, RadicalScalar) else RadicalScalar(x)

    def is_rational(self):
        return self.r == 1

    def to_fraction(self):
        if self.r != 1:
            raise ValueError(f"{self} is irrational")
        return self.q

    def sign(self):
        return (self.q > 0) - (self.q < 0)

    def __add__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        other = RadicalScalar.lift(other)
        if not other.q:
            return self
        if not self.q:
            return other
        if self.r != other.r:
            raise RadicalObstruction(f"cannot add {self} and {other}")
        return RadicalScalar(self.q + other.q, self.r)

    __radd__ = __add__

    def __neg__(self):
        return RadicalScalar(-self.q, self.r)

    def __sub__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        return self + (-RadicalScalar.lift(other))

    def __rsub__(self, other):
        return RadicalScalar.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFn):
            if self.r != 1:
                raise RadicalObstruction("irrational scalar in a rational function")
            return other * self.q
        other = RadicalScalar.lift(other)
        if self.r == other.r:
            return RadicalScalar(self.q * other.q * self.r, 1)
        return RadicalScalar(self.q * other.q, self.r * other.r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RadicalScalar.lift(other)
        if not other.q:
            raise DivisionByZero("division by zero")
        # 1/(q sqrt r) = sqrt(r) / (q r)
        return self * RadicalScalar(1 / (other.q * other.r), other.r)

    def __rtruediv__(self, other):
        return RadicalScalar.lift(other) / self

    def __pow__(self, n):
        if n < 0:
            return RadicalScalar(1) / self ** (-n)
        out = RadicalScalar(1)
        for _ in range(n):
            out = out * self
        return out

    def _cmp_key(self):
        # sign-preserving square: compare q|q|r
        return self.q * abs(self.q) * self.r

    def __eq__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        try:
            other = RadicalScalar.lift(other)
        except TypeError:
            return NotImplemented
        return self.q == other.q and self.r == other.r

    def __hash__(self):
        return hash(self.q) if self.r == 1 else hash((self.q, self.r))

    def __lt__(self, other):
        return self._cmp_key() < RadicalScalar.lift(other)._cmp_key()

    def __le__(self, other):
        return self._cmp_key() <= RadicalScalar.lift(other)._cmp_key()

    def __gt__(self, other):
        return self._cmp_key() > RadicalScalar.lift(other)._cmp_key()

    def __ge__(self, other):
        return self._cmp_key() >= RadicalScalar.lift(other)._cmp_key()

    def __float__(self):
        return float(self.q) * self.r ** 0.5

    def __bool__(self):
        return bool(self.q)

    def __str__(self):
        if self.r == 1:
            return str(self.q)
        if self.q == 1:
            return f"sqrt({self.r})"
        if self.q == -1:
            return f"-sqrt({self.r})"
        return f"{self.q}*sqrt({self.r})"

    def __repr__(self):
        return f"RadicalScalar({self})"
