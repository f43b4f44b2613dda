"""Truncated bivariate Taylor jets for the numeric backend.

A :class:`Jet2` stores Taylor coefficients ``c[a, b]`` of
``f(x1 + h1, x2 + h2) = sum c[a, b] h1**a h2**b`` for ``a + b <= order``.
Differentiating a jet lowers its order by one, so an order-3 jet of the
Christoffel symbols still carries enough information for ``grad(rho)``.
"""

import math

import numpy as np

from .errors import DomainError, UnsupportedFunction

ORDER = 3


def _mask(order):
    a, b = np.indices((ORDER + 1, ORDER + 1))
    return (a + b) <= order


class Jet2:
    __slots__ = ("c", "order")

    def __init__(self, coeffs, order=ORDER):
        self.c = np.where(_mask(order), coeffs, 0.0)
        self.order = order

    @classmethod
    def constant(cls, value, order=ORDER):
        c = np.zeros((ORDER + 1, ORDER + 1))
        c[0, 0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, which, at, order=ORDER):
        """Jet of the coordinate ``x1`` (which=1) or ``x2`` (which=2) at ``at``."""
        c = np.zeros((ORDER + 1, ORDER + 1))
        c[0, 0] = at[which - 1]
        if which == 1:
            c[1, 0] = 1.0
        else:
            c[0, 1] = 1.0
        return cls(c, order)

    @property
    def value(self):
        return float(self.c[0, 0])

    def partial(self, n1=0, n2=0):
        """The partial derivative d^n1/dx1^n1 d^n2/dx2^n2 at the base point."""
        if n1 + n2 > self.order:
            raise ValueError("derivative beyond the jet order")
        return float(self.c[n1, n2]) * math.factorial(n1) * math.factorial(n2)

    def diff(self, which):
        """Jet of the partial derivative; the order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        out = np.zeros_like(self.c)
        k = np.arange(1, ORDER + 1)
        if which == 1:
            out[:-1, :] = self.c[1:, :] * k[:, None]
        else:
            out[:, :-1] = self.c[:, 1:] * k[None, :]
        return Jet2(out, self.order - 1)

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        if isinstance(other, (int, float)) or hasattr(other, "__float__"):
            return Jet2.constant(float(other), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Jet2(self.c + other.c, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.c, self.order)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Jet2(self.c - other.c, min(self.order, other.order))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        out = np.zeros((ORDER + 1, ORDER + 1))
        for a in range(order + 1):
            for b in range(order + 1 - a):
                s = 0.0
                for i in range(a + 1):
                    for j in range(b + 1):
                        s += self.c[i, j] * other.c[a - i, b - j]
                out[a, b] = s
        return Jet2(out, order)

    __rmul__ = __mul__

    def _series(self, derivs):
        """Compose ``f`` (given by its derivatives at the base value) with self."""
        h = Jet2(self.c.copy(), self.order)
        h.c[0, 0] = 0.0
        out = Jet2.constant(derivs[0], self.order)
        power = Jet2.constant(1.0, self.order)
        for n in range(1, self.order + 1):
            power = power * h
            out = out + power * (derivs[n] / math.factorial(n))
        return out

    def reciprocal(self):
        v = self.value
        if v == 0.0:
            raise DomainError("division by a jet vanishing at the base point")
        derivs = [(-1) ** n * math.factorial(n) / v ** (n + 1) for n in range(ORDER + 1)]
        return self._series(derivs)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        out = Jet2.constant(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out

    def apply(self, fn):
        """Compose a supported elementary function with this jet."""
        v = self.value
        if fn == "exp":
            e = math.exp(v)
            d = [e] * 4
        elif fn == "sin":
            s, c = math.sin(v), math.cos(v)
            d = [s, c, -s, -c]
        elif fn == "cos":
            s, c = math.sin(v), math.cos(v)
            d = [c, -s, -c, s]
        elif fn == "sinh":
            s, c = math.sinh(v), math.cosh(v)
            d = [s, c, s, c]
        elif fn == "cosh":
            s, c = math.sinh(v), math.cosh(v)
            d = [c, s, c, s]
        elif fn == "tanh":
            t = math.tanh(v)
            s2 = 1.0 - t * t
            d = [t, s2, -2.0 * t * s2, -2.0 * s2 * (1.0 - 3.0 * t * t)]
        else:
            raise UnsupportedFunction(f"unsupported function {fn!r}")
        return self._series(d)

    def __repr__(self):
        return f"Jet2(value={self.value!r}, order={self.order})"
