"""Truncated power series (jets) over the complex numbers.

A jet stores the Taylor coefficients of a function around an expansion
center: ``f(w) ~ sum coeffs[j] * (w - center)^j``.  All arithmetic is exact
truncation -- the j-th coefficient of a product is the Cauchy convolution of
the factors, nothing is approximated beyond dropping orders above the jet
length.  Coefficient j-1 times (j-1)! is the (j-1)-th derivative at the
center, which is how the series engine extracts derivative towers.

Elementary functions are propagated by the standard convolution recurrences
(exp, log, sin/cos, powers) and the Lambert W tail is grown by fixed-point
integration of its defining ODE.  Branch choices enter only through the
constant term; tails are formal and never cross a cut.
"""

from __future__ import annotations

import cmath
import math

from . import specialfn
from .errors import DomainError

__all__ = ["Jet"]


class Jet:
    """Truncated Taylor series around ``center`` with ``order + 1`` coefficients."""

    __slots__ = ("center", "coeffs")

    def __init__(self, center: complex, coeffs):
        self.center = complex(center)
        self.coeffs = [complex(c) for c in coeffs]

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value: complex, center: complex, order: int) -> "Jet":
        c = [0j] * (order + 1)
        c[0] = complex(value)
        return cls(center, c)

    @classmethod
    def variable(cls, center: complex, order: int) -> "Jet":
        """The identity function w as a jet around center."""
        c = [0j] * (order + 1)
        c[0] = complex(center)
        if order >= 1:
            c[1] = 1.0 + 0j
        return cls(center, c)

    # -- basics --------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def coefficient(self, j: int) -> complex:
        return self.coeffs[j]

    def value(self) -> complex:
        return self.coeffs[0]

    def __repr__(self) -> str:
        return f"Jet(center={self.center}, coeffs={self.coeffs})"

    def _check(self, other: "Jet") -> None:
        if len(self.coeffs) != len(other.coeffs) or self.center != other.center:
            raise ValueError("jet arithmetic requires matching center and order")

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.center, [a + b for a, b in zip(self.coeffs, other.coeffs)])
        c = list(self.coeffs)
        c[0] += complex(other)
        return Jet(self.center, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.center, [-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.center, [a - b for a, b in zip(self.coeffs, other.coeffs)])
        c = list(self.coeffs)
        c[0] -= complex(other)
        return Jet(self.center, c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            k = complex(other)
            return Jet(self.center, [k * a for a in self.coeffs])
        self._check(other)
        n = len(self.coeffs)
        a, b = self.coeffs, other.coeffs
        out = [0j] * n
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n - i):
                out[i + j] += ai * b[j]
        return Jet(self.center, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / complex(other))
        self._check(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet":
        b = self.coeffs
        if b[0] == 0:
            raise DomainError("jet reciprocal with zero constant term")
        n = len(b)
        out = [0j] * n
        out[0] = 1.0 / b[0]
        for j in range(1, n):
            s = 0j
            for i in range(1, j + 1):
                s += b[i] * out[j - i]
            out[j] = -s / b[0]
        return Jet(self.center, out)

    # -- calculus -------------------------------------------------------

    def derivative(self) -> "Jet":
        """d/dw, same order with a zero top coefficient."""
        n = len(self.coeffs)
        out = [0j] * n
        for j in range(1, n):
            out[j - 1] = j * self.coeffs[j]
        return Jet(self.center, out)

    def antiderivative(self, constant: complex = 0j) -> "Jet":
        """Termwise integral with the given constant term."""
        n = len(self.coeffs)
        out = [0j] * n
        out[0] = complex(constant)
        for j in range(1, n):
            out[j] = self.coeffs[j - 1] / j
        return Jet(self.center, out)

    # -- elementary functions --------------------------------------------

    def exp(self) -> "Jet":
        a = self.coeffs
        n = len(a)
        out = [0j] * n
        out[0] = cmath.exp(a[0])
        for j in range(1, n):
            s = 0j
            for k in range(1, j + 1):
                s += k * a[k] * out[j - k]
            out[j] = s / j
        return Jet(self.center, out)

    def log(self, winding: int = 0) -> "Jet":
        """Principal log of the jet plus 2*pi*i*winding on the constant term.

        A real-axis constant term resolves to the upper side of the cut.
        """
        if self.coeffs[0] == 0:
            raise DomainError("jet log with zero constant term")
        head = cmath.log(specialfn.principal(self.coeffs[0])) + 2j * math.pi * winding
        return (self.derivative() / self).antiderivative(head)

    def sin_cos(self) -> tuple["Jet", "Jet"]:
        a = self.coeffs
        n = len(a)
        s = [0j] * n
        c = [0j] * n
        s[0] = cmath.sin(a[0])
        c[0] = cmath.cos(a[0])
        for j in range(1, n):
            ss = 0j
            cc = 0j
            for k in range(1, j + 1):
                ss += k * a[k] * c[j - k]
                cc += k * a[k] * s[j - k]
            s[j] = ss / j
            c[j] = -cc / j
        return Jet(self.center, s), Jet(self.center, c)

    def sin(self) -> "Jet":
        return self.sin_cos()[0]

    def cos(self) -> "Jet":
        return self.sin_cos()[1]

    def power(self, alpha: complex) -> "Jet":
        """Principal power: integer exponents by multiplication, else exp(alpha log)."""
        if isinstance(alpha, (int, float)) or (isinstance(alpha, complex) and alpha.imag == 0):
            r = complex(alpha).real
            n = round(r)
            if abs(r - n) < 1e-12 and abs(n) <= 512:
                if n == 0:
                    return Jet.constant(1.0, self.center, self.order)
                base = self if n > 0 else self.reciprocal()
                out = base
                for _ in range(abs(n) - 1):
                    out = out * base
                return out
        return (self.log() * complex(alpha)).exp()

    def sqrt(self) -> "Jet":
        return self.power(0.5)

    def lambertw(self, branch: int = 0) -> "Jet":
        """W applied to the jet, on the given branch at the constant term.

        The tail satisfies W' = W / (u (1 + W)) * u'; one fixed-point sweep
        per order pins one more coefficient.
        """
        u0 = specialfn.principal(self.coeffs[0])
        w0 = specialfn.lambert_w(branch, u0)
        if abs(1.0 + w0) < 1e-12:
            raise DomainError("lambertw jet at the branch point W = -1")
        order = self.order
        du = self.derivative()
        w = Jet.constant(w0, self.center, order)
        for _ in range(order):
            w = (w / (self * (1.0 + w)) * du).antiderivative(w0)
        return w

    def compose(self, inner: "Jet") -> "Jet":
        """self(inner(w)): inner's constant term must equal self's center."""
        if inner.coeffs[0] != self.center:
            raise ValueError("composition requires inner value == outer center")
        shifted = Jet(inner.center, [0j] + inner.coeffs[1:])
        out = Jet.constant(0.0, inner.center, inner.order)
        for c in reversed(self.coeffs):
            out = out * shifted + c
        return out
