"""Exact univariate polynomials and rational functions over the rationals.

Coefficients are ``fractions.Fraction``; polynomials store them low degree
first with trailing zeros stripped. A :class:`RationalFunction` is kept in
lowest terms with a monic denominator, so equality is structural.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CoefficientBlowupError

__all__ = ["Poly", "RationalFunction", "as_fraction", "MAX_DIGITS"]

# about 10**6 decimal digits
MAX_DIGITS = 1_000_000
_MAX_BITS = int(MAX_DIGITS * 3.3219280948873626)


def as_fraction(x) -> Fraction:
    """Lossless conversion of ints, Fractions and fraction strings like ``"7/2"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} exactly; pass an int, Fraction or 'p/q' string")


def _guard(c: Fraction):
    if c.numerator.bit_length() > _MAX_BITS or c.denominator.bit_length() > _MAX_BITS:
        raise CoefficientBlowupError("coefficient exceeds 10**6 digits")


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            _guard(c)
        self.coeffs = tuple(cs)

    # construction helpers
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Poly":
        out = cls([1])
        for r in roots:
            out = out * cls([-as_fraction(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = _poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead
        dq = other.degree
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            c = rem[-1] / lead
            q[shift] = c
            for j, b in enumerate(other.coeffs):
                rem[shift + j] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly([c / self.lead for c in self.coeffs])

    def derivative(self, k: int = 1) -> "Poly":
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return Poly(cs)

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int, numeric otherwise (arrays ok)."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def compose(self, other: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def pretty(self, var: str = "λ") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = str(abs(c)) + ("·" + mono if mono else "")
            parts.append(("-" if c < 0 else "+", s))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            text += f" {sign} {s}"
        return text


def _poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RationalFunction:
    """``num / den`` in lowest terms, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized: bool = False):
        num = _poly(num) if not isinstance(num, Poly) else num
        den = Poly([1]) if den is None else _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly([1])
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num // g
                    den = den // g
                lead = den.lead
                if lead != 1:
                    num = Poly([c / lead for c in num.coeffs])
                    den = Poly([c / lead for c in den.coeffs])
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(Poly([c]))

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls(Poly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        other = _rf(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __add__(self, other):
        other = _rf(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_rf(other))

    def __rsub__(self, other):
        return _rf(other) - self

    def __mul__(self, other):
        other = _rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _rf(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            d = self.den(x)
            if d == 0:
                raise ZeroDivisionError(f"pole at {x}")
            return self.num(x) / d
        return self.num(x) / self.den(x)

    def denominator_divides(self, poly: Poly) -> bool:
        return self.den.divides(poly)

    def pole_support_in(self, points: Sequence) -> bool:
        """True when every root of the denominator is one of ``points``.

        Strips linear factors ``(x - p)`` off the denominator and checks that
        nothing but a constant is left.
        """
        d = self.den
        for p in points:
            lin = Poly([-as_fraction(p), 1])
            while d.degree > 0 and (d % lin).is_zero():
                d = d // lin
        return d.degree == 0

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.num.coeffs], "den": [str(c) for c in self.den.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return cls(Poly(data["num"]), Poly(data["den"]))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def pretty(self, var: str = "λ") -> str:
        if self.is_polynomial():
            return self.num.pretty(var)
        return f"({self.num.pretty(var)})/({self.den.pretty(var)})"


def _rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction(Poly([as_fraction(x)]))


def rf_array_eval(rf: RationalFunction, lam) -> np.ndarray:
    return rf(np.asarray(lam, dtype=complex))
