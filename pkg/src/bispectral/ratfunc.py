"""Rational functions in (x, z) kept in a canonical reduced form.

The denominator is normalized to have graded-lex (x > z) leading coefficient
1 and shares no nontrivial factor with the numerator, so two RatFuncs are
equal exactly when their stored numerators and denominators are.
"""
from __future__ import annotations

from fractions import Fraction

from .poly import BiPoly, divexact, gcd
from .scalar import ExtElem, to_scalar

_POLY_ONE = BiPoly.const(1)


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None, *, _reduced: bool = False):
        if not isinstance(num, BiPoly):
            num = BiPoly.const(num)
        if den is None:
            den = _POLY_ONE
        elif not isinstance(den, BiPoly):
            den = BiPoly.const(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------
    @classmethod
    def x(cls) -> "RatFunc":
        return cls(BiPoly.x(), _reduced=True)

    @classmethod
    def z(cls) -> "RatFunc":
        return cls(BiPoly.z(), _reduced=True)

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(BiPoly.const(c), _reduced=True)

    @classmethod
    def coerce(cls, v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, BiPoly):
            return cls(v, _reduced=True)
        if isinstance(v, (int, Fraction, ExtElem)):
            return cls.const(v)
        raise TypeError(f"cannot coerce {v!r} to RatFunc")

    # -- queries ----------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_poly(self) -> bool:
        return self.den.is_const()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return to_scalar(self.num.const_value() / self.den.const_value()) if self.num else Fraction(0)

    def vars(self) -> set:
        return self.num.vars() | self.den.vars()

    def depends_only_on(self, var: str) -> bool:
        return self.vars() <= {var}

    def as_poly(self) -> BiPoly:
        if not self.is_poly():
            raise ValueError(f"{self} is not a polynomial")
        return self.num  # reduced form keeps den == 1 for polynomials

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        # With g = gcd(d1, d2), any factor shared by the new numerator and
        # denominator divides g, so only gcd(num, g) has to be removed.
        if self.den == other.den:
            g = self.den
            num, den = self.num + other.num, self.den
        else:
            g = gcd(self.den, other.den)
            if g.is_const():
                return _from_coprime(self.num * other.den + other.num * self.den, self.den * other.den)
            d1 = divexact(self.den, g)
            d2 = divexact(other.den, g)
            num, den = self.num * d2 + other.num * d1, d1 * other.den
        if not num:
            return RatFunc()
        if not g.is_const():
            h = gcd(num, g)
            if not h.is_const():
                num, den = divexact(num, h), divexact(den, h)
        return _from_coprime(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc()
        if self.den.is_const() and other.den.is_const():
            return RatFunc(self.num * other.num, _reduced=True)
        # cross-cancel before multiplying to keep sizes down
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n = divexact(self.num, g1) * divexact(other.num, g2)
        d = divexact(self.den, g2) * divexact(other.den, g1)
        return _from_coprime(n, d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("division by zero rational function")
        return _from_coprime(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _reduced=True)

    def derivative(self, var: str) -> "RatFunc":
        dn = self.num.derivative(var)
        dd = self.den.derivative(var)
        if not dd:
            return RatFunc(dn, self.den)
        # (n/d)' = (n' (d/g) - n (d'/g)) / (d (d/g)) with g = gcd(d, d'); a
        # factor shared by that numerator and denominator must divide g
        g = gcd(self.den, dd)
        d1, e = divexact(self.den, g), divexact(dd, g)
        num, den = dn * d1 - self.num * e, self.den * d1
        if not num:
            return RatFunc()
        if not g.is_const():
            h = gcd(num, g)
            if not h.is_const():
                num, den = divexact(num, h), divexact(den, h)
        return _from_coprime(num, den)

    def scale(self, c) -> "RatFunc":
        return RatFunc(self.num.scale(c), self.den, _reduced=True) if to_scalar(c) else RatFunc()

    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def normalized(self) -> "RatFunc":
        return RatFunc(self.num, self.den)

    def to_text(self) -> str:
        n = self.num.to_text()
        if self.den.is_const():
            return n
        nt = n if self.num.is_monomial() and "/" not in n else f"({n})"
        d = self.den.to_text()
        dt = d if self.den.is_monomial() and "/" not in d else f"({d})"
        return f"{nt}/{dt}"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RatFunc({self.to_text()})"


def _coerce_or_none(v):
    try:
        return RatFunc.coerce(v)
    except TypeError:
        return None


def _reduce(num: BiPoly, den: BiPoly):
    if not num:
        return BiPoly(), _POLY_ONE
    if den.is_const():
        c = den.const_value()
        return (num.scale(to_scalar(1 / c)) if c != 1 else num), _POLY_ONE
    g = gcd(num, den)
    if not g.is_const():
        num = divexact(num, g)
        den = divexact(den, g)
    lc = den.lead_coeff()
    if lc != 1:
        inv = to_scalar(1 / lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _from_coprime(num: BiPoly, den: BiPoly) -> RatFunc:
    lc = den.lead_coeff()
    if lc != 1:
        inv = to_scalar(1 / lc)
        num = num.scale(inv)
        den = den.scale(inv)
    if den.is_const():
        return RatFunc(num, _reduced=True)
    return RatFunc(num, den, _reduced=True)
