"""Exact scalars: rationals (``fractions.Fraction``) and elements of a simple
algebraic extension Q[a]/(m(a)).

Rationals are plain ``Fraction`` objects.  Extension elements are
``ExtElem`` instances bound to an ``ExtField``; they interoperate with
``int`` and ``Fraction`` through the usual operator protocol, so polynomial
code can stay agnostic of which field it runs over.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from . import upoly


class NotInvertibleError(ArithmeticError):
    """Raised when an extension residue has no inverse (reducible modulus)."""


class ExtField:
    """The field Q[name]/(modulus) for a monic modulus with rational coefficients.

    The modulus is trusted to be irreducible; a reducible modulus only shows
    up when some element turns out not to be invertible.
    """

    __slots__ = ("name", "modulus")

    def __init__(self, modulus: Sequence, name: str = "a"):
        mod = upoly.strip([Fraction(c) for c in modulus])
        if len(mod) < 2:
            raise ValueError("extension modulus must have degree >= 1")
        if mod[-1] != 1:
            lead = mod[-1]
            mod = [c / lead for c in mod]
        self.modulus = tuple(mod)
        self.name = name

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def __eq__(self, other):
        return isinstance(other, ExtField) and self.modulus == other.modulus and self.name == other.name

    def __hash__(self):
        return hash((self.modulus, self.name))

    def __repr__(self):
        return f"ExtField({list(map(str, self.modulus))}, name={self.name!r})"

    def gen(self) -> "ExtElem":
        return ExtElem(self, (Fraction(0), Fraction(1)))

    def __call__(self, coeffs) -> "ExtElem":
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        return ExtElem(self, coeffs)

    def modulus_text(self) -> str:
        return upoly.to_text(self.modulus, self.name)


class ExtElem:
    """A residue class c0 + c1*a + ... modulo the field's modulus."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ExtField, coeffs):
        c = [Fraction(v) for v in coeffs]
        if len(c) > field.degree:
            c = upoly.rem(c, list(field.modulus))
        c = upoly.strip(c)
        self.field = field
        self.coeffs = tuple(c)

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ExtElem):
            if other.field != self.field:
                raise ValueError("cannot mix elements of different extension fields")
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) if other else ()
        return None

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElem(self.field, upoly.add(self.coeffs, o))

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.field, [-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElem(self.field, upoly.sub(self.coeffs, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElem(self.field, upoly.sub(o, self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElem(self.field, upoly.mul(self.coeffs, o))

    __rmul__ = __mul__

    def inverse(self) -> "ExtElem":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = upoly.xgcd(list(self.coeffs), list(self.field.modulus))
        if len(g) != 1:
            raise NotInvertibleError(f"modulus reducible at this element: {self}")
        return ExtElem(self.field, [c / g[0] for c in s])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return ExtElem(self.field, [c / other for c in self.coeffs])
        if isinstance(other, ExtElem):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ExtElem(self.field, (1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, ExtElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((Fraction(other),) if other else ())
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"ExtElem({self})"

    def __str__(self):
        return upoly.to_text(self.coeffs, self.field.name)


Scalar = Union[Fraction, ExtElem]


def to_scalar(v) -> Scalar:
    """Coerce ints to Fraction; collapse rational extension elements."""
    if isinstance(v, ExtElem):
        return v.coeffs[0] if len(v.coeffs) == 1 else (v if v.coeffs else Fraction(0))
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"not an exact scalar: {v!r}")


def inverse(s) -> Scalar:
    """Multiplicative inverse of a nonzero scalar."""
    if isinstance(s, ExtElem):
        return to_scalar(s.inverse())
    if not s:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(s)


def bit_size(s) -> int:
    """Total bit length of the numerators and denominators making up ``s``."""
    if isinstance(s, ExtElem):
        return sum(bit_size(c) for c in s.coeffs)
    s = Fraction(s)
    return s.numerator.bit_length() + s.denominator.bit_length()


def scalar_text(s, *, wrap: bool = False) -> str:
    """Exact text form: ``p/q`` for rationals, a polynomial in the generator otherwise."""
    if isinstance(s, ExtElem):
        if s.is_rational():
            return scalar_text(s.as_rational(), wrap=wrap)
        t = str(s)
        return f"({t})" if wrap else t
    s = Fraction(s)
    t = str(s)
    if wrap and (s < 0 or s.denominator != 1):
        return f"({t})"
    return t
