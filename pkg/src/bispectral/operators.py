"""Differential operators with matrix rational-function coefficients.

Two rings are modeled.  Left-acting operators live in x and act on a
matrix function from the left, ``L(Psi) = sum_i A_i(x) d_x^i Psi``.
Right-acting operators live in z and act from the right,
``(Psi)B = sum_i (d_z^i Psi) b_i(z)``.  Each ring gets its own composition
routine so that acting twice equals acting once with the product.
"""
from __future__ import annotations

from math import comb
from typing import Dict, Mapping, Optional

from .matrix import DimensionError, MatRF
from .ratfunc import RatFunc


class OperatorMismatchError(ValueError):
    """Operators from different rings (or of different sizes) were combined."""


_SIDE_FOR_VAR = {"x": "left", "z": "right"}


class DiffOp:
    """Finite-order operator sum_i c_i * d_var^i with n x n coefficients."""

    __slots__ = ("var", "side", "size", "coeffs")

    def __init__(self, var: str, coeffs: Mapping[int, MatRF], size: Optional[int] = None):
        if var not in _SIDE_FOR_VAR:
            raise ValueError(f"operator variable must be 'x' or 'z', got {var!r}")
        clean: Dict[int, MatRF] = {}
        for k, c in coeffs.items():
            if k < 0:
                raise ValueError("negative derivative order")
            if c.rows != c.cols:
                raise DimensionError("operator coefficients must be square")
            if size is None:
                size = c.rows
            elif c.rows != size:
                raise DimensionError(f"coefficient of order {k} has size {c.rows}, expected {size}")
            if not c.depends_only_on(var):
                raise ValueError(f"coefficient of order {k} is not univariate in {var}: {c}")
            if not c.is_zero():
                clean[int(k)] = c
        if size is None:
            raise DimensionError("cannot infer operator size from an empty coefficient map")
        self.var = var
        self.side = _SIDE_FOR_VAR[var]
        self.size = size
        self.coeffs = dict(sorted(clean.items()))

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, var: str, size: int) -> "DiffOp":
        return cls(var, {}, size)

    @classmethod
    def mult(cls, var: str, m: MatRF) -> "DiffOp":
        """The order-0 operator multiplying by ``m``."""
        return cls(var, {0: m}, m.rows)

    @classmethod
    def identity(cls, var: str, size: int) -> "DiffOp":
        return cls.mult(var, MatRF.identity(size))

    @classmethod
    def derivation(cls, var: str, size: int, power: int = 1) -> "DiffOp":
        return cls(var, {power: MatRF.identity(size)}, size)

    # -- queries ----------------------------------------------------------
    @property
    def order(self) -> int:
        return max(self.coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> MatRF:
        return self.coeffs.get(k) or MatRF.zeros(self.size)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.var == other.var and self.size == other.size and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.size, tuple(self.coeffs.items())))

    def _check(self, other: "DiffOp"):
        if not isinstance(other, DiffOp):
            raise OperatorMismatchError(f"expected DiffOp, got {type(other).__name__}")
        if self.var != other.var or self.size != other.size:
            raise OperatorMismatchError(
                f"cannot combine {self.side}-acting {self.size}x{self.size} operator in {self.var} "
                f"with {other.side}-acting {other.size}x{other.size} operator in {other.var}"
            )

    # -- linear structure -------------------------------------------------
    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return DiffOp(self.var, out, self.size)

    def __neg__(self) -> "DiffOp":
        return DiffOp(self.var, {k: -c for k, c in self.coeffs.items()}, self.size)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        return DiffOp(self.var, {k: m.scale(c) for k, m in self.coeffs.items()}, self.size)

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        return compose(self, other)

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        d = "Dx" if self.var == "x" else "Dz"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k].to_text()
            if k == 0:
                parts.append(c)
            elif self.var == "x":
                parts.append(f"{c}*{d}^{k}")
            else:
                parts.append(f"{d}^{k}*{c}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self.var}: {self.to_text()})"


def _derivs(m: MatRF, var: str, upto: int):
    out = [m]
    for _ in range(upto):
        out.append(out[-1].derivative(var))
    return out


def compose_left(a: DiffOp, b: DiffOp) -> DiffOp:
    """Product in the left (x) ring: (A o B)(Psi) = A(B(Psi))."""
    a._check(b)
    if a.var != "x":
        raise OperatorMismatchError("compose_left needs left-acting operators in x")
    out: Dict[int, MatRF] = {}
    for j, bj in b.coeffs.items():
        dbj = _derivs(bj, "x", a.order)
        for i, ai in a.coeffs.items():
            for k in range(i + 1):
                if dbj[k].is_zero():
                    continue
                term = (ai @ dbj[k]).scale(comb(i, k))
                n = i - k + j
                out[n] = out[n] + term if n in out else term
    return DiffOp("x", out, a.size)


def compose_right(b1: DiffOp, b2: DiffOp) -> DiffOp:
    """Product in the right (z) ring: Psi(B1 * B2) = (Psi B1) B2."""
    b1._check(b2)
    if b1.var != "z":
        raise OperatorMismatchError("compose_right needs right-acting operators in z")
    out: Dict[int, MatRF] = {}
    for i, ci in b1.coeffs.items():
        dci = _derivs(ci, "z", b2.order)
        for j, cj in b2.coeffs.items():
            for k in range(j + 1):
                if dci[k].is_zero():
                    continue
                term = (dci[k] @ cj).scale(comb(j, k))
                n = i + j - k
                out[n] = out[n] + term if n in out else term
    return DiffOp("z", out, b1.size)


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Ring product for whichever ring the operands live in."""
    a._check(b)
    return compose_left(a, b) if a.var == "x" else compose_right(a, b)


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return compose(a, b) - compose(b, a)


def ad_power(l: DiffOp, t: DiffOp, k: int) -> DiffOp:
    """Iterated commutator (ad L)^k (T); k = 0 gives T back."""
    if k < 0:
        raise ValueError("ad power must be nonnegative")
    l._check(t)
    cur = t
    for _ in range(k):
        if cur.is_zero():
            break
        cur = commutator(l, cur)
    return cur


def minimal_ad_order(l: DiffOp, t: DiffOp, m_max: int) -> Optional[int]:
    """Smallest m <= m_max with (ad L)^(m+1)(T) = 0, or None."""
    l._check(t)
    cur = t
    for m in range(m_max + 1):
        cur = commutator(l, cur)
        if cur.is_zero():
            return m
    return None
