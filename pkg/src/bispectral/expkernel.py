"""Functions of the form e^{xz} M(x, z) with M a matrix of rational functions.

The class is closed under d/dx, d/dz and matrix multiplication on either
side, so every identity between such functions reduces to an identity
between their M parts.
"""
from __future__ import annotations

from typing import List

from .matrix import DimensionError, MatRF
from .operators import DiffOp, OperatorMismatchError
from .ratfunc import RatFunc

_X = RatFunc.x()
_Z = RatFunc.z()


class ExpKernel:
    __slots__ = ("m",)

    def __init__(self, m: MatRF):
        if not isinstance(m, MatRF):
            m = MatRF([[m]])
        self.m = m

    @classmethod
    def plane_wave(cls, n: int) -> "ExpKernel":
        return cls(MatRF.identity(n))

    @property
    def size(self) -> int:
        return self.m.rows

    @property
    def shape(self):
        return self.m.shape

    def __eq__(self, other):
        if not isinstance(other, ExpKernel):
            return NotImplemented
        return self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __add__(self, other: "ExpKernel") -> "ExpKernel":
        return ExpKernel(self.m + other.m)

    def __sub__(self, other: "ExpKernel") -> "ExpKernel":
        return ExpKernel(self.m - other.m)

    def __repr__(self):
        return f"ExpKernel(e^(xz) * {self.m.to_text()})"


def dx(psi: ExpKernel) -> ExpKernel:
    return ExpKernel(psi.m.scale(_Z) + psi.m.derivative("x"))


def dz(psi: ExpKernel) -> ExpKernel:
    return ExpKernel(psi.m.scale(_X) + psi.m.derivative("z"))


def derivatives(psi: ExpKernel, var: str, upto: int) -> List[MatRF]:
    """M parts of psi, d psi, ..., d^upto psi with respect to ``var``."""
    step = dx if var == "x" else dz
    out = [psi]
    for _ in range(upto):
        out.append(step(out[-1]))
    return [k.m for k in out]


def apply_left(l: DiffOp, psi: ExpKernel) -> ExpKernel:
    """L Psi = sum_i A_i(x) (d_x^i Psi)."""
    if l.var != "x":
        raise OperatorMismatchError("apply_left needs a left-acting operator in x")
    if l.size != psi.m.rows:
        raise DimensionError(f"operator size {l.size} does not match function with {psi.m.rows} rows")
    ms = derivatives(psi, "x", max(l.order, 0))
    acc = MatRF.zeros(*psi.shape)
    for i, a in l.coeffs.items():
        acc = acc + a @ ms[i]
    return ExpKernel(acc)


def apply_right(psi: ExpKernel, b: DiffOp) -> ExpKernel:
    """Psi B = sum_{i>=0} (d_z^i Psi) b_i(z); the order-0 term is included."""
    if b.var != "z":
        raise OperatorMismatchError("apply_right needs a right-acting operator in z")
    if b.size != psi.m.cols:
        raise DimensionError(f"operator size {b.size} does not match function with {psi.m.cols} columns")
    ms = derivatives(psi, "z", max(b.order, 0))
    acc = MatRF.zeros(*psi.shape)
    for i, c in b.coeffs.items():
        acc = acc + ms[i] @ c
    return ExpKernel(acc)


def mult_left(theta: MatRF, psi: ExpKernel) -> ExpKernel:
    """Theta(x) Psi; Theta must not involve z."""
    if not theta.depends_only_on("x"):
        raise ValueError("left multiplier must be a function of x only")
    return ExpKernel(theta @ psi.m)


def mult_right(psi: ExpKernel, f: MatRF) -> ExpKernel:
    """Psi F(z); F must not involve x."""
    if not f.depends_only_on("z"):
        raise ValueError("right multiplier must be a function of z only")
    return ExpKernel(psi.m @ f)
