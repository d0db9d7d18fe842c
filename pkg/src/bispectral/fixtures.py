"""The three worked examples, as Python objects.

The same data ships as DSL files under ``bispectral/data``; the CLI reads
those through the parser, and the test-suite checks both routes agree.
"""
from __future__ import annotations

from functools import lru_cache

from .expkernel import ExpKernel
from .matrix import MatRF
from .operators import DiffOp
from .ratfunc import RatFunc

x = RatFunc.x()
z = RatFunc.z()


class Example:
    """Bundle of (Psi, L, F, B, Theta); F is the right eigenvalue, L Psi = Psi F."""

    def __init__(self, name, psi, l, f, b, theta, b_displayed=None):
        self.name = name
        self.b_displayed = b_displayed
        self.psi = psi
        self.l = l
        self.f = f
        self.b = b
        self.theta = theta

    @property
    def size(self) -> int:
        return self.psi.size


@lru_cache(maxsize=None)
def example1() -> Example:
    psi = ExpKernel(MatRF([[z - 1 / x, x ** -2], [0, z - 1 / x]]))
    pot = MatRF([[x ** -2, -2 * x ** -3], [0, x ** -2]]).scale(2)
    l = DiffOp("x", {2: MatRF.scalar(2, -1), 0: pot})
    b = DiffOp("z", {
        3: MatRF.identity(2),
        2: MatRF.scalar(2, -3 / z),
        1: MatRF.scalar(2, 3 * z ** -2),
        0: MatRF([[0, 3 * z ** -2], [0, 0]]),
    })
    theta = MatRF.scalar(2, x ** 3)
    f = MatRF.scalar(2, -z ** 2)
    return Example("example 1 (2x2)", psi, l, f, b, theta)


@lru_cache(maxsize=None)
def example2() -> Example:
    psi = ExpKernel(MatRF([
        [z - 1 / x, x ** -2, -x ** -3],
        [0, z - 1 / x, x ** -2],
        [0, 0, z - 1 / x],
    ]))
    pot = MatRF([
        [x ** -2, -2 * x ** -3, 3 * x ** -4],
        [0, x ** -2, -2 * x ** -3],
        [0, 0, x ** -2],
    ]).scale(2)
    l = DiffOp("x", {2: MatRF.scalar(3, -1), 0: pot})
    b = DiffOp("z", {
        2: MatRF([[0, 0, 0], [0, 0, 0], [1, 0, 0]]),
        1: MatRF([[0, 0, 0], [1, 0, 0], [-2 / z, 1, 0]]),
        0: MatRF([[1, 0, 0], [-2 / z, 2, 0], [0, 0, 1]]),
    })
    theta = MatRF([[1, 0, 0], [x, 2, 0], [x ** 2, x, 1]])
    f = MatRF.scalar(3, -z ** 2)
    return Example("example 2 (3x3)", psi, l, f, b, theta)


@lru_cache(maxsize=None)
def example3() -> Example:
    pre = 1 / ((x - 2) * x * z)
    m = MatRF([
        [(x ** 3 * z ** 2 - 2 * x ** 2 * z ** 2 - 2 * x ** 2 * z + 3 * x * z + 2 * x - 2) / (x * z), 1 / x],
        [(x * z - 2) / z, x ** 2 * z - 2 * x * z - x + 1],
    ]).scale(pre)
    psi = ExpKernel(m)
    l = DiffOp("x", {
        2: MatRF([[0, 0], [0, 1]]),
        1: MatRF([[0, 1 / ((x - 2) * x ** 2)], [-1 / (x - 2), 0]]),
        0: MatRF([
            [-1 / (x ** 2 * (x - 2) ** 2), (x - 1) / (x ** 3 * (x - 2) ** 2)],
            [(2 * x - 1) / (x * (x - 2) ** 2), -(2 * x ** 2 - 4 * x + 3) / (x ** 2 * (x - 2) ** 2)],
        ]),
    })
    f = MatRF([[0, 0], [0, z ** 2]])
    # the order-2 operator alone lacks the Dz^3 term; Psi B = Theta Psi
    # only holds once it is added (see test_fixtures)
    shown = DiffOp("z", {
        2: MatRF([[0, 0], [-(2 * z + 1) / z, 0]]),
        1: MatRF([[1, 0], [2 * (z - 1) / z ** 2, 1]]),
        0: MatRF([[-1 / z, 0], [6 * z ** -3, 1 / z]]),
    })
    b = shown + DiffOp("z", {3: MatRF([[0, 0], [1, 0]])})
    theta = MatRF([[x, 0], [x ** 2 * (x - 2), x]])
    return Example("example 3 (2x2, matrix F)", psi, l, f, b, theta, b_displayed=shown)


EXAMPLES = {1: example1, 2: example2, 3: example3}


def scalar_example() -> Example:
    """psi = e^{xz}(z - 1/x) with L = -d^2 + 2/x^2, the one-pole KdV case."""
    psi = ExpKernel(MatRF([[z - 1 / x]]))
    l = DiffOp("x", {2: MatRF([[-1]]), 0: MatRF([[2 * x ** -2]])})
    b = DiffOp("z", {3: MatRF([[1]]), 2: MatRF([[-3 / z]]), 1: MatRF([[3 * z ** -2]])})
    return Example("scalar one-pole", psi, l, MatRF([[-z ** 2]]), b, MatRF([[x ** 3]]))

