"""The worked examples: eigen-identities and agreement of the two data routes."""
from __future__ import annotations

import pytest

from bispectral.cli import example_text
from bispectral.dsl import parse
from bispectral.expkernel import apply_left, apply_right, derivatives, mult_left, mult_right
from bispectral.fixtures import EXAMPLES, example3, scalar_example
from bispectral.matrix import MatRF


@pytest.mark.parametrize("n", [1, 2, 3])
def test_left_eigen_identity(n):
    e = EXAMPLES[n]()
    assert apply_left(e.l, e.psi) == mult_right(e.psi, e.f)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_right_eigen_identity(n):
    e = EXAMPLES[n]()
    assert apply_right(e.psi, e.b) == mult_left(e.theta, e.psi)


def test_scalar_example():
    e = scalar_example()
    assert apply_left(e.l, e.psi) == mult_right(e.psi, e.f)
    assert apply_right(e.psi, e.b) == mult_left(e.theta, e.psi)


def test_example3_displayed_operator_misses_third_order_term():
    # the order-2 operator alone leaves exactly -(d/dz)^3 Psi [[0,0],[1,0]]
    e = example3()
    resid = apply_right(e.psi, e.b_displayed) - mult_left(e.theta, e.psi)
    d3 = derivatives(e.psi, "z", 3)[3]
    assert resid.m == -(d3 @ MatRF([[0, 0], [1, 0]]))
    assert not resid.m.is_zero()
    assert e.b.order == 3 and e.b_displayed.order == 2


def test_example1_l_is_matrix_kdv_shape():
    e = EXAMPLES[1]()
    assert e.l.order == 2
    assert e.l.coeff(2) == MatRF.scalar(2, -1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_files_match_embedded(n):
    e = EXAMPLES[n]()
    pf = parse(example_text(n))
    size = e.size
    assert pf.get("Psi", size) == e.psi
    assert pf.get("L", size) == e.l
    assert pf.matrix("F", size) == e.f
    assert pf.get("B", size) == e.b
    assert pf.matrix("Theta", size) == e.theta
    if e.b_displayed is not None:
        assert pf.get("B_displayed", size) == e.b_displayed
