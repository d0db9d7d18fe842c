"""Conjectured families: parameter counts, truncation, closure."""
from __future__ import annotations

from fractions import Fraction

import pytest

from bispectral.families import (C1, C2, F3, _form, algebra_closure_check, conjecture_family,
                                 conjecture_subspace, corrupted_family, get_family)
from bispectral.matrix import MatRF
from bispectral.ratfunc import RatFunc

X, Z = RatFunc.x(), RatFunc.z()


def test_form_parser():
    assert _form("r22_1 - 2r11_1 + r12_0") == {"r22_1": 1, "r11_1": -2, "r12_0": 1}
    assert _form("0") == {}
    with pytest.raises(ValueError):
        _form("r11_0 +")


@pytest.mark.parametrize("which,deg,count", [
    ("C1", 0, 2), ("C1", 1, 4), ("C1", 2, 7), ("C1", 3, 10), ("C1", 4, 14),
    ("C2", 0, 5), ("C2", 2, 15), ("C2", 5, 39), ("C2", 6, 48),
    ("F3", 0, 2), ("F3", 1, 3), ("F3", 2, 5), ("F3", 3, 9),
])
def test_parameter_counts(which, deg, count):
    assert len(conjecture_family(which, deg)) == count


def test_c1_degree3_members():
    fam = conjecture_family("C1", 3)
    # x^3 I lies in the family (the known example-1 eigenvalue)
    from bispectral.solver import compare_spaces
    assert compare_spaces([MatRF.scalar(2, X ** 3)], fam, deg=3).relation == "computed_subset"


def test_subspace_drops_coupled_directions():
    # degree-2 parameters of C2 couple into degree 3..5 entries
    assert len(conjecture_subspace("C2", 2)) == 12
    assert len(conjecture_subspace("C2", 5)) == 39
    assert len(conjecture_subspace("C1", 2)) == 6
    assert len(conjecture_subspace("C1", 3)) == 10
    assert len(conjecture_subspace("F3", 1)) == 1


def test_f3_shapes():
    m = conjecture_family("F3", 2)
    assert all(b.depends_only_on("z") for b in m)
    assert F3.scale[2] == Fraction(1, 2)


def test_get_family_errors():
    assert get_family("C1") is C1
    with pytest.raises(ValueError):
        get_family("C9")
    with pytest.raises(ValueError):
        conjecture_family("C1", -1)


@pytest.mark.parametrize("which,deg", [("C1", 6), ("C2", 6), ("F3", 4)])
def test_closure(which, deg):
    var = get_family(which).var
    res = algebra_closure_check(conjecture_family(which, deg), deg, var)
    assert res.closed
    n = len(conjecture_family(which, deg))
    assert res.products_checked == n * n


@pytest.mark.parametrize("which,deg", [("C1", 6), ("C2", 6), ("F3", 4)])
def test_corrupted_family_not_closed(which, deg):
    var = get_family(which).var
    res = algebra_closure_check(corrupted_family(which, deg), deg, var)
    assert not res.closed
    i, j, prod = res.witness
    assert isinstance(prod, MatRF)


def test_closure_on_computed_space():
    from bispectral.fixtures import example1
    from bispectral.solver import BAnsatz, solve_theta_space
    space = solve_theta_space(example1().psi, 3, BAnsatz(6, -6, 0))
    assert algebra_closure_check(space.eigen_basis, 3).closed


def test_two_element_counterexample():
    # span{I, x e12} is an algebra, span{x e12, x e21} is not
    e12 = MatRF([[0, X], [0, 0]])
    e21 = MatRF([[0, 0], [X, 0]])
    assert algebra_closure_check([MatRF.identity(2), e12], 2).closed
    assert not algebra_closure_check([e12, e21], 2).closed
