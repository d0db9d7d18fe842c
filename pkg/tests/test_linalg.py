"""Exact Gauss-Jordan elimination and kernels, checked against sympy."""
from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bispectral.linalg import EchelonSpan, LinearSystem, nullspace, rank, row_basis, rref
from strategies import K, small_fracs


def system_of(dense):
    s = LinearSystem(len(dense[0]))
    for row in dense:
        s.add_row({j: Fraction(v) for j, v in enumerate(row)})
    return s


def test_identity_has_trivial_kernel():
    assert nullspace(system_of([[1, 0], [0, 1]])) == []


def test_zero_system_full_kernel():
    s = LinearSystem(3)
    assert nullspace(s) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_single_equation():
    assert nullspace(system_of([[1, 1]])) == [[-1, 1]]


def test_rref_unique_pivots_unit():
    rows, cols = rref([{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 2: Fraction(1)}], 3)
    assert cols == [0, 1]
    assert rows[0] == {0: 1, 2: 1}
    assert rows[1] == {1: 1, 2: Fraction(-1, 2)}


def test_extension_field_kernel():
    a = K.gen()
    s = LinearSystem(2)
    s.add_row({0: a, 1: Fraction(1)})
    (v,) = nullspace(s)
    assert a * v[0] + v[1] == 0


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(small_fracs, min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=200)
@given(matrices)
def test_kernel_matches_sympy(dense):
    s = system_of(dense)
    ker = nullspace(s)
    sm = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in dense])
    assert len(ker) == len(sm.nullspace())
    assert rank(dense) == sm.rank()
    for v in ker:
        assert all(r == 0 for r in s.residual(v))


@settings(max_examples=100)
@given(matrices)
def test_row_basis_and_membership(dense):
    n = len(dense[0])
    basis = row_basis(dense, n)
    span = EchelonSpan(dense, n)
    assert span.dim == len(basis)
    for row in dense:
        assert span.contains(row)
    combo = [sum((r[j] for r in dense), Fraction(0)) for j in range(n)]
    assert span.contains(combo)


def test_row_order_does_not_change_result():
    dense = [[1, 2, 3, 4], [2, 4, 6, 9], [0, 0, 1, 1], [3, 6, 10, 14]]
    a = nullspace(system_of(dense))
    b = nullspace(system_of(dense[::-1]))
    assert a == b
