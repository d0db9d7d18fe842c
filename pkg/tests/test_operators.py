"""Operator rings in x (acting on the left) and z (acting on the right)."""
from __future__ import annotations

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bispectral.expkernel import ExpKernel, apply_left, apply_right, derivatives, dx, dz, mult_left, mult_right
from bispectral.matrix import DimensionError, MatRF
from bispectral.operators import (DiffOp, OperatorMismatchError, ad_power, commutator, compose,
                                  compose_left, compose_right, minimal_ad_order)
from bispectral.ratfunc import RatFunc
from strategies import kernels, matrices, operators

X, Z = RatFunc.x(), RatFunc.z()
sx, sz = sympy.symbols("x z")


def scalar_op(var, coeffs):
    return DiffOp(var, {k: MatRF([[c]]) for k, c in coeffs.items()})


def test_weyl_relation_left():
    d = DiffOp.derivation("x", 1)
    xm = DiffOp.mult("x", MatRF([[X]]))
    assert commutator(d, xm) == DiffOp.identity("x", 1)


def test_weyl_relation_right():
    # Psi (Dz z) = d/dz(Psi) z and Psi (z Dz) = d/dz(Psi z): they differ by Psi
    d = DiffOp.derivation("z", 1)
    zm = DiffOp.mult("z", MatRF([[Z]]))
    assert compose(zm, d) - compose(d, zm) == DiffOp.identity("z", 1)


def test_compose_left_explicit():
    # (Dx)(f) = f Dx + f'
    f = X ** 3
    got = compose_left(DiffOp.derivation("x", 1), DiffOp.mult("x", MatRF([[f]])))
    assert got == scalar_op("x", {1: f, 0: 3 * X ** 2})


def test_ad_order_scalar_free():
    l = scalar_op("x", {2: RatFunc.const(-1)})
    t = DiffOp.mult("x", MatRF([[X ** 2]]))
    assert minimal_ad_order(l, t, 10) == 2
    assert not ad_power(l, t, 2).is_zero()
    assert ad_power(l, t, 3).is_zero()


def test_ad_order_shadow_of_example_one():
    l = scalar_op("x", {2: RatFunc.const(-1), 0: 2 * X ** -2})
    assert minimal_ad_order(l, DiffOp.mult("x", MatRF([[X ** 3]])), 10) == 3
    assert minimal_ad_order(l, DiffOp.mult("x", MatRF([[X]])), 10) is None


def test_mismatch_errors():
    with pytest.raises(OperatorMismatchError):
        compose(DiffOp.identity("x", 1), DiffOp.identity("z", 1))
    with pytest.raises((OperatorMismatchError, DimensionError)):
        compose(DiffOp.identity("x", 1), DiffOp.identity("x", 2))
    with pytest.raises(ValueError):
        DiffOp("x", {0: MatRF([[Z]])})
    with pytest.raises(OperatorMismatchError):
        apply_left(DiffOp.identity("z", 1), ExpKernel(MatRF([[1]])))


def test_order_and_zero():
    assert DiffOp.zero("x", 2).order == -1
    assert DiffOp("x", {3: MatRF.zeros(2, 2), 1: MatRF.identity(2)}).order == 1


def test_text_forms():
    b = DiffOp("z", {2: MatRF([[1 / Z]]), 0: MatRF([[1]])})
    assert b.to_text() == "Dz^2*[[1/z]] + [[1]]"
    l = DiffOp("x", {1: MatRF([[X]])})
    assert l.to_text() == "[[x]]*Dx^1"


# -- the exponential kernel ----------------------------------------------------------

def test_kernel_derivatives_match_sympy():
    m = MatRF([[Z - 1 / X, X ** -2], [0, (X * Z + 1) / (Z - 2)]])
    psi = ExpKernel(m)
    sm = sympy.Matrix([[sz - 1 / sx, sx ** -2], [0, (sx * sz + 1) / (sz - 2)]]) * sympy.exp(sx * sz)
    for var, sv in (("x", sx), ("z", sz)):
        parts = derivatives(psi, var, 3)
        for k, part in enumerate(parts):
            expect = sympy.diff(sm, sv, k) / sympy.exp(sx * sz)
            for (r, c, v) in part.iter_entries():
                got = sympy.sympify(v.to_text().replace("^", "**"), locals={"x": sx, "z": sz})
                assert sympy.simplify(got - expect[r, c]) == 0


def test_plane_wave_eigen():
    psi = ExpKernel.plane_wave(2)
    l = DiffOp.derivation("x", 2, 2)
    assert apply_left(l, psi) == mult_right(psi, MatRF.scalar(2, Z ** 2))
    b = DiffOp.derivation("z", 2, 3)
    assert apply_right(psi, b) == mult_left(MatRF.scalar(2, X ** 3), psi)


def test_apply_right_includes_order_zero():
    psi = ExpKernel.plane_wave(1)
    b = DiffOp("z", {0: MatRF([[Z]])})
    assert apply_right(psi, b) == ExpKernel(MatRF([[Z]]))


def test_mult_side_checks():
    psi = ExpKernel.plane_wave(1)
    with pytest.raises(ValueError):
        mult_left(MatRF([[Z]]), psi)
    with pytest.raises(ValueError):
        mult_right(psi, MatRF([[X]]))


# -- properties (200 cases unless noted) ----------------------------------------------

triples = st.integers(1, 3).flatmap(
    lambda n: st.tuples(*(operators("x", n) for _ in range(3))))
triples_z = st.integers(1, 3).flatmap(
    lambda n: st.tuples(*(operators("z", n) for _ in range(3))))


@given(triples)
def test_associativity_left(t):
    a, b, c = t
    assert compose_left(a, compose_left(b, c)) == compose_left(compose_left(a, b), c)


@given(triples_z)
def test_associativity_right(t):
    a, b, c = t
    assert compose_right(a, compose_right(b, c)) == compose_right(compose_right(a, b), c)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(matrices(n, "x"), matrices(n, "x"))))
def test_order_zero_is_matrix_product_left(pair):
    a, b = pair
    got = compose_left(DiffOp.mult("x", a), DiffOp.mult("x", b))
    assert got == DiffOp("x", {0: a @ b}, a.rows)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(matrices(n, "z"), matrices(n, "z"))))
def test_order_zero_is_matrix_product_right(pair):
    a, b = pair
    got = compose_right(DiffOp.mult("z", a), DiffOp.mult("z", b))
    assert got == DiffOp("z", {0: a @ b}, a.rows)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(operators("x", n), operators("x", n))))
def test_order_bound(pair):
    a, b = pair
    assume(not a.is_zero() and not b.is_zero())
    c = compose(a, b)
    assert c.order <= a.order + b.order
    lead = a.coeff(a.order) @ b.coeff(b.order)
    assert (c.order == a.order + b.order) == (not lead.is_zero())


@given(matrices(1, "x"))
def test_leibniz_base_relation(f):
    # Dx o f = f o Dx + f'
    d = DiffOp.derivation("x", 1)
    fm = DiffOp.mult("x", f)
    assert compose(d, fm) == compose(fm, d) + DiffOp.mult("x", f.derivative("x"))


@given(st.integers(1, 2).flatmap(lambda n: st.tuples(operators("x", n, 1), operators("x", n, 1),
                                                      operators("x", n, 1))))
def test_ad_is_derivation(t):
    l, a, b = t
    lhs = commutator(l, compose(a, b))
    rhs = compose(commutator(l, a), b) + compose(a, commutator(l, b))
    assert lhs == rhs


@given(st.integers(1, 2).flatmap(lambda n: st.tuples(operators("x", n), operators("x", n), kernels(n))))
def test_left_action_homomorphism(t):
    a, b, psi = t
    assert apply_left(compose_left(a, b), psi) == apply_left(a, apply_left(b, psi))


@given(st.integers(1, 2).flatmap(lambda n: st.tuples(operators("z", n), operators("z", n), kernels(n))))
def test_right_action_homomorphism(t):
    b1, b2, psi = t
    assert apply_right(psi, compose_right(b1, b2)) == apply_right(apply_right(psi, b1), b2)


@given(st.integers(1, 2).flatmap(lambda n: st.tuples(operators("x", n), operators("z", n), kernels(n))))
def test_two_sided_actions_commute(t):
    l, b, psi = t
    assert apply_left(l, apply_right(psi, b)) == apply_right(apply_left(l, psi), b)


@given(st.integers(1, 3).flatmap(kernels))
def test_dx_dz_commute(psi):
    assert dx(dz(psi)) == dz(dx(psi))
