"""Acceptance run: one [PASS]/[FAIL] line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are shown even
without ``-s``).  Every check is exact; runtimes are wall-clock limits.
"""
from __future__ import annotations

import time

import pytest

from bispectral.expkernel import apply_left, apply_right, mult_left, mult_right
from bispectral.families import algebra_closure_check, conjecture_family, corrupted_family
from bispectral.fixtures import example1, example2, example3
from bispectral.kdv import (KdVConfig, admissible_dim, check_constraints, crosscheck_scalar,
                            cube_roots_of_minus_one, verify_log_identity)
from bispectral.matrix import MatRF
from bispectral.operators import DiffOp, ad_power, minimal_ad_order
from bispectral.poly import BiPoly
from bispectral.ratfunc import RatFunc
from bispectral.solver import BAnsatz, LAnsatz, compare_spaces, solve_f_space, solve_theta_space

import test_algebra
import test_operators

X = RatFunc.x()
x = BiPoly.x()

# the ad-order of x^3 I under the example-1 operator, frozen after the first run
FROZEN_AD_ORDER = 3


@pytest.fixture
def verdict(capsys):
    """Print the criterion line (bypassing capture), then assert it."""
    def _verdict(n, what, ok, started, limit_s=None, detail=""):
        elapsed = time.perf_counter() - started
        in_time = limit_s is None or elapsed < limit_s
        good = ok and in_time
        limit = f", limit {limit_s:g} s" if limit_s is not None else ""
        extra = f" -- {detail}" if detail else ""
        with capsys.disabled():
            print(f"\n[{'PASS' if good else 'FAIL'}] criterion {n}: {what} ({elapsed:.2f} s{limit}){extra}")
        assert ok, f"criterion {n}: {detail or what}"
        assert in_time, f"criterion {n}: took {elapsed:.1f} s"
    return _verdict


def _residuals(e, b=None):
    left = apply_left(e.l, e.psi) - mult_right(e.psi, e.f)
    right = apply_right(e.psi, e.b if b is None else b) - mult_left(e.theta, e.psi)
    return left.m, right.m


def test_criterion_01_example1(verdict):
    t0 = time.perf_counter()
    e = example1()
    left, right = _residuals(e)
    ok = left.is_zero() and right.is_zero() and e.f == MatRF.scalar(2, -RatFunc.z() ** 2) \
        and e.theta == MatRF.scalar(2, X ** 3)
    verdict(1, "example 1: L Psi = -z^2 Psi and Psi B = x^3 Psi exactly", ok, t0, 1)


def test_criterion_02_example2(verdict):
    t0 = time.perf_counter()
    e = example2()
    left, right = _residuals(e)
    ok = (left.is_zero() and right.is_zero() and e.b.order == 2
          and e.theta == MatRF([[1, 0, 0], [X, 2, 0], [X ** 2, X, 1]]))
    verdict(2, "example 2: L Psi = -z^2 Psi and the order-2 B identity exactly", ok, t0, 1)


def test_criterion_03_example3_displayed(verdict):
    t0 = time.perf_counter()
    e = example3()
    # the identity is checked with the order-2 operator B_displayed as given
    left, right = _residuals(e, e.b_displayed)
    bad = [(i, j, right.entries[i][j].to_text()) for i in range(2) for j in range(2)
           if right.entries[i][j]]
    detail = "" if not bad else f"B-residual nonzero at {bad[0][:2]}: {bad[0][2][:60]}..."
    ok = (left.is_zero() and right.is_zero() and e.f == MatRF([[0, 0], [0, RatFunc.z() ** 2]])
          and e.theta == MatRF([[X, 0], [X ** 2 * (X - 2), X]]))
    verdict(3, "example 3: L Psi = Psi F and the displayed B identity exactly", ok, t0, 1, detail)


def test_criterion_04_c1_degree3(verdict):
    t0 = time.perf_counter()
    space = solve_theta_space(example1().psi, 3, BAnsatz(6, -6, 0))
    cmp = compare_spaces(space, conjecture_family("C1", 3))
    detail = f"theta_dim {space.theta_dim}, relation {cmp.relation}"
    verdict(4, "C1 at degree 3: theta_dim 10 and equal", space.theta_dim == 10 and cmp.equal,
            t0, 300, detail)


def test_criterion_05_c2_degree2(verdict):
    t0 = time.perf_counter()
    space = solve_theta_space(example2().psi, 2, BAnsatz(6, -8, 0))
    cmp = compare_spaces(space, conjecture_family("C2", 2))
    detail = f"theta_dim {space.theta_dim}, relation {cmp.relation}"
    verdict(5, "C2 at degree 2: theta_dim 15 and equal", space.theta_dim == 15 and cmp.equal,
            t0, 600, detail)


def test_criterion_06_f3_degree2(verdict):
    t0 = time.perf_counter()
    space = solve_f_space(example3().psi, 2, LAnsatz(2, x ** 3 * (x - 2) ** 3, 8))
    cmp = compare_spaces(space, conjecture_family("F3", 2))
    detail = f"f_dim {space.f_dim}, relation {cmp.relation}"
    verdict(6, "F3 at degree 2 with d = x^3 (x-2)^3, D = 8: f_dim 5 and equal",
            space.f_dim == 5 and cmp.equal, t0, 300, detail)


def test_criterion_07_ad_condition(verdict):
    t0 = time.perf_counter()
    l = example1().l
    t = DiffOp.mult("x", MatRF.scalar(2, X ** 3))
    m = minimal_ad_order(l, t, 10)
    ok = (m == FROZEN_AD_ORDER and ad_power(l, t, m + 1).is_zero() and not ad_power(l, t, m).is_zero())
    # scalar shadow -d^2 + 2/x^2 with x^3 gives the same order
    shadow = DiffOp("x", {2: MatRF([[-1]]), 0: MatRF([[2 * X ** -2]])})
    ms = minimal_ad_order(shadow, DiffOp.mult("x", MatRF([[X ** 3]])), 10)
    verdict(7, "ad-condition for x^3 I: finite m, frozen value, scalar shadow agrees",
            ok and ms == m, t0, None, f"m = {m}, shadow m = {ms}")


def test_criterion_08_kdv(verdict):
    t0 = time.perf_counter()
    problems = []
    for nu in (1, 2, 3):
        cfg = KdVConfig.of((0, nu))
        if any(r != 0 for _, _, r in check_constraints(cfg)) or not verify_log_identity(cfg):
            problems.append(f"single pole nu={nu}")
        if admissible_dim(cfg, 5) != 6 - nu:
            problems.append(f"admissible_dim nu={nu}")
    res = check_constraints(cube_roots_of_minus_one())
    if not res or any(r != 0 for _, _, r in res):
        problems.append("cube roots of -1")
    neg = {(p, j): r for p, j, r in check_constraints(KdVConfig.of((0, 1), (1, 1)))}
    if neg.get((0, 1)) != 2:
        problems.append(f"negative control residual {neg.get((0, 1))}")
    verdict(8, "KdV suite: single poles, cube roots of -1, negative control", not problems, t0,
            None, ", ".join(problems))


def test_criterion_09_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    results = [crosscheck_scalar(n) for n in range(6)]
    dims = [r.solver_dim for r in results]
    verdict(9, "matrix solver equals derivative conditions for one simple pole, N = 0..5",
            all(r.ok for r in results), t0, 120, f"dims {dims}")


PROPERTY_TESTS = [
    test_operators.test_associativity_left,
    test_operators.test_associativity_right,
    test_operators.test_leibniz_base_relation,
    test_operators.test_left_action_homomorphism,
    test_operators.test_right_action_homomorphism,
    test_operators.test_two_sided_actions_commute,
    test_operators.test_ad_is_derivation,
    test_algebra.test_field_axioms_ratfunc,
    test_algebra.test_field_axioms_extension,
    test_algebra.test_normalization_idempotent,
]


def test_criterion_10_property_suites(verdict):
    t0 = time.perf_counter()
    failures = []
    for fn in PROPERTY_TESTS:
        try:
            fn()
        except Exception as exc:  # report every suite, not just the first failure
            failures.append(f"{fn.__name__}: {type(exc).__name__}")
    verdict(10, f"{len(PROPERTY_TESTS)} property suites, 200 cases each", not failures, t0, 120,
            "; ".join(failures))


def test_criterion_11_closure(verdict):
    t0 = time.perf_counter()
    good = [algebra_closure_check(conjecture_family(w, 6), 6).closed for w in ("C1", "C2")]
    bad = [algebra_closure_check(corrupted_family(w, 6), 6).closed for w in ("C1", "C2")]
    verdict(11, "C1 and C2 at N = 6 are closed, corrupted families are not",
            all(good) and not any(bad), t0, None, f"closed {good}, corrupted closed {bad}")
