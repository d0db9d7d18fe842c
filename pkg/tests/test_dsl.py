"""Problem-file language: parsing, errors with positions, round trips."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bispectral import matrix as _matrix
from bispectral.cli import example_text
from bispectral.dsl import (Binding, DimensionError, DSLError, DSLSyntaxError, DSLTypeError, FunValue,
                            OpValue, ProblemFile, UndefinedNameError, parse, parse_expr, parse_file)
from bispectral.expkernel import ExpKernel, apply_left, derivatives
from bispectral.matrix import MatRF
from bispectral.operators import DiffOp
from bispectral.ratfunc import RatFunc
from bispectral.scalar import ExtField
from strategies import K, kernels, matrices, operators, ratfuncs

X, Z = RatFunc.x(), RatFunc.z()


def test_scalar_expressions():
    assert parse_expr("x^2 - 1/x") == X ** 2 - 1 / X
    assert parse_expr("(x*z - 1)/x") == Z - 1 / X
    assert parse_expr("x^-2") == X ** -2
    assert parse_expr("-z^2") == -(Z ** 2)  # power binds tighter than unary minus
    assert parse_expr("2^(3)") == RatFunc.const(8)


def test_matrix_and_operator_values():
    m = parse_expr("[[1, x], [0, z]]")
    assert m == MatRF([[1, X], [0, Z]])
    op = parse_expr("-Dx^2 + 2/x^2")
    assert isinstance(op, OpValue) and op.bcast
    assert op.op == DiffOp("x", {2: MatRF([[-1]]), 0: MatRF([[2 * X ** -2]])}, 1)
    lifted = op.lift(2).op
    assert lifted.coeff(0) == MatRF.scalar(2, 2 * X ** -2)


def test_operator_times_function_applies():
    v = parse_expr("(Dx - 1/x) * expxz")
    assert isinstance(v, FunValue)
    assert v.psi == apply_left(DiffOp("x", {1: MatRF([[1]]), 0: MatRF([[-1 / X]])}, 1), ExpKernel.plane_wave(1))
    assert v.psi.m == MatRF([[Z - 1 / X]])


def test_example_files_parse():
    for n in (1, 2, 3):
        pf = parse(example_text(n))
        assert {"Psi", "L", "F", "B", "Theta"} <= set(pf.names())
        assert pf.binding("L").kind == "op" and pf.binding("Psi").kind == "fun"


def test_parse_file(tmp_path):
    p = tmp_path / "s.bsp"
    p.write_text("field Q;\nfun Psi = (Dx - 1/x) * expxz;\nlet Theta = x^2;\n")
    pf = parse_file(p)
    assert pf.get("Theta") == X ** 2
    assert pf.matrix("Theta", 2) == MatRF.scalar(2, X ** 2)


def test_syntax_error_position():
    with pytest.raises(DSLSyntaxError) as ei:
        parse("field Q;\nop L = Dx + ;\n")
    assert (ei.value.line, ei.value.col) == (2, 13)
    assert "line 2" in str(ei.value)


def test_missing_semicolon():
    with pytest.raises(DSLSyntaxError) as ei:
        parse("let A = x\nlet B = z;")
    assert ei.value.line == 2


def test_bad_character():
    with pytest.raises(DSLSyntaxError):
        parse("let A = x % 2;")


def test_dimension_error():
    with pytest.raises(DimensionError) as ei:
        parse("let A = [[x], [x]] * [[x], [x]];")
    assert ei.value.line == 1
    assert isinstance(ei.value, _matrix.DimensionError)
    with pytest.raises(DimensionError):
        parse("let A = [[1, 2], [3]];")
    with pytest.raises(DimensionError):
        parse("let A = [[1, 2], [3, 4]] + [[1]];")


def test_undefined_name():
    with pytest.raises(UndefinedNameError) as ei:
        parse("let A = x;\nlet B = A + C;")
    assert (ei.value.line, ei.value.col) == (2, 13)


@pytest.mark.parametrize("text", [
    "let A = Dz * expxz;",          # z-operator from the left
    "let A = expxz * Dx;",          # x-operator from the right
    "let A = x / Dx;",
    "let A = Dx^-1;",
    "let A = [[Dx]];",
    "op L = x^2;",                  # kind mismatch
    "fun P = Dx;",
    "let A = 1/(x - x);",
])
def test_type_errors(text):
    with pytest.raises(DSLTypeError):
        parse(text)


def test_reserved_names():
    with pytest.raises(DSLError):
        parse("let x = 1;")
    with pytest.raises(DSLError):
        parse("let A = 1;\nlet A = 2;")


def test_extension_field():
    pf = parse("field Q[a]/(a^2 - a + 1);\nlet P = (x + 1)*(x - a)*(x - 1 + a);\nlet C = a^3;")
    assert pf.field == K
    assert pf.get("P") == X ** 3 + 1
    assert pf.get("C") == RatFunc.const(-1)


def test_extension_generator_needs_declaration():
    with pytest.raises(UndefinedNameError):
        parse("let A = a;")


def test_z_operator_on_right():
    pf = parse("fun P = expxz * [[z, 0], [0, 1]];\nop B = Dz*[[1, 0], [0, 0]] + Dz^0*z;\nfun R = P * B;")
    p, r = pf.get("P"), pf.get("R", 2)
    assert r.m == derivatives(p, "z", 1)[1] @ MatRF([[1, 0], [0, 0]]) + p.m * Z


def test_broadcast_scalar_in_matrix_context():
    pf = parse("let A = [[1, 0], [0, 2]] + x;")
    assert pf.get("A") == MatRF([[1 + X, 0], [0, 2 + X]])


# -- round trips --------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_example_round_trip(n):
    pf = parse(example_text(n))
    again = parse(pf.to_text())
    assert again == pf
    assert again.to_text() == pf.to_text()


def test_extension_round_trip():
    pf = parse("field Q[a]/(a^2 - a + 1);\nlet M = [[a*x, 1/(x - a)], [0, 1]];")
    assert parse(pf.to_text()) == pf


@st.composite
def problem_files(draw):
    n = draw(st.integers(1, 2))
    out = []
    for i in range(draw(st.integers(1, 4))):
        kind = draw(st.sampled_from(["scalar", "matrix", "xop", "zop", "fun"]))
        name = f"V{i}"
        if kind == "scalar":
            out.append(Binding("let", name, draw(ratfuncs())))
        elif kind == "matrix":
            out.append(Binding("let", name, draw(matrices(n))))
        elif kind == "fun":
            out.append(Binding("fun", name, FunValue(draw(kernels(n)), False)))
        else:
            var = kind[0]
            out.append(Binding("op", name, OpValue(draw(operators(var, n)), False)))
    return ProblemFile(None, out)


@given(problem_files())
def test_random_round_trip(pf):
    assert parse(pf.to_text()) == pf
