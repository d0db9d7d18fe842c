"""A small input language for problem files (``.bsp``).

Example::

    field Q;
    fun Psi = expxz * [[z - 1/x, x^-2], [0, z - 1/x]];
    op L = -Dx^2 + 2*[[x^-2, -2*x^-3], [0, x^-2]];
    let Theta = x^3;

Statements are ``field``, ``let`` (scalar or matrix), ``op`` (operator in Dx
or Dz) and ``fun`` (a function e^{xz} M).  ``*`` composes operators in their
own ring, applies an x-operator to a function on its left and a z-operator
on its right.  Scalars broadcast: ``-Dx^2`` or ``expxz`` acts as a multiple
of the identity of whatever size it meets.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional

from . import matrix as _matrix
from .expkernel import ExpKernel, apply_left, apply_right
from .matrix import MatRF
from .operators import DiffOp, OperatorMismatchError, compose
from .ratfunc import RatFunc
from .scalar import ExtField, NotInvertibleError


class DSLError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.msg = msg
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


class DSLSyntaxError(DSLError):
    pass


class UndefinedNameError(DSLError):
    pass


class DimensionError(DSLError, _matrix.DimensionError):
    pass


class DSLTypeError(DSLError):
    """Operands of incompatible kinds, e.g. a z-operator applied from the left."""


KEYWORDS = {"field", "let", "op", "fun"}
RESERVED = {"x", "z", "Dx", "Dz", "expxz", "Q"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym>[-+*/^()\[\],;=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str  # num, name, sym, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- values -------------------------------------------------------------------
# Scalars are RatFunc, matrices MatRF.  Operators and functions carry a flag
# telling whether they were built from scalars only (then they are stored at
# size 1 and broadcast on contact with a sized operand).

@dataclass(frozen=True)
class OpValue:
    op: DiffOp
    bcast: bool = False

    @property
    def size(self):
        return None if self.bcast else self.op.size

    def lift(self, n: int) -> "OpValue":
        if not self.bcast or n == 1:
            return OpValue(self.op, self.bcast and n == 1)
        coeffs = {k: MatRF.scalar(n, c.entries[0][0]) for k, c in self.op.coeffs.items()}
        return OpValue(DiffOp(self.op.var, coeffs, size=n))


@dataclass(frozen=True)
class FunValue:
    psi: ExpKernel
    bcast: bool = False

    @property
    def size(self):
        return None if self.bcast else self.psi.size

    def lift(self, n: int) -> "FunValue":
        if not self.bcast or n == 1:
            return FunValue(self.psi, self.bcast and n == 1)
        return FunValue(ExpKernel(MatRF.scalar(n, self.psi.m.entries[0][0])))


def _kind(v) -> str:
    if isinstance(v, RatFunc):
        return "scalar"
    if isinstance(v, MatRF):
        return "matrix"
    if isinstance(v, OpValue):
        return f"{v.op.var}-operator"
    if isinstance(v, FunValue):
        return "function"
    return type(v).__name__


def _size_of(v):
    if isinstance(v, RatFunc):
        return None
    if isinstance(v, MatRF):
        return v.rows if v.rows == v.cols else ("rect", v.rows, v.cols)
    return v.size


def _unify(a, b, tok):
    """Lift broadcastable operands of a pair to a common size."""
    sa, sb = _size_of(a), _size_of(b)
    if isinstance(sa, tuple) or isinstance(sb, tuple):
        return a, b
    if sa is not None and sb is not None and sa != sb:
        raise DimensionError(f"size mismatch: {sa} vs {sb}", tok.line, tok.col)
    n = sa if sa is not None else sb
    if n is None:
        return a, b
    return _lift(a, n), _lift(b, n)


def _lift(v, n):
    if isinstance(v, (OpValue, FunValue)):
        return v.lift(n)
    return v


def _as_op(v, var: str) -> OpValue:
    """Scalar or matrix promoted to an order-0 operator."""
    if isinstance(v, RatFunc):
        return OpValue(DiffOp(var, {0: MatRF([[v]])}, size=1), True)
    if not v.rows == v.cols:
        raise DimensionError(f"operator coefficients must be square, got {v.rows}x{v.cols}")
    return OpValue(DiffOp(var, {0: v}, size=v.rows))


def _scalar_or_matrix_mul(a, b, tok):
    if isinstance(a, RatFunc) and isinstance(b, RatFunc):
        return a * b
    if isinstance(a, RatFunc):
        return b.scale(a)
    if isinstance(b, RatFunc):
        return a.scale(b)
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}", tok.line, tok.col)
    return a @ b


def _add(a, b, tok, sign=1):
    if isinstance(a, (RatFunc, MatRF)) and isinstance(b, (RatFunc, MatRF)):
        if isinstance(a, RatFunc) and isinstance(b, RatFunc):
            return a + b if sign > 0 else a - b
        if isinstance(a, RatFunc):
            a = _square_scalar(a, b, tok)
        elif isinstance(b, RatFunc):
            b = _square_scalar(b, a, tok)
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise DimensionError(f"cannot add {a.rows}x{a.cols} and {b.rows}x{b.cols}", tok.line, tok.col)
        return a + b if sign > 0 else a - b
    if isinstance(a, OpValue) or isinstance(b, OpValue):
        var = a.op.var if isinstance(a, OpValue) else b.op.var
        if isinstance(a, FunValue) or isinstance(b, FunValue):
            raise DSLTypeError(f"cannot add {_kind(a)} and {_kind(b)}", tok.line, tok.col)
        a = a if isinstance(a, OpValue) else _as_op(a, var)
        b = b if isinstance(b, OpValue) else _as_op(b, var)
        if a.op.var != b.op.var:
            raise DSLTypeError("cannot add an x-operator and a z-operator", tok.line, tok.col)
        a, b = _unify(a, b, tok)
        op = a.op + b.op if sign > 0 else a.op - b.op
        return OpValue(op, a.bcast and b.bcast)
    if isinstance(a, FunValue) and isinstance(b, FunValue):
        a, b = _unify(a, b, tok)
        psi = a.psi + b.psi if sign > 0 else a.psi - b.psi
        return FunValue(psi, a.bcast and b.bcast)
    raise DSLTypeError(f"cannot add {_kind(a)} and {_kind(b)}", tok.line, tok.col)


def _square_scalar(s: RatFunc, like: MatRF, tok) -> MatRF:
    if like.rows != like.cols:
        raise DimensionError("a scalar only adds to a square matrix", tok.line, tok.col)
    return MatRF.scalar(like.rows, s)


def _mul(a, b, tok):
    if isinstance(a, (RatFunc, MatRF)) and isinstance(b, (RatFunc, MatRF)):
        return _scalar_or_matrix_mul(a, b, tok)
    if isinstance(a, OpValue) or isinstance(b, OpValue):
        if isinstance(a, OpValue) and isinstance(b, FunValue):
            if a.op.var != "x":
                raise DSLTypeError("a z-operator acts on functions from the right", tok.line, tok.col)
            a, b = _unify(a, b, tok)
            return FunValue(apply_left(a.op, b.psi), a.bcast and b.bcast)
        if isinstance(a, FunValue):
            if b.op.var != "z":
                raise DSLTypeError("an x-operator acts on functions from the left", tok.line, tok.col)
            a, b = _unify(a, b, tok)
            return FunValue(apply_right(a.psi, b.op), a.bcast and b.bcast)
        var = a.op.var if isinstance(a, OpValue) else b.op.var
        a = a if isinstance(a, OpValue) else _as_op(a, var)
        b = b if isinstance(b, OpValue) else _as_op(b, var)
        if a.op.var != b.op.var:
            raise DSLTypeError("cannot compose an x-operator with a z-operator", tok.line, tok.col)
        a, b = _unify(a, b, tok)
        return OpValue(compose(a.op, b.op), a.bcast and b.bcast)
    if isinstance(a, FunValue) and isinstance(b, FunValue):
        raise DSLTypeError("cannot multiply two functions", tok.line, tok.col)
    if isinstance(a, FunValue):
        if isinstance(b, RatFunc):
            return FunValue(ExpKernel(a.psi.m.scale(b)), a.bcast)
        a = a.lift(b.rows) if a.bcast else a
        if a.psi.m.cols != b.rows:
            raise DimensionError("function and matrix sizes differ", tok.line, tok.col)
        return FunValue(ExpKernel(a.psi.m @ b))
    if isinstance(a, RatFunc):
        return FunValue(ExpKernel(b.psi.m.scale(a)), b.bcast)
    b = b.lift(a.cols) if b.bcast else b
    if a.cols != b.psi.m.rows:
        raise DimensionError("matrix and function sizes differ", tok.line, tok.col)
    return FunValue(ExpKernel(a @ b.psi.m))


def _div(a, b, tok):
    if not isinstance(b, RatFunc):
        raise DSLTypeError(f"can only divide by a scalar, not a {_kind(b)}", tok.line, tok.col)
    if not b:
        raise DSLTypeError("division by zero", tok.line, tok.col)
    inv = 1 / b
    if isinstance(a, RatFunc):
        return a * inv
    if isinstance(a, MatRF):
        return a.scale(inv)
    if isinstance(a, OpValue):
        return OpValue(a.op.scale(inv), a.bcast)
    return FunValue(ExpKernel(a.psi.m.scale(inv)), a.bcast)


def _pow(a, n: int, tok):
    if isinstance(a, RatFunc):
        if n < 0 and not a:
            raise DSLTypeError("zero to a negative power", tok.line, tok.col)
        return a ** n
    if n < 0:
        raise DSLTypeError(f"negative power of a {_kind(a)}", tok.line, tok.col)
    if isinstance(a, MatRF):
        if a.rows != a.cols:
            raise DimensionError("power of a non-square matrix", tok.line, tok.col)
        out = MatRF.identity(a.rows)
        for _ in range(n):
            out = out @ a
        return out
    if isinstance(a, OpValue):
        out = DiffOp.identity(a.op.var, a.op.size)
        for _ in range(n):
            out = compose(out, a.op)
        return OpValue(out, a.bcast)
    raise DSLTypeError("cannot raise a function to a power", tok.line, tok.col)


# -- problem files -------------------------------------------------------------

@dataclass
class Binding:
    kind: str  # let, op, fun
    name: str
    value: object

    def __eq__(self, other):
        return (isinstance(other, Binding) and self.kind == other.kind and self.name == other.name
                and _value_eq(self.value, other.value))


def _value_eq(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, OpValue):
        return a.bcast == b.bcast and a.op == b.op
    if isinstance(a, FunValue):
        return a.bcast == b.bcast and a.psi == b.psi
    return a == b


@dataclass
class ProblemFile:
    field: Optional[ExtField] = None
    bindings: List[Binding] = dc_field(default_factory=list)

    def names(self) -> List[str]:
        return [b.name for b in self.bindings]

    def __contains__(self, name):
        return any(b.name == name for b in self.bindings)

    def binding(self, name: str) -> Binding:
        for b in self.bindings:
            if b.name == name:
                return b
        raise UndefinedNameError(f"no binding named {name!r}")

    def get(self, name: str, size: Optional[int] = None):
        """The bound object (RatFunc, MatRF, DiffOp or ExpKernel), lifted to ``size``."""
        v = self.binding(name).value
        if isinstance(v, RatFunc):
            return MatRF.scalar(size, v) if size else v
        if isinstance(v, OpValue):
            return (v.lift(size) if size else v).op
        if isinstance(v, FunValue):
            return (v.lift(size) if size else v).psi
        return v

    def matrix(self, name: str, size: int) -> MatRF:
        v = self.get(name, size)
        return v if isinstance(v, MatRF) else MatRF.scalar(size, v)

    def to_text(self) -> str:
        lines = []
        if self.field is None:
            lines.append("field Q;")
        else:
            lines.append(f"field Q[{self.field.name}]/({self.field.modulus_text()});")
        for b in self.bindings:
            lines.append(f"{b.kind} {b.name} = {value_text(b.value)};")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, ProblemFile):
            return NotImplemented
        same_field = (self.field is None and other.field is None) or (
            self.field is not None and other.field is not None and self.field == other.field)
        return same_field and self.bindings == other.bindings


def _paren(text: str) -> str:
    return text if re.fullmatch(r"[A-Za-z0-9_^*/]+", text) else f"({text})"


def value_text(v) -> str:
    if isinstance(v, RatFunc):
        return v.to_text()
    if isinstance(v, MatRF):
        return v.to_text()
    if isinstance(v, OpValue):
        op = v.op
        d = "Dx" if op.var == "x" else "Dz"
        if not op.coeffs:
            z = "0" if v.bcast else MatRF.zeros(op.size).to_text()
            return f"{z}*Dx^0" if op.var == "x" else f"Dz^0*{z}"
        parts = []
        for k in sorted(op.coeffs, reverse=True):
            c = op.coeffs[k]
            ct = _paren(c.entries[0][0].to_text()) if v.bcast else c.to_text()
            parts.append(f"{ct}*{d}^{k}" if op.var == "x" else f"{d}^{k}*{ct}")
        return " + ".join(parts)
    if isinstance(v, FunValue):
        m = v.psi.m
        body = _paren(m.entries[0][0].to_text()) if v.bcast else m.to_text()
        return f"expxz * {body}"
    raise TypeError(f"no text form for {type(v).__name__}")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.env: Dict[str, object] = {}
        self.field: Optional[ExtField] = None
        self.gen_name: Optional[str] = None

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "name") and t.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            self._fail(f"expected {text!r}")
        return self._next()

    def _fail(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise DSLSyntaxError(f"{msg}, found {found}", t.line, t.col)

    # statements
    def parse(self) -> ProblemFile:
        pf = ProblemFile()
        seen_other = False
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "name" or t.text not in KEYWORDS:
                self._fail("expected a statement (field, let, op or fun)")
            if t.text == "field":
                if seen_other or self.field is not None or pf.field is not None:
                    raise DSLSyntaxError("field must be declared once, before any binding", t.line, t.col)
                self._next()
                pf.field = self._field_decl()
                continue
            seen_other = True
            pf.bindings.append(self._binding())
        return pf

    def _field_decl(self) -> Optional[ExtField]:
        self._expect("Q")
        if self._at(";"):
            self._next()
            return None
        self._expect("[")
        t = self.tok
        if t.kind != "name" or t.text in RESERVED or t.text in KEYWORDS:
            self._fail("expected a generator name")
        name = self._next().text
        self._expect("]")
        self._expect("/")
        self._expect("(")
        coeffs = self._modulus(name)
        self._expect(")")
        self._expect(";")
        if len(coeffs) < 2:
            raise DSLSyntaxError("modulus must have degree >= 1", t.line, t.col)
        self.field = ExtField(coeffs, name)
        self.gen_name = name
        return self.field

    def _modulus(self, name: str) -> List[Fraction]:
        """Sum of terms c*name^k with integer coefficients."""
        coeffs: Dict[int, Fraction] = {}
        sign = 1
        if self._at("-"):
            self._next()
            sign = -1
        elif self._at("+"):
            self._next()
        while True:
            c = Fraction(1)
            k = 0
            if self.tok.kind == "num":
                c = Fraction(int(self._next().text))
                if self._at("/"):
                    self._next()
                    if self.tok.kind != "num":
                        self._fail("expected a number")
                    c /= int(self._next().text)
                if self._at("*"):
                    self._next()
                    k = self._gen_power(name)
            else:
                k = self._gen_power(name)
            coeffs[k] = coeffs.get(k, Fraction(0)) + sign * c
            if self._at("+"):
                sign = 1
            elif self._at("-"):
                sign = -1
            else:
                break
            self._next()
        top = max(coeffs)
        return [coeffs.get(k, Fraction(0)) for k in range(top + 1)]

    def _gen_power(self, name: str) -> int:
        t = self.tok
        if t.kind != "name" or t.text != name:
            self._fail(f"expected {name!r}")
        self._next()
        if self._at("^"):
            self._next()
            if self.tok.kind != "num":
                self._fail("expected an exponent")
            return int(self._next().text)
        return 1

    def _binding(self) -> Binding:
        kw = self._next()
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS or t.text in RESERVED or t.text == self.gen_name:
            self._fail("expected a binding name")
        if t.text in self.env:
            self._fail(f"{t.text} is already bound")
        name = self._next().text
        self._expect("=")
        start = self.tok
        value = self._expr()
        self._expect(";")
        value = self._check_kind(kw.text, name, value, start)
        self.env[name] = value
        return Binding(kw.text, name, value)

    @staticmethod
    def _check_kind(kw, name, value, tok):
        ok = {
            "let": (RatFunc, MatRF),
            "op": (OpValue,),
            "fun": (FunValue,),
        }[kw]
        if not isinstance(value, ok):
            want = {"let": "a scalar or matrix", "op": "an operator", "fun": "a function"}[kw]
            raise DSLTypeError(f"{kw} {name} must be {want}, got a {_kind(value)}", tok.line, tok.col)
        return value

    # expressions
    def _expr(self):
        val = self._term()
        while self._at("+") or self._at("-"):
            op = self._next()
            rhs = self._term()
            val = self._guard(_add, val, rhs, op, 1 if op.text == "+" else -1)
        return val

    def _term(self):
        val = self._unary()
        while self._at("*") or self._at("/"):
            op = self._next()
            rhs = self._unary()
            val = self._guard(_mul if op.text == "*" else _div, val, rhs, op)
        return val

    def _guard(self, fn, a, b, tok, *extra):
        try:
            return fn(a, b, tok, *extra)
        except DSLError:
            raise
        except (OperatorMismatchError, _matrix.DimensionError) as exc:
            raise DimensionError(str(exc), tok.line, tok.col) from None
        except (NotInvertibleError, ZeroDivisionError) as exc:
            raise DSLTypeError(str(exc) or "division by zero", tok.line, tok.col) from None

    def _unary(self):
        if self._at("-"):
            t = self._next()
            return self._guard(_mul, RatFunc.const(-1), self._unary(), t)
        if self._at("+"):
            self._next()
            return self._unary()
        return self._power()

    def _power(self):
        base = self._atom()
        if self._at("^"):
            t = self._next()
            n = self._exponent()
            return self._guard(lambda a, _b, tok: _pow(a, n, tok), base, None, t)
        return base

    def _exponent(self) -> int:
        paren = self._at("(")
        if paren:
            self._next()
        sign = 1
        if self._at("-") or self._at("+"):
            sign = -1 if self._next().text == "-" else 1
        if self.tok.kind != "num":
            self._fail("expected an integer exponent")
        n = sign * int(self._next().text)
        if paren:
            self._expect(")")
        return n

    def _atom(self):
        t = self.tok
        if t.kind == "num":
            self._next()
            return RatFunc.const(int(t.text))
        if t.kind == "name":
            self._next()
            if t.text == "x":
                return RatFunc.x()
            if t.text == "z":
                return RatFunc.z()
            if t.text in ("Dx", "Dz"):
                var = t.text[1]
                return OpValue(DiffOp(var, {1: MatRF([[1]])}, size=1), True)
            if t.text == "expxz":
                return FunValue(ExpKernel(MatRF([[1]])), True)
            if self.field is not None and t.text == self.gen_name:
                return RatFunc.const(self.field.gen())
            if t.text in KEYWORDS:
                self._fail("unexpected keyword", t)
            if t.text not in self.env:
                raise UndefinedNameError(f"undefined name {t.text!r}", t.line, t.col)
            return self.env[t.text]
        if self._at("("):
            self._next()
            v = self._expr()
            self._expect(")")
            return v
        if self._at("["):
            return self._matrix()
        self._fail("expected an expression")

    def _matrix(self):
        self._expect("[")
        rows = []
        while True:
            row_tok = self._expect("[")
            row = [self._entry()]
            while self._at(","):
                self._next()
                row.append(self._entry())
            self._expect("]")
            if rows and len(row) != len(rows[0]):
                raise DimensionError(f"row has {len(row)} entries, expected {len(rows[0])}",
                                     row_tok.line, row_tok.col)
            rows.append(row)
            if not self._at(","):
                break
            self._next()
        self._expect("]")
        return MatRF(rows)

    def _entry(self) -> RatFunc:
        t = self.tok
        v = self._expr()
        if not isinstance(v, RatFunc):
            raise DSLTypeError(f"matrix entries must be scalars, got a {_kind(v)}", t.line, t.col)
        return v


def parse(text: str) -> ProblemFile:
    return _Parser(text).parse()


def parse_file(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def parse_expr(text: str, field: Optional[ExtField] = None):
    """Evaluate a single expression (used for command-line polynomials)."""
    p = _Parser(text)
    if field is not None:
        p.field, p.gen_name = field, field.name
    v = p._expr()
    if p.tok.kind != "eof":
        p._fail("unexpected trailing input")
    return v
