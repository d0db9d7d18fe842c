"""Sparse bivariate polynomials in (x, z) over an exact scalar field."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

from . import upoly
from .scalar import ExtElem, scalar_text, to_scalar

Monomial = Tuple[int, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _grlex(m: Monomial):
    # graded-lex with x > z
    return (m[0] + m[1], m[0])


class BiPoly:
    """Polynomial sum c_ij x^i z^j stored as a dict with no zero coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Monomial, object] | None = None, *, _clean: bool = False):
        if _clean:
            self.terms = terms
        else:
            clean = {}
            for m, c in (terms or {}).items():
                c = to_scalar(c)
                if c:
                    clean[(int(m[0]), int(m[1]))] = c
            self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c=_ONE) -> "BiPoly":
        return cls({(i, j): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls.monomial(1, 0)

    @classmethod
    def z(cls) -> "BiPoly":
        return cls.monomial(0, 1)

    @classmethod
    def from_univariate(cls, coeffs, var: str = "x") -> "BiPoly":
        if var == "x":
            return cls({(k, 0): c for k, c in enumerate(coeffs)})
        return cls({(0, k): c for k, c in enumerate(coeffs)})

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0, 0) in self.terms)

    def const_value(self):
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0, 0), _ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def deg(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        k = 0 if var == "x" else 1
        return max((m[k] for m in self.terms), default=-1)

    def low_deg(self, var: str) -> int:
        k = 0 if var == "x" else 1
        return min((m[k] for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((m[0] + m[1] for m in self.terms), default=-1)

    def lead(self) -> Tuple[Monomial, object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=_grlex)
        return m, self.terms[m]

    def lead_coeff(self):
        return self.lead()[1]

    def vars(self) -> set:
        out = set()
        for i, j in self.terms:
            if i:
                out.add("x")
            if j:
                out.add("z")
        return out

    def coeff(self, i: int, j: int):
        return self.terms.get((i, j), _ZERO)

    def has_ext(self) -> bool:
        return any(isinstance(c, ExtElem) for c in self.terms.values())

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = to_scalar(v + c)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return BiPoly(out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(other)
        if not self.terms or not other.terms:
            return BiPoly()
        if len(other.terms) == 1:
            ((i2, j2), c2), = other.terms.items()
            return BiPoly({(i + i2, j + j2): to_scalar(c * c2) for (i, j), c in self.terms.items()}, _clean=True)
        if len(self.terms) == 1:
            return other * self
        out: Dict[Monomial, object] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "BiPoly":
        c = to_scalar(c)
        if not c:
            return BiPoly()
        if c == 1:
            return self
        return BiPoly({m: to_scalar(v * c) for m, v in self.terms.items()}, _clean=True)

    def shift(self, i: int, j: int) -> "BiPoly":
        """Multiply by the monomial x^i z^j."""
        return BiPoly({(a + i, b + j): c for (a, b), c in self.terms.items()}, _clean=True)

    def __pow__(self, k: int) -> "BiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = BiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, var: str) -> "BiPoly":
        out = {}
        if var == "x":
            for (i, j), c in self.terms.items():
                if i:
                    out[(i - 1, j)] = to_scalar(c * i)
        elif var == "z":
            for (i, j), c in self.terms.items():
                if j:
                    out[(i, j - 1)] = to_scalar(c * j)
        else:
            raise ValueError(f"unknown variable {var!r}")
        return BiPoly(out, _clean=True)

    def evaluate(self, var: str, value) -> "BiPoly":
        """Substitute a scalar for one variable; the result keeps the other."""
        k = 0 if var == "x" else 1
        out: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            e = m[k]
            rest = (0, m[1]) if k == 0 else (m[0], 0)
            v = c * value ** e if e else c
            out[rest] = out.get(rest, _ZERO) + v
        return BiPoly(out)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, ExtElem)):
            return self.is_const() and self.const_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- conversions ------------------------------------------------------
    def to_recursive(self, var: str = "x"):
        """Coefficient list in ``var`` whose entries are univariate lists in the other variable."""
        k = 0 if var == "x" else 1
        n = self.deg(var) + 1
        out = [[] for _ in range(n)]
        for m, c in self.terms.items():
            row = out[m[k]]
            e = m[1 - k]
            if len(row) <= e:
                row.extend([_ZERO] * (e + 1 - len(row)))
            row[e] = c
        return out

    @classmethod
    def from_recursive(cls, rec, var: str = "x") -> "BiPoly":
        out = {}
        for a, row in enumerate(rec):
            for b, c in enumerate(row):
                if c:
                    out[(a, b) if var == "x" else (b, a)] = c
        return cls(out)

    def univariate(self, var: str):
        """Dense coefficient list when the polynomial only involves ``var``."""
        other = "z" if var == "x" else "x"
        if self.deg(other) > 0:
            raise ValueError(f"polynomial is not univariate in {var}")
        k = 0 if var == "x" else 1
        out = [_ZERO] * (self.deg(var) + 1)
        for m, c in self.terms.items():
            out[m[k]] = c
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.sorted_terms():
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("z" if j == 1 else f"z^{j}"),
                ) if s
            )
            neg = not isinstance(c, ExtElem) and c < 0
            mag = -c if neg else c
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{scalar_text(mag, wrap=isinstance(mag, ExtElem))}*{mono}"
            else:
                body = scalar_text(mag, wrap=isinstance(mag, ExtElem))
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"BiPoly({self.to_text()})"


# -- division and gcd -----------------------------------------------------

def divexact(a: BiPoly, b: BiPoly) -> BiPoly:
    """Quotient a/b, which must be exact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if b.is_const():
        return a.scale(to_scalar(1 / b.const_value()))
    (bi, bj), bc = b.lead()
    inv = to_scalar(1 / bc)
    r = a
    q: Dict[Monomial, object] = {}
    while r:
        (ri, rj), rc = r.lead()
        if ri < bi or rj < bj:
            raise ArithmeticError("inexact polynomial division")
        c = to_scalar(rc * inv)
        q[(ri - bi, rj - bj)] = c
        r = r - b.shift(ri - bi, rj - bj).scale(c)
    return BiPoly(q, _clean=True)


def normalize(p: BiPoly) -> BiPoly:
    """Scale so that the graded-lex leading coefficient is 1."""
    if not p:
        return p
    return p.scale(to_scalar(1 / p.lead_coeff()))


def _ugcd(polys) -> list:
    g = []
    for p in polys:
        g = upoly.gcd(g, p)
        if len(g) == 1:
            break
    return g


def _content(rec) -> list:
    return _ugcd(r for r in rec if r)


def _rec_prem(a, b):
    """Pseudo-remainder of recursive polys a, b (coefficients univariate lists)."""
    db = len(b) - 1
    lb = b[-1]
    r = [list(c) for c in a]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [upoly.mul(c, lb) for c in r]
        for i, cb in enumerate(b):
            r[shift + i] = upoly.sub(r[shift + i], upoly.mul(lr, cb))
        r.pop()
        while r and not r[-1]:
            r.pop()
        e -= 1
    if e > 0:
        f = [Fraction(1)]
        for _ in range(e):
            f = upoly.mul(f, lb)
        r = [upoly.mul(c, f) for c in r]
    return r


def _subresultant_gcd(a, b):
    """Last nonzero subresultant-PRS element for recursive polys with deg a >= deg b."""
    g = [Fraction(1)]
    h = [Fraction(1)]
    while True:
        d = len(a) - len(b)
        r = _rec_prem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return r
        den = upoly.mul(g, _upow(h, d))
        a, b = b, [upoly.exact_div(c, den) for c in r]
        g = a[-1]
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = upoly.exact_div(_upow(g, d), _upow(h, d - 1))


def _upow(p, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = upoly.mul(out, p)
    return out


def _coprime_by_specialization(pa, pb, tries: int = 3) -> bool:
    """Cheap sufficient test that two primitive recursive polys have gcd 1.

    If z = c keeps both leading coefficients nonzero, the gcd specializes to
    a divisor of gcd(pa(x, c), pb(x, c)) of the same x-degree, so a constant
    image gcd proves the primitive gcd is 1.  False means "unknown".
    """
    la, lb = pa[-1], pb[-1]
    c, tried = 0, 0
    while tried < tries and c < 4 * tries + 8:
        v = Fraction(c)
        c = -c if c > 0 else 1 - c  # 0, 1, -1, 2, -2, ...
        if not upoly.evaluate(la, v) or not upoly.evaluate(lb, v):
            continue
        tried += 1
        ia = [upoly.evaluate(r, v) if r else Fraction(0) for r in pa]
        ib = [upoly.evaluate(r, v) if r else Fraction(0) for r in pb]
        if len(upoly.gcd(ia, ib)) == 1:
            return True
    return False


def _monomial_gcd_part(p: BiPoly) -> Monomial:
    return (min(i for i, _ in p.terms), min(j for _, j in p.terms))


def gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Greatest common divisor, normalized to graded-lex leading coefficient 1."""
    if not a and not b:
        raise ValueError("gcd of two zero polynomials is undefined")
    if not a:
        return normalize(b)
    if not b:
        return normalize(a)
    if a.is_const() or b.is_const():
        return BiPoly.const(1)
    if a == b:
        return normalize(a)
    # pull out the monomial parts first; denominators here are mostly monomial
    ma, mb = _monomial_gcd_part(a), _monomial_gcd_part(b)
    mono = (min(ma[0], mb[0]), min(ma[1], mb[1]))
    if a.is_monomial() or b.is_monomial():
        return BiPoly.monomial(*mono)
    a = a.shift(-ma[0], -ma[1])
    b = b.shift(-mb[0], -mb[1])
    core = _gcd_nomono(a, b)
    return core.shift(*mono)


def _gcd_nomono(a: BiPoly, b: BiPoly) -> BiPoly:
    if a.is_const() or b.is_const():
        return BiPoly.const(1)
    dxa, dxb = a.deg("x"), b.deg("x")
    if dxa <= 0 and dxb <= 0:
        return normalize(BiPoly.from_univariate(upoly.gcd(a.univariate("z"), b.univariate("z")), "z"))
    dza, dzb = a.deg("z"), b.deg("z")
    if dza <= 0 and dzb <= 0:
        return normalize(BiPoly.from_univariate(upoly.gcd(a.univariate("x"), b.univariate("x")), "x"))
    # main variable x, coefficients in Q[z]
    ra, rb = a.to_recursive("x"), b.to_recursive("x")
    ca, cb = _content(ra), _content(rb)
    c = upoly.gcd(ca, cb)
    if dxa <= 0 or dxb <= 0:
        # one side lives in Q[z]: the gcd divides its content
        return normalize(BiPoly.from_univariate(c, "z"))
    pa = [upoly.exact_div(r, ca) if r else [] for r in ra]
    pb = [upoly.exact_div(r, cb) if r else [] for r in rb]
    if len(pa) < len(pb):
        pa, pb = pb, pa
    if _coprime_by_specialization(pa, pb):
        return normalize(BiPoly.from_univariate(c, "z"))
    g = _subresultant_gcd(pa, pb)
    if len(g) == 1:
        prim = BiPoly.const(1)
    else:
        gc = _content(g)
        prim = BiPoly.from_recursive([upoly.exact_div(r, gc) if r else [] for r in g], "x")
    return normalize(prim * BiPoly.from_univariate(c, "z"))


def lcm(a: BiPoly, b: BiPoly) -> BiPoly:
    if not a or not b:
        return BiPoly()
    return normalize(divexact(a * b, gcd(a, b)))


def poly_product(polys: Iterable[BiPoly]) -> BiPoly:
    out = BiPoly.const(1)
    for p in polys:
        out = out * p
    return out
