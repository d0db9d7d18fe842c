"""Exact linear solving for bispectral partners under finite ansätze.

For a fixed Psi = e^{xz} M(x, z) the condition Psi B = Theta(x) Psi is
linear in the unknown coefficients of Theta and of B once B's coefficients
are restricted to z-Laurent polynomials with bounded exponents.  Clearing
denominators turns it into coefficient matching of bivariate polynomials,
i.e. a homogeneous system over Q.  The dual problem L Psi = Psi F(z) is
handled the same way with L's coefficients over a fixed denominator d(x).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .expkernel import ExpKernel, apply_left, apply_right, derivatives, mult_left, mult_right
from .linalg import EchelonSpan, LinearSystem, nullspace, row_basis
from .matrix import DimensionError, MatRF
from .operators import DiffOp
from .poly import BiPoly, divexact, lcm
from .ratfunc import RatFunc
from .scalar import to_scalar


class TruncationError(ValueError):
    """Spaces compared at different sizes or degree truncations."""


class SoundnessError(AssertionError):
    """A returned basis element failed the post-solve re-verification."""


@dataclass(frozen=True)
class BAnsatz:
    """B = sum_{i<=max_order} d_z^i b_i(z), entries of b_i in span{z^e : low <= e <= high}."""

    max_order: int
    laurent_low: int = 0
    laurent_high: int = 0

    def __post_init__(self):
        if self.max_order < 0:
            raise ValueError("max_order must be >= 0")
        if self.laurent_low > 0 or self.laurent_high < 0 or self.laurent_low > self.laurent_high:
            raise ValueError("need laurent_low <= 0 <= laurent_high")

    def doubled(self) -> "BAnsatz":
        return BAnsatz(max(1, 2 * self.max_order), min(-1, 2 * self.laurent_low), 2 * self.laurent_high)

    def as_dict(self) -> dict:
        return {"b_order": self.max_order, "z_low": self.laurent_low, "z_high": self.laurent_high}


@dataclass(frozen=True)
class LAnsatz:
    """L = sum_{i<=max_order} (P_i(x)/den(x)) d_x^i with deg P_i entries <= num_deg."""

    max_order: int
    den: BiPoly
    num_deg: int

    def __post_init__(self):
        if not self.den:
            raise ValueError("ansatz denominator must be nonzero")
        if self.den.deg("z") > 0:
            raise ValueError("ansatz denominator must be a polynomial in x")
        if self.max_order < 0 or self.num_deg < 0:
            raise ValueError("orders and degrees must be >= 0")

    def as_dict(self) -> dict:
        return {"l_order": self.max_order, "den": self.den.to_text(), "num_deg": self.num_deg}


@dataclass
class SolutionSpace:
    """Echelon basis of admissible (eigenvalue, operator) pairs.

    ``kind`` is "theta" (pairs (Theta(x), B)) or "f" (pairs (F(z), L)).
    Basis entries whose eigenvalue part vanishes are operators that
    annihilate Psi; ``dim`` counts only independent eigenvalues.
    """

    kind: str
    deg: int
    size: int
    ansatz: object
    basis: List[Tuple[MatRF, DiffOp]]
    dim: int
    n_unknowns: int = 0
    n_equations: int = 0

    @property
    def var(self) -> str:
        return "x" if self.kind == "theta" else "z"

    @property
    def eigen_basis(self) -> List[MatRF]:
        return [e for e, _ in self.basis[: self.dim]]

    @property
    def homogeneous(self) -> List[DiffOp]:
        return [op for _, op in self.basis[self.dim:]]

    # aliases used by the reports
    @property
    def theta_dim(self) -> int:
        return self.dim

    @property
    def f_dim(self) -> int:
        return self.dim


# -- polynomial helpers -------------------------------------------------

def _clear(mats: Sequence[MatRF]) -> Tuple[BiPoly, List[List[List[BiPoly]]]]:
    """Common denominator D of all entries and the polynomial matrices D*M."""
    d = BiPoly.const(1)
    for m in mats:
        for _, _, v in m.iter_entries():
            if not v.den.is_const() and v.num:
                d = lcm(d, v.den)
    out = []
    for m in mats:
        out.append([[divexact(d, v.den) * v.num if v.num else BiPoly() for v in row] for row in m.entries])
    return d, out


def matpoly_vector(m: MatRF, var: str, deg: int) -> List[object]:
    """Coefficients of a polynomial matrix, ordered by degree then row-major."""
    n_r, n_c = m.shape
    zero = to_scalar(0)
    vec = [zero] * ((deg + 1) * n_r * n_c)
    k = 0 if var == "x" else 1
    for r, c, v in m.iter_entries():
        if not v:
            continue
        if not v.is_poly() or not v.depends_only_on(var):
            raise TruncationError(f"entry {v} is not a polynomial in {var}")
        for mono, coef in v.num.terms.items():
            e = mono[k]
            if e > deg:
                raise TruncationError(f"entry {v} exceeds degree {deg}")
            vec[(e * n_r + r) * n_c + c] = coef
    return vec


def vector_matpoly(vec: Sequence, var: str, n: int, offset: int = 0, exps: Sequence[int] | None = None,
                   den: BiPoly | None = None) -> MatRF:
    """Inverse of ``matpoly_vector``; ``exps`` may include negative (Laurent) exponents."""
    exps = list(exps) if exps is not None else list(range((len(vec) - offset) // (n * n)))
    low = min(0, min(exps, default=0))
    denom = BiPoly.monomial(-low, 0) if var == "x" else BiPoly.monomial(0, -low)
    if den is not None:
        denom = denom * den
    entries = []
    for r in range(n):
        row = []
        for c in range(n):
            terms = {}
            for a, e in enumerate(exps):
                v = vec[offset + (a * n + r) * n + c]
                if v:
                    terms[(e - low, 0) if var == "x" else (0, e - low)] = v
            row.append(RatFunc(BiPoly(terms), denom))
        entries.append(row)
    return MatRF(entries)


class _Equations:
    """Accumulates coefficient-matching rows keyed by (row, col, monomial)."""

    def __init__(self):
        self.rows: Dict[tuple, Dict[int, object]] = {}

    def add(self, a: int, c: int, poly: BiPoly, unknown: int, sign: int = 1):
        for mono, coef in poly.terms.items():
            row = self.rows.setdefault((a, c, mono), {})
            v = row.get(unknown)
            val = coef if sign > 0 else -coef
            row[unknown] = val if v is None else to_scalar(v + val)

    def system(self, n_unknowns: int, labels: List[str]) -> LinearSystem:
        s = LinearSystem(n_unknowns, labels=labels)
        for key in sorted(self.rows):
            s.add_row(self.rows[key])
        return s


# -- Theta / B ----------------------------------------------------------

def _b_index(n_theta, exps, n, i, e_pos, r, c):
    return n_theta + ((i * len(exps) + e_pos) * n + r) * n + c


def _check_square(psi: ExpKernel):
    if psi.m.rows != psi.m.cols:
        raise DimensionError("eigenfunction must be a square matrix function")


def assemble_theta_system(psi: ExpKernel, theta_deg: int, ansatz: BAnsatz,
                          fixed_theta: Optional[MatRF] = None) -> LinearSystem:
    """Homogeneous system for Psi B = Theta Psi.

    Unknowns are the Theta coefficients (degree, then row-major) followed by
    the B coefficients (order, then z-exponent, then row-major).  With
    ``fixed_theta`` the Theta block is replaced by one scalar unknown t
    multiplying the given Theta.
    """
    _check_square(psi)
    n = psi.size
    ms = derivatives(psi, "z", ansatz.max_order)
    if fixed_theta is not None:
        if fixed_theta.shape != (n, n):
            raise DimensionError("Theta size does not match Psi")
        ms.append(fixed_theta @ psi.m)
    _, polys = _clear(ms)
    s = -ansatz.laurent_low
    eqs = _Equations()
    labels: List[str] = []
    if fixed_theta is None:
        n_theta = (theta_deg + 1) * n * n
        for k in range(theta_deg + 1):
            for a in range(n):
                for r in range(n):
                    u = (k * n + a) * n + r
                    labels.append(f"theta[{k}][{a},{r}]")
                    for c in range(n):
                        q = polys[0][r][c]
                        if q:
                            eqs.add(a, c, q.shift(k, s), u, -1)
    else:
        n_theta = 1
        labels.append("t")
        tq = polys[-1]
        for a in range(n):
            for c in range(n):
                if tq[a][c]:
                    eqs.add(a, c, tq[a][c].shift(0, s), 0, -1)
    exps = list(range(ansatz.laurent_low, ansatz.laurent_high + 1))
    for i in range(ansatz.max_order + 1):
        pi = polys[i]
        for ep, e in enumerate(exps):
            for r in range(n):
                for c in range(n):
                    u = _b_index(n_theta, exps, n, i, ep, r, c)
                    labels.append(f"b{i}[z^{e}][{r},{c}]")
                    for a in range(n):
                        p = pi[a][r]
                        if p:
                            eqs.add(a, c, p.shift(0, e + s), u)
    return eqs.system(len(labels), labels)


def _decode_b(vec, n_theta, n, ansatz: BAnsatz) -> DiffOp:
    exps = list(range(ansatz.laurent_low, ansatz.laurent_high + 1))
    coeffs = {}
    block = len(exps) * n * n
    for i in range(ansatz.max_order + 1):
        coeffs[i] = vector_matpoly(vec, "z", n, offset=n_theta + i * block, exps=exps)
    return DiffOp("z", coeffs, n)


def solve_theta_space(psi: ExpKernel, deg: int, ansatz: BAnsatz, verify: bool = True) -> SolutionSpace:
    """All (Theta, B) with deg Theta <= deg and B inside the ansatz."""
    n = psi.size
    system = assemble_theta_system(psi, deg, ansatz)
    kernel = nullspace(system)
    ech = row_basis(kernel, system.n_unknowns)
    n_theta = (deg + 1) * n * n
    basis = []
    dim = 0
    for vec in ech:
        theta = vector_matpoly(vec[:n_theta], "x", n)
        b = _decode_b(vec, n_theta, n, ansatz)
        if any(vec[:n_theta]):
            dim += 1
        basis.append((theta, b))
    space = SolutionSpace("theta", deg, n, ansatz, basis, dim, system.n_unknowns, len(system.rows))
    if verify:
        verify_space(psi, space)
    return space


def solve_b_for_theta(psi: ExpKernel, theta: MatRF, ansatz: BAnsatz) -> Optional[DiffOp]:
    """A B inside the ansatz with Psi B = Theta Psi, or None.

    When several exist the echelon-canonical one is returned (its free part
    reduced against the operators annihilating Psi).
    """
    if not theta.depends_only_on("x") or any(not v.is_poly() for _, _, v in theta.iter_entries()):
        raise ValueError("Theta must be a polynomial matrix in x")
    n = psi.size
    system = assemble_theta_system(psi, 0, ansatz, fixed_theta=theta)
    ech = row_basis(nullspace(system), system.n_unknowns)
    if not ech or not ech[0][0]:
        return None
    b = _decode_b(ech[0], 1, n, ansatz)
    if apply_right(psi, b) != mult_left(theta, psi):
        raise SoundnessError("recovered B does not reproduce Theta Psi")
    return b


def solve_b_escalating(psi: ExpKernel, theta: MatRF, ansatz: BAnsatz, rounds: int = 4):
    """Retry ``solve_b_for_theta`` with doubled bounds; returns (B or None, bounds used)."""
    tried = []
    cur = ansatz
    for _ in range(rounds + 1):
        tried.append(cur)
        b = solve_b_for_theta(psi, theta, cur)
        if b is not None:
            return b, tried
        cur = cur.doubled()
    return None, tried


# -- F / L --------------------------------------------------------------

def assemble_f_system(psi: ExpKernel, f_deg: int, ansatz: LAnsatz) -> LinearSystem:
    """Homogeneous system for L Psi = Psi F(z).

    Unknowns: F coefficients (degree, then row-major) followed by the
    numerator coefficients of L (order, then x-degree, then row-major).
    """
    _check_square(psi)
    n = psi.size
    ns = derivatives(psi, "x", ansatz.max_order)
    _, polys = _clear(ns)
    d = ansatz.den
    eqs = _Equations()
    labels: List[str] = []
    for k in range(f_deg + 1):
        for r in range(n):
            for c in range(n):
                u = len(labels)
                labels.append(f"F[{k}][{r},{c}]")
                for a in range(n):
                    q = polys[0][a][r]
                    if q:
                        eqs.add(a, c, (q * d).shift(0, k), u, -1)
    for i in range(ansatz.max_order + 1):
        for t in range(ansatz.num_deg + 1):
            for a in range(n):
                for r in range(n):
                    u = len(labels)
                    labels.append(f"L{i}[x^{t}][{a},{r}]")
                    for c in range(n):
                        p = polys[i][r][c]
                        if p:
                            eqs.add(a, c, p.shift(t, 0), u)
    return eqs.system(len(labels), labels)


def _decode_l(vec, n_f, n, ansatz: LAnsatz) -> DiffOp:
    block = (ansatz.num_deg + 1) * n * n
    coeffs = {}
    for i in range(ansatz.max_order + 1):
        coeffs[i] = vector_matpoly(vec, "x", n, offset=n_f + i * block,
                                   exps=range(ansatz.num_deg + 1), den=ansatz.den)
    return DiffOp("x", coeffs, n)


def solve_f_space(psi: ExpKernel, deg: int, ansatz: LAnsatz, verify: bool = True) -> SolutionSpace:
    """All (F, L) with deg F <= deg and L inside the ansatz."""
    n = psi.size
    system = assemble_f_system(psi, deg, ansatz)
    ech = row_basis(nullspace(system), system.n_unknowns)
    n_f = (deg + 1) * n * n
    basis = []
    dim = 0
    for vec in ech:
        f = vector_matpoly(vec[:n_f], "z", n)
        l = _decode_l(vec, n_f, n, ansatz)
        if any(vec[:n_f]):
            dim += 1
        basis.append((f, l))
    space = SolutionSpace("f", deg, n, ansatz, basis, dim, system.n_unknowns, len(system.rows))
    if verify:
        verify_space(psi, space)
    return space


def verify_space(psi: ExpKernel, space: SolutionSpace):
    """Re-check every basis pair against the defining identity."""
    for k, (eig, op) in enumerate(space.basis):
        if space.kind == "theta":
            ok = apply_right(psi, op) == mult_left(eig, psi)
        else:
            ok = apply_left(op, psi) == mult_right(psi, eig)
        if not ok:
            raise SoundnessError(f"basis element {k} fails the eigen-identity")


# -- comparison -----------------------------------------------------------

@dataclass
class Comparison:
    relation: str
    dim_computed: int
    dim_conjectured: int
    dim_joint: int
    computed_outside: List[MatRF] = field(default_factory=list)
    conjectured_outside: List[MatRF] = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.relation == "equal"


def compare_spaces(computed, conjectured: Sequence[MatRF], deg: Optional[int] = None,
                   var: Optional[str] = None) -> Comparison:
    """Decide equality/containment of two spans of polynomial matrices by exact ranks.

    ``computed`` may be a SolutionSpace (its eigenvalue projection is used)
    or a plain list of matrices.
    """
    if isinstance(computed, SolutionSpace):
        deg = computed.deg if deg is None else deg
        var = computed.var if var is None else var
        if deg != computed.deg:
            raise TruncationError(f"space truncated at {computed.deg}, comparison at {deg}")
        comp = computed.eigen_basis
    else:
        comp = list(computed)
    var = var or "x"
    if deg is None:
        raise TruncationError("degree truncation must be given")
    shapes = {m.shape for m in list(comp) + list(conjectured)}
    if len(shapes) > 1:
        raise TruncationError(f"matrix sizes differ: {sorted(shapes)}")
    a = [matpoly_vector(m, var, deg) for m in comp]
    b = [matpoly_vector(m, var, deg) for m in conjectured]
    width = len(a[0]) if a else (len(b[0]) if b else 0)
    sa, sb = EchelonSpan(a, width), EchelonSpan(b, width)
    joint = EchelonSpan(a + b, width).dim
    comp_out = [m for m, v in zip(comp, a) if not sb.contains(v)]
    conj_out = [m for m, v in zip(conjectured, b) if not sa.contains(v)]
    if not comp_out and not conj_out:
        rel = "equal"
    elif not comp_out:
        rel = "computed_subset"
    elif not conj_out:
        rel = "conjectured_subset"
    else:
        rel = "incomparable"
    return Comparison(rel, sa.dim, sb.dim, joint, comp_out, conj_out)
