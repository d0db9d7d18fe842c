"""The conjectured eigenvalue algebras, as explicit parametrized families.

Each family is a table of coefficient matrices whose entries are linear
forms in named parameters, plus a degree from which on all entries are
free.  ``conjecture_family`` truncates the family at a degree by dropping
higher coefficients; ``conjecture_subspace`` instead keeps only those family
members whose higher coefficients all vanish, which is the space a solver
restricted to deg <= N can see.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .linalg import EchelonSpan, LinearSystem, nullspace, row_basis
from .matrix import MatRF
from .ratfunc import RatFunc
from .scalar import to_scalar

Form = Dict[str, Fraction]

_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*([A-Za-z]\w*)\s*")


def _form(text: str) -> Form:
    """Parse a linear form such as ``'r22_1 - 2r11_1 + r12_0'`` (or ``'0'``)."""
    text = text.strip()
    if text == "0":
        return {}
    out: Form = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad linear form {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        k = int(m.group(2)) if m.group(2) else 1
        out[m.group(3)] = out.get(m.group(3), Fraction(0)) + sign * k
        pos = m.end()
    return out


@dataclass(frozen=True)
class Family:
    name: str
    var: str
    size: int
    params: Tuple[str, ...]
    table: Tuple[Tuple[Tuple[Form, ...], ...], ...]  # degree -> rows -> entries
    scale: Tuple[Fraction, ...]  # per-degree factor applied to the whole coefficient
    free_from: int

    def param_count(self, deg: int) -> int:
        return len(self._params_upto(deg))

    def _free_params(self, deg: int) -> List[str]:
        n = self.size
        return [f"p{r + 1}{c + 1}_{d}" for d in range(self.free_from, deg + 1) for r in range(n) for c in range(n)]

    def _params_upto(self, deg: int) -> List[str]:
        used = set()
        for d in range(min(deg + 1, self.free_from)):
            for row in self.table[d]:
                for f in row:
                    used.update(k for k, v in f.items() if v)
        return [p for p in self.params if p in used] + self._free_params(deg)

    def coefficient(self, d: int, values: Dict[str, Fraction]) -> List[List[Fraction]]:
        n = self.size
        if d >= self.free_from:
            return [[Fraction(values.get(f"p{r + 1}{c + 1}_{d}", 0)) for c in range(n)] for r in range(n)]
        s = self.scale[d]
        return [[s * sum((v * values.get(k, 0) for k, v in f.items()), Fraction(0)) for f in row]
                for row in self.table[d]]

    def vector(self, values: Dict[str, Fraction], deg: int) -> List[Fraction]:
        out: List[Fraction] = []
        for d in range(deg + 1):
            for row in self.coefficient(d, values):
                out.extend(row)
        return out


def _table(rows_by_degree: Sequence[Sequence[Sequence[str]]]):
    return tuple(tuple(tuple(_form(e) for e in row) for row in rows) for rows in rows_by_degree)


C1 = Family(
    name="C1", var="x", size=2,
    params=("r11_0", "r12_0", "r11_1", "r12_1", "r11_2", "r12_2", "r22_2", "r11_3", "r12_3", "r22_3"),
    table=_table([
        [["r11_0", "r12_0"], ["0", "r11_0"]],
        [["r11_1", "r12_1"], ["0", "r11_1"]],
        [["r11_2", "r12_2"], ["r11_1", "r22_2"]],
        [["r11_3", "r12_3"], ["r22_2 + r11_2 - r12_1", "r22_3"]],
    ]),
    scale=(Fraction(1),) * 4,
    free_from=4,
)

C2 = Family(
    name="C2", var="x", size=3,
    params=(
        "r11_0", "r12_0", "r13_0", "r22_0", "r23_0",
        "r11_1", "r12_1", "r13_1", "r22_1", "r23_1",
        "r11_2", "r12_2", "r13_2", "r22_2", "r23_2",
        "r11_3", "r12_3", "r13_3", "r21_3", "r22_3", "r23_3", "r32_3", "r33_3",
        "r11_4", "r12_4", "r13_4", "r21_4", "r22_4", "r23_4", "r32_4", "r33_4",
        "r11_5", "r12_5", "r13_5", "r21_5", "r22_5", "r23_5", "r32_5", "r33_5",
    ),
    table=_table([
        [["r11_0", "r12_0", "r13_0"],
         ["0", "r22_0", "r23_0"],
         ["0", "0", "r11_0"]],
        [["r11_1", "r12_1", "r13_1"],
         ["r22_0 - r11_0", "r22_1", "r23_1"],
         ["0", "r22_0 - r11_0", "r11_1 + r23_0 - r12_0"]],
        [["r11_2", "r12_2", "r13_2"],
         ["r22_1 - r11_1 - r23_0 + r12_0", "r22_2", "r23_2"],
         ["r22_0 - r11_0", "r22_1 - r11_1", "r11_2 + r23_1 - r12_1"]],
        [["r11_3", "r12_3", "r13_3"],
         ["r21_3", "r22_3", "r23_3"],
         ["r22_1 - 2r11_1 - r23_0 + r12_0", "r32_3", "r33_3"]],
        [["r11_4", "r12_4", "r13_4"],
         ["r21_4", "r22_4", "r23_4"],
         ["r32_3 + r21_3 - r22_2 - r11_2 + r12_1", "r32_4", "r33_4"]],
        [["r11_5", "r12_5", "r13_5"],
         ["r21_5", "r22_5", "r23_5"],
         ["r32_4 + r21_4 - r33_3 - r22_3 - r11_3 + r23_2 + r12_2 - r13_1", "r32_5", "r33_5"]],
    ]),
    scale=(Fraction(1),) * 6,
    free_from=6,
)

# the z-linear (2,1) entry is taken as a - b - c, matching the (1,1) entry of the z^2 term
F3 = Family(
    name="F3", var="z", size=2,
    params=("a", "b", "c", "d", "e"),
    table=_table([
        [["a", "0"], ["b - a", "b"]],
        [["c", "c"], ["a - b - c", "-c"]],
        [["a - b - c", "c + a - b"], ["d", "e"]],
    ]),
    scale=(Fraction(1), Fraction(1), Fraction(1, 2)),
    free_from=3,
)

FAMILIES = {"C1": C1, "C2": C2, "F3": F3}


def get_family(which) -> Family:
    if isinstance(which, Family):
        return which
    try:
        return FAMILIES[which]
    except KeyError:
        raise ValueError(f"unknown family {which!r}; expected one of {sorted(FAMILIES)}") from None


def vector_to_matrix(vec: Sequence, var: str, n: int) -> MatRF:
    gen = RatFunc.x() if var == "x" else RatFunc.z()
    deg = len(vec) // (n * n) - 1
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = RatFunc()
            for d in range(deg + 1):
                v = vec[(d * n + r) * n + c]
                if v:
                    acc = acc + gen ** d * RatFunc.const(v)
            row.append(acc)
        rows.append(row)
    return MatRF(rows)


def family_vectors(which, deg: int) -> List[List[Fraction]]:
    """One coefficient vector per free parameter (that parameter 1, the rest 0)."""
    fam = get_family(which)
    return [fam.vector({p: Fraction(1)}, deg) for p in fam._params_upto(deg)]


def conjecture_family(which, deg: int) -> List[MatRF]:
    """Basis of the family truncated at ``deg`` (higher coefficients dropped)."""
    if deg < 0:
        raise ValueError("degree must be >= 0")
    fam = get_family(which)
    return [vector_to_matrix(v, fam.var, fam.size) for v in family_vectors(fam, deg)]


def conjecture_subspace(which, deg: int) -> List[MatRF]:
    """Basis of the family members of degree <= ``deg``.

    Couplings reach at most ``free_from - 1`` degrees, so it suffices to look
    at the family through degree max(deg, free_from - 1) and demand that the
    coefficients above ``deg`` vanish.
    """
    fam = get_family(which)
    top = max(deg, fam.free_from - 1)
    params = fam._params_upto(top)
    cols = [fam.vector({p: Fraction(1)}, top) for p in params]
    n2 = fam.size * fam.size
    width = (deg + 1) * n2
    system = LinearSystem(len(params))
    for k in range(width, len(cols[0])):
        system.add_row({j: col[k] for j, col in enumerate(cols) if col[k]})
    members = []
    for combo in nullspace(system):
        vec = [sum((combo[j] * cols[j][k] for j in range(len(params)) if combo[j]), Fraction(0))
               for k in range(width)]
        members.append(vec)
    return [vector_to_matrix(v, fam.var, fam.size) for v in row_basis(members, width)]


# (degree, row, col) of the coupled entry dropped by the negative control
_CORRUPT = {"C1": (2, 1, 0), "C2": (1, 1, 0), "F3": (1, 1, 0)}


def corrupted_family(which, deg: int) -> List[MatRF]:
    """Negative control: the family with one coupling entry forced to zero."""
    fam = get_family(which)
    d0, r0, c0 = _CORRUPT[fam.name]
    table = [[list(row) for row in rows] for rows in fam.table]
    table[d0][r0][c0] = {}
    broken = Family(fam.name + "-corrupt", fam.var, fam.size, fam.params,
                    tuple(tuple(tuple(row) for row in rows) for rows in table), fam.scale, fam.free_from)
    return conjecture_family(broken, deg)


# -- algebra closure --------------------------------------------------------

def _as_coeff_arrays(m: MatRF, var: str, deg: int):
    from .solver import matpoly_vector  # local: solver imports this module's users

    n = m.rows
    vec = matpoly_vector(m, var, deg)
    return [[[vec[(d * n + r) * n + c] for c in range(n)] for r in range(n)] for d in range(deg + 1)]


def _truncated_product(a, b, deg: int):
    n = len(a[0])
    zero = to_scalar(0)
    out = [[[zero] * n for _ in range(n)] for _ in range(deg + 1)]
    for da, ma in enumerate(a):
        for db, mb in enumerate(b):
            if da + db > deg:
                break
            tgt = out[da + db]
            for r in range(n):
                for k in range(n):
                    v = ma[r][k]
                    if not v:
                        continue
                    for c in range(n):
                        w = mb[k][c]
                        if w:
                            tgt[r][c] = tgt[r][c] + v * w
    return out


@dataclass
class ClosureResult:
    closed: bool
    witness: Tuple[int, int, MatRF] | None = None
    products_checked: int = 0

    def __bool__(self):
        return self.closed


def algebra_closure_check(family: Sequence[MatRF], deg: int, var: str = "x") -> ClosureResult:
    """Check that truncated products of basis elements stay in the span.

    Membership constraints at degree <= ``deg`` only involve coefficients of
    degree <= ``deg``, so a product truncated at ``deg`` must lie in the span
    of the truncated family whenever the full family is an algebra.  The
    witness is (i, j, product) for the first failing ordered pair.
    """
    if not family:
        return ClosureResult(True)
    n = family[0].rows
    arrays = [_as_coeff_arrays(m, var, deg) for m in family]
    vecs = [[v for d in arr for row in d for v in row] for arr in arrays]
    span = EchelonSpan(vecs, (deg + 1) * n * n)
    checked = 0
    for i, a in enumerate(arrays):
        for j, b in enumerate(arrays):
            prod = _truncated_product(a, b, deg)
            checked += 1
            vec = [v for d in prod for row in d for v in row]
            if not span.contains(vec):
                return ClosureResult(False, (i, j, vector_to_matrix(vec, var, n)), checked)
    return ClosureResult(True, None, checked)
