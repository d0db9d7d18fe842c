"""Exact sparse Gauss-Jordan elimination over Q (or a simple extension).

Rows are dicts ``column -> nonzero scalar``.  The pivot rule is fixed so
that results are reproducible: columns are scanned left to right and, among
the rows still available with a nonzero entry in the pivot column, the one
whose pivot entry has the smallest bit size is chosen (ties: smaller row,
then the earlier row).
The reduced echelon form is unique, so the kernel basis read off from it
does not depend on the pivot choice at all; the rule only affects cost.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .scalar import bit_size, to_scalar

Row = Dict[int, object]


@dataclass
class LinearSystem:
    """Homogeneous system sum_j a_ij u_j = 0 with labelled unknowns."""

    n_unknowns: int
    rows: List[Row] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)

    def add_row(self, row: Row):
        row = {j: v for j, v in row.items() if v}
        if row:
            self.rows.append(row)

    def dense(self) -> List[list]:
        return [[r.get(j, 0) for j in range(self.n_unknowns)] for r in self.rows]

    def residual(self, vec: Sequence) -> List[object]:
        return [sum((v * vec[j] for j, v in r.items()), 0) for r in self.rows]


def _row_size(row: Row) -> int:
    return sum(bit_size(v) for v in row.values())


def _scale_row(row: Row, c) -> Row:
    return {j: to_scalar(v * c) for j, v in row.items()}


def _axpy(target: Row, c, src: Row) -> Row:
    """target - c * src, dropping zeros."""
    out = dict(target)
    for j, v in src.items():
        w = out.get(j)
        if w is None:
            out[j] = to_scalar(-c * v)
        else:
            w = to_scalar(w - c * v)
            if w:
                out[j] = w
            else:
                del out[j]
    return out


def _dedupe(rows: List[Row]) -> List[Row]:
    seen = set()
    out = []
    for r in rows:
        if not r:
            continue
        first = min(r)
        inv = 1 / r[first]
        key = tuple(sorted((j, to_scalar(v * inv)) for j, v in r.items()))
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def rref(rows: List[Row], n_cols: int) -> Tuple[List[Row], List[int]]:
    """Reduced row echelon form; returns (pivot rows with unit pivots, pivot columns)."""
    pending = _dedupe([dict(r) for r in rows])
    # bucket rows by leading column so the pivot search stays cheap
    pivots: List[Tuple[int, Row]] = []
    by_lead: Dict[int, List[Row]] = {}
    for r in pending:
        by_lead.setdefault(min(r), []).append(r)
    for col in range(n_cols):
        bucket = by_lead.pop(col, None)
        if not bucket:
            continue
        best = min(range(len(bucket)), key=lambda k: (bit_size(bucket[k][col]), _row_size(bucket[k]), k))
        prow = bucket.pop(best)
        prow = _scale_row(prow, 1 / prow[col])
        pivots.append((col, prow))
        for r in bucket:
            r = _axpy(r, r[col], prow)
            if r:
                by_lead.setdefault(min(r), []).append(r)
    # back substitution, last pivot first
    for a in range(len(pivots) - 1, -1, -1):
        col, prow = pivots[a]
        for b in range(a):
            c2, other = pivots[b]
            v = other.get(col)
            if v:
                pivots[b] = (c2, _axpy(other, v, prow))
    return [r for _, r in pivots], [c for c, _ in pivots]


def nullspace(system: LinearSystem) -> List[List[object]]:
    """Canonical kernel basis: one vector per free column, in column order."""
    n = system.n_unknowns
    prows, pcols = rref(system.rows, n)
    pset = set(pcols)
    basis = []
    for f in range(n):
        if f in pset:
            continue
        v = [to_scalar(0)] * n
        v[f] = to_scalar(1)
        for col, r in zip(pcols, prows):
            c = r.get(f)
            if c:
                v[col] = to_scalar(-c)
        basis.append(v)
    return basis


def rank(vectors: Sequence[Sequence], n_cols: int | None = None) -> int:
    rows = [{j: to_scalar(v) for j, v in enumerate(vec) if v} for vec in vectors]
    if n_cols is None:
        n_cols = max((len(v) for v in vectors), default=0)
    return len(rref(rows, n_cols)[0])


def row_basis(vectors: Sequence[Sequence], n_cols: int) -> List[List[object]]:
    """Reduced echelon basis of the span of ``vectors`` as dense lists."""
    rows = [{j: to_scalar(v) for j, v in enumerate(vec) if v} for vec in vectors]
    prows, _ = rref(rows, n_cols)
    zero = to_scalar(0)
    return [[r.get(j, zero) for j in range(n_cols)] for r in prows]


class EchelonSpan:
    """Incremental membership test for the span of a fixed set of vectors."""

    def __init__(self, vectors: Sequence[Sequence], n_cols: int):
        rows = [{j: to_scalar(v) for j, v in enumerate(vec) if v} for vec in vectors]
        prows, pcols = rref(rows, n_cols)
        self.pivots = list(zip(pcols, prows))
        self.n_cols = n_cols

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Sequence) -> Row:
        r = {j: to_scalar(v) for j, v in enumerate(vec) if v}
        for col, prow in self.pivots:
            c = r.get(col)
            if c:
                r = _axpy(r, c, prow)
        return r

    def contains(self, vec: Sequence) -> bool:
        return not self.reduce(vec)
