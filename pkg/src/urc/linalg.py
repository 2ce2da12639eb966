"""Exact linear algebra over Q and function fields.

Entries are Fractions, or RationalFunctions over some polynomial ring.
Forward elimination is fraction-free (Bareiss cross-multiplication with
exact division by the previous pivot), so intermediate entries over a
function field stay polynomial; true division only happens in the final
normalization to reduced row echelon form.

Pivot choice is deterministic: leftmost column with a nonzero candidate,
rows tie-broken by the shortest printed form, then by row index.  No
floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scalars import MultiPoly, RationalFunction, poly_exact_div, poly_gcd


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarMatrix:
    """Rectangular matrix of exact scalars (Fraction or RationalFunction)."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ScalarMatrix":
        rows = tuple(tuple(r) for r in rows)
        if rows:
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise LinalgError("ragged rows")
            cols = widths.pop()
        else:
            cols = 0
        return cls(len(rows), cols, rows)

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries)


@dataclass(frozen=True)
class RrefResult:
    rref: ScalarMatrix
    rank: int
    pivots: tuple          # pivot column indices, one per pivot row
    kernel_basis: tuple    # tuple of column vectors (tuples) spanning the kernel


@dataclass(frozen=True)
class SolveResult:
    """Classification of an affine solve: 'unique', 'parametrized' or
    'inconsistent'; particular is None exactly when inconsistent."""

    kind: str
    particular: tuple | None
    kernel_basis: tuple


def _is_zero(x) -> bool:
    return x == 0


def _print_len(x) -> int:
    return len(str(x))


def _common_ring(rows):
    for row in rows:
        for x in row:
            if isinstance(x, (RationalFunction, MultiPoly)):
                return x.ring
    return None


def poly_lcm(acc: MultiPoly, den: MultiPoly) -> MultiPoly:
    g = poly_gcd(acc, den)
    if g.is_constant():
        return acc * den
    return poly_exact_div(acc, g) * den


def _clear_matrix(rows):
    """Bring all entries into one elimination domain.

    Returns (cleared rows, field_ring): Fractions when no function-field
    entry occurs, else MultiPoly over the common ring with denominators
    cleared row by row.
    """
    ring = _common_ring(rows)
    if ring is None:
        return [[Fraction(x) if isinstance(x, int) else x for x in row] for row in rows], None
    out = []
    for row in rows:
        mult = MultiPoly.const(ring, 1)
        for x in row:
            if isinstance(x, RationalFunction) and not x.den.is_constant():
                mult = poly_lcm(mult, x.den)
        cleared = []
        for x in row:
            if isinstance(x, RationalFunction):
                v = x * RationalFunction(mult)
                if not v.is_polynomial():
                    raise LinalgError("denominator clearing failed")
                cleared.append(v.as_poly())
            elif isinstance(x, MultiPoly):
                if x.ring != ring:
                    raise LinalgError("mixed rings in matrix")
                cleared.append(x * mult)
            else:
                cleared.append(MultiPoly.const(ring, x) * mult)
        out.append(cleared)
    return out, ring


def _exact_div(a, b):
    if isinstance(a, MultiPoly):
        return poly_exact_div(a, b)
    return a / b


def _forward_eliminate(rows):
    """Fraction-free forward elimination (one-step Bareiss).

    Entries must live in a single domain (all Fraction or all MultiPoly).
    Returns (echelon rows, pivot (row, col) pairs).
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    prev_pivot = None
    r = 0
    for c in range(ncols):
        candidates = [i for i in range(r, nrows) if not _is_zero(m[i][c])]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: (_print_len(m[i][c]), i))
        if best != r:
            m[r], m[best] = m[best], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            factor = m[i][c]
            if _is_zero(factor):
                for j in range(ncols):
                    v = m[i][j] * pivot
                    if prev_pivot is not None:
                        v = _exact_div(v, prev_pivot)
                    m[i][j] = v
            else:
                for j in range(ncols):
                    v = m[i][j] * pivot - factor * m[r][j]
                    if prev_pivot is not None:
                        v = _exact_div(v, prev_pivot)
                    m[i][j] = v
        pivots.append((r, c))
        prev_pivot = pivot
        r += 1
        if r == nrows:
            break
    return m, pivots


def _to_field(x):
    if isinstance(x, MultiPoly):
        return RationalFunction(x)
    return x


def _field_zero(ring):
    return Fraction(0) if ring is None else RationalFunction.const(ring, 0)


def _field_one(ring):
    return Fraction(1) if ring is None else RationalFunction.const(ring, 1)


def rref_rank_kernel(matrix) -> RrefResult:
    """Reduced row echelon form, rank and an exact kernel basis.

    Accepts a ScalarMatrix or a sequence of rows.  Kernel vectors follow
    the standard free-column convention: one vector per free column, with
    entry 1 there and minus the reduced entries at the pivot columns.
    """
    if isinstance(matrix, ScalarMatrix):
        rows = matrix.entries
        ncols = matrix.cols
    else:
        rows = [tuple(r) for r in matrix]
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return RrefResult(ScalarMatrix.from_rows([]), 0, (), ())

    cleared, ring = _clear_matrix(rows)
    ech, piv_pairs = _forward_eliminate(cleared)
    rank = len(piv_pairs)

    red = [[_to_field(x) for x in row] for row in ech]
    for k in reversed(range(rank)):
        r, c = piv_pairs[k]
        pv = red[r][c]
        red[r] = [x / pv for x in red[r]]
        for i in range(r):
            f = red[i][c]
            if _is_zero(f):
                continue
            red[i] = [a - f * b for a, b in zip(red[i], red[r])]
    rref_rows = [tuple(row) for row in red]

    pivot_cols = tuple(c for _, c in piv_pairs)
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    kernel = []
    for fc in free_cols:
        vec = [_field_zero(ring)] * ncols
        vec[fc] = _field_one(ring)
        for r, c in piv_pairs:
            vec[c] = -rref_rows[r][fc]
        kernel.append(tuple(vec))

    if __debug__:
        for v in kernel:
            for row in rows:
                acc = _field_zero(ring)
                for a, b in zip(row, v):
                    acc = acc + a * b
                assert acc == 0, "kernel verification failed"

    return RrefResult(ScalarMatrix.from_rows(rref_rows), rank, pivot_cols,
                      tuple(kernel))


def rank_of_rows(rows) -> int:
    """Rank only (skips RREF back-substitution and kernel assembly)."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return 0
    cleared, _ = _clear_matrix(rows)
    _, piv_pairs = _forward_eliminate(cleared)
    return len(piv_pairs)


def independent_subset(rows) -> list:
    """Indices of a maximal independent subset, greedily favoring earlier
    rows (deterministic)."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return []
    cleared, _ = _clear_matrix(rows)
    lead_to_vec: dict = {}
    chosen = []
    for idx, row in enumerate(cleared):
        vec = [_to_field(x) for x in row]
        while True:
            lead = next((j for j, x in enumerate(vec) if not _is_zero(x)), None)
            if lead is None or lead not in lead_to_vec:
                break
            pivot_vec = lead_to_vec[lead]
            f = vec[lead]
            vec = [a - f * b for a, b in zip(vec, pivot_vec)]
        if lead is not None:
            lv = vec[lead]
            lead_to_vec[lead] = [x / lv for x in vec]
            chosen.append(idx)
    return chosen


def solve_affine_system(matrix, rhs: Sequence) -> SolveResult:
    """Solve m x = rhs exactly, classifying the solution set.

    'unique' and 'parametrized' carry a particular solution (plus a kernel
    basis when parametrized); 'inconsistent' carries neither.  Solutions
    are verified by back-substitution.
    """
    if isinstance(matrix, ScalarMatrix):
        rows = matrix.entries
        ncols = matrix.cols
    else:
        rows = [tuple(r) for r in matrix]
        ncols = len(rows[0]) if rows else 0
    rhs = tuple(rhs)
    if len(rhs) != len(rows):
        raise LinalgError("rhs length mismatch")

    aug = [tuple(r) + (b,) for r, b in zip(rows, rhs)]
    res = rref_rank_kernel(aug)
    if ncols in res.pivots:
        return SolveResult("inconsistent", None, ())

    ring = _common_ring(aug)
    particular = [_field_zero(ring)] * ncols
    for r, c in zip(range(res.rank), res.pivots):
        particular[c] = res.rref.entries[r][ncols]
    particular = tuple(particular)

    kernel = ()
    if res.rank < ncols:
        kernel = rref_rank_kernel(rows).kernel_basis

    if __debug__:
        for row, b in zip(rows, rhs):
            acc = _field_zero(ring)
            for a, x in zip(row, particular):
                acc = acc + a * x
            assert acc == b, "solution verification failed"

    kind = "unique" if res.rank == ncols else "parametrized"
    return SolveResult(kind, particular, kernel)
