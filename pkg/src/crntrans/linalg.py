"""Exact rational linear algebra.

Everything here works on plain nested lists/tuples of ``int`` or
``fractions.Fraction``; no floating point is ever produced.  Elimination is
fraction-free: rows are scaled to integers up front and kept primitive
(gcd 1) while eliminating, which keeps coefficient growth in check on the
small dense matrices reaction networks produce.

Subspaces are carried around as :class:`SubspaceBasis`, whose vectors are
primitive integer tuples with a positive leading entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def primitive_row(row: Sequence) -> list[int]:
    """Scale a rational row to a primitive integer row (same direction)."""
    fr = [_as_fraction(x) for x in row]
    den = reduce(lcm, (f.denominator for f in fr), 1)
    ints = [int(f * den) for f in fr]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def normalize_vector(v: Sequence) -> tuple[int, ...]:
    """Primitive integer representative with positive first nonzero entry.

    The zero vector is returned unchanged (as integers).
    """
    ints = primitive_row(v)
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    if any(len(row) != inner for row in A):
        raise ValueError("matmul: inner dimensions differ")
    return [[sum((row[k] * B[k][j] for k in range(inner)), 0) for j in range(cols)] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * x for a, x in zip(row, v)), 0) for row in A]


def transpose(A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


# ---------------------------------------------------------------------------
# elimination kernels


def reduced_echelon(M: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan elimination.

    Returns the nonzero rows of a reduced echelon form (integer, primitive,
    positive pivots; pivot columns are zero outside their pivot row) and the
    list of pivot columns.  Pivot choice: first nonzero entry in column order.
    """
    rows = [primitive_row(r) for r in M if any(x != 0 for x in r)]
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    pivots: list[int] = []
    pr = 0
    for col in range(ncols):
        sel = next((i for i in range(pr, len(rows)) if rows[i][col] != 0), None)
        if sel is None:
            continue
        rows[pr], rows[sel] = rows[sel], rows[pr]
        piv = rows[pr]
        if piv[col] < 0:
            piv = [-x for x in piv]
            rows[pr] = piv
        a = piv[col]
        for i in range(len(rows)):
            if i == pr or rows[i][col] == 0:
                continue
            b = rows[i][col]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = [fa * x - fb * y for x, y in zip(rows[i], piv)]
            h = reduce(gcd, new, 0)
            if h > 1:
                new = [x // h for x in new]
            rows[i] = new
        pivots.append(col)
        pr += 1
        if pr == len(rows):
            break
    rows = rows[:pr]
    return rows, pivots


def _bareiss_rank(M: Sequence[Sequence]) -> int:
    rows = [primitive_row(r) for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    nrows = len(rows)
    rank = 0
    prev = 1
    for col in range(ncols):
        sel = next((i for i in range(rank, nrows) if rows[i][col] != 0), None)
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, nrows):
            ri = rows[i]
            f = ri[col]
            rows[i] = [(p * ri[j] - f * rows[rank][j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(M: Sequence[Sequence]) -> int:
    """Exact rank by Bareiss fraction-free elimination."""
    if not M or not len(M[0]):
        return 0
    return _bareiss_rank(M)


def det(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix (Bareiss)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in M):
        raise ValueError("det: matrix is not square")
    scale = Fraction(1)
    rows = []
    for r in M:
        fr = [_as_fraction(x) for x in r]
        den = reduce(lcm, (f.denominator for f in fr), 1)
        rows.append([int(f * den) for f in fr])
        scale /= den
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            sel = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if sel is None:
                return Fraction(0)
            rows[k], rows[sel] = rows[sel], rows[k]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (p * rows[i][j] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = p
    return sign * rows[n - 1][n - 1] * scale


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class SubspaceBasis:
    """A linearly independent set of primitive integer vectors in Q^ambient_dim."""

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient_dim:
                raise ValueError("basis vector has wrong length")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if all(x == 0 for x in v):
            return True
        return rank(list(self.basis) + [list(v)]) == self.dim

    def same_span(self, other: "SubspaceBasis") -> bool:
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return all(self.contains(v) for v in other.basis)

    def canonical(self) -> "SubspaceBasis":
        """Reduced-echelon basis; equal subspaces give equal objects."""
        return span(self.basis, self.ambient_dim)

    def as_columns(self) -> list[list[int]]:
        return transpose(list(self.basis), self.ambient_dim) if self.basis else [[] for _ in range(self.ambient_dim)]


def span(vectors: Iterable[Sequence], ambient_dim: int) -> SubspaceBasis:
    """Canonical (reduced echelon, primitive) basis of the span of ``vectors``."""
    vecs = [list(v) for v in vectors]
    for v in vecs:
        if len(v) != ambient_dim:
            raise ValueError("dimension mismatch")
    rows, _ = reduced_echelon(vecs, ambient_dim)
    return SubspaceBasis(ambient_dim, tuple(normalize_vector(r) for r in rows))


def column_space(M: Sequence[Sequence], nrows: int | None = None) -> SubspaceBasis:
    m = len(M) if nrows is None else nrows
    return span(transpose(M, m) if M and len(M[0]) else [], m)


def kernel_basis(M: Sequence[Sequence], ncols: int | None = None) -> SubspaceBasis:
    """Right null space {v : M v = 0}.

    ``ncols`` must be given when ``M`` has no rows.
    """
    if ncols is None:
        if not M:
            raise ValueError("kernel_basis of an empty matrix needs ncols")
        ncols = len(M[0])
    rows, pivots = reduced_echelon(M, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = Fraction(-row[f], row[pc])
        basis.append(normalize_vector(v))
    return SubspaceBasis(ncols, tuple(basis))


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a greedy maximal independent subset, scanning in order."""
    chosen: list[int] = []
    acc: list[Sequence] = []
    r = 0
    for i, v in enumerate(vectors):
        if all(x == 0 for x in v):
            continue
        trial = acc + [v]
        rr = rank(trial)
        if rr > r:
            acc = trial
            r = rr
            chosen.append(i)
    return chosen


def solve_coords(basis: SubspaceBasis | Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum_j c_j b_j == target, or None if target is outside the span."""
    vecs = list(basis.basis) if isinstance(basis, SubspaceBasis) else [list(b) for b in basis]
    dim = len(target)
    k = len(vecs)
    if k == 0:
        return () if all(x == 0 for x in target) else None
    # augmented system [B | t] with B having the basis vectors as columns
    aug = [[vecs[j][i] for j in range(k)] + [target[i]] for i in range(dim)]
    rows, pivots = reduced_echelon(aug, k + 1)
    if k in pivots:
        return None
    if len(pivots) != k:
        raise ValueError("solve_coords: basis vectors are dependent")
    coeffs = [Fraction(0)] * k
    for row, pc in zip(rows, pivots):
        coeffs[pc] = Fraction(row[k], row[pc])
    return tuple(coeffs)


def intersect(A: SubspaceBasis, B: SubspaceBasis) -> SubspaceBasis:
    if A.ambient_dim != B.ambient_dim:
        raise ValueError("intersect: ambient dimensions differ")
    n = A.ambient_dim
    if A.dim == 0 or B.dim == 0:
        return SubspaceBasis(n)
    # [A | -B] (a, b)^T = 0  =>  A a lies in both
    M = [[a[i] for a in A.basis] + [-b[i] for b in B.basis] for i in range(n)]
    ker = kernel_basis(M, A.dim + B.dim)
    vecs = []
    for w in ker.basis:
        vecs.append([sum(w[j] * A.basis[j][i] for j in range(A.dim)) for i in range(n)])
    return span(vecs, n)


def orthogonal_complement(A: SubspaceBasis) -> SubspaceBasis:
    if A.dim == 0:
        n = A.ambient_dim
        return SubspaceBasis(n, tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n)))
    return kernel_basis(list(A.basis), A.ambient_dim)
