"""Exact rational linear feasibility via a dense-tableau simplex.

Only phase 1 is ever needed here: the callers ask "is this polyhedron
non-empty, and if so give me a point".  Bland's rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _phase_one(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Find x >= 0 with A x = b (b >= 0 required), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    width = n + m + 1
    T = []
    for i in range(m):
        row = list(A[i]) + [Fraction(0)] * m + [b[i]]
        row[n + i] = Fraction(1)
        T.append(row)
    # reduced costs of "minimise the sum of artificials"
    z = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            z[j] -= T[i][j]
        z[-1] -= T[i][-1]
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(n + m) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen for a phase-1 objective bounded below by 0
            break
        prow = T[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [v / piv for v in prow]
            T[leave] = prow
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f != 0:
                    Ti = T[i]
                    T[i] = [x - f * y for x, y in zip(Ti, prow)]
        f = z[enter]
        z = [x - f * y for x, y in zip(z, prow)]
        basis[leave] = enter

    if z[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = T[i][-1]
    return x


def find_feasible_point(
    nvars: int,
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    nonnegative: bool = False,
) -> tuple[Fraction, ...] | None:
    """A point of {x : A_eq x = b_eq, A_ub x <= b_ub} (x >= 0 if ``nonnegative``).

    Free variables are split as x = p - q.  Returns ``None`` when the system
    is infeasible.  Everything is exact.
    """
    split = not nonnegative
    n_slack = len(A_ub)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def expand(row):
        fr = [Fraction(v) for v in row]
        if len(fr) != nvars:
            raise ValueError("constraint row has wrong length")
        return fr + [-v for v in fr] if split else fr

    for row, bi in zip(A_eq, b_eq):
        rows.append(expand(row) + [Fraction(0)] * n_slack)
        rhs.append(Fraction(bi))
    for k, (row, bi) in enumerate(zip(A_ub, b_ub)):
        slack = [Fraction(0)] * n_slack
        slack[k] = Fraction(1)
        rows.append(expand(row) + slack)
        rhs.append(Fraction(bi))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    if not rows:
        return tuple(Fraction(0) for _ in range(nvars))
    sol = _phase_one(rows, rhs)
    if sol is None:
        return None
    if split:
        return tuple(sol[j] - sol[nvars + j] for j in range(nvars))
    return tuple(sol[:nvars])
