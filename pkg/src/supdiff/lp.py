"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`fractions.Fraction` using
Bland's anti-cycling rule.  Problem sizes in this package are tiny (tens of
variables), so clarity wins over speed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T, obj, basis, r, c):
    row = T[r]
    p = row[c]
    if p != 1:
        row[:] = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                other[:] = [a - f * b for a, b in zip(other, row)]
    f = obj[c]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, row)]
    basis[r] = c


def _run(T, obj, basis, allowed):
    """Minimise; ``obj`` holds reduced costs with -value in the last slot."""
    while True:
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(T):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, obj, basis, best[1], col)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nonneg: Sequence[int] = (),
    maximize: bool = False,
) -> LPResult:
    """Solve ``min/max c.x`` s.t. ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables listed in ``nonneg`` are constrained to be >= 0; all others
    are free.  All data are converted to ``Fraction``; results are exact.
    """
    n = len(c)
    nn = set(nonneg)
    # column map: free variables are split into positive and negative parts
    cols: list[tuple[int, int]] = []
    for j in range(n):
        cols.append((j, 1))
        if j not in nn:
            cols.append((j, -1))
    ncol = len(cols)
    n_ub = len(A_ub)
    sign = -1 if maximize else 1
    cost = [Fraction(sign * c[j] * s) for j, s in cols] + [Fraction(0)] * n_ub

    rows: list[list[Fraction]] = []
    for i, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [Fraction(a[j] * s) for j, s in cols] + [Fraction(0)] * n_ub
        row[ncol + i] = Fraction(1)
        rows.append(row + [Fraction(b)])
    for a, b in zip(A_eq, b_eq):
        rows.append([Fraction(a[j] * s) for j, s in cols] + [Fraction(0)] * n_ub + [Fraction(b)])
    nstruct = ncol + n_ub

    for row in rows:
        if row[-1] < 0:
            row[:] = [-v for v in row]

    m = len(rows)
    # phase one: artificial variable per row, except ub rows whose slack is usable
    basis: list[int] = []
    art_cols: list[int] = []
    T = []
    for i, row in enumerate(rows):
        if i < n_ub and row[ncol + i] == 1:
            basis.append(ncol + i)
            T.append(row[:-1] + [row[-1]])
        else:
            art_cols.append(i)
            basis.append(-1)
            T.append(row[:-1] + [row[-1]])
    nart = len(art_cols)
    width = nstruct + nart
    for i, row in enumerate(T):
        rhs = row[-1]
        T[i] = row[:-1] + [Fraction(0)] * nart + [rhs]
    for k, i in enumerate(art_cols):
        T[i][nstruct + k] = Fraction(1)
        basis[i] = nstruct + k

    if nart:
        obj = [Fraction(0)] * (width + 1)
        for k, i in enumerate(art_cols):
            obj = [a - b for a, b in zip(obj, T[i])]
            obj[nstruct + k] += 1
        _run(T, obj, basis, range(width))
        if -obj[-1] > 0:
            return LPResult(INFEASIBLE)
        # drive artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= nstruct:
                col = next((j for j in range(nstruct) if T[i][j] != 0), None)
                if col is None:
                    continue
                _pivot(T, obj, basis, i, col)
            keep.append(i)
        T = [T[i][:nstruct] + [T[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]

    obj = cost + [Fraction(0)]
    for i, b in enumerate(basis):
        cb = obj[b]
        if cb:
            obj = [a - cb * v for a, v in zip(obj, T[i])]
    status = _run(T, obj, basis, range(nstruct))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    vals = [Fraction(0)] * nstruct
    for i, b in enumerate(basis):
        vals[b] = T[i][-1]
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * vals[k]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)
