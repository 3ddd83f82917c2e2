"""Independent reference computations used only by the tests.

Nothing here imports the package's lattice code: ranks and determinants use
fraction-free (Bareiss) elimination, membership uses an exhaustive search
over a box whose size comes from a Cramer-rule argument.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def bareiss_rank(rows: list[list[int]]) -> int:
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    rank, prev = 0, 1
    for c in range(n):
        pivot = next((i for i in range(rank, m) if a[i][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for i in range(rank + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) // prev
            a[i][c] = 0
        prev = a[rank][c]
        rank += 1
        if rank == m:
            break
    return rank


def bareiss_det(rows: list[list[int]]) -> int:
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _independent_rows(rows):
    """Indices of a maximal independent set of rows, chosen greedily."""
    chosen = []
    for i in range(len(rows)):
        if bareiss_rank([rows[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def _nonsingular_columns(basis_rows):
    d = len(basis_rows)
    ncols = len(basis_rows[0]) if basis_rows else 0
    from itertools import combinations

    for cols in combinations(range(ncols), d):
        sub = [[r[c] for c in cols] for r in basis_rows]
        det = bareiss_det(sub)
        if det:
            return list(cols), sub, det
    raise AssertionError("rows are not independent")


def _solve(sub: list[list[int]], rhs: list[int]) -> list[Fraction]:
    """``y`` with ``y @ sub == rhs`` for square nonsingular ``sub``, by Gauss-Jordan over Q."""
    d = len(sub)
    # transpose: sub^T y^T = rhs^T
    a = [[Fraction(sub[j][i]) for j in range(d)] + [Fraction(rhs[i])] for i in range(d)]
    for c in range(d):
        p = next(i for i in range(c, d) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        for i in range(d):
            if i != c and a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][d] / a[i][i] for i in range(d)]


def brute_force_membership(rows: list[list[int]], v: list[int]) -> bool:
    """Exhaustive integer membership test for tiny matrices.

    Pick independent rows ``B`` (``d`` of them) and ``d`` columns where
    they have a nonzero minor ``D``.  For every other row ``j``, Cramer's
    rule gives a kernel vector with ``D`` in slot ``j`` supported on ``B``
    and ``j``, so any certificate can be shifted until each non-basic
    coefficient lies in ``[0, |D|)``.  Once those are fixed the basic
    coefficients are forced.  The search over ``[0, |D|)^(m - d)`` is
    therefore complete.
    """
    ncols = len(v)
    if not any(v):
        return True
    if not rows:
        return False
    basic = _independent_rows(rows)
    if not basic:
        return False
    others = [i for i in range(len(rows)) if i not in basic]
    cols, sub, det = _nonsingular_columns([rows[i] for i in basic])
    box = range(abs(det))
    for coeffs in product(box, repeat=len(others)):
        residual = list(v)
        for c, j in zip(coeffs, others):
            for k in range(ncols):
                residual[k] -= c * rows[j][k]
        y = _solve(sub, [residual[c] for c in cols])
        if any(t.denominator != 1 for t in y):
            continue
        full = [sum(int(t) * rows[i][k] for t, i in zip(y, basic)) for k in range(ncols)]
        if full == residual:
            return True
    return False


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def integer_combinations(vectors, target, bound):
    """Search coefficient vectors in ``[-bound, bound]`` whose combination is ``target``."""
    for coeffs in product(range(-bound, bound + 1), repeat=len(vectors)):
        combo = [sum(c * vec[k] for c, vec in zip(coeffs, vectors)) for k in range(len(target))]
        if combo == list(target):
            return coeffs
    return None
