"""Exact integer linear algebra: Hermite normal form, membership, kernels.

Row operations run on numpy arrays.  Work starts in ``int64`` and is moved
to ``object`` dtype (Python integers) as soon as an update could overflow,
so results are always exact.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbientMismatchError

__all__ = [
    "IntMatrix",
    "HnfResult",
    "hnf",
    "lattice_membership",
    "int_kernel",
    "same_lattice",
    "rank",
    "Lattice",
]

# updates whose magnitude bound stays below this run in int64
_SAFE = 1 << 62


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise AmbientMismatchError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise AmbientMismatchError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise AmbientMismatchError("column count needed for a matrix without rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise AmbientMismatchError(f"row of length {len(r)} in a matrix with {cols} columns")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, k: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(k)] for i in range(k)], cols=k)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise AmbientMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        cols_b = [other.entries[j :: other.cols] for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.entries[i * self.cols : (i + 1) * self.cols]
            out.append([sum(a * b for a, b in zip(r, c)) for c in cols_b])
        return IntMatrix.from_rows(out, cols=other.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.to_rows())


@dataclass(frozen=True)
class HnfResult:
    """``U @ M == H`` with ``U`` unimodular and ``H`` in row Hermite normal form."""

    H: IntMatrix
    U: IntMatrix
    rank: int
    pivots: tuple[int, ...]


def _as_int_matrix(M) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_rows(M)


def _to_array(rows: list[list[int]], cols: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, cols), dtype=np.int64)
    big = max((abs(x) for r in rows for x in r), default=0)
    if big < 1 << 31:
        return np.array(rows, dtype=np.int64).reshape(len(rows), cols)
    out = np.empty((len(rows), cols), dtype=object)
    for i, r in enumerate(rows):
        out[i, :] = r
    return out


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


class _Work:
    """A matrix under elementary row operations with an overflow guard."""

    def __init__(self, a: np.ndarray):
        self.a = a
        self.exact = a.dtype == object
        self.bound = _maxabs(a)

    def _make_room(self, growth: int):
        if self.exact or self.bound * (growth + 1) < _SAFE:
            return
        self.bound = _maxabs(self.a)
        if self.bound * (growth + 1) >= _SAFE:
            self.a = self.a.astype(object)
            self.exact = True

    def subtract_multiples(self, targets: np.ndarray, q: np.ndarray, src: int):
        """``a[targets] -= q[:, None] * a[src]``."""
        growth = _maxabs(q)
        if growth == 0:
            return
        self._make_room(growth)
        a = self.a
        if self.exact:
            q = q.astype(object)
        a[targets] -= np.outer(q, a[src])
        if not self.exact:
            self.bound = self.bound * (growth + 1)

    def swap(self, i: int, j: int):
        if i != j:
            self.a[[i, j]] = self.a[[j, i]]

    def negate(self, i: int):
        self.a[i] = -self.a[i]


def _hnf_in_place(work: _Work, ncols: int) -> list[int]:
    """Row-style HNF on the first ``ncols`` columns; returns pivot columns."""
    m = work.a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            col = work.a[r:, c]
            nz = np.flatnonzero(col)
            if nz.size == 0:
                break
            mags = np.abs(col[nz])
            k = int(nz[int(np.argmin(mags))])
            work.swap(r, r + k)
            if nz.size == 1:
                break
            below = r + 1 + np.flatnonzero(work.a[r + 1 :, c])
            q = work.a[below, c] // work.a[r, c]
            work.subtract_multiples(below, q, r)
        if work.a[r, c] == 0:
            continue
        if work.a[r, c] < 0:
            work.negate(r)
        if r:
            above = np.arange(r)
            q = work.a[:r, c] // work.a[r, c]
            keep = np.flatnonzero(q)
            if keep.size:
                work.subtract_multiples(above[keep], q[keep], r)
        pivots.append(c)
        r += 1
    return pivots


def hnf(M) -> HnfResult:
    """Hermite normal form with transform: ``U @ M == H``.

    Columns are processed left to right.  Pivots are positive and entries
    above a pivot are reduced into ``[0, pivot)``.  Zero rows sit at the
    bottom of ``H``; the matching rows of ``U`` span the left kernel.
    """
    M = _as_int_matrix(M)
    m, n = M.shape
    rows = [r + [int(i == j) for j in range(m)] for i, r in enumerate(M.to_rows())]
    work = _Work(_to_array(rows, n + m))
    pivots = _hnf_in_place(work, n)
    full = work.a.tolist()
    H = IntMatrix.from_rows([r[:n] for r in full], cols=n)
    U = IntMatrix.from_rows([r[n:] for r in full], cols=m)
    return HnfResult(H, U, len(pivots), tuple(pivots))


def rank(M) -> int:
    return hnf(M).rank


def _triangular_solve(H: IntMatrix, pivots: Sequence[int], v: Sequence[int]) -> list[int] | None:
    """``y`` with ``y @ H[:len(pivots)] == v``, or None if there is no integer one."""
    residual = list(v)
    y = []
    for k, c in enumerate(pivots):
        h = H.row(k)
        a = residual[c]
        if a % h[c]:
            return None
        t = a // h[c]
        y.append(t)
        if t:
            for j in range(c, H.cols):
                residual[j] -= t * h[j]
    if any(residual):
        return None
    return y


def lattice_membership(rows, v: Sequence[int]) -> list[int] | None:
    """Integer ``x`` with ``x @ rows == v``, or None if ``v`` is outside the row lattice.

    The returned certificate has one coefficient per row and is checked
    exactly before it is returned.
    """
    rows = _as_int_matrix(rows)
    v = [int(x) for x in v]
    if len(v) != rows.cols:
        raise AmbientMismatchError(f"vector of length {len(v)} against {rows.cols} columns")
    if not any(v):
        return [0] * rows.rows
    if rows.rows == 0:
        return None
    res = hnf(rows)
    y = _triangular_solve(res.H, res.pivots, v)
    if y is None:
        return None
    x = [0] * rows.rows
    for k, t in enumerate(y):
        if t:
            u = res.U.row(k)
            for i in range(rows.rows):
                x[i] += t * u[i]
    check = [sum(x[i] * rows.entries[i * rows.cols + j] for i in range(rows.rows)) for j in range(rows.cols)]
    if check != v:
        raise ArithmeticError("membership certificate failed verification")
    return x


def int_kernel(M) -> list[list[int]]:
    """A basis of ``{x : x @ M == 0}`` as a free Z-module."""
    M = _as_int_matrix(M)
    res = hnf(M)
    return [res.U.row(i) for i in range(res.rank, M.rows)]


def canonical_basis(M) -> list[list[int]]:
    """Nonzero rows of the Hermite normal form: a canonical name for the row lattice."""
    res = hnf(M)
    return [res.H.row(i) for i in range(res.rank)]


def same_lattice(A, B) -> bool:
    A, B = _as_int_matrix(A), _as_int_matrix(B)
    if A.cols != B.cols:
        raise AmbientMismatchError(f"{A.cols} columns against {B.cols}")
    return canonical_basis(A) == canonical_basis(B)


class Lattice:
    """An integer row lattice in Z^dim grown one vector at a time.

    Keeps an echelon basis indexed by pivot column, so membership is a
    triangular solve.  ``insert`` merges new vectors with extended gcd
    steps, keeping the basis unimodularly equivalent to the inserted span.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, np.ndarray] = {}
        self._bounds: dict[int, int] = {}
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def is_everything(self) -> bool:
        """True when the lattice is all of Z^dim."""
        return len(self._rows) == self.dim and all(abs(int(r[c])) == 1 for c, r in self._rows.items())

    def basis(self) -> list[list[int]]:
        return [[int(x) for x in self._rows[c]] for c in self._pivots]

    def _vector(self, v) -> tuple[np.ndarray, int]:
        if isinstance(v, np.ndarray) and v.dtype != object:
            v = v.astype(np.int64, copy=True)
        else:
            v = [int(x) for x in v]
            if max((abs(x) for x in v), default=0) < 1 << 31:
                v = np.array(v, dtype=np.int64)
            else:
                v = np.array(v + [None], dtype=object)[:-1]
        if v.shape != (self.dim,):
            raise AmbientMismatchError(f"vector of length {v.shape[0]} in dimension {self.dim}")
        return v, _maxabs(v)

    @staticmethod
    def _combine(a: int, x: np.ndarray, bx: int, b: int, y: np.ndarray, by: int):
        """``(a*x + b*y, bound)`` computed exactly."""
        bound = abs(a) * bx + abs(b) * by
        if x.dtype != object and y.dtype != object:
            if bound >= _SAFE:
                bx, by = _maxabs(x), _maxabs(y)
                bound = abs(a) * bx + abs(b) * by
            if bound < _SAFE:
                return a * x + b * y, bound
        return a * x.astype(object) + b * y.astype(object), bound

    def _reduce(self, v: np.ndarray, bound: int) -> tuple[np.ndarray, int, int | None]:
        """Reduce ``v`` by the basis; return residue, its bound and the first stuck column."""
        rows, bounds = self._rows, self._bounds
        for c in self._pivots:
            a = int(v[c])
            if not a:
                continue
            row = rows[c]
            p = int(row[c])
            if a % p:
                break
            v, bound = self._combine(1, v, bound, -(a // p), row, bounds[c])
        nz = np.flatnonzero(v)
        return v, bound, (int(nz[0]) if nz.size else None)

    def __contains__(self, v) -> bool:
        v, bound = self._vector(v)
        return self._reduce(v, bound)[2] is None

    def insert(self, v) -> bool:
        """Add ``v`` to the generators; False if it was already in the lattice."""
        v, bound = self._vector(v)
        v, bound, c = self._reduce(v, bound)
        if c is None:
            return False
        while c is not None:
            row = self._rows.get(c)
            if row is None:
                if v[c] < 0:
                    v = -v
                self._rows[c] = v
                self._bounds[c] = bound
                insort(self._pivots, c)
                return True
            p, a = int(row[c]), int(v[c])
            g, s, t = _xgcd(p, a)
            rb = self._bounds[c]
            # [[s, t], [-a/g, p/g]] has determinant 1
            self._rows[c], self._bounds[c] = self._combine(s, row, rb, t, v, bound)
            v, bound = self._combine(-(a // g), row, rb, p // g, v, bound)
            v, bound, c = self._reduce(v, bound)
        return True


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0
