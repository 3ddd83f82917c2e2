"""Closed subsets of the bit-cube {0,1}^n and the maps between them.

A point is stored as an ``int`` bitmask: bit ``i`` holds coordinate ``i``.
Its textual form is an n-character 0/1 string with coordinate 0 leftmost,
and the canonical order on points is lexicographic on that string.

The well-order on coordinates is a :class:`CoordinateOrder`.  It never moves
bits around; projections below an order-rank and the product order consult
``rank`` instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AmbientMismatchError, ContractError, InvariantError

__all__ = [
    "CoordinateOrder",
    "CubeSet",
    "FunctionOnS",
    "point_to_str",
    "str_to_point",
    "proj_set",
    "proj_below",
    "pullback",
    "contained_check",
    "split_succ",
    "g_map",
    "factors_through",
    "minimal_factoring_set",
]


@dataclass(frozen=True)
class CoordinateOrder:
    """A linear (hence well-) order on the coordinates ``0..n-1``.

    ``rank[i]`` is the position of coordinate ``i`` in the order.
    """

    n: int
    rank: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ContractError(f"negative coordinate count {self.n}")
        rank = tuple(self.rank) if self.rank else tuple(range(self.n))
        if sorted(rank) != list(range(self.n)):
            raise ContractError(f"rank {rank} is not a permutation of 0..{self.n - 1}")
        object.__setattr__(self, "rank", rank)
        inverse = [0] * self.n
        for i, r in enumerate(rank):
            inverse[r] = i
        object.__setattr__(self, "_at_rank", tuple(inverse))

    @classmethod
    def identity(cls, n: int) -> CoordinateOrder:
        return cls(n)

    def index_at_rank(self, r: int) -> int:
        """Coordinate index occupying order-rank ``r``."""
        if not 0 <= r < self.n:
            raise AmbientMismatchError(f"rank {r} outside 0..{self.n - 1}")
        return self._at_rank[r]

    def below_mask(self, mu: int) -> int:
        """Bitmask of the coordinates whose rank is < ``mu``."""
        if not 0 <= mu <= self.n:
            raise AmbientMismatchError(f"order-rank {mu} outside 0..{self.n}")
        mask = 0
        for r in range(mu):
            mask |= 1 << self._at_rank[r]
        return mask

    def is_identity(self) -> bool:
        return self.rank == tuple(range(self.n))


def point_to_str(point: int, n: int) -> str:
    return "".join("1" if point >> i & 1 else "0" for i in range(n))


def str_to_point(bits: str, n: int | None = None) -> int:
    if n is not None and len(bits) != n:
        raise AmbientMismatchError(f"point {bits!r} does not have length {n}")
    if any(c not in "01" for c in bits):
        raise AmbientMismatchError(f"point {bits!r} is not a 0/1 string")
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


def _lex_key(point: int, n: int) -> int:
    # integer value of the bitstring read with coordinate 0 most significant
    key = 0
    for i in range(n):
        key = key << 1 | (point >> i & 1)
    return key


@dataclass(frozen=True)
class CubeSet:
    """A finite (hence closed) subset of {0,1}^n in canonical order."""

    order: CoordinateOrder
    points: tuple[int, ...] = ()
    _index: Mapping[int, int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.order.n
        limit = 1 << n
        pts = set(self.points)
        for p in pts:
            if not 0 <= p < limit:
                raise AmbientMismatchError(f"point {p:#x} is not in the {n}-cube")
        ordered = tuple(sorted(pts, key=lambda p: _lex_key(p, n)))
        object.__setattr__(self, "points", ordered)
        object.__setattr__(self, "_index", {p: k for k, p in enumerate(ordered)})

    @classmethod
    def from_bitstrings(
        cls, bitstrings: Iterable[str], n: int | None = None, order: CoordinateOrder | None = None
    ) -> CubeSet:
        bitstrings = list(bitstrings)
        if order is None:
            if n is None:
                if not bitstrings:
                    raise AmbientMismatchError("cannot infer n from an empty point list")
                n = len(bitstrings[0])
            order = CoordinateOrder(n)
        return cls(order, tuple(str_to_point(b, order.n) for b in bitstrings))

    @property
    def n(self) -> int:
        return self.order.n

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point: int) -> bool:
        return point in self._index

    def index(self, point: int) -> int:
        return self._index[point]

    def bitstrings(self) -> list[str]:
        return [point_to_str(p, self.n) for p in self.points]

    def with_points(self, points: Iterable[int]) -> CubeSet:
        """Same ambient cube and order, different points."""
        return CubeSet(self.order, tuple(points))

    def same_ambient(self, other: CubeSet) -> bool:
        return self.order == other.order

    def __repr__(self) -> str:
        return f"CubeSet(n={self.n}, points={self.bitstrings()})"


@dataclass(frozen=True)
class FunctionOnS:
    """An integer-valued function on a CubeSet, aligned with its point order."""

    domain: CubeSet
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != len(self.domain):
            raise AmbientMismatchError(
                f"{len(values)} values for a domain of {len(self.domain)} points"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, domain: CubeSet, fn) -> FunctionOnS:
        return cls(domain, tuple(fn(p) for p in domain.points))

    @classmethod
    def from_mapping(cls, domain: CubeSet, mapping: Mapping[int, int]) -> FunctionOnS:
        return cls(domain, tuple(mapping[p] for p in domain.points))

    @classmethod
    def constant(cls, domain: CubeSet, c: int) -> FunctionOnS:
        return cls(domain, (c,) * len(domain))

    @classmethod
    def delta(cls, domain: CubeSet, point: int) -> FunctionOnS:
        if point not in domain:
            raise AmbientMismatchError(f"{point_to_str(point, domain.n)} is not in the domain")
        return cls(domain, tuple(int(p == point) for p in domain.points))

    def __call__(self, point: int) -> int:
        return self.values[self.domain.index(point)]

    def _check(self, other: FunctionOnS):
        if other.domain != self.domain:
            raise AmbientMismatchError("functions live on different domains")

    def __add__(self, other: FunctionOnS) -> FunctionOnS:
        self._check(other)
        return FunctionOnS(self.domain, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: FunctionOnS) -> FunctionOnS:
        self._check(other)
        return FunctionOnS(self.domain, tuple(a - b for a, b in zip(self.values, other.values)))

    def __rmul__(self, c: int) -> FunctionOnS:
        return FunctionOnS(self.domain, tuple(c * v for v in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def as_dict(self) -> dict[str, int]:
        return {point_to_str(p, self.domain.n): v for p, v in zip(self.domain.points, self.values)}


def _coordinate_mask(S: CubeSet, J: Iterable[int]) -> int:
    mask = 0
    for j in J:
        if not 0 <= j < S.n:
            raise AmbientMismatchError(f"coordinate {j} outside 0..{S.n - 1}")
        mask |= 1 << j
    return mask


def proj_set(S: CubeSet, J: Iterable[int]) -> CubeSet:
    """Image of ``S`` under the map zeroing every coordinate outside ``J``."""
    mask = _coordinate_mask(S, J)
    return S.with_points({p & mask for p in S.points})


def proj_below(S: CubeSet, mu: int) -> CubeSet:
    """Image of ``S`` keeping only coordinates of rank < ``mu``."""
    mask = S.order.below_mask(mu)
    return S.with_points({p & mask for p in S.points})


def pullback(S: CubeSet, J: Iterable[int], f: FunctionOnS) -> FunctionOnS:
    """Precompose ``f`` (a function on ``proj_set(S, J)``) with the projection."""
    mask = _coordinate_mask(S, J)
    if f.domain != S.with_points({p & mask for p in S.points}):
        raise AmbientMismatchError("function is not defined on the projection of S")
    return FunctionOnS(S, tuple(f(p & mask) for p in S.points))


def contained_check(S: CubeSet, mu: int) -> bool:
    """True iff every coordinate set to 1 somewhere in ``S`` has rank < ``mu``."""
    outside = ~S.order.below_mask(mu)
    return all(not p & outside for p in S.points)


def split_succ(S: CubeSet, mu: int) -> tuple[CubeSet, CubeSet, CubeSet]:
    """Split ``S`` along the coordinate of rank ``mu``.

    Returns ``(S0, S1, S')`` where ``S0``/``S1`` are the points with that
    coordinate 0/1 and ``S' = S0 ∩ π_mu(S1)``.  ``S`` must not use any
    coordinate of rank above ``mu``.
    """
    if not 0 <= mu < S.n:
        raise AmbientMismatchError(f"order-rank {mu} outside 0..{S.n - 1}")
    allowed = S.order.below_mask(mu + 1)
    for p in S.points:
        if p & ~allowed:
            raise ContractError(
                f"point {point_to_str(p, S.n)} has a coordinate of rank > {mu} set"
            )
    bit = 1 << S.order.index_at_rank(mu)
    s0 = [p for p in S.points if not p & bit]
    s1 = [p for p in S.points if p & bit]
    lowered = {p ^ bit for p in s1}
    return S.with_points(s0), S.with_points(s1), S.with_points(lowered.intersection(s0))


def g_map(S: CubeSet, mu: int, f: FunctionOnS) -> FunctionOnS:
    """``g(f)(x) = f(x with the rank-mu coordinate set to 1) - f(x)`` on ``S'``."""
    if f.domain != S:
        raise AmbientMismatchError("function is not defined on S")
    _, _, s_prime = split_succ(S, mu)
    bit = 1 << S.order.index_at_rank(mu)
    values = []
    for x in s_prime.points:
        raised = x | bit
        if raised not in S:
            raise InvariantError(
                f"{point_to_str(raised, S.n)} missing from S although "
                f"{point_to_str(x, S.n)} lies in S'"
            )
        values.append(f(raised) - f(x))
    return FunctionOnS(s_prime, tuple(values))


def factors_through(S: CubeSet, f: FunctionOnS, J: Iterable[int]) -> FunctionOnS | None:
    """The function on ``proj_set(S, J)`` pulling back to ``f``, if there is one."""
    if f.domain != S:
        raise AmbientMismatchError("function is not defined on S")
    mask = _coordinate_mask(S, J)
    seen: dict[int, int] = {}
    for p, v in zip(S.points, f.values):
        image = p & mask
        if seen.setdefault(image, v) != v:
            return None
    return FunctionOnS.from_mapping(S.with_points(seen), seen)


def minimal_factoring_set(S: CubeSet, f: FunctionOnS) -> frozenset[int]:
    """A coordinate set ``J`` through which ``f`` factors, minimal under single drops.

    Ranks are tried from highest to lowest and a drop is kept whenever ``f``
    still factors.  The result depends on the coordinate order; it is not a
    canonical minimum.
    """
    J = set(range(S.n))
    for r in reversed(range(S.n)):
        i = S.order.index_at_rank(r)
        if factors_through(S, f, J - {i}) is not None:
            J.discard(i)
    return frozenset(J)


