"""Finite stages of profinite spaces and their embeddings into bit-cubes.

A finite discrete space is embedded in {0,1}^k by a family of clopen
(here: arbitrary) subsets, coordinate ``i`` being the indicator of the
``i``-th set.  Inverse systems of finite spaces are embedded stage by
stage, with the sets pulled back from earlier stages at the low ranks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Sequence

from .basis import GoodBasis, Method, compute_basis
from .cube import CoordinateOrder, CubeSet, proj_below
from .errors import CapExceededError, ContractError, InvariantError
from .products import DEFAULT_MAX_N


@dataclass(frozen=True)
class FiniteSpace:
    elements: tuple[str, ...]

    def __post_init__(self):
        elements = tuple(str(e) for e in self.elements)
        if any(not e for e in elements):
            raise ContractError("empty element label")
        if len(set(elements)) != len(elements):
            raise ContractError(f"duplicate labels in {list(elements)}")
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ClopenFamily:
    space: FiniteSpace
    sets: tuple[frozenset[str], ...]

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        universe = set(self.space.elements)
        for s in sets:
            if not s <= universe:
                raise ContractError(f"{sorted(s - universe)} are not elements of the space")
        object.__setattr__(self, "sets", sets)

    def unseparated_pair(self) -> tuple[str, str] | None:
        """Two distinct elements no set tells apart, or None if the family separates."""
        seen: dict[tuple[bool, ...], str] = {}
        for x in self.space.elements:
            key = tuple(x in s for s in self.sets)
            if key in seen:
                return seen[key], x
            seen[key] = x
        return None


@dataclass(frozen=True)
class InverseSystem:
    stages: tuple[FiniteSpace, ...]
    transitions: tuple[Mapping[str, str], ...]

    def __post_init__(self):
        if len(self.transitions) != max(len(self.stages) - 1, 0):
            raise ContractError(
                f"{len(self.stages)} stages need {len(self.stages) - 1} transitions, "
                f"got {len(self.transitions)}"
            )
        for k, t in enumerate(self.transitions, start=1):
            src, dst = self.stages[k], self.stages[k - 1]
            if set(t) != set(src.elements):
                raise InvariantError(f"transition {k} is not defined on every element of stage {k}")
            if not set(t.values()) <= set(dst.elements):
                raise InvariantError(f"transition {k} leaves stage {k - 1}")
            missed = set(dst.elements) - set(t.values())
            if missed:
                raise InvariantError(f"transition {k} is not surjective: misses {sorted(missed)}")

    @classmethod
    def from_json(cls, data: dict) -> InverseSystem:
        stages = tuple(FiniteSpace(tuple(s)) for s in data["stages"])
        transitions = tuple(dict(t) for t in data.get("transitions", []))
        return cls(stages, transitions)

    def to_json(self) -> dict:
        return {
            "stages": [list(s.elements) for s in self.stages],
            "transitions": [dict(t) for t in self.transitions],
        }


def clopen_embedding(T: FiniteSpace, family: ClopenFamily) -> tuple[CubeSet, dict[str, int]]:
    """Image of ``T`` in {0,1}^len(family) and the label-to-point bijection."""
    if family.space != T:
        raise ContractError("family belongs to a different space")
    pair = family.unseparated_pair()
    if pair is not None:
        raise ContractError(f"family does not separate {pair[0]!r} and {pair[1]!r}")
    points = {
        x: sum(1 << i for i, s in enumerate(family.sets) if x in s) for x in T.elements
    }
    return CubeSet(CoordinateOrder(len(family.sets)), tuple(points.values())), points


def _canonical_subsets(T: FiniteSpace):
    for size in range(len(T) + 1):
        for idx in combinations(range(len(T)), size):
            yield frozenset(T.elements[i] for i in idx)


def all_clopens(T: FiniteSpace, max_size: int = 12) -> ClopenFamily:
    """Every subset of ``T``, by size and then lexicographically on element positions."""
    if len(T) > max_size:
        raise CapExceededError(f"|T| = {len(T)} exceeds the cap {max_size} for all subsets")
    return ClopenFamily(T, tuple(_canonical_subsets(T)))


def _classes(T: FiniteSpace, sets: Sequence[frozenset[str]]) -> list[list[str]]:
    groups: dict[tuple[bool, ...], list[str]] = {}
    for x in T.elements:
        groups.setdefault(tuple(x in s for s in sets), []).append(x)
    return list(groups.values())


def minimal_separating_family(
    T: FiniteSpace, start: Sequence[frozenset[str]] = (), max_size: int = 16
) -> ClopenFamily:
    """Extend ``start`` greedily until it separates the points of ``T``.

    Each step adds the subset (first in canonical order on ties) separating
    the most pairs that are still together.  Small, but not always minimum.
    """
    sets = [frozenset(s) for s in start]
    if len(T) > max_size:
        raise CapExceededError(f"|T| = {len(T)} exceeds the cap {max_size}")
    candidates = list(_canonical_subsets(T))
    while True:
        classes = _classes(T, sets)
        if all(len(c) == 1 for c in classes):
            return ClopenFamily(T, tuple(sets))
        best, best_gain = None, 0
        for s in candidates:
            gain = 0
            for c in classes:
                inside = sum(1 for x in c if x in s)
                gain += inside * (len(c) - inside)
            if gain > best_gain:
                best, best_gain = s, gain
        sets.append(best)


def default_family(T: FiniteSpace, max_n: int = DEFAULT_MAX_N) -> ClopenFamily:
    """All subsets when that fits under the coordinate cap, otherwise a small separating family."""
    if (1 << len(T)) <= max_n:
        return all_clopens(T)
    return minimal_separating_family(T)


def free_basis_of_finite_space(
    T: FiniteSpace,
    family: ClopenFamily | None = None,
    method: Method = "recursive",
    max_n: int = DEFAULT_MAX_N,
) -> GoodBasis:
    if family is None:
        family = default_family(T, max_n)
    image, _ = clopen_embedding(T, family)
    return compute_basis(image, method, max_n)


def aligned_families(system: InverseSystem) -> list[ClopenFamily]:
    """A separating family per stage, each starting with the preimages of the previous one."""
    families: list[ClopenFamily] = []
    for k, stage in enumerate(system.stages):
        start: list[frozenset[str]] = []
        if k:
            t = system.transitions[k - 1]
            start = [frozenset(x for x in stage.elements if t[x] in s) for s in families[-1].sets]
        families.append(minimal_separating_family(stage, start))
    return families


@dataclass
class StageReport:
    stage: int
    low_coordinates: int
    coordinates: int
    projection_matches: bool
    stage_sizes: tuple[int, int]
    basis_sizes: tuple[int, int]
    inclusion: bool

    @property
    def passed(self) -> bool:
        return self.projection_matches and self.inclusion and self.basis_sizes == self.stage_sizes

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "low_coordinates": self.low_coordinates,
            "coordinates": self.coordinates,
            "projection_matches": self.projection_matches,
            "stage_sizes": list(self.stage_sizes),
            "basis_sizes": list(self.basis_sizes),
            "inclusion": self.inclusion,
            "passed": self.passed,
        }


def stage_consistency(system: InverseSystem, k: int, method: Method = "greedy") -> StageReport:
    """Compare the embeddings of stages ``k - 1`` and ``k``.

    The stage-``k`` image, projected to the coordinates pulled back from
    stage ``k - 1``, must be the stage-``k - 1`` image, and the good
    products of the coarser image must stay good for the finer one.
    """
    if not 1 <= k < len(system.stages):
        raise ContractError(f"stage index {k} outside 1..{len(system.stages) - 1}")
    families = aligned_families(system)
    coarse, _ = clopen_embedding(system.stages[k - 1], families[k - 1])
    fine, _ = clopen_embedding(system.stages[k], families[k])
    low = len(coarse.order.rank)
    # identity orders: coordinate index = rank, so the pulled back sets sit at ranks < low
    lifted = CubeSet(fine.order, coarse.points)
    E_coarse = compute_basis(coarse, method).products
    E_fine = compute_basis(fine, method).products
    return StageReport(
        stage=k,
        low_coordinates=low,
        coordinates=fine.n,
        projection_matches=proj_below(fine, low) == lifted,
        stage_sizes=(len(system.stages[k - 1]), len(system.stages[k])),
        basis_sizes=(len(E_coarse), len(E_fine)),
        inclusion=set(E_coarse) <= set(E_fine),
    )


def random_inverse_system(
    stages: int, max_size: int, rng: random.Random
) -> InverseSystem:
    """A chain of random surjections with nondecreasing stage sizes."""
    sizes = [rng.randint(1, max_size)]
    for _ in range(stages - 1):
        sizes.append(rng.randint(sizes[-1], max_size))
    spaces = tuple(
        FiniteSpace(tuple(f"s{k}_{i}" for i in range(size))) for k, size in enumerate(sizes)
    )
    transitions = []
    for k in range(1, stages):
        src, dst = spaces[k].elements, spaces[k - 1].elements
        images = list(dst) + [rng.choice(dst) for _ in range(len(src) - len(dst))]
        rng.shuffle(images)
        transitions.append(dict(zip(src, images)))
    return InverseSystem(spaces, tuple(transitions))


def padic_system(p: int, k: int) -> InverseSystem:
    """Z/p <- Z/p^2 <- ... <- Z/p^k under reduction."""
    stages = tuple(
        FiniteSpace(tuple(str(r) for r in range(p**j))) for j in range(1, k + 1)
    )
    transitions = tuple(
        {str(r): str(r % p**j) for r in range(p ** (j + 1))} for j in range(1, k)
    )
    return InverseSystem(stages, transitions)


# ---------------------------------------------------------------------------
# example spaces


def _full_cube(n: int) -> CubeSet:
    return CubeSet(CoordinateOrder(n), tuple(range(1 << n)))


def _diagonal(n: int) -> CubeSet:
    return CubeSet(CoordinateOrder(n), (0, (1 << n) - 1))


def _padic(p: int, k: int) -> CubeSet:
    """Z/p^k with one coordinate per (digit position, nonzero digit), low digits first."""
    if p < 2 or k < 0:
        raise ContractError(f"padic needs p >= 2 and k >= 0, got p={p}, k={k}")
    n = k * (p - 1)
    points = []
    for digits in product(range(p), repeat=k):
        x = 0
        for j, d in enumerate(digits):
            if d:
                x |= 1 << (j * (p - 1) + d - 1)
        points.append(x)
    return CubeSet(CoordinateOrder(n), tuple(points))


def _random_closed(n: int, density: float = 0.5, seed: int = 0, size: int | None = None) -> CubeSet:
    rng = random.Random(seed)
    if size is not None:
        if size > 1 << n:
            raise ContractError(f"cannot pick {size} points from the {n}-cube")
        return CubeSet(CoordinateOrder(n), tuple(rng.sample(range(1 << n), size)))
    return CubeSet(CoordinateOrder(n), tuple(x for x in range(1 << n) if rng.random() < density))


EXAMPLES = {
    "full_cube": _full_cube,
    "cantor_truncation": _full_cube,
    "diagonal": _diagonal,
    "padic": _padic,
    "random_closed": _random_closed,
}


def example_dimension(name: str, *args) -> int:
    """Number of coordinates ``generate_example(name, *args)`` would use."""
    if name == "padic":
        p, k = args[:2]
        return k * (p - 1)
    if name not in EXAMPLES:
        raise ContractError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    return args[0]


def generate_example(name: str, *args, **kwargs) -> CubeSet:
    try:
        make = EXAMPLES[name]
    except KeyError:
        raise ContractError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None
    return make(*args, **kwargs)
