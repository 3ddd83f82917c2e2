"""Good products: the Nöbeling basis of C(S, Z) and its structural checks.

Two independent constructions are provided.  :func:`good_products_greedy`
walks the well-ordered set of products and keeps each one whose evaluation
is not already an integer combination of the kept ones.
:func:`good_products_recursive` never touches a lattice: it splits ``S``
along its top coordinate and assembles the basis from the two smaller
spaces ``S_mu`` and ``S'``.  Agreement of the two is checked, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Literal

from .cube import (
    CoordinateOrder,
    CubeSet,
    FunctionOnS,
    contained_check,
    g_map,
    point_to_str,
    proj_below,
    split_succ,
)
from .errors import AmbientMismatchError, CapExceededError, ContractError, InvariantError
from .products import (
    DEFAULT_MAX_N,
    Product,
    cons,
    enumerate_products,
    eval_product,
    eval_vector,
    format_product,
    is_good_definitional,
    lex_key,
    product_from_set,
    product_mask,
    tail,
)
from .zlattice import IntMatrix, Lattice, hnf, int_kernel, lattice_membership, same_lattice

Method = Literal["greedy", "recursive"]

DEFAULT_MAX_POINTS = 5000


@dataclass(frozen=True)
class GoodBasis:
    space: CubeSet
    products: tuple[Product, ...]
    method: str

    @property
    def order(self) -> CoordinateOrder:
        return self.space.order

    def __len__(self) -> int:
        return len(self.products)

    def __contains__(self, p: Product) -> bool:
        return tuple(p) in set(self.products)

    def evaluation_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [eval_vector(self.space, p) for p in self.products], cols=len(self.space)
        )

    def to_json(self) -> dict:
        return {
            "n": self.space.n,
            "order": list(self.order.rank),
            "points": self.space.bitstrings(),
            "basis": [list(p) for p in self.products],
            "method": self.method,
        }


@dataclass(frozen=True)
class Decomposition:
    basis: GoodBasis
    coefficients: dict[Product, int]

    def evaluate(self) -> FunctionOnS:
        values = [0] * len(self.basis.space)
        for p, c in self.coefficients.items():
            for k, e in enumerate(eval_vector(self.basis.space, p)):
                if e:
                    values[k] += c
        return FunctionOnS(self.basis.space, tuple(values))

    def to_json(self) -> dict:
        return {"coefficients": {format_product(p): str(c) for p, c in self.coefficients.items()}}


def _check_caps(S: CubeSet, max_n: int, max_points: int):
    if S.n > max_n:
        raise CapExceededError(f"n = {S.n} exceeds the cap {max_n}")
    if len(S) > max_points:
        raise CapExceededError(f"|S| = {len(S)} exceeds the cap {max_points}")


def good_products_greedy(
    S: CubeSet, max_n: int = DEFAULT_MAX_N, max_points: int = DEFAULT_MAX_POINTS
) -> GoodBasis:
    _check_caps(S, max_n, max_points)
    return GoodBasis(S, _greedy(S), "greedy")


@lru_cache(maxsize=4096)
def _greedy(S: CubeSet) -> tuple[Product, ...]:
    if not S.points:
        return ()
    lattice = Lattice(len(S))
    support = 0
    for x in S.points:
        support |= x
    kept = []
    for p in enumerate_products(S.order, max_n=S.n):
        m = product_mask(p)
        if m & ~support:
            continue  # evaluates to zero
        v = eval_vector(S, p)
        if not any(v):
            continue
        if lattice.insert(v):
            kept.append(p)
            if lattice.is_everything():
                break
    return tuple(kept)


def good_products_recursive(
    S: CubeSet, max_n: int = DEFAULT_MAX_N, max_points: int = DEFAULT_MAX_POINTS
) -> GoodBasis:
    _check_caps(S, max_n, max_points)
    by_rank = tuple(S.order.index_at_rank(r) for r in range(S.n))
    return GoodBasis(S, tuple(_recursive(frozenset(S.points), S.n, by_rank)), "recursive")


def _recursive(points: frozenset[int], mu: int, by_rank: tuple[int, ...]) -> list[Product]:
    # every point of ``points`` has ones only at ranks < mu
    while True:
        if not points:
            return []
        if mu == 0:
            return [()]  # the single all-zeros point
        head = by_rank[mu - 1]
        bit = 1 << head
        if any(x & bit for x in points):
            break
        mu -= 1
    s0 = {x for x in points if not x & bit}
    lowered = {x ^ bit for x in points if x & bit}
    below = _recursive(frozenset(s0 | lowered), mu - 1, by_rank)
    primed = _recursive(frozenset(s0 & lowered), mu - 1, by_rank)
    return below + [(head,) + q for q in primed]


def compute_basis(
    S: CubeSet,
    method: Method = "recursive",
    max_n: int = DEFAULT_MAX_N,
    max_points: int = DEFAULT_MAX_POINTS,
) -> GoodBasis:
    if method == "greedy":
        return good_products_greedy(S, max_n, max_points)
    if method == "recursive":
        return good_products_recursive(S, max_n, max_points)
    raise ValueError(f"unknown method {method!r}")


def both_methods(
    S: CubeSet, max_n: int = DEFAULT_MAX_N, max_points: int = DEFAULT_MAX_POINTS
) -> GoodBasis:
    """Run both constructions and raise :class:`InvariantError` unless they agree."""
    greedy = good_products_greedy(S, max_n, max_points)
    recursive = good_products_recursive(S, max_n, max_points)
    if greedy.products != recursive.products:
        only_g = sorted(set(greedy.products) - set(recursive.products))
        only_r = sorted(set(recursive.products) - set(greedy.products))
        raise InvariantError(
            f"greedy and recursive bases differ: greedy only {only_g}, recursive only {only_r}"
        )
    return greedy


def is_unimodular_basis(basis: GoodBasis) -> bool:
    """True iff the evaluations form a Z-basis of Z^|S| (HNF is the identity)."""
    k = len(basis.space)
    if len(basis.products) != k:
        return False
    if k == 0:
        return True
    res = hnf(basis.evaluation_matrix())
    return res.H == IntMatrix.identity(k)


def decompose(basis: GoodBasis, f: FunctionOnS) -> Decomposition:
    if f.domain != basis.space:
        raise AmbientMismatchError("function is not defined on the basis space")
    x = lattice_membership(basis.evaluation_matrix(), f.values)
    if x is None:
        raise InvariantError("function is not in the span of the good products")
    coefficients = {p: c for p, c in zip(basis.products, x) if c}
    result = Decomposition(basis, coefficients)
    if result.evaluate() != f:
        raise InvariantError("decomposition does not reconstruct the function")
    return result


def delta_expansion(S_J: CubeSet, x: int, J: Iterable[int]) -> list[tuple[int, Product]]:
    """Signed products whose sum is the indicator of ``x`` on ``S_J``.

    With ``A`` the coordinates of ``J`` where ``x`` is 1 and ``B`` the rest,
    this is the expansion of ``prod_{A} e_i * prod_{B} (1 - e_i)``.
    """
    J = set(J)
    mask = 0
    for j in J:
        if not 0 <= j < S_J.n:
            raise AmbientMismatchError(f"coordinate {j} outside 0..{S_J.n - 1}")
        mask |= 1 << j
    for y in S_J.points:
        if y & ~mask:
            raise ContractError(f"point {point_to_str(y, S_J.n)} uses a coordinate outside J")
    if x not in S_J:
        raise ContractError(f"{point_to_str(x, S_J.n)} is not a point of the space")
    A = [j for j in J if x >> j & 1]
    B = sorted(j for j in J if not x >> j & 1)
    terms = []
    for size in range(len(B) + 1):
        for T in combinations(B, size):
            terms.append(((-1) ** size, product_from_set(A + list(T), S_J.order)))
    terms.sort(key=lambda t: lex_key(t[1], S_J.order))
    return terms


def evaluate_combination(S: CubeSet, terms: Iterable[tuple[int, Product]]) -> FunctionOnS:
    values = [0] * len(S)
    for c, p in terms:
        for k, e in enumerate(eval_vector(S, p)):
            values[k] += c * e
    return FunctionOnS(S, tuple(values))


# ---------------------------------------------------------------------------
# structural checks


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    details: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def fail(self, message: str):
        self.passed = False
        self.failures.append(message)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details, "failures": self.failures}


def pullback_matrix(S: CubeSet, mu: int) -> IntMatrix:
    """Rows are the pullbacks to ``S`` of the delta functions on ``S_mu``."""
    S_mu = proj_below(S, mu)
    mask = S.order.below_mask(mu)
    rows = [[int(x & mask == y) for x in S.points] for y in S_mu.points]
    return IntMatrix.from_rows(rows, cols=len(S))


def g_matrix(S: CubeSet, mu: int) -> IntMatrix:
    """Rows are ``g`` applied to the delta functions on ``S``."""
    _, _, s_prime = split_succ(S, mu)
    bit = 1 << S.order.index_at_rank(mu)
    rows = [[0] * len(s_prime) for _ in S.points]
    for j, x in enumerate(s_prime.points):
        if x | bit not in S:
            raise InvariantError(f"{point_to_str(x | bit, S.n)} missing from S")
        rows[S.index(x | bit)][j] += 1
        rows[S.index(x)][j] -= 1
    return IntMatrix.from_rows(rows, cols=len(s_prime))


def check_exactness(S: CubeSet, mu: int) -> CheckReport:
    """0 -> C(S_mu) -> C(S) -> C(S') is exact, checked on integer lattices."""
    report = CheckReport("exactness")
    report.details["mu"] = mu
    if not contained_check(S, mu + 1):
        raise ContractError(f"S uses coordinates of rank > {mu}")
    P = pullback_matrix(S, mu)
    G = g_matrix(S, mu)
    image_rank = hnf(P).rank if P.rows else 0
    kernel = int_kernel(G)
    report.details.update(
        image_rank=image_rank, kernel_rank=len(kernel), points=len(S), s_prime=G.cols
    )
    if image_rank != P.rows:
        report.fail(f"pullback has rank {image_rank} < {P.rows}: not injective")
    if P.rows and G.cols and not (P @ G).is_zero():
        report.fail("g does not vanish on pulled-back functions")
    K = IntMatrix.from_rows(kernel, cols=len(S))
    if not same_lattice(P, K):
        report.fail("image of the pullback differs from the kernel of g")
    return report


def check_tail_identities(
    S: CubeSet, mu: int, method: Method = "greedy", max_n: int = DEFAULT_MAX_N
) -> CheckReport:
    """Tail identities and the disjoint union decomposition at rank ``mu``.

    ``S`` must not use coordinates above rank ``mu``.  Good products are
    computed with ``method`` for ``S``, ``S_mu`` and ``S'`` independently.
    """
    report = CheckReport("tail_identities")
    report.details["mu"] = mu
    order = S.order
    head = order.index_at_rank(mu)
    _, _, s_prime = split_succ(S, mu)
    S_mu = proj_below(S, mu)
    E = set(compute_basis(S, method, max_n).products)
    E_mu = set(compute_basis(S_mu, method, max_n).products)
    E_prime = set(compute_basis(s_prime, method, max_n).products)
    primed = {p for p in E if head in p}
    report.details.update(E=len(E), E_mu=len(E_mu), E_prime=len(E_prime), E_with_head=len(primed))
    for p in sorted(E, key=lambda p: lex_key(p, order)):
        if head in p:
            if p[0] != head:
                report.fail(f"{format_product(p)} contains {head} but does not start with it")
                continue
            lhs = g_map(S, mu, eval_product(S, p))
            rhs = eval_product(s_prime, tail(p))
            if lhs != rhs:
                report.fail(f"g(ev {format_product(p)}) != ev_S' {format_product(tail(p))}")
            if tail(p) not in E_prime:
                report.fail(f"tail of {format_product(p)} is not good for S'")
        elif p not in E_mu:
            report.fail(f"{format_product(p)} is good for S but not for S_mu")
    for q in E_mu:
        if q not in E:
            report.fail(f"{format_product(q)} is good for S_mu but not for S")
    for q in E_prime:
        if cons(head, q, order) not in E:
            report.fail(f"{format_product(cons(head, q, order))} missing although its tail is good for S'")
    if E_mu & primed:
        report.fail("the two halves of the union overlap")
    if len(E) != len(E_mu) + len(E_prime):
        report.fail(f"|E(S)| = {len(E)} but |E(S_mu)| + |E(S')| = {len(E_mu) + len(E_prime)}")
    return report


def prefix_filtration(
    S: CubeSet, method: Method = "recursive", max_n: int = DEFAULT_MAX_N
) -> list[tuple[int, tuple[Product, ...]]]:
    """Good products of every prefix projection ``S_mu``, ``mu = 0..n``.

    Raises :class:`InvariantError` if the chain is not increasing or does not
    end at the good products of ``S``.
    """
    if S.n > max_n:
        raise CapExceededError(f"n = {S.n} exceeds the cap {max_n}")
    chain = [(mu, compute_basis(proj_below(S, mu), method, max_n).products) for mu in range(S.n + 1)]
    for (mu_a, a), (mu_b, b) in zip(chain, chain[1:]):
        if not set(a) <= set(b):
            raise InvariantError(f"E(S_{mu_a}) is not contained in E(S_{mu_b})")
        fresh = set(b) - set(a)
        coord = S.order.index_at_rank(mu_b - 1)
        if any(coord not in p for p in fresh):
            raise InvariantError(f"a product new at stage {mu_b} does not use coordinate {coord}")
    if chain[-1][1] != compute_basis(S, method, max_n).products:
        raise InvariantError("the filtration does not end at E(S)")
    return chain
