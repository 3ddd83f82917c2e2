"""Products of coordinate functions and their lexicographic well-order.

A product is a tuple of coordinate indices whose ranks strictly decrease,
head first.  Its evaluation on ``S`` is the indicator of the points having
every listed coordinate equal to 1.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .cube import CoordinateOrder, CubeSet, FunctionOnS
from .errors import AmbientMismatchError, CapExceededError, ContractError

Product = tuple[int, ...]

DEFAULT_MAX_N = 20


def make_product(entries: Iterable[int], order: CoordinateOrder) -> Product:
    """Validate ``entries`` as a strictly rank-decreasing sequence."""
    p = tuple(int(i) for i in entries)
    for i in p:
        if not 0 <= i < order.n:
            raise AmbientMismatchError(f"coordinate {i} outside 0..{order.n - 1}")
    for a, b in zip(p, p[1:]):
        if order.rank[a] <= order.rank[b]:
            raise ContractError(f"{list(p)} is not strictly decreasing in rank")
    return p


def product_from_set(coords: Iterable[int], order: CoordinateOrder) -> Product:
    """The unique product whose entry set is ``coords``."""
    return tuple(sorted(set(coords), key=lambda i: order.rank[i], reverse=True))


def lex_key(p: Product, order: CoordinateOrder) -> tuple[int, ...]:
    # tuple comparison is list-lexicographic with proper prefixes smaller
    return tuple(order.rank[i] for i in p)


def lex_compare(p: Product, q: Product, order: CoordinateOrder) -> int:
    """-1, 0 or 1 as ``p`` is below, equal to or above ``q``."""
    kp, kq = lex_key(p, order), lex_key(q, order)
    return (kp > kq) - (kp < kq)


def product_mask(p: Product) -> int:
    mask = 0
    for i in p:
        mask |= 1 << i
    return mask


def eval_vector(S: CubeSet, p: Product) -> list[int]:
    mask = product_mask(p)
    return [1 if x & mask == mask else 0 for x in S.points]


def eval_product(S: CubeSet, p: Product) -> FunctionOnS:
    for i in p:
        if not 0 <= i < S.n:
            raise AmbientMismatchError(f"coordinate {i} outside 0..{S.n - 1}")
    return FunctionOnS(S, tuple(eval_vector(S, p)))


def enumerate_products(order: CoordinateOrder, max_n: int = DEFAULT_MAX_N) -> list[Product]:
    """All 2^n products in increasing lexicographic order."""
    if order.n > max_n:
        raise CapExceededError(f"n = {order.n} exceeds the product enumeration cap {max_n}")
    by_rank = [order.index_at_rank(r) for r in range(order.n)]
    out: list[Product] = [()]
    # products are ordered by head rank first; everything headed by rank r
    # comes after everything with a smaller head
    for r in range(order.n):
        head = by_rank[r]
        out.extend((head,) + q for q in out[: 1 << r])
    return out


def tail(p: Product) -> Product:
    if not p:
        raise ContractError("the empty product has no tail")
    return p[1:]


def cons(head: int, q: Product, order: CoordinateOrder) -> Product:
    if q and order.rank[head] <= order.rank[q[0]]:
        raise ContractError(f"cannot put {head} in front of {list(q)}: ranks must decrease")
    return (head,) + q


def smaller_products(p: Product, order: CoordinateOrder) -> list[Product]:
    key = lex_key(p, order)
    return [q for q in enumerate_products(order) if lex_key(q, order) < key]


def is_good_definitional(S: CubeSet, p: Product, max_n: int = 10) -> bool:
    """Literal membership test for the good products of ``S``.

    Enumerates every product below ``p`` and asks whether the evaluation of
    ``p`` is an integer combination of theirs.  Deliberately brute force.
    """
    from .zlattice import IntMatrix, lattice_membership

    if S.n > max_n:
        raise CapExceededError(f"n = {S.n} exceeds the definitional oracle cap {max_n}")
    make_product(p, S.order)
    rows = [eval_vector(S, q) for q in smaller_products(p, S.order)]
    target = eval_vector(S, p)
    return lattice_membership(IntMatrix.from_rows(rows, cols=len(S)), target) is None


def format_product(p: Sequence[int]) -> str:
    return "[" + ",".join(str(i) for i in p) + "]"


def parse_product(text: str, order: CoordinateOrder) -> Product:
    import json

    return make_product(json.loads(text), order)
