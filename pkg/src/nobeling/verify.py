"""The full battery of structural checks for one space, as a JSON-able report."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .basis import (
    GoodBasis,
    both_methods,
    check_exactness,
    check_tail_identities,
    decompose,
    delta_expansion,
    evaluate_combination,
    good_products_greedy,
    is_unimodular_basis,
    prefix_filtration,
)
from .cube import CubeSet, FunctionOnS, proj_below, proj_set, pullback
from .errors import InvariantError
from .products import (
    enumerate_products,
    eval_product,
    format_product,
    is_good_definitional,
)

ORACLE_MAX_N = 6


@dataclass
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "passed": self.passed, "details": self.details}


@dataclass
class VerifyReport:
    seed: int
    space: CubeSet
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.space.n,
            "order": list(self.space.order.rank),
            "points": len(self.space),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def _corrupt(basis: GoodBasis) -> GoodBasis:
    """Drop the last good product, or invent one for the empty space."""
    products = basis.products[:-1] if basis.products else ((),)
    return GoodBasis(basis.space, products, basis.method)


def verify_space(S: CubeSet, seed: int = 0, corrupt: bool = False) -> VerifyReport:
    rng = random.Random(seed)
    report = VerifyReport(seed, S)
    add = report.checks.append

    try:
        basis = both_methods(S)
        add(Check("algorithm_agreement", True, {"size": len(basis)}))
    except InvariantError as exc:
        add(Check("algorithm_agreement", False, {"error": str(exc)}))
        basis = good_products_greedy(S)
    if corrupt:
        basis = _corrupt(basis)

    add(Check("cardinality", len(basis) == len(S), {"basis": len(basis), "points": len(S)}))
    add(Check("basis_property", is_unimodular_basis(basis), {"products": len(basis)}))

    exact, tails = [], []
    for mu in range(S.n):
        stage = proj_below(S, mu + 1)
        exact.append(check_exactness(stage, mu))
        tails.append(check_tail_identities(stage, mu))
    add(Check("exactness", all(r.passed for r in exact), {"per_rank": [r.to_json() for r in exact]}))
    add(Check("tail_identities", all(r.passed for r in tails), {"per_rank": [r.to_json() for r in tails]}))

    try:
        chain = prefix_filtration(S)
        add(Check("monotonicity", True, {"sizes": [len(E) for _, E in chain]}))
    except InvariantError as exc:
        add(Check("monotonicity", False, {"error": str(exc)}))

    bad_fac = []
    for p in basis.products:
        J = set(p)
        lhs = pullback(S, J, eval_product(proj_set(S, J), p))
        if lhs != eval_product(S, p):
            bad_fac.append(format_product(p))
    add(Check("evaluation_factorization", not bad_fac, {"failures": bad_fac}))

    values = [rng.randint(-10**6, 10**6) for _ in S.points]
    f = FunctionOnS(S, tuple(values))
    try:
        ok = decompose(basis, f).evaluate() == f
        add(Check("decompose_roundtrip", ok, {}))
    except InvariantError as exc:
        add(Check("decompose_roundtrip", False, {"error": str(exc)}))

    if S.n <= ORACLE_MAX_N:
        bad_delta = 0
        subsets = [set(range(S.n))] + [
            {i for i in range(S.n) if rng.random() < 0.5} for _ in range(3)
        ]
        for J in subsets:
            S_J = proj_set(S, J)
            for x in S_J.points:
                if evaluate_combination(S_J, delta_expansion(S_J, x, J)) != FunctionOnS.delta(S_J, x):
                    bad_delta += 1
        add(Check("delta_expansion", bad_delta == 0, {"failures": bad_delta}))

        good = set(basis.products)
        mismatched = [
            format_product(p)
            for p in enumerate_products(S.order)
            if is_good_definitional(S, p) != (p in good)
        ]
        add(Check("definition_oracle", not mismatched, {"mismatched": mismatched}))
    return report
