"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS/FAIL`` line (visible with
``-s``); the same lines are collected in the terminal summary.
"""

import json
import random
import time
from fractions import Fraction

import pytest

import nobeling.basis as basis_module
from nobeling.basis import (
    both_methods,
    check_exactness,
    check_tail_identities,
    compute_basis,
    decompose,
    delta_expansion,
    evaluate_combination,
    good_products_greedy,
    good_products_recursive,
    is_unimodular_basis,
    prefix_filtration,
)
from nobeling.cube import CoordinateOrder, CubeSet, FunctionOnS, proj_below, proj_set
from nobeling.products import enumerate_products, is_good_definitional
from nobeling.profinite import (
    FiniteSpace,
    free_basis_of_finite_space,
    generate_example,
    padic_system,
    random_inverse_system,
    stage_consistency,
)
from nobeling.zlattice import hnf, lattice_membership
from oracles import _solve, bareiss_det, bareiss_rank, brute_force_membership, matmul
from sweeps import exhaustive_sweep, random_sweep

FIXTURES = {
    "full 2-cube": (CubeSet.from_bitstrings(["00", "01", "10", "11"], n=2), [[], [0], [1], [1, 0]]),
    "diagonal": (CubeSet.from_bitstrings(["00", "11"], n=2), [[], [0]]),
    "singleton": (CubeSet.from_bitstrings(["01"], n=2), [[]]),
    "empty": (CubeSet(CoordinateOrder(2), ()), []),
}


def sweep_instances():
    return exhaustive_sweep() + random_sweep()


def report(number, failures, extra=""):
    status = "PASS" if not failures else "FAIL"
    print(f"criterion {number}: {status} {extra}".rstrip())
    assert not failures, failures[:5]


@pytest.mark.criterion(1, "exhaustive n <= 3: greedy = recursive = definition, |E| = |S|")
def test_criterion_1_exhaustive_small_cubes():
    start = time.perf_counter()
    failures = []
    for S in exhaustive_sweep():
        g = good_products_greedy(S).products
        r = good_products_recursive(S).products
        d = tuple(p for p in enumerate_products(S.order) if is_good_definitional(S, p))
        if not g == r == d or len(g) != len(S):
            failures.append((S.bitstrings(), g, r, d))
    elapsed = time.perf_counter() - start
    assert len(exhaustive_sweep()) == 2 + 4 + 16 + 256
    assert elapsed < 60
    report(1, failures, f"({len(exhaustive_sweep())} subsets, {elapsed:.1f}s)")


@pytest.mark.criterion(2, "random sweep: greedy = recursive, HNF identity, |E| = |S|")
def test_criterion_2_random_sweep():
    start = time.perf_counter()
    failures = []
    for S in random_sweep():
        g = good_products_greedy(S).products
        r = good_products_recursive(S).products
        if g != r:
            failures.append(("disagree", S.n, len(S)))
            continue
        basis = compute_basis(S, "greedy")
        if len(g) != len(S) or not is_unimodular_basis(basis):
            failures.append(("not a basis", S.n, len(S)))
    elapsed = time.perf_counter() - start
    sizes = [len(S) for S in random_sweep()]
    assert len(sizes) == 200 and max(sizes) <= 400
    assert {S.n for S in random_sweep()} <= set(range(4, 13))
    assert elapsed < 600
    report(2, failures, f"({elapsed:.1f}s)")


@pytest.mark.criterion(3, "hand-verified fixtures as sorted JSON")
def test_criterion_3_fixtures():
    failures = []
    for name, (S, expected) in FIXTURES.items():
        for method in ("greedy", "recursive"):
            got = compute_basis(S, method).to_json()["basis"]
            if json.dumps(sorted(got)) != json.dumps(sorted(expected)):
                failures.append((name, method, got))
    report(3, failures)


@pytest.mark.criterion(4, "exactness: image of pullback = kernel of g, every S and mu")
def test_criterion_4_exactness():
    failures, checked = [], 0
    for S in sweep_instances():
        for mu in range(S.n):
            stage = proj_below(S, mu + 1)
            result = check_exactness(stage, mu)
            checked += 1
            if not result.passed:
                failures.append((stage.bitstrings(), mu, result.failures))
    report(4, failures, f"({checked} cases)")


@pytest.mark.criterion(5, "tail identities and disjoint union decomposition")
def test_criterion_5_tail_identities():
    failures, checked = [], 0
    for S in sweep_instances():
        for mu in range(S.n):
            stage = proj_below(S, mu + 1)
            result = check_tail_identities(stage, mu)
            checked += 1
            if not result.passed:
                failures.append((stage.bitstrings(), mu, result.failures))
    report(5, failures, f"({checked} cases)")


def _rational_solution(basis, f):
    """Coefficients from an independent exact rational solve."""
    rows = basis.evaluation_matrix().to_rows()
    return _solve(rows, list(f.values))


@pytest.mark.criterion(6, "decompose-reconstruct and delta expansion")
def test_criterion_6_decompose_and_delta():
    rng = random.Random(6)
    failures = []
    for name, (S, _) in FIXTURES.items():
        basis = compute_basis(S)
        if len(S):
            assert abs(bareiss_det(basis.evaluation_matrix().to_rows())) == 1
        for _ in range(100):
            f = FunctionOnS(S, tuple(rng.randint(-10**6, 10**6) for _ in S.points))
            d = decompose(basis, f)
            coeffs = [d.coefficients.get(p, 0) for p in basis.products]
            unique = [Fraction(c) for c in coeffs] == (_rational_solution(basis, f) if len(S) else [])
            if d.evaluate() != f or not unique:
                failures.append((name, f.values))

    delta_spaces = [S for S in sweep_instances() if S.n <= 6]
    delta_spaces += [generate_example("full_cube", n) for n in range(7)]
    cases = 0
    for S in delta_spaces:
        subsets = [set(range(S.n))] + [
            {i for i in range(S.n) if rng.random() < 0.5} for _ in range(2)
        ]
        for J in subsets:
            S_J = proj_set(S, J)
            for x in S_J.points:
                cases += 1
                if evaluate_combination(S_J, delta_expansion(S_J, x, J)) != FunctionOnS.delta(S_J, x):
                    failures.append(("delta", S_J.bitstrings(), x))
    report(6, failures, f"({cases} delta cases)")


@pytest.mark.criterion(7, "prefix filtration increasing and ending at E(S)")
def test_criterion_7_filtration():
    failures = []
    for S in sweep_instances():
        chain = prefix_filtration(S, "recursive")
        increasing = all(set(a) <= set(b) for (_, a), (_, b) in zip(chain, chain[1:]))
        if not increasing or chain[-1][1] != good_products_greedy(S).products:
            failures.append(S.bitstrings())
    report(7, failures)


@pytest.mark.criterion(8, "finite profinite stages: |basis| = |T|, stage consistency")
def test_criterion_8_profinite_shadow():
    start = time.perf_counter()
    rng = random.Random(8)
    failures = []
    for _ in range(50):
        size = rng.randint(1, 10)
        T = FiniteSpace(tuple(f"t{i}" for i in range(size)))
        if len(free_basis_of_finite_space(T)) != size:
            failures.append(("finite space", size))
    for k in range(1, 5):
        S = generate_example("padic", 2, k)
        if len(S) != 2**k or len(both_methods(S)) != 2**k:
            failures.append(("padic", k))
        system = padic_system(2, k)
        for j in range(1, k):
            if not stage_consistency(system, j).passed:
                failures.append(("padic system", k, j))
    for _ in range(40):
        system = random_inverse_system(rng.randint(2, 4), 8, rng)
        for j in range(1, len(system.stages)):
            result = stage_consistency(system, j)
            if not result.passed:
                failures.append(("random system", result.to_json()))
    elapsed = time.perf_counter() - start
    assert elapsed < 120
    report(8, failures, f"({elapsed:.1f}s)")


@pytest.mark.criterion(9, "HNF reconstruction, unimodularity, membership vs brute force")
def test_criterion_9_zlattice():
    rng = random.Random(9)
    failures = []
    for _ in range(500):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        res = hnf(M)
        U, H = res.U.to_rows(), res.H.to_rows()
        if matmul(U, M) != H or abs(bareiss_det(U)) != 1 or res.rank != bareiss_rank(M):
            failures.append(("hnf", M))
    members = 0
    for _ in range(500):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        v = [rng.randint(-4, 4) for _ in range(n)]
        if rng.random() < 0.5:
            v = [sum(rng.randint(-2, 2) * row[j] for row in M) for j in range(n)]
        x = lattice_membership(M, v)
        expected = brute_force_membership(M, v)
        members += expected
        if (x is not None) != expected or (x is not None and matmul([x], M) != [v]):
            failures.append(("membership", M, v))
    assert 0 < members < 500
    report(9, failures, f"({members} members of 500)")


@pytest.mark.criterion(10, "performance floor")
def test_criterion_10_performance():
    failures = []
    S = generate_example("random_closed", 16, seed=10, size=2000)
    # time real work, not cache hits from earlier tests
    basis_module._greedy.cache_clear()
    start = time.perf_counter()
    basis = good_products_recursive(S)
    recursive_time = time.perf_counter() - start
    if len(basis) != 2000 or recursive_time >= 30:
        failures.append(("recursive", recursive_time))

    full = generate_example("full_cube", 10)
    start = time.perf_counter()
    basis = good_products_greedy(full)
    greedy_time = time.perf_counter() - start
    if len(basis) != 1024 or greedy_time >= 60:
        failures.append(("greedy", greedy_time))
    report(10, failures, f"(recursive {recursive_time:.2f}s, greedy {greedy_time:.2f}s)")
