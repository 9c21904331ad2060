"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line.  Run the file
directly (``python tests/test_acceptance.py``) to print the eight lines
without pytest, or ``pytest tests/test_acceptance.py -s`` to see them inline.
"""

from __future__ import annotations

import random
import sys
import time
from itertools import combinations

import numpy as np
import pytest

from peiffer.algebras import (
    chain_complex_mod,
    comm_collapse_rhs,
    lift_all,
    symmetric_example,
    theorem1_sides,
)
from peiffer.dold_kan import (
    KFunctor,
    delta_derivation,
    lambda_action,
    random_chain_complex,
    random_simplicial_module,
    roundtrip_check,
)
from peiffer.modules import ChainComplex, Ring
from peiffer.nearring import (
    NearRingWord,
    box_identity_failures,
    expand_degeneracy_expression,
    express_by_degeneracies,
    otimes_identity_check,
    phi_check,
    simplicial_identity_failures,
)
from peiffer.sgroups import library, pc2_decompose, pc2_order_identity, pc2_recompose, theorem2_check
from peiffer.simplicial import SimplicialMap, all_maps, compose, subsets


class Outcome:
    def __init__(self, number: int, ok: bool, detail: str, seconds: float, budget: float | None = None):
        self.number = number
        self.ok = ok and (budget is None or seconds < budget)
        timing = f"{seconds:.1f}s" + (f" (budget {budget:.0f}s)" if budget else "")
        self.line = f"criterion {number}: {'PASS' if self.ok else 'FAIL'} {detail} [{timing}]"


def _timed(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


# ---------------------------------------------------------------- 1


def roundtrips() -> Outcome:
    def body():
        rng = random.Random(2026)
        failures, squares = 0, 0
        for k in range(100):
            ring = Ring.integers() if k % 2 == 0 else Ring.mod(5)
            w = roundtrip_check(random_chain_complex(ring, rng.randint(1, 4), 4, rng))
            failures += not w.ok
            squares += w.squares_checked
        for k in range(50):
            ring = Ring.integers() if k % 2 == 0 else Ring.mod(5)
            w = roundtrip_check(random_simplicial_module(ring, rng.randint(1, 4), 3, rng))
            failures += not w.ok
            squares += w.squares_checked
        return failures == 0, f"150 roundtrips, {squares} squares, {failures} failures"

    return Outcome(1, *_timed(body), budget=30)


# ---------------------------------------------------------------- 2


def _law_checker():
    # A fixed complex with every degree populated up to 3; K(α) depends on d.
    C = ChainComplex.from_matrices(Ring.integers(), [1, 2, 1, 1], [[[2], [3]], [[3, -2]], [[0]]])
    KF = KFunctor(C)
    cache: dict = {}

    def mats(alpha: SimplicialMap):
        key = (alpha.source_dim, alpha.target_dim, alpha.values)
        if key not in cache:
            m, n = alpha.source_dim, alpha.target_dim
            src = [J for k in range(n + 1) for J in combinations(range(n), k)]
            tgt = {J: i for i, J in enumerate(J for k in range(m + 1) for J in combinations(range(m), k))}
            L = np.zeros((len(src), len(tgt)), dtype=np.int64)
            D = np.zeros_like(L)
            for r, J in enumerate(src):
                for K, c in lambda_action(alpha, {J: 1}).items():
                    L[r, tgt[K]] += c
                for K, c in delta_derivation(alpha, {J: 1}).items():
                    D[r, tgt[K]] += c
            Km = np.array(KF.map(alpha).matrix, dtype=np.int64).reshape(KF.level(n).rank, KF.level(m).rank)
            cache[key] = (L, D, Km)
        return cache[key]

    def holds(alpha, beta) -> bool:
        La, Da, Ka = mats(alpha)
        Lb, Db, Kb = mats(beta)
        Lc, Dc, Kc = mats(compose(alpha, beta))
        return (
            np.array_equal(Lc, Lb @ La)
            and np.array_equal(Dc, Db @ La + Lb @ Da)
            and np.array_equal(Kc, Kb @ Ka)
        )

    return holds


def functoriality() -> Outcome:
    def body():
        holds = _law_checker()
        pairs = failures = 0
        for m in range(4):
            for n in range(4):
                for p in range(4):
                    for alpha in all_maps(m, n):
                        for beta in all_maps(n, p):
                            pairs += 1
                            failures += not holds(alpha, beta)
        rng = random.Random(7)
        for _ in range(200):
            alpha = SimplicialMap(4, 4, tuple(rng.randint(0, 4) for _ in range(5)), monotone=False)
            beta = SimplicialMap(4, 4, tuple(rng.randint(0, 4) for _ in range(5)), monotone=False)
            pairs += 1
            failures += not holds(alpha, beta)
        return failures == 0, f"{pairs} composable pairs, {failures} failures"

    return Outcome(2, *_timed(body))


# ---------------------------------------------------------------- 3 and 4


def _sym(q, ranks, mats, cap=2):
    return symmetric_example(chain_complex_mod(q, ranks, mats), degree_cap=cap, top=3)


def boundary_instances():
    """(label, algebra) pairs: degenerately generated first, then two square-zero cases."""
    good = [
        ("Z/2 deg 1, cap 2", _sym(2, [0, 1], [[[]]])),
        ("Z/3 deg 1, cap 2", _sym(3, [0, 1], [[[]]])),
        ("Z/2 deg 0,1 d=1", _sym(2, [1, 1], [[[1]]])),
        ("Z/3 deg 0,1 d=1", _sym(3, [1, 1], [[[1]]])),
        ("Z/2 deg 1, cap 3", _sym(2, [0, 1], [[[]]], cap=3)),
        ("Z/3 deg 1 rank 2", _sym(3, [0, 2], [[[], []]])),
        ("Z/3 deg 0,1 d=0, cap 3", _sym(3, [1, 1], [[[0]]], cap=3)),
    ]
    strict = [
        ("square-zero Z/2 deg 1,2", _sym(2, [0, 1, 1], [[[]], [[1]]], cap=1)),
        ("square-zero Z/3 deg 1,2", _sym(3, [0, 1, 1], [[[]], [[1]]], cap=1)),
    ]
    return good, strict


def boundary_formula() -> Outcome:
    def body():
        good, strict = boundary_instances()
        equal_instances = 0
        collapse_ok = True
        for _, A in good:
            reps = [theorem1_sides(A, m) for m in (2, 3)]
            collapse_ok &= all(comm_collapse_rhs(A, m) == r.rhs for m, r in zip((2, 3), reps))
            if all(r.hypothesis and r.verdict == "equal" for r in reps):
                equal_instances += 1
        strict_instances = 0
        for _, A in strict:
            r = theorem1_sides(A, 2)
            collapse_ok &= comm_collapse_rhs(A, 2) == r.rhs
            if r.hypothesis is False and r.verdict == "lhs⊋rhs":
                strict_instances += 1
        ok = equal_instances >= 5 and strict_instances >= 2 and collapse_ok
        return ok, (
            f"{equal_instances}/{len(good)} instances equal at m=2,3; "
            f"{strict_instances}/{len(strict)} strict without the hypothesis; collapse agrees: {collapse_ok}"
        )

    return Outcome(3, *_timed(body), budget=120)


def pairing_lifts() -> Outcome:
    def body():
        good, strict = boundary_instances()
        generators = certified = 0
        for _, A in good + strict:
            for m in (2, 3):
                tally = lift_all(A, m)
                generators += tally.generators
                certified += tally.certified
        return generators > 0 and certified == generators, f"{certified}/{generators} generators lifted and certified"

    return Outcome(4, *_timed(body))


# ---------------------------------------------------------------- 5 and 6


def peiffer_boundary() -> Outcome:
    def body():
        groups = library()
        inclusion = exact = certs = True
        levels = 0
        for G in groups:
            for n in range(2, min(G.top, 3) + 1):
                rep = theorem2_check(G, n)
                levels += 1
                inclusion &= rep.rhs_in_lhs
                exact &= (rep.verdict == "equal") == rep.degenerate_generates
                if rep.verdict == "equal":
                    certs &= len(rep.certificates) == len(rep.lhs.generators()) and rep.certificates_ok
        ok = len(groups) >= 6 and inclusion and exact and certs
        return ok, (
            f"{len(groups)} groups, {levels} levels; rhs⊆lhs: {inclusion}; "
            f"equal iff degenerates generate: {exact}; certificates verified: {certs}"
        )

    return Outcome(5, *_timed(body), budget=120)


def moore_decomposition() -> Outcome:
    def body():
        elements = bad = 0
        orders_ok = True
        for G in library():
            for n in range(min(G.top, 3) + 1):
                size, prod = pc2_order_identity(G, n)
                orders_ok &= size == prod
                for x in range(G.levels[n].order):
                    elements += 1
                    bad += pc2_recompose(G, n, pc2_decompose(G, n, x)) != x
        return bad == 0 and orders_ok, f"{elements} elements, {bad} round-trip failures; order identity: {orders_ok}"

    return Outcome(6, *_timed(body))


# ---------------------------------------------------------------- 7 and 8


def degeneracy_expressions() -> Outcome:
    def body():
        cases = bad = 0
        for m in range(1, 6):
            for J in subsets(m):
                cases += 1
                expr = express_by_degeneracies(J, m)
                bad += expand_degeneracy_expression(expr, m) != NearRingWord.phi(m, J)
        phi_ok = onto = True
        squares = 0
        for G in library():
            rep = phi_check(G)
            squares += rep.checked
            phi_ok &= not rep.failures
            onto &= all(rep.surjective)
        ok = bad == 0 and cases == 62 and phi_ok and onto
        return ok, f"{cases} expressions, {bad} mismatches; Φ natural on {squares} squares: {phi_ok}; onto: {onto}"

    return Outcome(7, *_timed(body))


def lambda_machinery() -> Outcome:
    def body():
        table = simplicial_identity_failures(4, "literal")
        box = {}
        otimes = True
        for G in library():
            fails = box_identity_failures(G, 4)
            if fails:
                box[G.name] = fails
            otimes &= otimes_identity_check(G).ok
        ok = not table and not box and otimes
        first_table = f" e.g. {table[0][0]} on φ_{''.join(map(str, table[0][2]))} at level {table[0][1]}" if table else ""
        box_total = sum(len(v) for v in box.values())
        return ok, (
            f"Λ(*) identity failures: {len(table)}{first_table}; "
            f"box identity failures: {box_total} across {len(box)} groups; otimes: {otimes}"
        )

    return Outcome(8, *_timed(body))


CRITERIA = [
    roundtrips,
    functoriality,
    boundary_formula,
    pairing_lifts,
    peiffer_boundary,
    moore_decomposition,
    degeneracy_expressions,
    lambda_machinery,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(criterion, capsys):
    outcome = criterion()
    with capsys.disabled():
        print("\n" + outcome.line)
    assert outcome.ok, outcome.line


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for r in results:
        print(r.line)
    sys.exit(0 if all(r.ok for r in results) else 1)
