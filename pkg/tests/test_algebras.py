import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peiffer.algebras import (
    SimplicialOperadAlgebra,
    admissible_choices,
    chain_complex_mod,
    comm_collapse_rhs,
    constant_algebra,
    covering_multisets,
    degeneracy_generation_check,
    fm_differential,
    fm_evaluate,
    fm_term_value,
    in_moore,
    kernel_of_faces,
    lift_all,
    moore_subspace,
    pairing_lift,
    psi_map,
    random_decorated_term,
    rank_mod,
    rref,
    subalgebra_generate,
    symmetric_example,
    theorem1_sides,
)
from peiffer.modules import Ring
from peiffer.operads import OPERADS, comm_operad
from peiffer.simplicial import SubsetTuple


def sym(q, ranks, mats, cap=2, top=3):
    return symmetric_example(chain_complex_mod(q, ranks, mats), degree_cap=cap, top=top)


Z2_DEG1 = sym(2, [0, 1], [[[]]], cap=3)
Z3_DEG01 = sym(3, [1, 1], [[[1]]])
SQUARE_ZERO = sym(2, [0, 1, 1], [[[]], [[1]]], cap=1)


def test_rref_rank():
    M = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank_mod(M, 2) == 2
    assert rank_mod(M, 3) == 3
    R, piv = rref(M, 3)
    assert piv == [0, 1, 2]


@pytest.mark.parametrize("A", [Z2_DEG1, Z3_DEG01, SQUARE_ZERO], ids=lambda A: A.name)
def test_examples_validate(A):
    assert A.validate() is None


def test_corrupted_multiplication_detected():
    A = sym(3, [1, 1], [[[1]]], top=2)
    bad = [t.copy() for t in A.mult]
    k = bad[1]
    i, j = 1, 2
    k[i, j] = (k[i, j] + 1) % 3
    B = SimplicialOperadAlgebra(A.operad, A.carrier, bad, A.unit, "broken", A.kfunctor, A.monomials)
    assert B.validate() is not None


def test_rank_cap_refuses():
    with pytest.raises(ValueError):
        sym(2, [0, 3], [[[], [], []]], cap=3, top=3)


def test_subalgebra_generation_nonunital_and_unital():
    R = Ring.mod(2)
    # A = F_2[x]/(x^3) on basis 1, x, x^2
    mult = np.zeros((3, 3, 3), dtype=np.int64)
    for a in range(3):
        for b in range(3):
            if a + b < 3:
                mult[a, b, a + b] = 1
    unit = np.array([1, 0, 0])
    nonunital = constant_algebra(comm_operad(R, unital=False), mult, unit, 2)
    S = subalgebra_generate(nonunital, 1, [[0, 1, 0]])
    assert S.shape[0] == 2 and not np.any(S[:, 0])
    unital = constant_algebra(comm_operad(R), mult, unit, 2)
    U = subalgebra_generate(unital, 1, np.zeros((0, 3), dtype=np.int64))
    assert U.tolist() == [[1, 0, 0]]


def test_constant_algebra_is_degenerately_generated():
    R = Ring.mod(3)
    mult = np.zeros((1, 1, 1), dtype=np.int64)
    mult[0, 0, 0] = 1
    A = constant_algebra(comm_operad(R), mult, np.array([1]), 3)
    assert all(degeneracy_generation_check(A, m) for m in (1, 2, 3))
    assert moore_subspace(A, 2).shape[0] == 0


def test_covering_multisets_counts():
    assert len(covering_multisets(2, 2, "proper")) == 1
    assert len(covering_multisets(2, 2, "nonempty")) == 4
    assert all(T.covering for T in covering_multisets(3, 3))


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("A", [Z2_DEG1, Z3_DEG01], ids=lambda A: A.name)
def test_boundary_formula_holds(A, m):
    rep = theorem1_sides(A, m)
    assert rep.hypothesis
    assert rep.verdict == "equal"
    assert theorem1_sides(A, m, variant="nonempty").verdict == "equal"


def test_square_zero_is_strict_where_hypothesis_fails():
    rep = theorem1_sides(SQUARE_ZERO, 2)
    assert not rep.hypothesis
    assert rep.verdict == "lhs⊋rhs"


def test_arity_truncation_is_flagged():
    A = sym(2, [0, 1], [[[]]], cap=2, top=4)
    A.operad = comm_operad(Ring.mod(2), max_arity=3)
    rep = theorem1_sides(A, 4)
    assert rep.verdict == "truncated"
    assert rep.omitted_lengths == [4]


def test_quadratic_collapse_matches_full_sum():
    rng = random.Random(5)
    checked = 0
    for _ in range(20):
        q = rng.choice([2, 3])
        d = rng.randrange(q)
        A = sym(q, [1, 1], [[[d]]], cap=2, top=3)
        for m in (2, 3):
            rep = theorem1_sides(A, m, check_hypothesis=False)
            assert rep.rhs == comm_collapse_rhs(A, m)
            checked += 1
    assert checked == 40


@pytest.mark.parametrize("m", [2, 3])
def test_psi_round_trip(m):
    A = Z3_DEG01
    N = moore_subspace(A, m)
    for r in range(m + 1):
        for a in N:
            y = psi_map(A, m, r, a)
            assert in_moore(A, m, y, skip=r)
            back = psi_map(A, m, r, y, "inverse")
            assert np.array_equal(back, a % A.q)
            sign = (-1) ** (m - r)
            assert np.array_equal(A.d(m, m, back), (sign * A.d(m, r, y)) % A.q)


def test_lift_sign_on_inner_face():
    # at m = 3 this instance certifies some generators only through r = 1
    A = sym(3, [1, 1], [[[0]]], cap=3)
    tally = lift_all(A, 3)
    assert tally.rate == 1.0, tally.failures[:3]


def test_admissible_choices():
    assert admissible_choices(SubsetTuple(2, ((0,), (1,)))) == [(1, 1)]
    assert admissible_choices(SubsetTuple(2, ((0, 1),))) == []


def test_single_part_lift_is_refused():
    A = Z2_DEG1
    x = kernel_of_faces(A, 1, (0, 1))
    if x.shape[0] == 0:
        x = np.zeros((1, A.rank(1)), dtype=np.int64)
    with pytest.raises(ValueError):
        pairing_lift(A, A.operad.basis(1, 0), [x[0]], SubsetTuple(2, ((0, 1),)))


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("A", [Z2_DEG1, Z3_DEG01], ids=lambda A: A.name)
def test_every_generator_lifts(A, m):
    tally = lift_all(A, m)
    assert tally.generators > 0
    assert tally.rate == 1.0, tally.failures[:3]


def test_formal_boundary_counts():
    C = chain_complex_mod(3, [1, 1], [[[1]]])
    O = comm_operad(Ring.mod(3))
    from peiffer.algebras import Factor

    terms = fm_differential(C, 2, O.basis(2, 0), [Factor.pure(0, [1], []), Factor.pure(1, [1], [1])])
    assert {t.choices for t in terms} <= {("d", "d"), ("d", "delta"), ("delta", "d"), ("delta", "delta")}
    single = fm_differential(C, 2, O.basis(1, 0), [Factor.pure(1, [1], [1])])
    assert all(len(t.factors) == 1 for t in single)


def test_formal_boundary_evaluates_to_face():
    rng = random.Random(11)
    C = chain_complex_mod(3, [1, 1], [[[1]]])
    A = symmetric_example(C, degree_cap=3, top=3)
    for _ in range(50):
        m = rng.choice([2, 3])
        p = rng.choice([1, 2, 3])
        b = rng.randrange(A.operad.dims[p])
        o = A.operad.basis(p, b)
        factors = random_decorated_term(C, m, p, rng)
        direct = A.d(m, m, fm_term_value(A, m, o, factors))
        formal = fm_evaluate(A, m, fm_differential(C, m, o, factors))
        assert np.array_equal(direct % A.q, formal)


def test_json_round_trip():
    A = Z3_DEG01
    B = SimplicialOperadAlgebra.from_json(json.loads(json.dumps(A.to_json())))
    assert B.validate() is None
    assert theorem1_sides(B, 2).verdict == theorem1_sides(A, 2).verdict


def test_needs_prime_field():
    with pytest.raises(ValueError):
        sym(4, [0, 1], [[[]]])


@settings(max_examples=20)
@given(st.integers(0, 2), st.sampled_from(["comm", "ass"]))
def test_algebra_over_other_operads_validates(d, kind):
    C = chain_complex_mod(3, [1, 1], [[[d]]])
    A = symmetric_example(C, degree_cap=2, top=2, operad=OPERADS[kind](Ring.mod(3)))
    assert A.validate() is None
    rep = theorem1_sides(A, 2)
    assert rep.rhs <= rep.lhs
    if rep.hypothesis:
        assert rep.verdict == "equal"
