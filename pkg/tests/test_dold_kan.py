import random
from itertools import combinations

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from peiffer.dold_kan import (
    KFunctor,
    KLabel,
    build_K,
    degeneracy_basis_change,
    delta_derivation,
    lambda_action,
    random_chain_complex,
    random_simplicial_module,
    roundtrip_check,
    standard_simplex_module,
    wedge,
    zn_pullback,
)
from peiffer.modules import ChainComplex, ExactModule, Ring, SimplicialModule, moore_complex
from peiffer.simplicial import SimplicialMap, all_maps, codegeneracy, coface, compose, identity

Z = Ring.integers()


def test_pullback_generators():
    assert zn_pullback(codegeneracy(1, 0), 0) == {0: 1, 1: 1}
    assert zn_pullback(coface(2, 1), 0) == {0: 1}
    # the last face sends φ_{n-1} to minus the sum of the others
    assert zn_pullback(coface(3, 3), 2) == {0: -1, 1: -1}


def test_exterior_action_examples():
    phi01 = {(0, 1): 1}
    assert lambda_action(identity(2), phi01) == phi01
    assert lambda_action(codegeneracy(2, 0), phi01) == {(0, 2): 1, (1, 2): 1}
    assert lambda_action(coface(2, 1), phi01) == {}
    assert wedge({(0,): 1}, {(0,): 1}) == {}
    assert wedge({(1,): 1}, {(0,): 1}) == {(0, 1): -1}


def test_derivation_examples():
    m = 3
    top = {tuple(range(m)): 1}
    assert delta_derivation(coface(m, m), top) == {tuple(range(m - 1)): 1}
    assert delta_derivation(coface(2, 2), {(0,): 1}) == {}
    assert delta_derivation(coface(1, 1), {(0,): 1}) == {(): 1}


def test_k_of_multiplication_by_two():
    C = ChainComplex.from_matrices(Z, [1, 1], [[[2]]])
    KF = KFunctor(C)
    labels = KF.labels(1)
    assert set(labels) == {KLabel(0, 0, ()), KLabel(1, 0, (0,))}
    b = KF.element(1, [(1, [1], {(0,): 1})])
    assert KF.map(coface(1, 1))(b) == KF.element(0, [(0, [2], {(): 1})])
    assert not any(KF.map(coface(1, 0))(b))
    assert KF.map(codegeneracy(1, 0))(b) == KF.element(2, [(1, [1], {(0,): 1, (1,): 1})])


def test_degree_zero_complex_gives_constant_module():
    C = ChainComplex.from_matrices(Z, [2], [])
    A = build_K(C, 3)
    assert all(lvl.rank == 2 for lvl in A.levels)
    ident = A.faces[1][0]
    assert all(f == ident for fs in A.faces[1:] for f in fs)


def test_kernel_characterisation_on_basis():
    C = ChainComplex.from_matrices(Z, [1, 1, 1, 1, 1], [[[1]], [[0]], [[1]], [[0]]])
    KF = KFunctor(C)
    for n in range(1, 5):
        index = KF.index(n)
        for lab in KF.labels(n):
            v = [0] * len(index)
            v[index[lab]] = 1
            for i in range(n):
                killed = not any(KF.map(coface(n, i))(v))
                assert killed == (i in lab.support)


def _exterior_matrices(alpha: SimplicialMap):
    m, n = alpha.source_dim, alpha.target_dim
    src = [J for k in range(n + 1) for J in combinations(range(n), k)]
    tgt = [J for k in range(m + 1) for J in combinations(range(m), k)]
    tindex = {J: i for i, J in enumerate(tgt)}
    L = np.zeros((len(src), len(tgt)), dtype=np.int64)
    D = np.zeros_like(L)
    for r, J in enumerate(src):
        for K, c in lambda_action(alpha, {J: 1}).items():
            L[r, tindex[K]] += c
        for K, c in delta_derivation(alpha, {J: 1}).items():
            D[r, tindex[K]] += c
    return L, D


def test_functoriality_and_derivation_law_exhaustive_small():
    for m in range(3):
        for n in range(3):
            for p in range(3):
                for alpha in all_maps(m, n):
                    La, Da = _exterior_matrices(alpha)
                    for beta in all_maps(n, p):
                        Lb, Db = _exterior_matrices(beta)
                        Lba, Dba = _exterior_matrices(compose(alpha, beta))
                        assert np.array_equal(Lba, Lb @ La)
                        assert np.array_equal(Dba, Db @ La + Lb @ Da)


def fin_map(m, n):
    return st.lists(st.integers(0, n), min_size=m + 1, max_size=m + 1).map(
        lambda v: SimplicialMap(m, n, tuple(v), monotone=False)
    )


@given(st.data())
def test_k_is_a_functor_on_random_maps(data):
    m, n, p = (data.draw(st.integers(0, 4)) for _ in range(3))
    alpha, beta = data.draw(fin_map(m, n)), data.draw(fin_map(n, p))
    C = random_chain_complex(Z, 3, 2, random.Random(data.draw(st.integers(0, 99))))
    KF = KFunctor(C)
    assert KF.map(compose(alpha, beta)) == KF.map(beta).then(KF.map(alpha))


@given(st.integers(0, 10_000), st.sampled_from([Ring.integers(), Ring.mod(5)]))
def test_k_output_is_simplicial(seed, ring):
    C = random_chain_complex(ring, 3, 2, random.Random(seed))
    assert build_K(C, 3).validate() is None


def test_roundtrip_examples():
    zero = ChainComplex.from_matrices(Z, [0, 0], [[]])
    w = roundtrip_check(zero)
    assert w.ok
    C = ChainComplex.from_matrices(Z, [1, 1, 0, 0], [[[2]], [], []])
    w = roundtrip_check(C)
    assert w.ok and w.squares_checked > 0


@given(st.integers(0, 10_000), st.sampled_from([Ring.integers(), Ring.mod(5)]))
def test_roundtrip_on_random_inputs(seed, ring):
    rng = random.Random(seed)
    assert roundtrip_check(random_chain_complex(ring, 3, 3, rng)).ok
    assert roundtrip_check(random_simplicial_module(ring, 3, 2, rng)).ok


def test_simplex_module_round_trips():
    A = standard_simplex_module(Ring.mod(5), 1, 3)
    assert A.validate() is None
    assert roundtrip_check(A).ok


def test_moore_of_k_is_c():
    C = ChainComplex.from_matrices(Z, [2, 1, 1], [[[1, 1]], [[0]]])
    N = moore_complex(build_K(C, 2))
    assert [len(k.generators()) for k in N.kernels] == [2, 1, 1]


def test_degenerate_monomials_form_a_basis():
    for m in range(1, 5):
        for i in range(m + 1):
            Is, coeffs = degeneracy_basis_change(m, i)
            assert len(Is) == len(coeffs)
