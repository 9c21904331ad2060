import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from peiffer.dold_kan import build_K, random_chain_complex, random_simplicial_module
from peiffer.modules import (
    ChainComplex,
    ExactModule,
    ModuleMap,
    Ring,
    SimplicialModule,
    Subspan,
    ValidationError,
    joint_kernel,
    moore_complex,
    present,
    validate,
)

Z = Ring.integers()


def test_sum_with_zero_and_containment():
    M = ExactModule.free(Z, 3)
    S = Subspan(M, [[1, 2, 0], [0, 3, 1]])
    assert S + Subspan.zero(M) == S
    assert S.contains([1, 5, 1]) and not S.contains([1, 0, 0])
    assert S <= S and S >= S


def test_intersection_of_coordinate_lines_is_zero():
    M = ExactModule.free(Z, 2)
    a, b = Subspan(M, [[2, 0]]), Subspan(M, [[0, 3]])
    assert (a & b).is_zero()


def test_intersection_over_z_is_a_lattice_meet():
    M = ExactModule.free(Z, 1)
    assert Subspan(M, [[4]]) & Subspan(M, [[6]]) == Subspan(M, [[12]])


def test_kernels():
    M = ExactModule.free(Z, 2)
    assert ModuleMap.identity(M).kernel().is_zero()
    Z1 = ExactModule.free(Z, 1)
    assert ModuleMap(Z1, Z1, [[2]]).kernel().is_zero()
    Z4 = ExactModule.free(Ring.mod(4), 1)
    assert ModuleMap(Z4, Z4, [[2]]).kernel() == Subspan(Z4, [[2]])
    assert ModuleMap.zero(M, Z1).image().is_zero()


def test_quotient_module_arithmetic():
    M = ExactModule(Z, 2, [[0, 3]])
    assert M.order() is None
    assert M.equal([1, 4], [1, 1])
    S = Subspan(M, [[0, 1]])
    assert S.quotient_size() == 3


def test_module_map_must_respect_relations():
    Z3 = ExactModule(Z, 1, [[3]])
    Z1 = ExactModule.free(Z, 1)
    with pytest.raises(ValueError):
        ModuleMap(Z3, Z1, [[1]])


def test_preimage_and_joint_kernel():
    M = ExactModule.free(Ring.mod(5), 3)
    f = ModuleMap(M, ExactModule.free(Ring.mod(5), 1), [[1], [1], [0]])
    g = ModuleMap(M, ExactModule.free(Ring.mod(5), 1), [[0], [1], [1]])
    K = joint_kernel([f, g])
    assert K == Subspan(M, [[1, 4, 1]])
    assert f.preimage(Subspan.full(f.target)) == Subspan.full(M)


def test_presentation_round_trip():
    M = ExactModule.free(Z, 3)
    S = Subspan(M, [[2, 0, 0], [0, 2, 2]])
    P = present(S)
    for g in S.generators():
        assert M.equal(P.inclusion(P.coordinates(g)), g)


def test_validator_names_the_bad_square():
    Zf = ExactModule.free(Z, 1)
    C = ChainComplex(Z, [Zf, Zf, Zf], [ModuleMap(Zf, Zf, [[1]]), ModuleMap(Zf, Zf, [[1]])])
    bad = validate(C)
    assert bad is not None and bad.indices == (1, 2)
    good = ChainComplex.from_matrices(Z, [1, 1, 1], [[[2]], [[0]]])
    assert validate(good) is None


def test_constant_module_has_trivial_higher_moore_complex():
    M = ExactModule(Z, 2, [[0, 5]])
    A = SimplicialModule.constant(M, 3)
    N = moore_complex(A)
    assert N.kernels[0].is_full()
    assert all(k.is_zero() for k in N.kernels[1:])


def test_moore_complex_of_k_matches_ranks():
    C = ChainComplex.from_matrices(Z, [1, 2, 1], [[[2], [0]], [[0, 3]]])
    N = moore_complex(build_K(C, 2))
    assert [len(k.generators()) for k in N.kernels] == [1, 2, 1]


def test_broken_simplicial_module_is_rejected():
    C = ChainComplex.from_matrices(Ring.mod(5), [1, 1], [[[1]]])
    A = build_K(C, 2)
    faces = [list(f) for f in A.faces]
    faces[2][0] = faces[2][1]
    B = SimplicialModule(A.ring, A.levels, faces, A.degeneracies)
    assert B.validate() is not None
    with pytest.raises(ValidationError):
        moore_complex(B)


def test_json_round_trip():
    A = random_simplicial_module(Ring.mod(5), 2, 2, random.Random(4))
    B = SimplicialModule.from_json(A.to_json())
    assert all(f == g for fs, gs in zip(A.faces, B.faces) for f, g in zip(fs, gs))
    C = random_chain_complex(Z, 3, 2, random.Random(2))
    D = ChainComplex.from_json(C.to_json())
    assert [b.matrix for b in C.boundaries] == [b.matrix for b in D.boundaries]


vectors = st.lists(st.integers(-4, 4), min_size=3, max_size=3)
spans = st.lists(vectors, min_size=0, max_size=3)


@given(spans, spans, spans, st.sampled_from([Ring.integers(), Ring.mod(5), Ring.mod(6)]))
def test_lattice_laws(a, b, c, ring):
    M = ExactModule.free(ring, 3)
    A, B, C = Subspan(M, a), Subspan(M, b), Subspan(M, c)
    assert A + B == B + A and (A + B) + C == A + (B + C) and A + A == A
    assert A & B == B & A and (A & B) & C == A & (B & C) and A & A == A
    assert A & B <= A <= A + B
    # modular law: A <= C implies A + (B & C) = (A + B) & C
    AC = A & C
    assert AC + (B & C) == (AC + B) & C


@given(st.integers(0, 10_000))
def test_random_moore_complexes_are_complexes(seed):
    A = random_simplicial_module(Ring.mod(5), 3, 2, random.Random(seed))
    N = moore_complex(A)
    assert N.complex.validate() is None
