import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peiffer.groups import GroupHom, cyclic_group, symmetric_group
from peiffer.sgroups import (
    CrossedModuleError,
    TruncatedSimplicialGroup,
    check_crossed_module,
    commutator_witnesses,
    crossed_module_build,
    k_subgroup,
    library,
    moore_subgroup,
    pc2_decompose,
    pc2_order_identity,
    pc2_recompose,
    peiffer_certificate,
    theorem2_check,
    theta_conj,
)

LIB = library()
BY_NAME = {G.name: G for G in LIB}


@pytest.mark.parametrize("G", LIB, ids=lambda G: G.name)
def test_library_validates(G):
    assert G.validate() is None


@pytest.mark.parametrize("G", LIB, ids=lambda G: G.name)
def test_commutators_always_land_in_boundaries(G):
    for n in range(2, G.top + 1):
        rep = theorem2_check(G, n)
        assert rep.rhs_in_lhs
        if rep.verdict == "equal":
            assert rep.certificates_ok


@pytest.mark.parametrize("G", LIB, ids=lambda G: G.name)
def test_equality_whenever_degenerates_generate(G):
    for n in range(2, G.top + 1):
        rep = theorem2_check(G, n)
        if rep.degenerate_generates:
            assert rep.verdict == "equal"


def test_known_strict_instance():
    G = BY_NAME["K(Z/2 -1-> Z/2 in degrees 1,2)"]
    rep = theorem2_check(G, 2)
    assert rep.verdict == "lhs⊋rhs"
    assert not rep.degenerate_generates
    assert theorem2_check(G, 3).verdict == "equal"


def test_commutator_of_kernels_lies_in_union_kernel():
    G = BY_NAME["CM(S_3=S_3)"]
    n = 2
    H = G.levels[n]
    for I in [(0,), (1,), (0, 1)]:
        for J in [(1,), (2,), (0, 2)]:
            KI, KJ = k_subgroup(G, n, I), k_subgroup(G, n, J)
            KU = k_subgroup(G, n, tuple(sorted(set(I) | set(J))))
            for u in KI.members[:6]:
                for v in KJ.members[:6]:
                    assert H.commutator(int(u), int(v)) in KU


@pytest.mark.parametrize("G", LIB, ids=lambda G: G.name)
def test_moore_decomposition_is_bijective(G):
    for n in range(G.top + 1):
        size, prod = pc2_order_identity(G, n)
        assert size == prod


@settings(max_examples=40)
@given(st.data())
def test_decompose_recompose_round_trip(data):
    G = BY_NAME["CM(S_3=S_3)"]
    n = data.draw(st.integers(0, G.top))
    x = data.draw(st.integers(0, G.levels[n].order - 1))
    parts = pc2_decompose(G, n, x)
    for I, xI in parts:
        assert xI in moore_subgroup(G, n - len(I))
    assert pc2_recompose(G, n, parts) == x


def test_peiffer_certificate_factors_boundary():
    G = BY_NAME["CM(S_3=S_3)"]
    N = moore_subgroup(G, 2)
    for g in N.members[:10]:
        cert = peiffer_certificate(G, 2, int(g))
        assert cert is not None and cert.verified


def test_certificate_refused_without_hypothesis():
    G = BY_NAME["K(Z/2 -1-> Z/2 in degrees 1,2)"]
    g = int(moore_subgroup(G, 2).members[-1])
    assert peiffer_certificate(G, 2, g) is None


def test_conjugation_by_degenerate_stays_in_moore():
    G = BY_NAME["CM(S_3=S_3)"]
    for x in moore_subgroup(G, 2).members[:8]:
        for y in range(0, G.levels[1].order, 5):
            _, ok = theta_conj(G, 2, y, int(x))
            assert ok


def test_witnesses_cover_only_covering_pairs():
    G = BY_NAME["CM(Z/4->Z/2)"]
    _, _, pairs = commutator_witnesses(G, 2)
    assert all(set(I) | set(J) == {0, 1} for I, J in pairs)
    assert all(I and J for I, J in pairs)


def test_crossed_module_axioms_named():
    Z2, Z3 = cyclic_group(2), cyclic_group(3)
    bd = GroupHom(Z3, Z2, np.zeros(3, dtype=np.int64))
    with pytest.raises(CrossedModuleError) as err:
        check_crossed_module(Z3, Z2, bd, np.array([[0, 1, 2], [0, 1, 1]]))
    assert err.value.axiom == "action"
    S3 = symmetric_group(3)
    trivial = np.tile(np.arange(6), (6, 1))
    with pytest.raises(CrossedModuleError) as err:
        check_crossed_module(S3, S3, GroupHom.identity(S3), trivial)
    assert err.value.axiom == "CM1"
    Z4 = cyclic_group(4)
    zero = GroupHom(Z4, Z4, np.zeros(4, dtype=np.int64))
    check_crossed_module(Z4, Z4, zero, np.tile(np.arange(4), (4, 1)))
    S3z = GroupHom(S3, S3, np.zeros(6, dtype=np.int64))
    with pytest.raises(CrossedModuleError) as err:
        check_crossed_module(S3, S3, S3z, trivial)
    assert err.value.axiom == "CM2"


def test_crossed_module_nerve_is_a_one_type():
    G = BY_NAME["CM(S_3=S_3)"]
    assert moore_subgroup(G, 2).order == 1
    assert moore_subgroup(G, 3).order == 1


def test_json_round_trip():
    G = BY_NAME["CM(Z/4->Z/2)"]
    H = TruncatedSimplicialGroup.from_json(json.loads(json.dumps(G.to_json())))
    assert H.validate() is None
    assert [L.order for L in H.levels] == [L.order for L in G.levels]
    assert theorem2_check(H, 2).verdict == theorem2_check(G, 2).verdict


def test_corrupted_face_detected():
    G = BY_NAME["CM(Z/2=Z/2)"]
    data = G.to_json()
    H = TruncatedSimplicialGroup.from_json(data)
    H.faces[2][0] = H.faces[2][1]
    assert H.validate() is not None


def test_build_respects_top():
    Z2 = cyclic_group(2)
    G = crossed_module_build(Z2, Z2, GroupHom.identity(Z2), np.tile(np.arange(2), (2, 1)), 2)
    assert G.top == 2
