import pytest
from hypothesis import given, settings, strategies as st

from peiffer.nearring import (
    BoxWord,
    NearRingWord,
    expand_degeneracy_expression,
    express_by_degeneracies,
    moore_chain,
    nr_multiply,
    nr_simplicial,
    otimes_identity_check,
    phi_check,
    phi_map,
    phi_preimage,
    simplicial_identity_failures,
)
from peiffer.sgroups import library
from peiffer.simplicial import codegeneracy, coface

W = NearRingWord
LIB = library()


def test_monomials_multiply_with_sign():
    assert W.phi(2, [0]) * W.phi(2, [1]) == W.phi(2, [0, 1])
    assert W.phi(2, [1]) * W.phi(2, [0]) == W.phi(2, [0, 1], sign=-1)
    assert (W.phi(2, [0]) * W.phi(2, [0])).is_zero()


def test_right_distributive_product():
    left = W.phi(2, [0]) + W.phi(2, [1])
    assert nr_multiply(left, W.phi(2, [0])) == -W.phi(2, [0, 1])


def test_degeneracy_on_generators():
    assert str(nr_simplicial(codegeneracy(0, 0), W.one(0))) == "1"
    assert str(nr_simplicial(codegeneracy(1, 0), W.phi(1, [0]))) == "φ_0 + φ_1"
    assert str(nr_simplicial(codegeneracy(2, 1), W.phi(2, [0, 1]))) == "φ_01 + φ_02"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_literal_last_face_kills_last_generator(n):
    assert nr_simplicial(coface(n, n), W.phi(n, [n - 1]), "literal").is_zero()


def test_pullback_last_face_keeps_the_sum_relation():
    assert str(nr_simplicial(coface(2, 2), W.phi(2, [1]))) == "-φ_0"


def test_small_degeneracy_expressions():
    assert express_by_degeneracies([0], 2) == [(1, (1,))]
    assert express_by_degeneracies([1], 2) == [(-1, (1,)), (1, (0,))]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_every_monomial_is_expressed_exactly(m):
    from peiffer.simplicial import subsets

    for J in subsets(m):
        expr = express_by_degeneracies(J, m)
        assert expand_degeneracy_expression(expr, m) == W.phi(m, J)


def test_pullback_identities_hold_after_abelianising():
    assert simplicial_identity_failures(4, "pullback", abelian=True) == []


def test_free_model_identities_fail():
    assert simplicial_identity_failures(4, "literal")
    assert simplicial_identity_failures(4, "pullback")


@pytest.mark.parametrize("G", LIB, ids=lambda G: G.name)
def test_phi_commutes_and_is_onto(G):
    report = phi_check(G)
    assert report.failures == []
    assert all(report.surjective)


@pytest.mark.parametrize("G", LIB[:4], ids=lambda G: G.name)
def test_literal_table_breaks_phi(G):
    assert phi_check(G, table="literal").failures


@pytest.mark.parametrize("G", LIB, ids=lambda G: G.name)
def test_otimes_identities(G):
    assert otimes_identity_check(G).ok


@settings(max_examples=30)
@given(st.data())
def test_preimage_maps_back(data):
    G = LIB[1]
    _, embeds = moore_chain(G)
    m = data.draw(st.integers(0, G.top))
    x = data.draw(st.integers(0, G.levels[m].order - 1))
    assert phi_map(G, phi_preimage(G, m, x, embeds), embeds) == x


def test_box_word_reduces_inverse_pairs():
    w = BoxWord(2, ((1, 1, (0,)), (-1, 1, (0,))))
    assert w.terms == ()
    with pytest.raises(ValueError):
        BoxWord(2, ((1, 1, (2,)),))
