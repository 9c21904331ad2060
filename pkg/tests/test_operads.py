import json
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from peiffer.modules import Ring
from peiffer.operads import (
    OPERADS,
    TruncatedOperad,
    comm_operad,
    gamma_tilde,
    lie_operad,
    relabel,
    substitute,
    tree_leaves,
)
from peiffer.simplicial import SubsetTuple

RINGS = [Ring.integers(), Ring.mod(2), Ring.mod(3)]


@pytest.mark.parametrize("kind", sorted(OPERADS))
@pytest.mark.parametrize("ring", RINGS, ids=["Z", "Z2", "Z3"])
def test_shipped_operads_validate(kind, ring):
    assert OPERADS[kind](ring).validate() is None


def test_dimensions():
    R = Ring.mod(3)
    assert comm_operad(R).dims == [1, 1, 1, 1]
    assert comm_operad(R, unital=False).dims[0] == 0
    assert OPERADS["ass"](R).dims == [1, 1, 2, 6]
    assert lie_operad(R).dims == [0, 1, 1, 2]


def test_tree_substitution_and_relabel():
    tree = ("*", 0, 1)
    out = substitute(tree, [("*", 0, 1), 0], [0, 2])
    assert tree_leaves(out) == [0, 1, 2]
    assert tree_leaves(relabel(("*", 0, ("*", 1, 2)), (2, 0, 1))) == [2, 0, 1]


def test_corrupted_composition_is_reported():
    O = comm_operad(Ring.mod(3))
    key = (2, (2, 1), 0, (0, 0))
    O.composition[key] = tuple(2 * x for x in O.composition[key])
    v = O.validate()
    assert v is not None and v.identity == "associativity"


def test_corrupted_action_is_reported():
    O = OPERADS["ass"](Ring.mod(3))
    O.action[(2, 0, (1, 0))] = O.action[(2, 0, (0, 1))]
    assert O.validate() is not None


def test_json_round_trip():
    O = lie_operad(Ring.mod(3))
    P = TruncatedOperad.from_json(json.loads(json.dumps(O.to_json())))
    assert P.validate() is None
    assert P.composition == O.composition and P.action == O.action


def test_decorated_composition_requires_matching_unions():
    O = comm_operad(Ring.mod(2))
    mu = O.basis(2, 0)
    unit = O.basis(1, 0)
    outer = (mu, SubsetTuple(3, ((0, 1), (2,))))
    good = [(mu, SubsetTuple(3, ((0,), (1,)))), (unit, SubsetTuple(3, ((2,),)))]
    value, deco = gamma_tilde(O, outer, good)
    assert value == O.basis(3, 0)
    assert deco.parts == ((0,), (1,), (2,))
    bad = [(mu, SubsetTuple(3, ((0,), (0,)))), (unit, SubsetTuple(3, ((2,),)))]
    assert gamma_tilde(O, outer, bad) is None


@settings(max_examples=40)
@given(st.data())
def test_decorated_composition_is_associative(data):
    O = OPERADS["ass"](Ring.mod(3))
    m = data.draw(st.integers(1, 3))
    sub = st.lists(st.integers(0, m - 1), unique=True).map(lambda xs: tuple(sorted(xs)))
    # two-level tree: outer arity p, middle arities ks, leaves arity one each
    p = data.draw(st.integers(1, 2))
    ks = [data.draw(st.integers(1, 3 - (p - 1))) for _ in range(p)]
    if sum(ks) > 3:
        ks = [1] * p
    leaf_parts = [data.draw(sub) for _ in range(sum(ks))]
    leaves = [(O.basis(1, 0), SubsetTuple(m, (part,))) for part in leaf_parts]
    mids, pos = [], 0
    for k in ks:
        parts = tuple(leaf_parts[pos : pos + k])
        b = data.draw(st.integers(0, O.dims[k] - 1))
        mids.append((O.basis(k, b), SubsetTuple(m, parts)))
        pos += k
    outer_parts = tuple(tuple(sorted(set().union(*map(set, mid[1].parts)))) for mid in mids)
    b0 = data.draw(st.integers(0, O.dims[p] - 1))
    outer = (O.basis(p, b0), SubsetTuple(m, outer_parts))
    left_inner = gamma_tilde(O, outer, mids)
    assert left_inner is not None
    left = gamma_tilde(O, left_inner, leaves)
    pos, composed = 0, []
    for (v, T), k in zip(mids, ks):
        composed.append(gamma_tilde(O, (v, T), leaves[pos : pos + k]))
        pos += k
    right = gamma_tilde(O, outer, composed)
    assert left == right


def test_action_composes_in_order():
    O = OPERADS["ass"](Ring.mod(2))
    e = O.basis(3, 0)
    for s in permutations(range(3)):
        for t in permutations(range(3)):
            st_ = tuple(t[s[i]] for i in range(3))
            assert O.act(3, O.act(3, e, s), t) == O.act(3, e, st_)
