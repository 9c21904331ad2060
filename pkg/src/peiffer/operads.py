"""Operads in abelian groups truncated at a maximal arity.

Every basis operation is stored with a binary tree that says how to evaluate
it in an associative algebra: leaves are input positions, ``("*", L, R)`` is
the product, ``("[]", L, R)`` the commutator bracket and ``None`` the unit
(arity 0).  Composition and the symmetric-group action are kept as explicit
tables on basis elements, so a table loaded from JSON can be validated on its
own.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Sequence

from . import linalg
from .modules import Ring, Violation
from .simplicial import SubsetTuple

Tree = object  # int | None | tuple[str, Tree, Tree]
Vector = tuple[int, ...]


# ---------------------------------------------------------------- trees


def tree_leaves(tree: Tree) -> list[int]:
    if tree is None:
        return []
    if isinstance(tree, int):
        return [tree]
    return tree_leaves(tree[1]) + tree_leaves(tree[2])


def substitute(tree: Tree, children: Sequence[Tree], offsets: Sequence[int]) -> Tree:
    """Put ``children[i]`` (inputs shifted by ``offsets[i]``) in place of leaf i."""
    if tree is None:
        return None
    if isinstance(tree, int):
        return _shift(children[tree], offsets[tree])
    return (tree[0], substitute(tree[1], children, offsets), substitute(tree[2], children, offsets))


def _shift(tree: Tree, k: int) -> Tree:
    if tree is None:
        return None
    if isinstance(tree, int):
        return tree + k
    return (tree[0], _shift(tree[1], k), _shift(tree[2], k))


def relabel(tree: Tree, sigma: Sequence[int]) -> Tree:
    if tree is None:
        return None
    if isinstance(tree, int):
        return sigma[tree]
    return (tree[0], relabel(tree[1], sigma), relabel(tree[2], sigma))


def _strip_units(tree: Tree) -> Tree:
    """Remove unit leaves from products (1·x = x·1 = x); brackets with 1 vanish."""
    if tree is None or isinstance(tree, int):
        return tree
    left, right = _strip_units(tree[1]), _strip_units(tree[2])
    if tree[0] == "*":
        if left is None:
            return right
        if right is None:
            return left
    elif left is None or right is None:
        return "zero"
    if left == "zero" or right == "zero":
        return "zero"
    return (tree[0], left, right)


def tree_to_words(tree: Tree) -> dict[tuple[int, ...], int]:
    """Expansion of a tree into signed words in the free associative algebra."""
    if tree is None:
        return {(): 1}
    if tree == "zero":
        return {}
    if isinstance(tree, int):
        return {(tree,): 1}
    left, right = tree_to_words(tree[1]), tree_to_words(tree[2])
    out: dict[tuple[int, ...], int] = {}
    for u, a in left.items():
        for v, b in right.items():
            out[u + v] = out.get(u + v, 0) + a * b
            if tree[0] == "[]":
                out[v + u] = out.get(v + u, 0) - a * b
    return {w: c for w, c in out.items() if c}


def tree_to_json(tree: Tree):
    if tree is None or isinstance(tree, int):
        return tree
    return [tree[0], tree_to_json(tree[1]), tree_to_json(tree[2])]


def tree_from_json(data) -> Tree:
    if data is None or isinstance(data, int):
        return data
    return (data[0], tree_from_json(data[1]), tree_from_json(data[2]))


# ---------------------------------------------------------------- operads


def shapes(p: int, max_arity: int) -> list[tuple[int, ...]]:
    """Arity tuples (k_1..k_p) with total at most ``max_arity``."""
    return [ks for ks in product(range(max_arity + 1), repeat=p) if sum(ks) <= max_arity]


def _offsets(ks: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for k in ks:
        out.append(acc)
        acc += k
    return out


class TruncatedOperad:
    """O(0..P) as free modules with composition and action tables on basis elements.

    ``composition[(p, ks, b, bs)]`` is γ(e_b; e_{b_1}, ..., e_{b_p}) in O(Σ ks) and
    ``action[(p, b, σ)]`` is e_b·σ.  ``trees[p][b]`` evaluates e_b in an
    associative algebra; the right action relabels input i to σ(i).
    """

    def __init__(
        self,
        name: str,
        ring: Ring,
        max_arity: int,
        trees: Sequence[Sequence[Tree]],
        composition: dict,
        action: dict,
        unit: Vector,
    ):
        self.name = name
        self.ring = ring
        self.max_arity = max_arity
        self.trees = [list(t) for t in trees]
        self.composition = composition
        self.action = action
        self.unit = tuple(unit)
        if len(self.trees) != max_arity + 1:
            raise ValueError("need one basis list per arity 0..max_arity")

    def __repr__(self) -> str:
        return f"TruncatedOperad({self.name}, dims {self.dims})"

    @property
    def dims(self) -> list[int]:
        return [len(t) for t in self.trees]

    def zero(self, p: int) -> list[int]:
        return [0] * self.dims[p]

    def basis(self, p: int, b: int) -> list[int]:
        v = self.zero(p)
        v[b] = 1
        return v

    def compose(self, p: int, o: Sequence[int], ks: Sequence[int], children: Sequence[Sequence[int]]) -> list[int]:
        """Multilinear γ(o; o_1, ..., o_p)."""
        ks = tuple(ks)
        k = sum(ks)
        if len(ks) != p or len(children) != p or k > self.max_arity:
            raise ValueError(f"shape {ks} outside the truncation")
        out = self.zero(k)
        supports = [[(b, c) for b, c in enumerate(ch) if c] for ch in children]
        for b, c in enumerate(o):
            if not c:
                continue
            for combo in product(*supports):
                coeff = c
                for _, cc in combo:
                    coeff *= cc
                vec = self.composition[(p, ks, b, tuple(x for x, _ in combo))]
                for t, x in enumerate(vec):
                    if x:
                        out[t] += coeff * x
        return self.ring.reduce(out)

    def act(self, p: int, o: Sequence[int], sigma: Sequence[int]) -> list[int]:
        out = self.zero(p)
        for b, c in enumerate(o):
            if c:
                for t, x in enumerate(self.action[(p, b, tuple(sigma))]):
                    out[t] += c * x
        return self.ring.reduce(out)

    def validate(self) -> Violation | None:
        return validate_operad(self)

    def to_json(self) -> dict:
        return {
            "kind": "operad",
            "name": self.name,
            "ring": self.ring.to_json(),
            "max_arity": self.max_arity,
            "trees": [[tree_to_json(t) for t in ts] for ts in self.trees],
            "unit": list(self.unit),
            "composition": [
                {"p": p, "ks": list(ks), "b": b, "bs": list(bs), "value": list(v)}
                for (p, ks, b, bs), v in sorted(self.composition.items())
            ],
            "action": [
                {"p": p, "b": b, "sigma": list(s), "value": list(v)} for (p, b, s), v in sorted(self.action.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedOperad":
        ring = Ring.from_json(data["ring"])
        comp = {(e["p"], tuple(e["ks"]), e["b"], tuple(e["bs"])): tuple(e["value"]) for e in data["composition"]}
        act = {(e["p"], e["b"], tuple(e["sigma"])): tuple(e["value"]) for e in data["action"]}
        trees = [[tree_from_json(t) for t in ts] for ts in data["trees"]]
        return cls(data.get("name", ""), ring, int(data["max_arity"]), trees, comp, act, tuple(data["unit"]))


def _build(
    name: str,
    ring: Ring,
    max_arity: int,
    trees: list[list[Tree]],
    coords: Callable[[int, Tree], list[int]],
) -> TruncatedOperad:
    """Fill composition and action tables by substituting trees and reading coordinates."""
    comp: dict = {}
    act: dict = {}
    for p in range(max_arity + 1):
        for b, tree in enumerate(trees[p]):
            for sigma in permutations(range(p)):
                act[(p, b, sigma)] = tuple(ring.reduce(coords(p, relabel(tree, sigma))))
            for ks in shapes(p, max_arity):
                if any(not trees[k] for k in ks):
                    continue
                offs = _offsets(ks)
                for bs in product(*[range(len(trees[k])) for k in ks]):
                    children = [trees[k][c] for k, c in zip(ks, bs)]
                    t = _strip_units(substitute(tree, children, offs))
                    comp[(p, ks, b, bs)] = tuple(ring.reduce(coords(sum(ks), t)))
    unit = tuple(1 if t == 0 else 0 for t in trees[1])
    return TruncatedOperad(name, ring, max_arity, trees, comp, act, unit)


def _comb(word: Sequence[int]) -> Tree:
    if not word:
        return None
    tree: Tree = word[0]
    for x in word[1:]:
        tree = ("*", tree, x)
    return tree


def comm_operad(ring: Ring, max_arity: int = 3, unital: bool = True) -> TruncatedOperad:
    """Commutative operations: one basis element per arity, trivial action."""
    trees = [[_comb(list(range(p)))] for p in range(max_arity + 1)]
    if not unital:
        trees[0] = []
    return _build("Comm" if unital else "Comm (non-unital)", ring, max_arity, trees, lambda p, t: [0] if t == "zero" else [1])


def ass_operad(ring: Ring, max_arity: int = 3, unital: bool = True) -> TruncatedOperad:
    """Associative operations: basis words x_{w(0)}...x_{w(p-1)} in lexicographic order."""
    words = [list(permutations(range(p))) for p in range(max_arity + 1)]
    trees = [[_comb(list(w)) for w in ws] for ws in words]
    if not unital:
        trees[0] = []
    index = [{w: i for i, w in enumerate(ws)} for ws in words]

    def coords(p: int, t: Tree) -> list[int]:
        v = [0] * len(words[p])
        for w, c in tree_to_words(t).items():
            v[index[p][w]] += c
        return v

    return _build("Ass" if unital else "Ass (non-unital)", ring, max_arity, trees, coords)


LIE_TREES = {
    1: [0],
    2: [("[]", 0, 1)],
    3: [("[]", ("[]", 0, 1), 2), ("[]", ("[]", 0, 2), 1)],
}


def lie_operad(ring: Ring, max_arity: int = 3) -> TruncatedOperad:
    """Lie operations up to arity 3, realised inside the associative operad."""
    if max_arity > 3:
        raise ValueError("Lie tables are provided up to arity 3")
    trees = [[]] + [LIE_TREES[p] for p in range(1, max_arity + 1)]
    words = [list(permutations(range(p))) for p in range(max_arity + 1)]
    index = [{w: i for i, w in enumerate(ws)} for ws in words]

    def ass_vector(p: int, t: Tree) -> list[int]:
        v = [0] * len(words[p])
        for w, c in tree_to_words(t).items():
            v[index[p][w]] += c
        return v

    basis_rows = [[ass_vector(p, t) for t in trees[p]] for p in range(max_arity + 1)]

    def coords(p: int, t: Tree) -> list[int]:
        target = ring.reduce(ass_vector(p, t))
        if not any(target):
            return [0] * len(trees[p])
        x = linalg.solve_left(basis_rows[p], target, len(words[p]), ring.prime if ring.modulus else None)
        if x is None:
            raise ValueError(f"{t} does not lie in the Lie span")
        return x

    return _build("Lie", ring, max_arity, trees, coords)


OPERADS = {"comm": comm_operad, "ass": ass_operad, "lie": lie_operad}


# ---------------------------------------------------------------- validation


def validate_operad(O: TruncatedOperad) -> Violation | None:
    """Unit, associativity and both equivariance laws on every stored shape."""
    P = O.max_arity
    R = O.ring
    dims = O.dims
    if P >= 1 and dims[1] == 0:
        return Violation("unit", 1, (), "O(1) is zero")
    unit = list(O.unit)
    for p in range(P + 1):
        for b in range(dims[p]):
            e = O.basis(p, b)
            if p >= 1 and R.reduce(O.compose(1, unit, (p,), [e])) != R.reduce(e):
                return Violation("left unit", p, (b,))
            if R.reduce(O.compose(p, e, (1,) * p, [unit] * p)) != R.reduce(e):
                return Violation("right unit", p, (b,))
    # associativity: γ(γ(o; o_i); o_ij) = γ(o; γ(o_i; o_ij))
    for p in range(P + 1):
        for ks in shapes(p, P):
            for ls in product(*[shapes(k, P) for k in ks]):
                flat = tuple(x for l in ls for x in l)
                if sum(flat) > P:
                    continue
                if any(dims[k] == 0 for k in ks) or any(dims[x] == 0 for x in flat):
                    continue
                for b in range(dims[p]):
                    for bs in product(*[range(dims[k]) for k in ks]):
                        inner = [O.basis(k, c) for k, c in zip(ks, bs)]
                        for cs in product(*[range(dims[x]) for x in flat]):
                            leaves = [O.basis(x, c) for x, c in zip(flat, cs)]
                            left = O.compose(sum(ks), O.compose(p, O.basis(p, b), ks, inner), flat, leaves)
                            pos, right_children = 0, []
                            for k, l, child in zip(ks, ls, inner):
                                right_children.append(O.compose(k, child, l, leaves[pos : pos + k]))
                                pos += k
                            right = O.compose(p, O.basis(p, b), tuple(sum(l) for l in ls), right_children)
                            if left != right:
                                return Violation("associativity", p, (b,) + tuple(bs), f"shape {ks} / {ls}")
    for p in range(P + 1):
        ident = tuple(range(p))
        for b in range(dims[p]):
            if O.act(p, O.basis(p, b), ident) != O.basis(p, b):
                return Violation("identity permutation acts trivially", p, (b,))
            for s in permutations(range(p)):
                for t in permutations(range(p)):
                    st = tuple(t[s[i]] for i in range(p))  # apply s first, then t
                    if O.act(p, O.act(p, O.basis(p, b), s), t) != O.act(p, O.basis(p, b), st):
                        return Violation("action is compatible with products", p, (b,))
    for p in range(P + 1):
        for ks in shapes(p, P):
            if any(dims[k] == 0 for k in ks):
                continue
            offs = _offsets(ks)
            k = sum(ks)
            for b in range(dims[p]):
                for bs in product(*[range(dims[x]) for x in ks]):
                    children = [O.basis(x, c) for x, c in zip(ks, bs)]
                    base = O.compose(p, O.basis(p, b), ks, children)
                    for sigma in permutations(range(p)):
                        lhs = O.compose(p, O.act(p, O.basis(p, b), sigma), ks, children)
                        perm_ks = tuple(ks[sigma[j]] for j in range(p))
                        perm_children = [children[sigma[j]] for j in range(p)]
                        offs2 = _offsets(perm_ks)
                        tau = [0] * k
                        for j in range(p):
                            for u in range(perm_ks[j]):
                                tau[offs2[j] + u] = offs[sigma[j]] + u
                        rhs = O.act(k, O.compose(p, O.basis(p, b), perm_ks, perm_children), tau)
                        if lhs != rhs:
                            return Violation("equivariance in the top slot", p, (b,) + tuple(bs), f"σ = {sigma}")
                    for taus in product(*[permutations(range(x)) for x in ks]):
                        moved = [O.act(x, ch, t) for x, ch, t in zip(ks, children, taus)]
                        lhs = O.compose(p, O.basis(p, b), ks, moved)
                        block = [0] * k
                        for i, t in enumerate(taus):
                            for u in range(ks[i]):
                                block[offs[i] + u] = offs[i] + t[u]
                        rhs = O.act(k, base, block)
                        if lhs != rhs:
                            return Violation("equivariance in the inputs", p, (b,) + tuple(bs))
    return None


# ---------------------------------------------------------------- decorated composition


def gamma_tilde(
    O: TruncatedOperad,
    outer: tuple[Sequence[int], SubsetTuple],
    inner: Sequence[tuple[Sequence[int], SubsetTuple]],
) -> tuple[list[int], SubsetTuple] | None:
    """Composition of decorated operations (o, I) with (o_i, I_i).

    The result is zero (``None``) unless the outer decoration is exactly
    (∪I_1, ..., ∪I_p); otherwise the decorations concatenate and the
    coefficients compose in O.
    """
    o, I = outer
    p = len(I.parts)
    if len(inner) != p:
        raise ValueError("need one inner operation per outer input")
    ks = tuple(len(J.parts) for _, J in inner)
    for _, J in inner:
        if J.ambient != I.ambient:
            raise ValueError("decorations live over different ambients")
    if any(frozenset(part) != J.union for part, (_, J) in zip(I.parts, inner)):
        return None
    value = O.compose(p, o, ks, [c for c, _ in inner])
    parts = tuple(part for _, J in inner for part in J.parts)
    return value, SubsetTuple(I.ambient, parts)
