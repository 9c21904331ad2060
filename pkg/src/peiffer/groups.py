"""Finite groups as Cayley tables, homomorphisms, and subgroup machinery."""

from __future__ import annotations

from collections import deque
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 5040


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group on {0, ..., order-1} with identity 0.

    ``table[a, b]`` is the index of the product ab.
    """

    def __init__(self, table, labels: Sequence[str] | None = None, name: str = "", validate: bool = True):
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise GroupError("Cayley table must be square")
        self.table = T
        self.order = T.shape[0]
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.order)]
        self.name = name
        if validate:
            problem = self.check_axioms()
            if problem:
                raise GroupError(problem)
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(T == 0)
        inv[rows] = cols
        self.inverse = inv
        self._generators: list[int] | None = None

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def check_axioms(self) -> str | None:
        T, n = self.table, self.order
        if n == 0:
            return "a group needs at least one element"
        if T.min() < 0 or T.max() >= n:
            return "table entries leave the element range"
        ar = np.arange(n)
        if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
            return "element 0 is not a two-sided identity"
        for row in T:
            if len(np.unique(row)) != n:
                return "a row of the table is not a permutation (no cancellation)"
        for col in T.T:
            if len(np.unique(col)) != n:
                return "a column of the table is not a permutation (no cancellation)"
        # Light's test over a generating set: a∘(g∘b) == (a∘g)∘b for all a, b.
        for g in _greedy_generators(T):
            if not np.array_equal(T[T[:, g]], T[:, T[g]]):
                return f"associativity fails with middle element {g}"
        return None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, elems: Iterable[int]) -> int:
        out = 0
        for e in elems:
            out = int(self.table[out, e])
        return out

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a^{-1} b^{-1}."""
        T, I = self.table, self.inverse
        return int(T[T[a, b], T[I[a], I[b]]])

    def conj(self, x: int, y: int) -> int:
        """x^y = y^{-1} x y."""
        return int(self.table[self.table[self.inverse[y], x], y])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = int(self.table[out, a])
        return out

    def generators(self) -> list[int]:
        if self._generators is None:
            self._generators = _greedy_generators(self.table)
        return self._generators

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist(), "labels": self.labels}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        if "perm_gens" in data:
            return from_permutations(data["perm_gens"], degree=data.get("degree"))
        table = data["table"]
        if int(data.get("order", len(table))) != len(table):
            raise GroupError("declared order does not match the table")
        return cls(table, data.get("labels"))


def _closure(T: np.ndarray, seeds: Iterable[int]) -> np.ndarray:
    """Boolean membership mask of the subgroup generated by ``seeds``."""
    n = T.shape[0]
    gens = sorted({int(s) for s in seeds if int(s) != 0})
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    if not gens:
        return mask
    frontier = np.array([0], dtype=np.int64)
    gens_arr = np.array(gens, dtype=np.int64)
    while frontier.size:
        prod = T[frontier][:, gens_arr].ravel()
        new = np.unique(prod[~mask[prod]])
        mask[new] = True
        frontier = new
    return mask


def _greedy_generators(T: np.ndarray) -> list[int]:
    n = T.shape[0]
    gens: list[int] = []
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    for g in range(1, n):
        if not mask[g]:
            gens.append(g)
            mask = _closure(T, gens)
            if mask.all():
                break
    return gens


class GroupHom:
    """A homomorphism given by the image of every element."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, validate: bool = True):
        imgs = np.asarray(images, dtype=np.int64)
        if imgs.shape != (source.order,):
            raise GroupError("need one image per source element")
        self.source = source
        self.target = target
        self.images = imgs
        if validate:
            problem = self.check()
            if problem:
                raise GroupError(problem)

    def check(self) -> str | None:
        s, t, f = self.source.table, self.target.table, self.images
        if f.min() < 0 or f.max() >= self.target.order:
            return "images leave the target group"
        if not np.array_equal(f[s], t[f[:, None], f[None, :]]):
            return "map is not multiplicative"
        return None

    def __call__(self, a: int) -> int:
        return int(self.images[a])

    def then(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, other.target, other.images[self.images], validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupHom) and np.array_equal(self.images, other.images)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupHom":
        return cls(G, G, np.arange(G.order), validate=False)

    @classmethod
    def from_generators(cls, source: FiniteGroup, target: FiniteGroup, gen_images: dict[int, int]) -> "GroupHom":
        """Extend images of generators to the whole group by breadth-first search."""
        images = -np.ones(source.order, dtype=np.int64)
        images[0] = 0
        queue = deque([0])
        gens = list(gen_images.items())
        while queue:
            a = queue.popleft()
            for g, h in gens:
                b = source.mul(a, g)
                val = target.mul(int(images[a]), h)
                if images[b] < 0:
                    images[b] = val
                    queue.append(b)
                elif images[b] != val:
                    raise GroupError("generator images do not extend to a homomorphism")
        if (images < 0).any():
            raise GroupError("given elements do not generate the source")
        return cls(source, target, images)

    def kernel(self) -> "SubgroupHandle":
        return SubgroupHandle(self.source, np.nonzero(self.images == 0)[0])

    def image(self, H: "SubgroupHandle | None" = None) -> "SubgroupHandle":
        elems = self.images if H is None else self.images[H.members]
        return SubgroupHandle(self.target, np.unique(elems))


class SubgroupHandle:
    """A subgroup of ``ambient`` given by its sorted members."""

    __slots__ = ("ambient", "members", "_mask")

    def __init__(self, ambient: FiniteGroup, members, check: bool = False):
        self.ambient = ambient
        self.members = np.unique(np.asarray(members, dtype=np.int64))
        mask = np.zeros(ambient.order, dtype=bool)
        mask[self.members] = True
        self._mask = mask
        if check and not self.is_subgroup():
            raise GroupError("members do not form a subgroup")

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, a: int) -> bool:
        return bool(self._mask[a])

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupHandle) and other.ambient is self.ambient and np.array_equal(
            self.members, other.members
        )

    __hash__ = None  # type: ignore[assignment]

    def __le__(self, other: "SubgroupHandle") -> bool:
        return bool(other._mask[self.members].all())

    def __lt__(self, other: "SubgroupHandle") -> bool:
        return self <= other and self.order < other.order

    def __repr__(self) -> str:
        return f"Subgroup(order {self.order} of {self.ambient!r})"

    def is_subgroup(self) -> bool:
        if not self._mask[0]:
            return False
        T = self.ambient.table
        return bool(self._mask[T[np.ix_(self.members, self.members)]].all())

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        G = self.ambient
        T, I = G.table, G.inverse
        for g in G.generators():
            conj = T[T[I[g], self.members], g]
            if not self._mask[conj].all():
                return False
        return True

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily in index order."""
        gens: list[int] = []
        mask = np.zeros(self.ambient.order, dtype=bool)
        mask[0] = True
        for g in self.members:
            if not mask[g]:
                gens.append(int(g))
                mask = _closure(self.ambient.table, gens)
        return gens


def trivial_subgroup(G: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(G, [0])


def whole_group(G: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(G, np.arange(G.order))


def generate(G: FiniteGroup, seeds: Iterable[int], mode: str = "subgroup") -> SubgroupHandle:
    """Subgroup (``mode="subgroup"``) or normal closure (``mode="normal"``) of ``seeds``."""
    seeds = [int(s) for s in seeds]
    mask = _closure(G.table, seeds)
    if mode in ("normal", "normal_closure"):
        T, I = G.table, G.inverse
        ggens = np.array(G.generators(), dtype=np.int64)
        while True:
            members = np.nonzero(mask)[0]
            conj = T[T[I[ggens][:, None], members[None, :]], ggens[:, None]].ravel()
            if mask[conj].all():
                break
            mask = _closure(T, np.concatenate([members, conj]))
    elif mode != "subgroup":
        raise ValueError(f"unknown mode {mode!r}")
    return SubgroupHandle(G, np.nonzero(mask)[0])


def commutator_set(H: SubgroupHandle, K: SubgroupHandle) -> np.ndarray:
    """Distinct commutators [h, k] with h in H, k in K."""
    if H.ambient is not K.ambient:
        raise ValueError("subgroups live in different groups")
    G = H.ambient
    T, I = G.table, G.inverse
    h, k = H.members[:, None], K.members[None, :]
    return np.unique(T[T[h, k], T[I[h], I[k]]])


def commutator_subgroup(H: SubgroupHandle, K: SubgroupHandle) -> SubgroupHandle:
    return generate(H.ambient, commutator_set(H, K))


def intersect(*subgroups: SubgroupHandle) -> SubgroupHandle:
    G = subgroups[0].ambient
    mask = np.ones(G.order, dtype=bool)
    for H in subgroups:
        if H.ambient is not G:
            raise ValueError("subgroups live in different groups")
        mask &= H.mask
    return SubgroupHandle(G, np.nonzero(mask)[0])


def product_span(*subgroups: SubgroupHandle, ambient: FiniteGroup | None = None) -> SubgroupHandle:
    G = ambient if ambient is not None else subgroups[0].ambient
    if not subgroups:
        return trivial_subgroup(G)
    return generate(G, np.concatenate([H.members for H in subgroups]))


def setwise_product_is_subgroup(subgroups: Sequence[SubgroupHandle]) -> bool:
    """Whether H_1 H_2 ... H_k (as a set of products) is already a subgroup."""
    if not subgroups:
        return True
    G = subgroups[0].ambient
    T = G.table
    current = np.array([0], dtype=np.int64)
    for H in subgroups:
        current = np.unique(T[current[:, None], H.members[None, :]])
    return SubgroupHandle(G, current).is_subgroup()


def express_as_word(G: FiniteGroup, target: int, generators: Sequence[int]) -> list[int] | None:
    """Shortest positive word (list of indices into ``generators``) equal to ``target``."""
    if target == 0:
        return []
    parent = {0: None}
    queue = deque([0])
    gens = [int(g) for g in generators]
    while queue:
        a = queue.popleft()
        for k, g in enumerate(gens):
            b = G.mul(a, g)
            if b not in parent:
                parent[b] = (a, k)
                if b == target:
                    word = []
                    node = b
                    while parent[node] is not None:
                        prev, kk = parent[node]
                        word.append(kk)
                        node = prev
                    return word[::-1]
                queue.append(b)
    return None


# ---------------------------------------------------------------- constructors


def _perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a] = b
    return tuple(img)


def from_permutations(gens, degree: int | None = None, order_cap: int = DEFAULT_ORDER_CAP, name: str = "") -> FiniteGroup:
    """Cayley table of the permutation group generated by ``gens``.

    Generators may be image tuples or lists of cycles (0-based points).
    Permutations compose left to right: (ab)(x) = b(a(x)).
    """
    def is_cycles(g) -> bool:
        return bool(g) and isinstance(g[0], (list, tuple))

    if degree is None:
        degree = 0
        for g in gens:
            if is_cycles(g):
                degree = max(degree, max((max(c) for c in g if c), default=0) + 1)
            else:
                degree = max(degree, len(g))
    perms = [
        _perm_from_cycles(g, degree) if is_cycles(g) else tuple(g) + tuple(range(len(g), degree))
        for g in gens
    ]
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for g in perms:
            b = tuple(g[a[x]] for x in range(degree))
            if b not in index:
                index[b] = len(elems)
                elems.append(b)
                if len(elems) > order_cap:
                    raise GroupError(f"group order exceeds the cap {order_cap}")
                queue.append(b)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[tuple(b[a[x]] for x in range(degree))]
    labels = [_cycle_label(p) for p in elems]
    return FiniteGroup(table, labels, name=name, validate=False)


def _cycle_label(p: Sequence[int]) -> str:
    seen, out = set(), []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def cyclic_group(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, [str(i) for i in range(n)], name=f"Z/{n}", validate=False)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["1"], name="1", validate=False)


def symmetric_group(k: int) -> FiniteGroup:
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            table[i, j] = index[tuple(b[a[x]] for x in range(k))]
    return FiniteGroup(table, [_cycle_label(p) for p in perms], name=f"S_{k}", validate=False)


def quaternion_group() -> FiniteGroup:
    """Q_8 as the permutation action on itself."""
    # Elements ±1, ±i, ±j, ±k encoded as (sign, unit) pairs acting by right multiplication.
    units = ["1", "i", "j", "k"]
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for a, (sa, ua) in enumerate(elems):
        for b, (sb, ub) in enumerate(elems):
            s, u = mult[(ua, ub)]
            table[a, b] = index[(sa * sb * s, u)]
    labels = [("" if s > 0 else "-") + u for s, u in elems]
    return FiniteGroup(table, labels, name="Q_8")


def direct_product(groups: Sequence[FiniteGroup], name: str = "") -> FiniteGroup:
    """Product with mixed-radix indices (first factor varies fastest)."""
    orders = [G.order for G in groups]
    n = int(np.prod(orders)) if orders else 1
    idx = np.arange(n)
    digits = []
    rem = idx.copy()
    for o in orders:
        digits.append(rem % o)
        rem //= o
    table = np.zeros((n, n), dtype=np.int64)
    mult = 1
    for G, d in zip(groups, digits):
        table += G.table[d[:, None], d[None, :]] * mult
        mult *= G.order
    labels = []
    for i in range(n):
        labels.append("(" + ",".join(G.labels[int(d[i])] for G, d in zip(groups, digits)) + ")")
    return FiniteGroup(table, labels, name=name, validate=False)

