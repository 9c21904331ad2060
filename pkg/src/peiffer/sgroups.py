"""Finite simplicial groups: validation, Moore complex, face-kernel subgroups,
degenerate parts, the boundary/commutator comparison with certificates, and
the Moore decomposition of elements into degenerate components."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    GroupError,
    GroupHom,
    SubgroupHandle,
    commutator_set,
    commutator_subgroup,
    cyclic_group,
    direct_product,
    express_as_word,
    generate,
    intersect,
    setwise_product_is_subgroup,
    symmetric_group,
    trivial_group,
    trivial_subgroup,
    whole_group,
)
from .modules import SimplicialModule, Violation
from .simplicial import SimplicialMap, codegeneracy, coface, product_order


class TruncatedSimplicialGroup:
    """Levels G_0..G_top with ``faces[n][i]`` = d_i and ``degeneracies[n][i]`` = s_i."""

    def __init__(
        self,
        levels: Sequence[FiniteGroup],
        faces: Sequence[Sequence[GroupHom]],
        degeneracies: Sequence[Sequence[GroupHom]],
        name: str = "",
    ):
        self.levels = list(levels)
        self.faces = [list(f) for f in faces]
        self.degeneracies = [list(s) for s in degeneracies]
        self.name = name
        top = self.top
        if len(self.faces) != top + 1 or self.faces[0]:
            raise ValueError("faces must be indexed by level with none at level 0")
        if len(self.degeneracies) != top:
            raise ValueError("degeneracies must be given for levels 0..top-1")
        for n in range(1, top + 1):
            if len(self.faces[n]) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} faces")
        for n in range(top):
            if len(self.degeneracies[n]) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} degeneracies")

    def __repr__(self) -> str:
        orders = ",".join(str(G.order) for G in self.levels)
        return f"TruncatedSimplicialGroup({self.name or 'unnamed'}; orders {orders})"

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def d(self, n: int, i: int) -> GroupHom:
        return self.faces[n][i]

    def s(self, n: int, i: int) -> GroupHom:
        return self.degeneracies[n][i]

    def apply_degeneracies(self, level: int, members: Sequence[int], x: int) -> int:
        """s_I(x) for x in G_level (s_{i_1} applied first)."""
        n = level
        for i in members:
            x = self.s(n, i)(x)
            n += 1
        return x

    def apply_faces(self, level: int, members: Sequence[int], x: int) -> int:
        """d_I(x) = d_{i_1} ... d_{i_r}(x) for x in G_level (d_{i_r} applied first)."""
        n = level
        for i in reversed(members):
            x = self.d(n, i)(x)
            n -= 1
        return x

    def validate(self) -> Violation | None:
        for n in range(self.top + 1):
            problem = self.levels[n].check_axioms() if self.levels[n].order <= 1024 else None
            if problem:
                return Violation("group axioms", n, (), problem)
        for n in range(1, self.top + 1):
            for i, f in enumerate(self.faces[n]):
                if f.source is not self.levels[n] or f.target is not self.levels[n - 1]:
                    return Violation("face source/target", n, (i,))
                problem = f.check()
                if problem:
                    return Violation("face is a homomorphism", n, (i,), problem)
        for n in range(self.top):
            for i, s in enumerate(self.degeneracies[n]):
                if s.source is not self.levels[n] or s.target is not self.levels[n + 1]:
                    return Violation("degeneracy source/target", n, (i,))
                problem = s.check()
                if problem:
                    return Violation("degeneracy is a homomorphism", n, (i,), problem)
        for n in range(2, self.top + 1):
            for j in range(n + 1):
                for i in range(j):
                    if not np.array_equal(
                        self.d(n - 1, i).images[self.d(n, j).images],
                        self.d(n - 1, j - 1).images[self.d(n, i).images],
                    ):
                        return Violation("d_i d_j = d_{j-1} d_i", n, (i, j))
        for n in range(self.top):
            ident = np.arange(self.levels[n].order)
            for j in range(n + 1):
                s = self.s(n, j).images
                for i in range(n + 2):
                    lhs = self.d(n + 1, i).images[s]
                    if i < j:
                        rhs = self.s(n - 1, j - 1).images[self.d(n, i).images]
                        name = "d_i s_j = s_{j-1} d_i"
                    elif i in (j, j + 1):
                        rhs = ident
                        name = "d_j s_j = d_{j+1} s_j = id"
                    else:
                        rhs = self.s(n - 1, j).images[self.d(n, i - 1).images]
                        name = "d_i s_j = s_j d_{i-1}"
                    if not np.array_equal(lhs, rhs):
                        return Violation(name, n, (i, j))
        for n in range(self.top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = self.s(n + 1, i).images[self.s(n, j).images]
                    rhs = self.s(n + 1, j + 1).images[self.s(n, i).images]
                    if not np.array_equal(lhs, rhs):
                        return Violation("s_i s_j = s_{j+1} s_i", n, (i, j))
        return None

    def to_json(self) -> dict:
        return {
            "kind": "simplicial_group",
            "name": self.name,
            "top": self.top,
            "levels": [G.to_json() for G in self.levels],
            "d": [[f.images.tolist() for f in self.faces[n]] for n in range(1, self.top + 1)],
            "s": [[s.images.tolist() for s in self.degeneracies[n]] for n in range(self.top)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSimplicialGroup":
        levels = [FiniteGroup.from_json(g) for g in data["levels"]]
        top = len(levels) - 1
        if "top" in data and int(data["top"]) != top:
            raise ValueError("declared top does not match the number of levels")
        faces = [[]] + [
            [GroupHom(levels[n], levels[n - 1], imgs, validate=False) for imgs in data["d"][n - 1]]
            for n in range(1, top + 1)
        ]
        degs = [[GroupHom(levels[n], levels[n + 1], imgs, validate=False) for imgs in data["s"][n]] for n in range(top)]
        return cls(levels, faces, degs, name=data.get("name", ""))


def validate_sgroup(G: TruncatedSimplicialGroup) -> Violation | None:
    return G.validate()


# ---------------------------------------------------------------- constructions


def constant_sgroup(H: FiniteGroup, top: int) -> TruncatedSimplicialGroup:
    ident = GroupHom.identity(H)
    return TruncatedSimplicialGroup(
        [H] * (top + 1),
        [[]] + [[ident] * (n + 1) for n in range(1, top + 1)],
        [[ident] * (n + 1) for n in range(top)],
        name=f"const({H.name or H.order})",
    )


class CrossedModuleError(GroupError):
    def __init__(self, axiom: str, detail: str):
        super().__init__(f"{axiom}: {detail}")
        self.axiom = axiom


def check_crossed_module(M: FiniteGroup, P: FiniteGroup, boundary: GroupHom, act: np.ndarray) -> None:
    """Raise :class:`CrossedModuleError` naming the first failing axiom."""
    act = np.asarray(act, dtype=np.int64)
    if boundary.source is not M or boundary.target is not P:
        raise CrossedModuleError("hom", "boundary must map M to P")
    problem = boundary.check()
    if problem:
        raise CrossedModuleError("hom", problem)
    if act.shape != (P.order, M.order):
        raise CrossedModuleError("action", "action table must have shape |P| x |M|")
    TM = M.table
    for p in range(P.order):
        a = act[p]
        if len(np.unique(a)) != M.order or not np.array_equal(a[TM], TM[a[:, None], a[None, :]]):
            raise CrossedModuleError("action", f"element {P.labels[p]} does not act by automorphisms")
    if not np.array_equal(act[0], np.arange(M.order)):
        raise CrossedModuleError("action", "identity acts nontrivially")
    for p in range(P.order):
        for q in range(P.order):
            if not np.array_equal(act[P.mul(p, q)], act[p][act[q]]):
                raise CrossedModuleError("action", "not a left action")
    d = boundary.images
    TP, IP = P.table, P.inverse
    for p in range(P.order):
        lhs = d[act[p]]
        rhs = TP[TP[p, d], IP[p]]
        if not np.array_equal(lhs, rhs):
            raise CrossedModuleError("CM1", f"boundary is not equivariant at {P.labels[p]}")
    IM = M.inverse
    for m in range(M.order):
        lhs = act[d[m]]
        rhs = TM[TM[m, np.arange(M.order)], IM[m]]
        if not np.array_equal(lhs, rhs):
            raise CrossedModuleError("CM2", f"Peiffer identity fails for m = {M.labels[m]}")


def crossed_module_build(
    M: FiniteGroup,
    P: FiniteGroup,
    boundary: GroupHom,
    act,
    top: int,
    order_cap: int = DEFAULT_ORDER_CAP,
    name: str = "",
) -> TruncatedSimplicialGroup:
    """Nerve of the group-groupoid of a crossed module; level n is M^n ⋊ P.

    An n-simplex is a string of n composable arrows p_0 -> p_1 -> ... -> p_n,
    arrow k carrying m_k with p_k = ∂(m_k) p_{k-1}.  d_0 and d_n drop the end
    arrows, inner faces compose neighbours, degeneracies insert identities.
    """
    act = np.asarray(act, dtype=np.int64)
    check_crossed_module(M, P, boundary, act)
    nm, np_ = M.order, P.order
    dm = boundary.images
    TM, TP = M.table, P.table

    def decode(n: int) -> tuple[np.ndarray, list[np.ndarray]]:
        idx = np.arange(np_ * nm**n)
        p0 = idx % np_
        rest = idx // np_
        ms = []
        for _ in range(n):
            ms.append(rest % nm)
            rest = rest // nm
        return p0, ms

    def encode(p0: np.ndarray, ms: Sequence[np.ndarray]) -> np.ndarray:
        out = np.zeros_like(p0)
        mult = 1
        for m in reversed(list(ms)):
            out = out * nm + m
        return p0 + np_ * out if ms else p0.copy()

    levels, codes = [], []
    for n in range(top + 1):
        size = np_ * nm**n
        if size > order_cap:
            raise GroupError(f"level {n} would have order {size}, above the cap {order_cap}")
        p0, ms = decode(n)
        ps = [p0]
        for m in ms:
            ps.append(TP[dm[m], ps[-1]])
        codes.append((p0, ms, ps))
        a = np.arange(size)
        # product of every pair, computed arrow by arrow
        A_p0, B_p0 = p0[:, None], p0[None, :]
        new_p0 = TP[A_p0, B_p0]
        new_ms = []
        for k, m in enumerate(ms):
            new_ms.append(TM[m[:, None], act[ps[k][:, None], m[None, :]]])
        table = encode(new_p0, new_ms) if ms else new_p0
        labels = []
        for e in a:
            parts = [P.labels[int(p0[e])]] + [M.labels[int(m[e])] for m in ms]
            labels.append("(" + "; ".join(parts) + ")")
        levels.append(FiniteGroup(table, labels, name=f"{name}[{n}]", validate=False))

    faces: list[list[GroupHom]] = [[]]
    for n in range(1, top + 1):
        p0, ms, ps = codes[n]
        row = []
        for i in range(n + 1):
            if i == 0:
                imgs = encode(ps[1], ms[1:])
            elif i == n:
                imgs = encode(p0, ms[:-1])
            else:
                merged = TM[ms[i], ms[i - 1]]
                imgs = encode(p0, ms[: i - 1] + [merged] + ms[i + 1 :])
            row.append(GroupHom(levels[n], levels[n - 1], imgs, validate=False))
        faces.append(row)
    degs: list[list[GroupHom]] = []
    for n in range(top):
        p0, ms, ps = codes[n]
        ones = np.zeros_like(p0)
        row = []
        for i in range(n + 1):
            imgs = encode(p0, ms[:i] + [ones] + ms[i:])
            row.append(GroupHom(levels[n], levels[n + 1], imgs, validate=False))
        degs.append(row)
    return TruncatedSimplicialGroup(levels, faces, degs, name=name)


def from_simplicial_module(A: SimplicialModule, order_cap: int = DEFAULT_ORDER_CAP, name: str = "") -> TruncatedSimplicialGroup:
    """The underlying simplicial abelian group of a module over Z/q with free levels."""
    q = A.ring.modulus
    if q < 2:
        raise ValueError("need a finite ring Z/q")
    for lvl in A.levels:
        if not lvl.is_free():
            raise ValueError("levels must be free Z/q-modules")
    ranks = [lvl.rank for lvl in A.levels]

    def vectors(r: int) -> np.ndarray:
        idx = np.arange(q**r)
        return np.stack([(idx // q**k) % q for k in range(r)], axis=1) if r else np.zeros((1, 0), dtype=np.int64)

    def encode(V: np.ndarray) -> np.ndarray:
        r = V.shape[1]
        weights = q ** np.arange(r, dtype=np.int64)
        return (V % q) @ weights if r else np.zeros(V.shape[0], dtype=np.int64)

    levels, vecs = [], []
    for n, r in enumerate(ranks):
        if q**r > order_cap:
            raise GroupError(f"level {n} would have order {q**r}, above the cap {order_cap}")
        V = vectors(r)
        vecs.append(V)
        table = encode((V[:, None, :] + V[None, :, :]).reshape(-1, r)).reshape(len(V), len(V)) if r else np.zeros((1, 1), dtype=np.int64)
        labels = ["(" + ",".join(map(str, v)) + ")" for v in V]
        levels.append(FiniteGroup(table, labels, name=f"{name}[{n}]", validate=False))

    def hom(f, n: int, t: int) -> GroupHom:
        M = np.array(f.matrix, dtype=np.int64).reshape(ranks[n], ranks[t])
        return GroupHom(levels[n], levels[t], encode(vecs[n] @ M), validate=False)

    faces = [[]] + [[hom(A.d(n, i), n, n - 1) for i in range(n + 1)] for n in range(1, A.top + 1)]
    degs = [[hom(A.s(n, i), n, n + 1) for i in range(n + 1)] for n in range(A.top)]
    return TruncatedSimplicialGroup(levels, faces, degs, name=name)


def edge_group(H: FiniteGroup, top: int, order_cap: int = DEFAULT_ORDER_CAP, name: str = "") -> TruncatedSimplicialGroup:
    """Level n is H^{pairs i<j in [n]} with pointwise product; maps by precomposition.

    A face or degeneracy α sends f to (i, j) ↦ f(α(i), α(j)), read as 1 when
    α(i) = α(j).
    """
    pairs = [[(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)] for n in range(top + 1)]
    levels = []
    for n in range(top + 1):
        size = H.order ** len(pairs[n])
        if size > order_cap:
            raise GroupError(f"level {n} would have order {size}, above the cap {order_cap}")
        if pairs[n]:
            G = direct_product([H] * len(pairs[n]), name=f"{name}[{n}]")
        else:
            G = trivial_group()
            G.name = f"{name}[{n}]"
        levels.append(G)

    def digits(n: int) -> np.ndarray:
        k = len(pairs[n])
        idx = np.arange(H.order**k)
        return np.stack([(idx // H.order**t) % H.order for t in range(k)], axis=1) if k else np.zeros((1, 0), dtype=np.int64)

    def induced(alpha: SimplicialMap) -> GroupHom:
        n, m = alpha.target_dim, alpha.source_dim
        D = digits(n)
        pos = {p: t for t, p in enumerate(pairs[n])}
        cols = []
        for i, j in pairs[m]:
            a, b = alpha.values[i], alpha.values[j]
            cols.append(D[:, pos[(a, b)]] if a != b else np.zeros(D.shape[0], dtype=np.int64))
        weights = H.order ** np.arange(len(cols), dtype=np.int64)
        imgs = np.stack(cols, axis=1) @ weights if cols else np.zeros(D.shape[0], dtype=np.int64)
        return GroupHom(levels[n], levels[m], imgs, validate=False)

    faces = [[]] + [[induced(coface(n, i)) for i in range(n + 1)] for n in range(1, top + 1)]
    degs = [[induced(codegeneracy(n, i)) for i in range(n + 1)] for n in range(top)]
    return TruncatedSimplicialGroup(levels, faces, degs, name=name)


def restrict(G: TruncatedSimplicialGroup, subgroups: Sequence[SubgroupHandle], name: str = "") -> TruncatedSimplicialGroup:
    """The simplicial subgroup with the given levels (closure under all maps is checked)."""
    new_levels, index_maps = [], []
    for n, H in enumerate(subgroups):
        mem = H.members
        pos = -np.ones(G.levels[n].order, dtype=np.int64)
        pos[mem] = np.arange(mem.size)
        T = pos[G.levels[n].table[np.ix_(mem, mem)]]
        labels = [G.levels[n].labels[int(e)] for e in mem]
        new_levels.append(FiniteGroup(T, labels, name=f"{name}[{n}]", validate=False))
        index_maps.append((mem, pos))

    def sub(f: GroupHom, n: int, t: int) -> GroupHom:
        mem, _ = index_maps[n]
        _, pos = index_maps[t]
        imgs = pos[f.images[mem]]
        if (imgs < 0).any():
            raise ValueError(f"levels are not closed under a map from level {n} to {t}")
        return GroupHom(new_levels[n], new_levels[t], imgs, validate=False)

    faces = [[]] + [[sub(G.d(n, i), n, n - 1) for i in range(n + 1)] for n in range(1, G.top + 1)]
    degs = [[sub(G.s(n, i), n, n + 1) for i in range(n + 1)] for n in range(G.top)]
    return TruncatedSimplicialGroup(new_levels, faces, degs, name=name)


def degenerate_hull(G: TruncatedSimplicialGroup, name: str = "") -> TruncatedSimplicialGroup:
    """Keep levels 0 and 1; above that keep only the subgroup generated by degeneracies."""
    subs = [whole_group(G.levels[0])]
    if G.top >= 1:
        subs.append(whole_group(G.levels[1]))
    for n in range(2, G.top + 1):
        seeds = np.concatenate([G.s(n - 1, i).images[subs[n - 1].members] for i in range(n)])
        subs.append(generate(G.levels[n], seeds))
    return restrict(G, subs, name=name or f"hull({G.name})")


# ---------------------------------------------------------------- Moore data


@dataclass
class MooreData:
    kernels: list[SubgroupHandle]
    boundaries: list[SubgroupHandle | None]
    contained: list[bool]
    normal: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.contained) and all(self.normal)


def moore_subgroup(G: TruncatedSimplicialGroup, n: int) -> SubgroupHandle:
    return k_subgroup(G, n, tuple(range(n)))


def moore(G: TruncatedSimplicialGroup) -> MooreData:
    kernels = [moore_subgroup(G, n) for n in range(G.top + 1)]
    boundaries: list[SubgroupHandle | None] = [None]
    contained, normal = [True], [True]
    for n in range(1, G.top + 1):
        img = G.d(n, n).image(kernels[n])
        boundaries.append(img)
        contained.append(img <= kernels[n - 1])
        normal.append(img.is_normal())
    return MooreData(kernels, boundaries, contained, normal)


def k_subgroup(G: TruncatedSimplicialGroup, n: int, I: Sequence[int]) -> SubgroupHandle:
    """∩_{i in I} ker d_i inside G_n (the whole level for I = ∅)."""
    if any(i < 0 or i > n for i in I):
        raise IndexError(f"face indices {tuple(I)} out of range at level {n}")
    mask = np.ones(G.levels[n].order, dtype=bool)
    for i in I:
        mask &= G.d(n, i).images == 0
    return SubgroupHandle(G.levels[n], np.nonzero(mask)[0])


@dataclass
class DegeneratePart:
    subgroup: SubgroupHandle
    normal_closure: SubgroupHandle

    @property
    def is_everything(self) -> bool:
        return self.subgroup.order == self.subgroup.ambient.order

    @property
    def normal_is_everything(self) -> bool:
        return self.normal_closure.order == self.normal_closure.ambient.order


def degenerate_part(G: TruncatedSimplicialGroup, n: int) -> DegeneratePart:
    if n < 1:
        raise ValueError("degenerate elements start at level 1")
    seeds = np.concatenate([G.s(n - 1, i).images for i in range(n)])
    return DegeneratePart(generate(G.levels[n], seeds), generate(G.levels[n], seeds, mode="normal"))


# ---------------------------------------------------------------- boundary vs commutators


@dataclass(frozen=True)
class CommutatorLetter:
    """[u, v] with u in K_I and v in K_J."""

    I: tuple[int, ...]
    J: tuple[int, ...]
    u: int
    v: int


@dataclass
class Certificate:
    target: int
    letters: list[CommutatorLetter]
    verified: bool


@dataclass
class PeifferReport:
    name: str
    level: int
    lhs: SubgroupHandle
    rhs: SubgroupHandle
    verdict: str
    rhs_in_lhs: bool
    degenerate_generates: bool
    degenerate_normal_generates: bool
    setwise_product_is_subgroup: bool
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]]
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def certificates_ok(self) -> bool:
        return all(c.verified for c in self.certificates)

    def summary(self) -> str:
        hyp = "holds" if self.degenerate_generates else "fails"
        return (
            f"{self.name} n={self.level}: |lhs|={self.lhs.order} |rhs|={self.rhs.order} "
            f"verdict={self.verdict} (G_n = D_n {hyp}; {len(self.certificates)} certificates)"
        )


def compare_subgroups(lhs: SubgroupHandle, rhs: SubgroupHandle) -> str:
    le, ge = lhs <= rhs, rhs <= lhs
    if le and ge:
        return "equal"
    if ge:
        return "lhs⊋rhs"
    if le:
        return "rhs⊋lhs"
    return "incomparable"


def covering_pairs(n: int, allow_empty: bool = False) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs (I, J) of subsets of {0..n-1} with I ∪ J = {0..n-1}."""
    subs = [c for k in range(0 if allow_empty else 1, n + 1) for c in combinations(range(n), k)]
    full = set(range(n))
    return [(I, J) for I in subs for J in subs if set(I) | set(J) == full]


def commutator_witnesses(
    G: TruncatedSimplicialGroup, n: int, allow_empty: bool = False
) -> tuple[dict[int, CommutatorLetter], list[SubgroupHandle], list[tuple]]:
    """All commutator values [K_I, K_J] at level n-1, each with one witness."""
    level = n - 1
    H = G.levels[level]
    T, Inv = H.table, H.inverse
    witnesses: dict[int, CommutatorLetter] = {}
    factors = []
    pairs = covering_pairs(n, allow_empty)
    cache: dict[tuple[int, ...], SubgroupHandle] = {}
    for I, J in pairs:
        for S in (I, J):
            if S not in cache:
                cache[S] = k_subgroup(G, level, S)
        KI, KJ = cache[I], cache[J]
        u, v = KI.members[:, None], KJ.members[None, :]
        vals = T[T[u, v], T[Inv[u], Inv[v]]]
        flat = vals.ravel()
        uniq, first = np.unique(flat, return_index=True)
        for val, pos in zip(uniq, first):
            if int(val) not in witnesses:
                a, b = divmod(int(pos), KJ.order)
                witnesses[int(val)] = CommutatorLetter(I, J, int(KI.members[a]), int(KJ.members[b]))
        factors.append(generate(H, uniq))
    return witnesses, factors, pairs


def verify_certificate(G: TruncatedSimplicialGroup, n: int, cert: Certificate) -> bool:
    level = n - 1
    H = G.levels[level]
    full = set(range(n))
    acc = 0
    for L in cert.letters:
        if set(L.I) | set(L.J) != full:
            return False
        if any(G.d(level, i)(L.u) != 0 for i in L.I) or any(G.d(level, j)(L.v) != 0 for j in L.J):
            return False
        acc = H.mul(acc, H.commutator(L.u, L.v))
    return acc == cert.target


def theorem2_check(
    G: TruncatedSimplicialGroup, n: int, certificates: bool = True, allow_empty: bool = False
) -> PeifferReport:
    """Compare d(N_n G) with the subgroup generated by the [K_I, K_J], I ∪ J = [n-1].

    ``allow_empty`` admits I or J empty (K_∅ being all of G_{n-1}); by default
    both parts are nonempty.
    """
    if not 2 <= n <= G.top:
        raise ValueError(f"need 2 <= n <= {G.top}")
    H = G.levels[n - 1]
    lhs = G.d(n, n).image(moore_subgroup(G, n))
    witnesses, factors, pairs = commutator_witnesses(G, n, allow_empty)
    rhs = generate(H, list(witnesses))
    verdict = compare_subgroups(lhs, rhs)
    deg = degenerate_part(G, n)
    report = PeifferReport(
        name=G.name,
        level=n,
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        rhs_in_lhs=rhs <= lhs,
        degenerate_generates=deg.is_everything,
        degenerate_normal_generates=deg.normal_is_everything,
        setwise_product_is_subgroup=setwise_product_is_subgroup(factors),
        pairs=pairs,
    )
    if certificates and verdict == "equal":
        values = sorted(witnesses)
        for g in lhs.generators():
            word = express_as_word(H, g, values)
            letters = [witnesses[values[k]] for k in word] if word is not None else []
            cert = Certificate(g, letters, False)
            cert.verified = word is not None and verify_certificate(G, n, cert)
            report.certificates.append(cert)
    return report


def peiffer_certificate(G: TruncatedSimplicialGroup, n: int, g: int) -> Certificate | None:
    """Commutator factors whose product is d_n(g) for g in N_n G.

    Returns None when the degenerate elements do not generate G_n (the
    hypothesis under which such a factorisation is guaranteed) or no word exists.
    """
    if g not in moore_subgroup(G, n):
        raise ValueError("element is not in the Moore subgroup")
    if not degenerate_part(G, n).is_everything:
        return None
    target = G.d(n, n)(g)
    witnesses, _, _ = commutator_witnesses(G, n)
    values = sorted(witnesses)
    word = express_as_word(G.levels[n - 1], target, values)
    if word is None:
        return None
    cert = Certificate(target, [witnesses[values[k]] for k in word], False)
    cert.verified = verify_certificate(G, n, cert)
    return cert


# ---------------------------------------------------------------- decomposition


def _decompose(G: TruncatedSimplicialGroup, x: int, k: int, shift: int) -> list[tuple[tuple[int, ...], int]]:
    if k == 0:
        return [((), x)]
    level = k + shift
    H = G.levels[level]
    a = G.d(level, shift)(x)
    lower = _decompose(G, a, k - 1, shift)
    y = H.mul(H.inv(G.s(level - 1, shift)(a)), x)
    upper = _decompose(G, y, k - 1, shift + 1)
    out = [((0,) + tuple(i + 1 for i in I), z) for I, z in lower]
    out += [(tuple(i + 1 for i in I), w) for I, w in upper]
    return out


def pc2_decompose(G: TruncatedSimplicialGroup, n: int, x: int) -> list[tuple[tuple[int, ...], int]]:
    """Components (I, x_I), x_I in N_{n-|I|} G, with x = ∏ s_I(x_I) in ``product_order(n)``."""
    if not 0 <= x < G.levels[n].order:
        raise ValueError("element not found in the level")
    return _decompose(G, x, n, 0)


def pc2_recompose(G: TruncatedSimplicialGroup, n: int, parts: Sequence[tuple[Sequence[int], int]]) -> int:
    H = G.levels[n]
    acc = 0
    for I, xI in parts:
        acc = H.mul(acc, G.apply_degeneracies(n - len(I), I, xI))
    return acc


def pc2_order_identity(G: TruncatedSimplicialGroup, n: int) -> tuple[int, int]:
    """(|G_n|, ∏_I |N_{n-|I|}|), equal exactly when decomposition is a bijection."""
    sizes = [moore_subgroup(G, k).order for k in range(n + 1)]
    prod = 1
    for I in product_order(n):
        prod *= sizes[n - len(I)]
    return G.levels[n].order, prod


def theta_conj(G: TruncatedSimplicialGroup, n: int, y: int, x: int) -> tuple[int, bool]:
    """θ_y(x) = s_{n-1}(y) x s_{n-1}(y)^{-1} with its two certificates checked."""
    if x not in moore_subgroup(G, n):
        raise ValueError("x is not in the Moore subgroup")
    H = G.levels[n]
    sy = G.s(n - 1, n - 1)(y)
    out = H.mul(H.mul(sy, x), H.inv(sy))
    in_moore = out in moore_subgroup(G, n)
    K = G.levels[n - 1]
    expected = K.mul(K.mul(y, G.d(n, n)(x)), K.inv(y))
    return out, in_moore and G.d(n, n)(out) == expected


# ---------------------------------------------------------------- library


def _z2_identity() -> TruncatedSimplicialGroup:
    Z2 = cyclic_group(2)
    act = np.tile(np.arange(2), (2, 1))
    return crossed_module_build(Z2, Z2, GroupHom.identity(Z2), act, 3, name="CM(Z/2=Z/2)")


def _conjugation_action(P: FiniteGroup) -> np.ndarray:
    T, I = P.table, P.inverse
    p = np.arange(P.order)
    return T[T[p[:, None], p[None, :]], I[p][:, None]]


def _s3_identity(top: int = 3) -> TruncatedSimplicialGroup:
    S3 = symmetric_group(3)
    return crossed_module_build(S3, S3, GroupHom.identity(S3), _conjugation_action(S3), top, name="CM(S_3=S_3)")


def _z4_to_z2() -> TruncatedSimplicialGroup:
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    bd = GroupHom(Z4, Z2, np.arange(4) % 2)
    return crossed_module_build(Z4, Z2, bd, np.tile(np.arange(4), (2, 1)), 3, name="CM(Z/4->Z/2)")


def _z3_inverted() -> TruncatedSimplicialGroup:
    Z3, Z2 = cyclic_group(3), cyclic_group(2)
    bd = GroupHom(Z3, Z2, np.zeros(3, dtype=np.int64))
    act = np.array([[0, 1, 2], [0, 2, 1]])
    return crossed_module_build(Z3, Z2, bd, act, 3, name="CM(Z/3->Z/2,trivial boundary)")


def _kc(q: int, ranks: Sequence[int], mats, top: int, name: str) -> TruncatedSimplicialGroup:
    from .dold_kan import build_K
    from .modules import ChainComplex, Ring

    C = ChainComplex.from_matrices(Ring(q), ranks, mats)
    return from_simplicial_module(build_K(C, top), name=name)


def library(include_large: bool = True) -> list[TruncatedSimplicialGroup]:
    """The shipped finite simplicial groups used by the checkers."""
    out = [
        _z2_identity(),
        _s3_identity(3 if include_large else 2),
        _z4_to_z2(),
        _z3_inverted(),
        _kc(2, [0, 1, 1], [[[]], [[1]]], 3, "K(Z/2 -1-> Z/2 in degrees 1,2)"),
        _kc(4, [0, 1, 1], [[[]], [[2]]], 2, "K(Z/4 -2-> Z/4 in degrees 1,2)"),
        _kc(3, [1, 1], [[[1]]], 3, "K(Z/3 -1-> Z/3 in degrees 0,1)"),
        degenerate_hull(edge_group(symmetric_group(3), 2, name="E(S_3)"), name="hull E(S_3)"),
    ]
    from .groups import quaternion_group

    out.append(degenerate_hull(edge_group(quaternion_group(), 2, name="E(Q_8)"), name="hull E(Q_8)"))
    return out
