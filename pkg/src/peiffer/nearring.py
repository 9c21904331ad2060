"""The noncommutative coefficient near-rings Λ(m), the free-group model of
G ⊠ Λ(n) over a chain of groups, and the comparison map Φ to a simplicial group.

Λ(m) is modelled additively as the free group on squarefree monomials φ_J
(J a sorted subset of {0..m-1}, φ_∅ = 1), with φ_i φ_j = -φ_j φ_i and
φ_i φ_i = 0.  Products expand right-distributively: a term of the left
factor multiplies the whole right factor, and a negative term contributes
the inverse (reversed, negated) expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .dold_kan import sort_monomial, zn_pullback
from .groups import FiniteGroup, GroupHom
from .sgroups import (
    TruncatedSimplicialGroup,
    moore,
    moore_subgroup,
    pc2_decompose,
)
from .simplicial import (
    SimplicialMap,
    codegeneracy,
    coface,
    factor_map,
    subsets,
)

Term = tuple[int, tuple[int, ...]]

TABLES = ("literal", "pullback")


def _free_reduce(terms: Iterable[tuple[int, object]]) -> tuple:
    out: list = []
    for sign, key in terms:
        if out and out[-1][1] == key and out[-1][0] == -sign:
            out.pop()
        else:
            out.append((sign, key))
    return tuple(out)


def _invert(terms: Sequence[tuple[int, object]]) -> tuple:
    return tuple((-s, k) for s, k in reversed(terms))


@dataclass(frozen=True)
class NearRingWord:
    """An element of the additive group of Λ(level), as a reduced word."""

    level: int
    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        clean = []
        for sign, J in self.terms:
            J = tuple(int(j) for j in J)
            if sign not in (1, -1):
                raise ValueError("term signs must be +1 or -1")
            if any(a >= b for a, b in zip(J, J[1:])) or any(j < 0 or j >= self.level for j in J):
                raise ValueError(f"monomial {J} is not a sorted subset of [0, {self.level - 1}]")
            clean.append((sign, J))
        object.__setattr__(self, "terms", _free_reduce(clean))

    @classmethod
    def zero(cls, level: int) -> "NearRingWord":
        return cls(level, ())

    @classmethod
    def one(cls, level: int) -> "NearRingWord":
        return cls(level, ((1, ()),))

    @classmethod
    def phi(cls, level: int, J: Iterable[int], sign: int = 1) -> "NearRingWord":
        s, K = sort_monomial(tuple(J))
        if not s:
            return cls.zero(level)
        return cls(level, ((s * sign, K),))

    def _same(self, other: "NearRingWord") -> None:
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other: "NearRingWord") -> "NearRingWord":
        self._same(other)
        return NearRingWord(self.level, self.terms + other.terms)

    def __neg__(self) -> "NearRingWord":
        return NearRingWord(self.level, _invert(self.terms))

    def __sub__(self, other: "NearRingWord") -> "NearRingWord":
        return self + (-other)

    def __mul__(self, other: "NearRingWord") -> "NearRingWord":
        return nr_multiply(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def abelianize(self) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = {}
        for s, J in self.terms:
            out[J] = out.get(J, 0) + s
        return {J: c for J, c in out.items() if c}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (s, J) in enumerate(self.terms):
            mono = "φ_" + "".join(map(str, J)) if J else "1"
            if k == 0:
                parts.append(mono if s > 0 else f"-{mono}")
            else:
                parts.append(("+ " if s > 0 else "- ") + mono)
        return " ".join(parts)


def monomial_product(I: Sequence[int], J: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """φ_I φ_J as (sign, support); sign 0 when the supports overlap."""
    return sort_monomial(tuple(I) + tuple(J))


def _expand_product(a: Sequence[Term], b: Sequence[Term]) -> tuple[Term, ...]:
    out: list[Term] = []
    for sa, I in a:
        inner = []
        for sb, L in b:
            s, K = monomial_product(I, L)
            if s:
                inner.append((s * sb, K))
        out.extend(inner if sa > 0 else _invert(inner))
    return tuple(out)


def nr_multiply(a: NearRingWord, b: NearRingWord) -> NearRingWord:
    """Right-distributive product: each left term times the whole right word."""
    a._same(b)
    return NearRingWord(a.level, _expand_product(a.terms, b.terms))


# ---------------------------------------------------------------- simplicial structure


def _generator_kind(alpha: SimplicialMap) -> tuple[str, int] | None:
    m, n = alpha.source_dim, alpha.target_dim
    if m == n - 1:
        for j in range(n + 1):
            if coface(n, j) == alpha:
                return "d", j
    if m == n + 1:
        for j in range(n + 1):
            if codegeneracy(n, j) == alpha:
                return "s", j
    return None


def _table_image(kind: str, j: int, n: int, i: int) -> tuple[Term, ...]:
    """Literal face/degeneracy tables on φ_i ∈ Λ(n)."""
    if kind == "s":
        if j == n or i < j:
            return ((1, (i,)),)
        if i == j:
            return ((1, (i,)), (1, (i + 1,)))
        return ((1, (i + 1,)),)
    if j == n:
        return () if i == n - 1 else ((1, (i,)),)
    if i < j:
        return ((1, (i,)),)
    if i == j:
        return ()
    return ((1, (i - 1,)),)


def _pullback_image(alpha: SimplicialMap, i: int) -> tuple[Term, ...]:
    return tuple((c, (j,)) for j, c in sorted(zn_pullback(alpha, i).items()))


def generator_image(alpha: SimplicialMap, i: int, table: str = "pullback") -> NearRingWord:
    """Image of φ_i ∈ Λ(n) under the map induced by α: [m] -> [n]."""
    if table not in TABLES:
        raise ValueError(f"unknown table {table!r}")
    if not 0 <= i < alpha.target_dim:
        raise IndexError(f"φ_{i} does not exist at level {alpha.target_dim}")
    if table == "pullback":
        return NearRingWord(alpha.source_dim, _pullback_image(alpha, i))
    kind = _generator_kind(alpha)
    if kind is None:
        raise ValueError("the literal tables only cover single faces and degeneracies")
    return NearRingWord(alpha.source_dim, _table_image(kind[0], kind[1], alpha.target_dim, i))


def _ordered_product(level: int, factors: Sequence[NearRingWord]) -> tuple[Term, ...]:
    acc: tuple[Term, ...] = ((1, ()),)
    for f in factors:
        acc = _expand_product(acc, f.terms)
    return NearRingWord(level, acc).terms


def _apply_generator(alpha: SimplicialMap, x: NearRingWord, table: str) -> NearRingWord:
    images = [generator_image(alpha, i, table) for i in range(alpha.target_dim)]
    out: list[Term] = []
    for s, J in x.terms:
        expansion = _ordered_product(alpha.source_dim, [images[j] for j in J])
        out.extend(expansion if s > 0 else _invert(expansion))
    return NearRingWord(alpha.source_dim, tuple(out))


def _check_level(alpha: SimplicialMap, x: NearRingWord) -> None:
    if x.level != alpha.target_dim:
        raise ValueError(f"word lives at level {x.level}, map expects {alpha.target_dim}")


def nr_simplicial(alpha: SimplicialMap, x: NearRingWord, table: str = "pullback") -> NearRingWord:
    """Action of α: [m] -> [n] on Λ(n) -> Λ(m).

    Generator images come from the pullback φ_i ↦ φ_i ∘ α (``table="pullback"``)
    or from the fixed face/degeneracy table whose last face sends φ_{n-1}
    to 0 (``table="literal"``); the two differ only there.  Monomials map
    by ordered multiplicative expansion and words homomorphically.
    Composite maps are applied through their face/degeneracy factorisation.
    """
    _check_level(alpha, x)
    if _generator_kind(alpha) is not None:
        return _apply_generator(alpha, x, table)
    chain = factor_map(alpha)
    for h in reversed(chain):
        x = _apply_generator(h, x, table)
    return x


def nr_delta(alpha: SimplicialMap, x: NearRingWord, table: str = "pullback") -> NearRingWord:
    """The group map Λ(n) -> Λ(m) induced by the α-derivation δ_α.

    On φ_J it vanishes unless α(m) = j_k ∈ J, and then equals
    (-1)^{r-k} times the ordered expansion of the remaining factors.
    """
    _check_level(alpha, x)
    t = alpha.values[alpha.source_dim]
    out: list[Term] = []
    for s, J in x.terms:
        if t not in J:
            continue
        k = J.index(t) + 1
        sign = s * (-1 if (len(J) - k) % 2 else 1)
        rest = [generator_image(alpha, j, table) for j in J if j != t]
        expansion = _ordered_product(alpha.source_dim, rest)
        out.extend(expansion if sign > 0 else _invert(expansion))
    return NearRingWord(alpha.source_dim, tuple(out))


# ---------------------------------------------------------------- degeneracy expressions


def express_by_degeneracies(J: Sequence[int], m: int) -> list[tuple[int, tuple[int, ...]]]:
    """Signed canonical degeneracies (ε, I) with φ_J = Σ~ ε s_I(φ_{[r-1]}), r = |J|.

    The degeneracy s_I whose fibres are the intervals (j_{t-1}, j_t] expands
    to a lexicographic sum ending in φ_J; every earlier term has a
    componentwise smaller support, so φ_J = -(earlier terms) + s_I(φ_{[r-1]})
    with the earlier terms rewritten recursively.  The result re-expands to
    φ_J exactly, with no reordering of terms.
    """
    J = tuple(sorted(int(j) for j in J))
    if len(set(J)) != len(J) or any(j < 0 or j >= m for j in J):
        raise ValueError(f"{J} is not a subset of [0, {m - 1}]")
    return list(_express(J, m))


def _fibre_degeneracy(J: tuple[int, ...], m: int) -> tuple[int, ...]:
    """The canonical I whose codegeneracy sends (j_{t-1}, j_t] to t."""
    values, t = [], 0
    for k in range(m + 1):
        values.append(t)
        if t < len(J) and k == J[t]:
            t += 1
    return tuple(i for i in range(m) if values[i] == values[i + 1])


@lru_cache(maxsize=None)
def _express(J: tuple[int, ...], m: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    I = _fibre_degeneracy(J, m)
    if J == tuple(range(len(J))):
        return ((1, I),)
    expansion = expand_degeneracy_expression([(1, I)], m)
    assert expansion.terms[-1] == (1, J)
    prefix: list[tuple[int, tuple[int, ...]]] = []
    for sign, K in expansion.terms[:-1]:
        part = list(_express(K, m))
        prefix.extend(part if sign > 0 else [(-e, L) for e, L in reversed(part)])
    return tuple([(-e, L) for e, L in reversed(prefix)] + [(1, I)])


def expand_degeneracy_expression(expr: Sequence[tuple[int, Sequence[int]]], m: int, table: str = "pullback") -> NearRingWord:
    """Evaluate Σ~ ε s_I(φ_{[r-1]}) in Λ(m)."""
    out = NearRingWord.zero(m)
    for e, I in expr:
        r = m - len(I)
        x = NearRingWord.phi(r, range(r))
        level = r
        for i in I:
            x = nr_simplicial(codegeneracy(level, i), x, table)
            level += 1
        out = out + (x if e > 0 else -x)
    return out


# ---------------------------------------------------------------- chains of groups and G ⊠ Λ


@dataclass
class ChainOfGroups:
    groups: list[FiniteGroup]
    boundaries: list[GroupHom | None]

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def d(self, i: int, g: int) -> int:
        return 0 if i == 0 else self.boundaries[i](g)

    def validate(self) -> str | None:
        for i in range(2, self.top + 1):
            if np.any(self.boundaries[i - 1].images[self.boundaries[i].images] != 0):
                return f"d∘d is nontrivial at degree {i}"
        return None


def moore_chain(G: TruncatedSimplicialGroup) -> tuple[ChainOfGroups, list[np.ndarray]]:
    """The Moore complex of G as a chain of groups, with the embeddings N_k -> G_k."""
    md = moore(G)
    groups, embeds, pos = [], [], []
    for k, K in enumerate(md.kernels):
        mem = K.members
        index = -np.ones(G.levels[k].order, dtype=np.int64)
        index[mem] = np.arange(mem.size)
        T = index[G.levels[k].table[np.ix_(mem, mem)]]
        groups.append(FiniteGroup(T, [G.levels[k].labels[int(e)] for e in mem], name=f"N_{k}", validate=False))
        embeds.append(mem)
        pos.append(index)
    bds: list[GroupHom | None] = [None]
    for k in range(1, G.top + 1):
        imgs = pos[k - 1][G.d(k, k).images[embeds[k]]]
        bds.append(GroupHom(groups[k], groups[k - 1], imgs, validate=False))
    return ChainOfGroups(groups, bds), embeds


BoxGen = tuple[int, int, tuple[int, ...]]  # (sign, element of N_|J|, J)


@dataclass(frozen=True)
class BoxWord:
    """An element of G ⊠ Λ(level): a reduced word in generators (g, J), g ≠ 1."""

    level: int
    terms: tuple[BoxGen, ...] = ()

    def __post_init__(self) -> None:
        clean = []
        for s, g, J in self.terms:
            J = tuple(J)
            if s not in (1, -1):
                raise ValueError("signs must be +1 or -1")
            if any(a >= b for a, b in zip(J, J[1:])) or any(j < 0 or j >= self.level for j in J):
                raise ValueError(f"{J} is not a sorted subset of [0, {self.level - 1}]")
            if g != 0:
                clean.append((s, (int(g), J)))
        red = _free_reduce(clean)
        object.__setattr__(self, "terms", tuple((s, g, J) for s, (g, J) in red))

    def __mul__(self, other: "BoxWord") -> "BoxWord":
        if self.level != other.level:
            raise ValueError("level mismatch")
        return BoxWord(self.level, self.terms + other.terms)

    def inverse(self) -> "BoxWord":
        return BoxWord(self.level, tuple((-s, g, J) for s, g, J in reversed(self.terms)))

    def to_json(self, chain: ChainOfGroups | None = None) -> list:
        out = []
        for s, g, J in self.terms:
            label = chain.groups[len(J)].labels[g] if chain else g
            out.append([s, label, list(J)])
        return out


def tensor(level: int, g: int, x: NearRingWord) -> BoxWord:
    """g ⊗ x expanded additively: (g⊗φ_J)^{±1} for each term of x."""
    return BoxWord(level, tuple((s, g, J) for s, J in x.terms))


def _check_degrees(chain: ChainOfGroups, w: BoxWord) -> None:
    for _, g, J in w.terms:
        if len(J) > chain.top or not 0 <= g < chain.groups[len(J)].order:
            raise ValueError(f"generator ({g}, {J}) does not match the chain degrees")


def box_apply(
    alpha: SimplicialMap,
    w: BoxWord,
    chain: ChainOfGroups,
    table: str = "pullback",
    boundary_first: bool = True,
) -> BoxWord:
    """lam α on G ⊠ Λ(n): g⊗x ↦ (dg ⊗ ᾱ(x))(g ⊗ α(x)).

    ``boundary_first=False`` puts the boundary factor last instead.
    Composite maps go through the face/degeneracy factorisation.
    """
    if w.level != alpha.target_dim:
        raise ValueError("word level does not match the map")
    _check_degrees(chain, w)
    if _generator_kind(alpha) is None:
        for h in reversed(factor_map(alpha)):
            w = box_apply(h, w, chain, table, boundary_first)
        return w
    m = alpha.source_dim
    out = BoxWord(m)
    for s, g, J in w.terms:
        x = NearRingWord(w.level, ((1, J),))
        main = tensor(m, g, nr_simplicial(alpha, x, table))
        corr = tensor(m, chain.d(len(J), g), nr_delta(alpha, x, table))
        piece = corr * main if boundary_first else main * corr
        out = out * (piece if s > 0 else piece.inverse())
    return out


def phi_generator(G: TruncatedSimplicialGroup, embeds: Sequence[np.ndarray], m: int, g: int, J: Sequence[int]) -> int:
    """Φ_m(g ⊗ φ_J) = ∏~ s_I(g)^ε over the degeneracy expression of φ_J."""
    H = G.levels[m]
    x = int(embeds[len(J)][g])
    acc = 0
    for e, I in express_by_degeneracies(J, m):
        y = G.apply_degeneracies(m - len(I), I, x)
        acc = H.mul(acc, y if e > 0 else H.inv(y))
    return acc


def phi_map(G: TruncatedSimplicialGroup, w: BoxWord, embeds: Sequence[np.ndarray] | None = None) -> int:
    if embeds is None:
        embeds = moore_chain(G)[1]
    H = G.levels[w.level]
    acc = 0
    for s, g, J in w.terms:
        y = phi_generator(G, embeds, w.level, g, J)
        acc = H.mul(acc, y if s > 0 else H.inv(y))
    return acc


@dataclass
class PhiReport:
    name: str
    checked: int
    failures: list[tuple[str, int, tuple[int, ...], int, int]]
    surjective: list[bool]

    @property
    def ok(self) -> bool:
        return not self.failures and all(self.surjective)


def phi_check(
    G: TruncatedSimplicialGroup,
    table: str = "pullback",
    boundary_first: bool = True,
    max_failures: int = 20,
) -> PhiReport:
    """Check Φ against every face and degeneracy on every generator, and surjectivity.

    Failures are recorded as (operator, level, J, element of N_|J|, index).
    """
    chain, embeds = moore_chain(G)
    failures = []
    checked = 0
    for m in range(G.top + 1):
        for k in range(min(m, chain.top) + 1):
            for J in combinations(range(m), k):
                for g in range(1, chain.groups[k].order):
                    w = BoxWord(m, ((1, g, J),))
                    value = phi_map(G, w, embeds)
                    ops = []
                    if m >= 1:
                        ops += [("d", i, coface(m, i), G.d(m, i)) for i in range(m + 1)]
                    if m < G.top:
                        ops += [("s", i, codegeneracy(m, i), G.s(m, i)) for i in range(m + 1)]
                    for name, i, alpha, hom in ops:
                        checked += 1
                        lhs = hom(value)
                        rhs = phi_map(G, box_apply(alpha, w, chain, table, boundary_first), embeds)
                        if lhs != rhs and len(failures) < max_failures:
                            failures.append((f"{name}_{i}", m, J, g, lhs))
    surjective = [phi_is_onto(G, m, embeds) for m in range(G.top + 1)]
    return PhiReport(G.name, checked, failures, surjective)


def phi_preimage(G: TruncatedSimplicialGroup, m: int, x: int, embeds: Sequence[np.ndarray] | None = None) -> BoxWord:
    """A word mapping to x under Φ_m, read off the Moore decomposition.

    Each component s_I(x_I) is hit by g ⊗ s_I(φ_{[r-1]}) expanded through
    the degeneracy tables.
    """
    if embeds is None:
        embeds = moore_chain(G)[1]
    out = BoxWord(m)
    for I, xI in pc2_decompose(G, m, x):
        r = m - len(I)
        g = int(np.searchsorted(embeds[r], xI))
        expr = expand_degeneracy_expression([(1, I)], m)
        out = out * tensor(m, g, expr)
    return out


def phi_is_onto(G: TruncatedSimplicialGroup, m: int, embeds: Sequence[np.ndarray] | None = None) -> bool:
    if embeds is None:
        embeds = moore_chain(G)[1]
    for x in range(G.levels[m].order):
        if phi_map(G, phi_preimage(G, m, x, embeds), embeds) != x:
            return False
    return True


# ---------------------------------------------------------------- identity checks


@dataclass
class OtimesReport:
    pairs: int
    degree_two_failures: list[tuple[int, int]]
    degree_one_failures: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.degree_two_failures and not self.degree_one_failures


def otimes_identity_check(G: TruncatedSimplicialGroup) -> OtimesReport:
    """Compare Φ_2(gh⊗φ_1) with Φ_2((h⊗φ_0)^{-1}(g⊗φ_1)(h⊗φ_0)(h⊗φ_1)) and
    Φ_1(gh⊗φ_0) with Φ_1((g⊗φ_0)(h⊗φ_0)) for all g, h in N_1."""
    if G.top < 2:
        raise ValueError("need levels up to 2")
    chain, embeds = moore_chain(G)
    N1 = chain.groups[1]
    two, one = [], []
    for g in range(N1.order):
        for h in range(N1.order):
            gh = N1.mul(g, h)
            lhs = phi_map(G, BoxWord(2, ((1, gh, (1,)),)), embeds)
            rhs = phi_map(G, BoxWord(2, ((-1, h, (0,)), (1, g, (1,)), (1, h, (0,)), (1, h, (1,)))), embeds)
            if lhs != rhs:
                two.append((g, h))
            lhs1 = phi_map(G, BoxWord(1, ((1, gh, (0,)),)), embeds)
            rhs1 = phi_map(G, BoxWord(1, ((1, g, (0,)), (1, h, (0,)))), embeds)
            if lhs1 != rhs1:
                one.append((g, h))
    return OtimesReport(N1.order**2, two, one)


def simplicial_identity_failures(max_level: int, table: str = "pullback", abelian: bool = False) -> list[tuple[str, int, tuple[int, ...]]]:
    """Simplicial identities of Λ(*) on every monomial up to ``max_level``.

    With ``abelian=True`` words are compared after abelianisation.
    """

    def same(a: NearRingWord, b: NearRingWord) -> bool:
        return a.abelianize() == b.abelianize() if abelian else a == b

    def d(n, i, x):
        return nr_simplicial(coface(n, i), x, table)

    def s(n, i, x):
        return nr_simplicial(codegeneracy(n, i), x, table)

    bad = []
    for n in range(max_level + 1):
        for J in subsets(n):
            x = NearRingWord.phi(n, J)
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        if not same(d(n - 1, i, d(n, j, x)), d(n - 1, j - 1, d(n, i, x))):
                            bad.append((f"d_{i} d_{j} = d_{j - 1} d_{i}", n, J))
            if n < max_level:
                for j in range(n + 1):
                    sx = s(n, j, x)
                    for i in range(n + 2):
                        if i < j:
                            rhs, name = s(n - 1, j - 1, d(n, i, x)), f"d_{i} s_{j} = s_{j - 1} d_{i}"
                        elif i in (j, j + 1):
                            rhs, name = x, f"d_{i} s_{j} = id"
                        else:
                            rhs, name = s(n - 1, j, d(n, i - 1, x)), f"d_{i} s_{j} = s_{j} d_{i - 1}"
                        if (i < j or i > j + 1) and n == 0:
                            continue
                        if not same(d(n + 1, i, sx), rhs):
                            bad.append((name, n, J))
            if n + 1 < max_level:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if not same(s(n + 1, i, s(n, j, x)), s(n + 1, j + 1, s(n, i, x))):
                            bad.append((f"s_{i} s_{j} = s_{j + 1} s_{i}", n, J))
    return bad


def box_identity_failures(
    G: TruncatedSimplicialGroup, max_level: int = 4, table: str = "pullback", limit: int | None = None
) -> list[tuple[str, int, tuple[int, ...], int]]:
    """Simplicial identities of lam on single-generator words (g, J) over the Moore chain of G."""
    chain, _ = moore_chain(G)
    bad: list[tuple[str, int, tuple[int, ...], int]] = []

    def d(n, i, w):
        return box_apply(coface(n, i), w, chain, table)

    def s(n, i, w):
        return box_apply(codegeneracy(n, i), w, chain, table)

    for n in range(max_level + 1):
        for k in range(min(n, chain.top) + 1):
            for J in combinations(range(n), k):
                for g in range(1, chain.groups[k].order):
                    w = BoxWord(n, ((1, g, J),))
                    checks = []
                    if n >= 2:
                        for j in range(n + 1):
                            for i in range(j):
                                checks.append((f"d_{i} d_{j} = d_{j - 1} d_{i}", lambda i=i, j=j: d(n - 1, i, d(n, j, w)) == d(n - 1, j - 1, d(n, i, w))))
                    if n < max_level:
                        for j in range(n + 1):
                            for i in range(n + 2):
                                if i < j:
                                    name, rhs = f"d_{i} s_{j} = s_{j - 1} d_{i}", (lambda i=i, j=j: s(n - 1, j - 1, d(n, i, w)))
                                elif i in (j, j + 1):
                                    name, rhs = f"d_{i} s_{j} = id", (lambda: w)
                                else:
                                    name, rhs = f"d_{i} s_{j} = s_{j} d_{i - 1}", (lambda i=i, j=j: s(n - 1, j, d(n, i - 1, w)))
                                checks.append((name, lambda i=i, j=j, rhs=rhs: d(n + 1, i, s(n, j, w)) == rhs()))
                    if n + 1 < max_level:
                        for j in range(n + 1):
                            for i in range(j + 1):
                                checks.append((f"s_{i} s_{j} = s_{j + 1} s_{i}", lambda i=i, j=j: s(n + 1, i, s(n, j, w)) == s(n + 1, j + 1, s(n, i, w))))
                    for name, ok in checks:
                        if not ok():
                            bad.append((name, n, J, g))
                            if limit is not None and len(bad) >= limit:
                                return bad
    return bad
