"""The inverse of the normalization functor built from exterior powers.

Level m of K(C) is the direct sum of C_i ⊗ Λ^i Z(m), where Z(m) is free on
φ_0, ..., φ_{m-1} and a finite map α: [m] -> [n] acts by pulling back through
v_i ↦ v_{α(i)} - v_{α(m)}.  The boundary of C enters through the derivation
δ_α, which contracts with the dual vector attached to α(m).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from . import linalg
from .modules import (
    ChainComplex,
    ExactModule,
    ModuleMap,
    Ring,
    SimplicialModule,
    moore_complex,
)
from .simplicial import (
    SimplicialMap,
    canonical_composite,
    codegeneracy,
    coface,
)

Exterior = dict[tuple[int, ...], int]


def _clean(x: dict) -> dict:
    return {k: v for k, v in x.items() if v}


def zn_pullback(alpha: SimplicialMap, i: int) -> dict[int, int]:
    """Image of φ_i ∈ Z(n) in Z(m) under α: [m] -> [n], as {j: coefficient}."""
    m, n = alpha.source_dim, alpha.target_dim
    if not 0 <= i < n:
        raise ValueError(f"φ_{i} does not exist in Z({n})")
    last = alpha.values[m]
    if i != last:
        return {j: 1 for j in range(m) if alpha.values[j] == i}
    return {j: -1 for j in range(m) if alpha.values[j] != last}


def zn_pullback_vector(alpha: SimplicialMap, coeffs: Sequence[int]) -> list[int]:
    if len(coeffs) != alpha.target_dim:
        raise ValueError("vector length does not match the target level")
    out = [0] * alpha.source_dim
    for i, c in enumerate(coeffs):
        if c:
            for j, a in zn_pullback(alpha, i).items():
                out[j] += c * a
    return out


def sort_monomial(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted support of φ_{i_1} ∧ ... ∧ φ_{i_k}; sign 0 on a repeat."""
    if len(set(indices)) != len(indices):
        return 0, ()
    idx = list(indices)
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return sign, tuple(idx)


def wedge(x: Exterior, y: Exterior) -> Exterior:
    out: dict[tuple[int, ...], int] = {}
    for J, a in x.items():
        for L, b in y.items():
            sign, K = sort_monomial(J + L)
            if sign:
                out[K] = out.get(K, 0) + sign * a * b
    return _clean(out)


@lru_cache(maxsize=None)
def _monomial_image(alpha: SimplicialMap, J: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    result: Exterior = {(): 1}
    for i in J:
        result = wedge(result, {(j,): c for j, c in zn_pullback(alpha, i).items()})
        if not result:
            break
    return tuple(sorted(result.items()))


def lambda_action(alpha: SimplicialMap, x: Exterior) -> Exterior:
    """The exterior-power extension of the pullback action."""
    out: dict[tuple[int, ...], int] = {}
    for J, c in x.items():
        for K, a in _monomial_image(alpha, tuple(J)):
            out[K] = out.get(K, 0) + c * a
    return _clean(out)


def delta_derivation(alpha: SimplicialMap, x: Exterior) -> Exterior:
    """δ_α: Λ^i Z(n) -> Λ^{i-1} Z(m).

    On φ_J with J = {j_1 < ... < j_r} this is zero unless α(m) = j_k for some
    k, in which case it is (-1)^{r-k} times the action on φ_{J minus j_k}.
    """
    t = alpha.values[alpha.source_dim]
    out: dict[tuple[int, ...], int] = {}
    for J, c in x.items():
        if t not in J:
            continue
        k = J.index(t) + 1
        sign = -1 if (len(J) - k) % 2 else 1
        rest = tuple(j for j in J if j != t)
        for K, a in _monomial_image(alpha, rest):
            out[K] = out.get(K, 0) + sign * c * a
    return _clean(out)


def exterior_basis(m: int, i: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), i))


@dataclass(frozen=True)
class KLabel:
    """Basis element a_b ⊗ φ_J of K_m with a_b the b-th generator of C_i."""

    degree: int
    generator: int
    support: tuple[int, ...]

    def __str__(self) -> str:
        phi = "".join(map(str, self.support)) if self.support else "1"
        return f"c{self.degree}.{self.generator}⊗φ{phi}"


class KFunctor:
    """K applied to a chain complex, with access to K(α) for any finite map α."""

    def __init__(self, C: ChainComplex):
        self.C = C
        self.ring = C.ring
        self._levels: dict[int, tuple[ExactModule, list[KLabel], dict[KLabel, int]]] = {}

    def level(self, m: int) -> ExactModule:
        return self._level(m)[0]

    def labels(self, m: int) -> list[KLabel]:
        return self._level(m)[1]

    def index(self, m: int) -> dict[KLabel, int]:
        return self._level(m)[2]

    def _level(self, m: int):
        if m not in self._levels:
            labels = []
            for i in range(min(m, self.C.top) + 1):
                for b in range(self.C.module(i).rank):
                    for J in exterior_basis(m, i):
                        labels.append(KLabel(i, b, J))
            index = {lab: k for k, lab in enumerate(labels)}
            rank = len(labels)
            relations = []
            for i in range(min(m, self.C.top) + 1):
                for rel in self.C.module(i).relations:
                    for J in exterior_basis(m, i):
                        row = [0] * rank
                        for b, c in enumerate(rel):
                            if c:
                                row[index[KLabel(i, b, J)]] = c
                        relations.append(row)
            self._levels[m] = (ExactModule(self.ring, rank, relations), labels, index)
        return self._levels[m]

    def element(self, m: int, terms: Sequence[tuple[int, Sequence[int], Exterior]]) -> list[int]:
        """Vector of Σ a ⊗ x for terms (degree i, a ∈ C_i as coordinates, x ∈ Λ^i Z(m))."""
        index = self.index(m)
        v = [0] * self.level(m).rank
        for i, a, x in terms:
            for b, c in enumerate(a):
                if not c:
                    continue
                for J, e in x.items():
                    if len(J) != i:
                        raise ValueError("exterior degree must match the chain degree")
                    v[index[KLabel(i, b, J)]] += c * e
        return self.ring.reduce(v)

    def map(self, alpha: SimplicialMap) -> ModuleMap:
        """K(α): K_n -> K_m for α: [m] -> [n]."""
        m, n = alpha.source_dim, alpha.target_dim
        src, tgt = self.level(n), self.level(m)
        tindex = self.index(m)
        rows = []
        for lab in self.labels(n):
            row = [0] * tgt.rank
            phi = {lab.support: 1}
            for K, c in lambda_action(alpha, phi).items():
                row[tindex[KLabel(lab.degree, lab.generator, K)]] += c
            if lab.degree >= 1:
                da = self.C.boundary(lab.degree).matrix[lab.generator]
                dphi = delta_derivation(alpha, phi)
                for b, a in enumerate(da):
                    if a:
                        for K, c in dphi.items():
                            row[tindex[KLabel(lab.degree - 1, b, K)]] += a * c
            rows.append(row)
        return ModuleMap(src, tgt, rows, check=False)

    def simplicial_module(self, top: int) -> SimplicialModule:
        levels = [self.level(m) for m in range(top + 1)]
        faces = [[]] + [[self.map(coface(n, i)) for i in range(n + 1)] for n in range(1, top + 1)]
        degs = [[self.map(codegeneracy(n, i)) for i in range(n + 1)] for n in range(top)]
        labels = [self.labels(m) for m in range(top + 1)]
        return SimplicialModule(self.ring, levels, faces, degs, labels)


def build_K(C: ChainComplex, top: int | None = None) -> SimplicialModule:
    """The simplicial module K(C) truncated at ``top`` (default: C.top)."""
    bad = C.validate()
    if bad is not None:
        raise ValueError(str(bad))
    return KFunctor(C).simplicial_module(C.top if top is None else top)


@dataclass
class RoundtripWitness:
    """Levelwise isomorphisms together with every checked square."""

    kind: str
    forward: list[ModuleMap]
    backward: list[ModuleMap]
    failures: list[str] = field(default_factory=list)
    squares_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def _is_identity(f: ModuleMap) -> bool:
    return f == ModuleMap.identity(f.source)


def _complex_roundtrip(C: ChainComplex) -> RoundtripWitness:
    KF = KFunctor(C)
    K = KF.simplicial_module(C.top)
    N = moore_complex(K, check=False)
    forward, backward, failures = [], [], []
    squares = 0
    for m in range(C.top + 1):
        Cm = C.module(m)
        pres = N.presentations[m]
        top_support = tuple(range(m))
        f_rows = []
        for b in range(Cm.rank):
            a = Cm.basis_vector(b)
            v = KF.element(m, [(m, a, {top_support: 1})])
            f_rows.append(pres.coordinates(v))
        f = ModuleMap(Cm, pres.module, f_rows)
        index = KF.index(m)
        g_rows = []
        for gen in pres.generators:
            g_rows.append([gen[index[KLabel(m, b, top_support)]] for b in range(Cm.rank)])
        g = ModuleMap(pres.module, Cm, g_rows)
        if not _is_identity(f.then(g)):
            failures.append(f"level {m}: C -> NK C -> C is not the identity")
        if not _is_identity(g.then(f)):
            failures.append(f"level {m}: NK C -> C -> NK C is not the identity")
        forward.append(f)
        backward.append(g)
    for m in range(1, C.top + 1):
        squares += 1
        if forward[m].then(N.complex.boundary(m)) != C.boundary(m).then(forward[m - 1]):
            failures.append(f"boundary square at degree {m} does not commute")
    return RoundtripWitness("N∘K", forward, backward, failures, squares)


@lru_cache(maxsize=None)
def degeneracy_basis_change(m: int, i: int) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Coefficients expressing each φ_J ∈ Λ^i Z(m) in the basis s_I(φ_{[i-1]}).

    Returns ``(degeneracy_sets, coeffs)`` where ``coeffs[J_index][I_index]`` is
    the coefficient of s_I(φ_{[i-1]}) in φ_J.
    """
    monos = exterior_basis(m, i)
    mindex = {J: k for k, J in enumerate(monos)}
    Is = list(combinations(range(m), m - i))
    rows = []
    for I in Is:
        alpha = canonical_composite(I, "degeneracy", i)
        img = lambda_action(alpha, {tuple(range(i)): 1})
        row = [0] * len(monos)
        for K, c in img.items():
            row[mindex[K]] += c
        rows.append(row)
    coeffs = []
    for J in monos:
        target = [1 if k == mindex[J] else 0 for k in range(len(monos))]
        x = linalg.solve_left(rows, target, len(monos), None)
        if x is None:
            raise ArithmeticError("degenerate monomials do not span the exterior power")
        coeffs.append(tuple(x))
    return tuple(Is), tuple(coeffs)


def _module_roundtrip(A: SimplicialModule) -> RoundtripWitness:
    N = moore_complex(A)
    KF = KFunctor(N.complex)
    K = KF.simplicial_module(A.top)
    forward, backward, failures = [], [], []
    for m in range(A.top + 1):
        Am = A.levels[m]
        rows = []
        for lab in KF.labels(m):
            i = lab.degree
            Is, coeffs = degeneracy_basis_change(m, i)
            J_index = exterior_basis(m, i).index(lab.support)
            gen = N.presentations[i].generators[lab.generator]
            v = [0] * Am.rank
            for I, c in zip(Is, coeffs[J_index]):
                if c:
                    w = A.apply_degeneracies(i, I, gen)
                    v = [a + c * b for a, b in zip(v, w)]
            rows.append(A.ring.reduce(v))
        psi = ModuleMap(K.levels[m], Am, rows)
        inv_rows = []
        stack = [list(r) for r in psi.matrix] + [list(r) for r in Am.relations]
        for k in range(Am.rank):
            x = linalg.solve_left(stack, Am.basis_vector(k), Am.rank, Am.prime)
            if x is None:
                failures.append(f"level {m}: K N A -> A is not onto")
                x = [0] * len(stack)
            inv_rows.append(x[: len(psi.matrix)])
        try:
            inv = ModuleMap(Am, K.levels[m], inv_rows)
        except ValueError:
            failures.append(f"level {m}: inverse is not well defined")
            inv = ModuleMap(Am, K.levels[m], inv_rows, check=False)
        if not _is_identity(psi.then(inv)):
            failures.append(f"level {m}: K N A -> A -> K N A is not the identity")
        if not _is_identity(inv.then(psi)):
            failures.append(f"level {m}: A -> K N A -> A is not the identity")
        forward.append(inv)
        backward.append(psi)
    squares = 0
    for m in range(1, A.top + 1):
        for i in range(m + 1):
            squares += 1
            if backward[m].then(A.d(m, i)) != K.d(m, i).then(backward[m - 1]):
                failures.append(f"face square d_{i} at level {m} does not commute")
    for m in range(A.top):
        for i in range(m + 1):
            squares += 1
            if backward[m].then(A.s(m, i)) != K.s(m, i).then(backward[m + 1]):
                failures.append(f"degeneracy square s_{i} at level {m} does not commute")
    return RoundtripWitness("K∘N", forward, backward, failures, squares)


def roundtrip_check(X: ChainComplex | SimplicialModule) -> RoundtripWitness:
    """Certify N K C ≅ C (for a complex) or A ≅ K N A (for a simplicial module)."""
    if isinstance(X, ChainComplex):
        return _complex_roundtrip(X)
    if isinstance(X, SimplicialModule):
        return _module_roundtrip(X)
    raise TypeError(f"cannot run a roundtrip on {type(X).__name__}")


# ---------------------------------------------------------------- generators


def random_chain_complex(
    ring: Ring, top: int, max_rank: int, rng: random.Random, coeff_bound: int = 2
) -> ChainComplex:
    """A random complex with ranks in [0, max_rank] and d∘d = 0 by construction."""
    ranks = [rng.randint(0, max_rank) for _ in range(top + 1)]
    levels = [ExactModule(ring, r) for r in ranks]
    bds: list[ModuleMap] = []
    for i in range(1, top + 1):
        if i == 1:
            allowed = [levels[0].basis_vector(k) for k in range(ranks[0])]
        else:
            allowed = bds[-1].kernel().generators()
        rows = []
        for _ in range(ranks[i]):
            v = [0] * ranks[i - 1]
            for g in allowed:
                c = rng.randint(-coeff_bound, coeff_bound)
                if c:
                    v = [a + c * b for a, b in zip(v, g)]
            rows.append(v)
        bds.append(ModuleMap(levels[i], levels[i - 1], rows))
    return ChainComplex(ring, levels, bds)


def random_unimodular(ring: Ring, n: int, rng: random.Random, steps: int | None = None) -> tuple[list[list[int]], list[list[int]]]:
    """A random invertible matrix and its inverse, from elementary row moves."""
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Tinv = [row[:] for row in T]
    if n < 2:
        return T, Tinv
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # row_i += c row_j on T; inverse gets column_j -= c column_i
        T[i] = [a + c * b for a, b in zip(T[i], T[j])]
        for row in Tinv:
            row[j] -= c * row[i]
    return [ring.reduce(r) for r in T], [ring.reduce(r) for r in Tinv]


def conjugate_simplicial_module(A: SimplicialModule, mats: Sequence[tuple[list[list[int]], list[list[int]]]]) -> SimplicialModule:
    """Transport the structure along levelwise invertible matrices (free levels only)."""
    q = A.ring.modulus

    def conj(f: ModuleMap, src: int, tgt: int) -> ModuleMap:
        T, _ = mats[src]
        _, Uinv = mats[tgt]
        M = linalg.matmul(linalg.matmul(T, f.matrix, f.target.rank, q), Uinv, f.target.rank, q)
        return ModuleMap(f.source, f.target, M)

    faces = [[]] + [[conj(A.d(n, i), n, n - 1) for i in range(n + 1)] for n in range(1, A.top + 1)]
    degs = [[conj(A.s(n, i), n, n + 1) for i in range(n + 1)] for n in range(A.top)]
    return SimplicialModule(A.ring, A.levels, faces, degs)


def random_simplicial_module(ring: Ring, top: int, max_rank: int, rng: random.Random) -> SimplicialModule:
    """K of a random complex, with every level re-coordinatised at random."""
    C = random_chain_complex(ring, top, max_rank, rng)
    A = build_K(C, top)
    mats = [random_unimodular(ring, lvl.rank, rng) for lvl in A.levels]
    return conjugate_simplicial_module(A, mats)


def standard_simplex_module(ring: Ring, k: int, top: int) -> SimplicialModule:
    """The free simplicial module on the standard k-simplex, up to level ``top``."""

    def simplices(n: int) -> list[tuple[int, ...]]:
        return [s for s in product(range(k + 1), repeat=n + 1) if all(a <= b for a, b in zip(s, s[1:]))]

    simp = [simplices(n) for n in range(top + 1)]
    index = [{s: i for i, s in enumerate(level)} for level in simp]
    levels = [ExactModule(ring, len(level)) for level in simp]

    def induced(n: int, target: int, op) -> ModuleMap:
        rows = []
        for s in simp[n]:
            row = [0] * len(simp[target])
            row[index[target][op(s)]] = 1
            rows.append(row)
        return ModuleMap(levels[n], levels[target], rows, check=False)

    faces = [[]] + [
        [induced(n, n - 1, lambda s, i=i: s[:i] + s[i + 1 :]) for i in range(n + 1)] for n in range(1, top + 1)
    ]
    degs = [[induced(n, n + 1, lambda s, i=i: s[: i + 1] + s[i:]) for i in range(n + 1)] for n in range(top)]
    return SimplicialModule(ring, levels, faces, degs, labels=simp)
