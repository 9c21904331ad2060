"""Simplicial algebras over a truncated operad, and the degree-m boundary of their Moore complex.

Carriers are simplicial vector spaces over a prime field Z/q.  Each level
carries an associative multiplication (a structure tensor) and the operad
acts by evaluating the tree attached to each basis operation, so the Comm,
Ass and Lie operads act on any (commutative) associative simplicial algebra.
Linear algebra here is done with numpy arrays reduced mod q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .dold_kan import KFunctor, delta_derivation, lambda_action
from .modules import ChainComplex, ExactModule, ModuleMap, Ring, SimplicialModule, Subspan, Violation
from .operads import TruncatedOperad, comm_operad
from .simplicial import SubsetTuple, codegeneracy, coface, subsets

DEFAULT_RANK_CAP = 64


# ---------------------------------------------------------------- linear algebra mod q


def rref(rows: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod q with its pivot columns (zero rows dropped)."""
    M = np.array(rows, dtype=np.int64) % q
    if M.ndim == 1:
        M = M.reshape(1, -1)
    nrows, ncols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, q)) % q
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % q
        pivots.append(c)
        r += 1
    return M[:r], pivots


def span_basis(rows, q: int, ncols: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return rref(rows.reshape(-1, ncols), q)[0]


def left_nullspace(F: np.ndarray, q: int) -> np.ndarray:
    """Basis of {x : x F = 0 mod q} for a matrix of shape (source, target)."""
    n = F.shape[0]
    if F.shape[1] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(F.T, q)
    free = [c for c in range(n) if c not in piv]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for row, p in zip(R, piv):
            out[t, p] = (-row[f]) % q
    return out


def rank_mod(rows: np.ndarray, q: int) -> int:
    return 0 if rows.size == 0 else len(rref(rows, q)[1])


def in_span(basis: np.ndarray, v: np.ndarray, q: int) -> bool:
    if not np.any(np.asarray(v) % q):
        return True
    if basis.shape[0] == 0:
        return False
    return rank_mod(np.vstack([basis, v]), q) == rank_mod(basis, q)


def span_le(a: np.ndarray, b: np.ndarray, q: int) -> bool:
    if a.shape[0] == 0:
        return True
    return rank_mod(np.vstack([b, a]), q) == rank_mod(b, q)


def compare_spans(lhs: np.ndarray, rhs: np.ndarray, q: int) -> str:
    sub, sup = span_le(rhs, lhs, q), span_le(lhs, rhs, q)
    if sub and sup:
        return "equal"
    if sub:
        return "lhs⊋rhs"
    if sup:
        return "rhs⊋lhs"
    return "incomparable"


# ---------------------------------------------------------------- algebras


class SimplicialOperadAlgebra:
    """An O-algebra in simplicial Z/q-vector spaces.

    ``mult[n]`` has shape (r, r, r): the product of basis vectors a and b is
    ``mult[n][a, b]``.  ``unit[n]`` is the unit of level n.  Faces and
    degeneracies come from ``carrier`` and must be unital algebra maps.
    """

    def __init__(
        self,
        operad: TruncatedOperad,
        carrier: SimplicialModule,
        mult: Sequence[np.ndarray],
        unit: Sequence[np.ndarray],
        name: str = "",
        kfunctor: KFunctor | None = None,
        monomials: Sequence[Sequence[tuple[int, ...]]] | None = None,
    ):
        q = carrier.ring.modulus
        if not q or carrier.ring.prime is None:
            raise ValueError("operad algebras are implemented over a prime field Z/q")
        for lvl in carrier.levels:
            if not lvl.is_free():
                raise ValueError("carrier levels must be free")
        self.q = q
        self.operad = operad
        self.carrier = carrier
        self.name = name
        self.mult = [np.asarray(t, dtype=np.int64) % q for t in mult]
        self.unit = [np.asarray(u, dtype=np.int64) % q for u in unit]
        self.kfunctor = kfunctor
        self.monomials = [list(x) for x in monomials] if monomials is not None else None
        self._faces = [[]] + [
            [np.array(f.matrix, dtype=np.int64).reshape(self.rank(n), self.rank(n - 1)) for f in carrier.faces[n]]
            for n in range(1, carrier.top + 1)
        ]
        self._degs = [
            [np.array(s.matrix, dtype=np.int64).reshape(self.rank(n), self.rank(n + 1)) for s in carrier.degeneracies[n]]
            for n in range(carrier.top)
        ]

    def __repr__(self) -> str:
        return f"SimplicialOperadAlgebra({self.name or self.operad.name}, ranks {[self.rank(n) for n in range(self.top + 1)]})"

    @property
    def top(self) -> int:
        return self.carrier.top

    def rank(self, n: int) -> int:
        return self.carrier.levels[n].rank

    def face(self, n: int, i: int) -> np.ndarray:
        return self._faces[n][i]

    def degeneracy(self, n: int, i: int) -> np.ndarray:
        return self._degs[n][i]

    def d(self, n: int, i: int, v) -> np.ndarray:
        return (np.asarray(v, dtype=np.int64) @ self._faces[n][i]) % self.q

    def s(self, n: int, i: int, v) -> np.ndarray:
        return (np.asarray(v, dtype=np.int64) @ self._degs[n][i]) % self.q

    def multiply(self, n: int, x, y) -> np.ndarray:
        return np.einsum("a,b,abc->c", np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64), self.mult[n]) % self.q

    def products(self, n: int, left: np.ndarray, right: np.ndarray, bracket: bool = False) -> np.ndarray:
        """All pairwise products (or brackets) of rows of ``left`` and ``right``."""
        r = self.rank(n)
        if left.shape[0] == 0 or right.shape[0] == 0:
            return np.zeros((0, r), dtype=np.int64)
        out = np.einsum("ia,jb,abc->ijc", left, right, self.mult[n]) % self.q
        if bracket:
            out = (out - np.einsum("jb,ia,bac->ijc", right, left, self.mult[n])) % self.q
        return out.reshape(-1, r)

    # evaluation of operations

    def _eval_tree(self, n: int, tree, xs: Sequence[np.ndarray]) -> np.ndarray:
        if tree is None:
            return self.unit[n]
        if isinstance(tree, int):
            return np.asarray(xs[tree], dtype=np.int64)
        left = self._eval_tree(n, tree[1], xs)
        right = self._eval_tree(n, tree[2], xs)
        out = self.multiply(n, left, right)
        if tree[0] == "[]":
            out = (out - self.multiply(n, right, left)) % self.q
        return out

    def act(self, n: int, o: Sequence[int], xs: Sequence) -> np.ndarray:
        """γ(o; x_1, ..., x_p) at level n."""
        p = len(xs)
        if len(o) != self.operad.dims[p]:
            raise ValueError(f"operation has the wrong length for arity {p}")
        out = np.zeros(self.rank(n), dtype=np.int64)
        for b, c in enumerate(o):
            if c % self.q:
                out = (out + c * self._eval_tree(n, self.operad.trees[p][b], xs)) % self.q
        return out

    def tree_span(self, n: int, tree, leaf_spans: Sequence[np.ndarray]) -> np.ndarray:
        """Span of all values of ``tree`` with leaf i ranging over ``leaf_spans[i]``."""
        r = self.rank(n)
        if tree is None:
            return span_basis(self.unit[n].reshape(1, -1), self.q, r)
        if isinstance(tree, int):
            return leaf_spans[tree]
        left = self.tree_span(n, tree[1], leaf_spans)
        right = self.tree_span(n, tree[2], leaf_spans)
        return span_basis(self.products(n, left, right, bracket=tree[0] == "[]"), self.q, r)

    def operation_span(self, n: int, p: int, leaf_spans: Sequence[np.ndarray]) -> np.ndarray:
        """Span of γ(o; k_1, ..., k_p) over all o ∈ O(p) and k_i in the given spans."""
        r = self.rank(n)
        rows = [self.tree_span(n, t, leaf_spans) for t in self.operad.trees[p]]
        if not rows:
            return np.zeros((0, r), dtype=np.int64)
        return span_basis(np.vstack(rows), self.q, r)

    # validation

    def validate(self, check_carrier: bool = True) -> Violation | None:
        q = self.q
        if check_carrier:
            bad = self.carrier.validate()
            if bad is not None:
                return bad
        commutative = self.operad.name.startswith("Comm")
        for n in range(self.top + 1):
            M, u, r = self.mult[n], self.unit[n], self.rank(n)
            if M.shape != (r, r, r) or u.shape != (r,):
                return Violation("structure tensor shape", n)
            left = np.einsum("abx,xcy->abcy", M, M) % q
            right = np.einsum("bcx,axy->abcy", M, M) % q
            if not np.array_equal(left, right):
                return Violation("associativity of the product", n)
            ident = np.eye(r, dtype=np.int64)
            if not np.array_equal(np.einsum("a,abc->bc", u, M) % q, ident) or not np.array_equal(
                np.einsum("b,abc->ac", u, M) % q, ident
            ):
                return Violation("unit", n)
            if commutative and not np.array_equal(M, M.transpose(1, 0, 2)):
                return Violation("commutativity", n)
        maps = [(n, i, self.face(n, i), n - 1) for n in range(1, self.top + 1) for i in range(n + 1)]
        maps += [(n, i, self.degeneracy(n, i), n + 1) for n in range(self.top) for i in range(n + 1)]
        for n, i, F, tgt in maps:
            kind = "face" if tgt < n else "degeneracy"
            image_of_products = np.einsum("abx,xc->abc", self.mult[n], F) % q
            products_of_images = np.einsum("ax,by,xyc->abc", F, F, self.mult[tgt]) % q
            if not np.array_equal(image_of_products, products_of_images):
                return Violation(f"{kind} is multiplicative", n, (i,))
            if not np.array_equal((self.unit[n] @ F) % q, self.unit[tgt]):
                return Violation(f"{kind} preserves the unit", n, (i,))
        return None

    def to_json(self) -> dict:
        return {
            "kind": "operad_algebra",
            "name": self.name,
            "operad": self.operad.to_json(),
            "carrier": self.carrier.to_json(),
            "mult": [m.tolist() for m in self.mult],
            "unit": [u.tolist() for u in self.unit],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialOperadAlgebra":
        operad = TruncatedOperad.from_json(data["operad"])
        carrier = SimplicialModule.from_json(data["carrier"])
        mult = [np.array(m, dtype=np.int64).reshape((carrier.levels[n].rank,) * 3) for n, m in enumerate(data["mult"])]
        unit = [np.array(u, dtype=np.int64).reshape(carrier.levels[n].rank) for n, u in enumerate(data["unit"])]
        return cls(operad, carrier, mult, unit, data.get("name", ""))


# ---------------------------------------------------------------- generators


def _monomials(r: int, cap: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for k in range(cap + 1):
        out.extend(combinations_with_replacement(range(r), k))
    return out


def _sym_tensor(monos: list[tuple[int, ...]], cap: int) -> np.ndarray:
    index = {m: i for i, m in enumerate(monos)}
    R = len(monos)
    M = np.zeros((R, R, R), dtype=np.int64)
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            if len(a) + len(b) <= cap:
                M[i, j, index[tuple(sorted(a + b))]] = 1
    return M


def _induced(F: np.ndarray, src: list[tuple[int, ...]], tgt: list[tuple[int, ...]], M_tgt: np.ndarray, q: int) -> np.ndarray:
    """Matrix of the algebra map Sym(V) -> Sym(W) extending the linear map F: V -> W."""
    index = {m: i for i, m in enumerate(tgt)}
    R = len(tgt)
    unit = np.zeros(R, dtype=np.int64)
    unit[index[()]] = 1
    linear = np.zeros((F.shape[0], R), dtype=np.int64)
    for a in range(F.shape[0]):
        for b in range(F.shape[1]):
            if F[a, b] % q:
                linear[a, index[(b,)]] = F[a, b] % q
    out = np.zeros((len(src), R), dtype=np.int64)
    for i, mono in enumerate(src):
        v = unit
        for a in mono:
            v = np.einsum("a,b,abc->c", v, linear[a], M_tgt) % q
        out[i] = v
    return out


def symmetric_example(
    C: ChainComplex,
    degree_cap: int = 2,
    top: int = 3,
    rank_cap: int = DEFAULT_RANK_CAP,
    operad: TruncatedOperad | None = None,
    name: str = "",
) -> SimplicialOperadAlgebra:
    """Sym(K(C)) with products of total degree above ``degree_cap`` set to zero.

    ``degree_cap = 1`` gives the square-zero extension Z/q ⊕ K(C).
    """
    ring = C.ring
    q = ring.modulus
    if not q or ring.prime is None:
        raise ValueError("symmetric examples need a prime modulus")
    if degree_cap < 0:
        raise ValueError("degree cap must be non-negative")
    KF = KFunctor(C)
    monos = []
    for n in range(top + 1):
        r = KF.level(n).rank
        ms = _monomials(r, degree_cap)
        if len(ms) > rank_cap:
            raise ValueError(f"level {n} would have rank {len(ms)} > {rank_cap}")
        monos.append(ms)
    tensors = [_sym_tensor(ms, degree_cap) for ms in monos]
    levels = [ExactModule.free(ring, len(ms)) for ms in monos]

    def lift(alpha, src: int, tgt: int) -> ModuleMap:
        F = np.array(KF.map(alpha).matrix, dtype=np.int64).reshape(KF.level(src).rank, KF.level(tgt).rank)
        mat = _induced(F, monos[src], monos[tgt], tensors[tgt], q)
        return ModuleMap(levels[src], levels[tgt], mat.tolist(), check=False)

    faces = [[]] + [[lift(coface(n, i), n, n - 1) for i in range(n + 1)] for n in range(1, top + 1)]
    degs = [[lift(codegeneracy(n, i), n, n + 1) for i in range(n + 1)] for n in range(top)]
    carrier = SimplicialModule(ring, levels, faces, degs)
    units = []
    for ms in monos:
        u = np.zeros(len(ms), dtype=np.int64)
        u[ms.index(())] = 1
        units.append(u)
    O = operad if operad is not None else comm_operad(ring, 3)
    return SimplicialOperadAlgebra(
        O, carrier, tensors, units, name or f"Sym≤{degree_cap} K(C) over Z/{q}", kfunctor=KF, monomials=monos
    )


def constant_algebra(
    operad: TruncatedOperad, mult: np.ndarray, unit: np.ndarray, top: int, name: str = "constant"
) -> SimplicialOperadAlgebra:
    """The constant simplicial algebra on one finite-dimensional algebra."""
    module = ExactModule.free(operad.ring, len(unit))
    carrier = SimplicialModule.constant(module, top)
    return SimplicialOperadAlgebra(operad, carrier, [mult] * (top + 1), [unit] * (top + 1), name)


def chain_complex_mod(q: int, ranks: Sequence[int], matrices: Sequence) -> ChainComplex:
    return ChainComplex.from_matrices(Ring.mod(q), ranks, matrices)


# ---------------------------------------------------------------- spans of face kernels


def kernel_of_faces(A: SimplicialOperadAlgebra, n: int, I: Sequence[int]) -> np.ndarray:
    """Basis of K_I = ∩_{i∈I} ker d_i in A_n (all of A_n when I is empty)."""
    r = A.rank(n)
    if not I:
        return np.eye(r, dtype=np.int64)
    F = np.hstack([A.face(n, i) for i in I])
    return left_nullspace(F % A.q, A.q)


def moore_subspace(A: SimplicialOperadAlgebra, n: int) -> np.ndarray:
    return kernel_of_faces(A, n, list(range(n)))


def to_subspan(A: SimplicialOperadAlgebra, n: int, rows: np.ndarray) -> Subspan:
    return Subspan(A.carrier.levels[n], [list(map(int, row)) for row in rows])


def subalgebra_generate(A: SimplicialOperadAlgebra, m: int, seed) -> np.ndarray:
    """Least subspace of A_m containing ``seed`` and closed under the operad action.

    Saturates breadth-first by arity until the rank stops growing.
    """
    r = A.rank(m)
    S = span_basis(np.asarray(seed, dtype=np.int64).reshape(-1, r), A.q, r)
    while True:
        rows = [S]
        for p in range(A.operad.max_arity + 1):
            rows.append(A.operation_span(m, p, [S] * p))
        T = span_basis(np.vstack(rows), A.q, r)
        if T.shape[0] == S.shape[0]:
            return S
        S = T


def degenerate_span(A: SimplicialOperadAlgebra, m: int) -> np.ndarray:
    r = A.rank(m)
    rows = [A.degeneracy(m - 1, i) for i in range(m)]
    return span_basis(np.vstack(rows), A.q, r) if rows else np.zeros((0, r), dtype=np.int64)


def degeneracy_generation_check(A: SimplicialOperadAlgebra, m: int) -> bool:
    """Whether the degenerate part of A_m generates A_m as an O-algebra."""
    if not 1 <= m <= A.top:
        raise ValueError("need 1 <= m <= top")
    return subalgebra_generate(A, m, degenerate_span(A, m)).shape[0] == A.rank(m)


# ---------------------------------------------------------------- both sides of the boundary formula


VARIANTS = ("proper", "nonempty")


def covering_multisets(m: int, p: int, variant: str = "proper") -> list[SubsetTuple]:
    """Covering p-tuples of subsets of {0..m-1} up to reordering.

    ``proper`` uses nonempty parts different from the full set; ``nonempty``
    allows the full set as a part.  Reordering a tuple does not change the
    span of operations applied to it, because O(p) is closed under the
    symmetric group.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    full = tuple(range(m))
    pool = [s for s in subsets(m) if s and (variant == "nonempty" or s != full)]
    out = []
    for parts in combinations_with_replacement(pool, p):
        if frozenset().union(*map(frozenset, parts)) == frozenset(full):
            out.append(SubsetTuple(m, parts))
    return out


@dataclass
class Theorem1Report:
    name: str
    level: int
    variant: str
    include_unary: bool
    lhs: Subspan
    rhs: Subspan
    verdict: str
    lengths: list[int]
    omitted_lengths: list[int] = field(default_factory=list)
    hypothesis: bool | None = None

    @property
    def truncated(self) -> bool:
        return bool(self.omitted_lengths)

    def summary(self) -> str:
        line = f"{self.name} m={self.level}: dim lhs {len(self.lhs.generators())}, dim rhs {len(self.rhs.generators())}, {self.verdict}"
        if self.truncated:
            line += f" (truncated: lengths {self.omitted_lengths} omitted)"
        if self.hypothesis is not None:
            line += f", degeneracy generation {'holds' if self.hypothesis else 'fails'}"
        return line


def boundary_image(A: SimplicialOperadAlgebra, m: int) -> np.ndarray:
    """d_m(N_m A) inside A_{m-1}."""
    N = moore_subspace(A, m)
    return span_basis((N @ A.face(m, m)) % A.q, A.q, A.rank(m - 1))


def rhs_span(
    A: SimplicialOperadAlgebra,
    m: int,
    variant: str = "proper",
    include_unary: bool = False,
    max_length: int | None = None,
) -> tuple[np.ndarray, list[int], list[int]]:
    """Σ over covering tuples of span γ(O(p); K_{I_1}, ..., K_{I_p}) at level m-1.

    Returns the span, the tuple lengths used and the lengths left out by the
    arity truncation.
    """
    n = m - 1
    r = A.rank(n)
    wanted = list(range(1 if include_unary else 2, (max_length or m) + 1))
    used = [p for p in wanted if p <= A.operad.max_arity]
    omitted = [p for p in wanted if p > A.operad.max_arity]
    kernels = {I: kernel_of_faces(A, n, I) for I in subsets(m) if I}
    rows = [np.zeros((0, r), dtype=np.int64)]
    for p in used:
        for T in covering_multisets(m, p, variant):
            rows.append(A.operation_span(n, p, [kernels[I] for I in T.parts]))
    return span_basis(np.vstack(rows), A.q, r), used, omitted


def theorem1_sides(
    A: SimplicialOperadAlgebra,
    m: int,
    variant: str = "proper",
    include_unary: bool = False,
    max_length: int | None = None,
    check_hypothesis: bool = True,
) -> Theorem1Report:
    """Compare d_m(N_m A) with the sum of operations on face kernels at level m-1."""
    if not 2 <= m <= A.top:
        raise ValueError("need 2 <= m <= top")
    lhs = boundary_image(A, m)
    rhs, used, omitted = rhs_span(A, m, variant, include_unary, max_length)
    verdict = compare_spans(lhs, rhs, A.q)
    if omitted:
        verdict = "truncated"
    hyp = degeneracy_generation_check(A, m) if check_hypothesis else None
    return Theorem1Report(
        A.name, m, variant, include_unary, to_subspan(A, m - 1, lhs), to_subspan(A, m - 1, rhs), verdict, used, omitted, hyp
    )


def comm_collapse_rhs(A: SimplicialOperadAlgebra, m: int) -> Subspan:
    """Σ K_{I'}·K_{I''} over pairs of nonempty proper subsets with I' ∪ I'' = {0..m-1}."""
    if not A.operad.name.startswith("Comm"):
        raise ValueError("the quadratic collapse needs the commutative operad")
    n = m - 1
    r = A.rank(n)
    full = frozenset(range(m))
    proper = [I for I in subsets(m) if I and len(I) < m]
    rows = [np.zeros((0, r), dtype=np.int64)]
    for I, J in product(proper, repeat=2):
        if frozenset(I) | frozenset(J) == full:
            rows.append(A.products(n, kernel_of_faces(A, n, I), kernel_of_faces(A, n, J)))
    return to_subspan(A, n, span_basis(np.vstack(rows), A.q, r))


# ---------------------------------------------------------------- ψ and the pairing lift


def in_moore(A: SimplicialOperadAlgebra, n: int, a, skip: int | None = None) -> bool:
    """Whether d_i a = 0 for i < n (or, with ``skip``, for every i ≠ skip)."""
    faces = range(n) if skip is None else [i for i in range(n + 1) if i != skip]
    return all(not np.any(A.d(n, i, a)) for i in faces)


def psi_map(A: SimplicialOperadAlgebra, n: int, r: int, a, direction: str = "forward") -> np.ndarray:
    """Bijection from N_n A onto ∩_{i≠r} ker d_i.

    Forward: ψ(a) = a − Σ_{k=0}^{n-r-1} (−1)^{n-r-1-k} s_{r+k} d_n a.  The
    alternating signs make the contributions of s_{i-1} and s_i to d_i cancel
    for r < i < n.  Inverse: a = y − Σ_k (−1)^k s_{r+k} d_r y.  Both directions
    check their input and output subspaces.
    """
    if not 0 <= r <= n <= A.top or n < 1:
        raise ValueError("need 0 <= r <= n <= top and n >= 1")
    a = np.asarray(a, dtype=np.int64) % A.q
    if direction == "forward":
        if not in_moore(A, n, a):
            raise ValueError("input is not in the Moore subspace")
        source = A.d(n, n, a)
        signs = [(-1) ** (n - r - 1 - k) for k in range(n - r)]
    elif direction == "inverse":
        if not in_moore(A, n, a, skip=r):
            raise ValueError("input is not killed by every face other than d_r")
        source = A.d(n, r, a)
        signs = [(-1) ** k for k in range(n - r)]
    else:
        raise ValueError("direction must be 'forward' or 'inverse'")
    out = a.copy()
    for k, sign in enumerate(signs):
        out = (out - sign * A.s(n - 1, r + k, source)) % A.q
    ok = in_moore(A, n, out, skip=r) if direction == "forward" else in_moore(A, n, out)
    if not ok:
        raise RuntimeError(f"ψ {direction} left the expected subspace")
    return out


@dataclass
class Lift:
    """A level-m element x killed by every face but d_r, with d_r x the target."""

    x: np.ndarray
    r: int
    slot: int
    target: np.ndarray
    moore_preimage: np.ndarray
    verified: bool


def admissible_choices(Is: SubsetTuple) -> list[tuple[int, int]]:
    """Pairs (r, i0) with r ∈ I_{i0} and r-1 ∈ I_i for some other slot i."""
    out = []
    for r in range(1, Is.ambient):
        for i0, part in enumerate(Is.parts):
            if r in part and any(r - 1 in other for i, other in enumerate(Is.parts) if i != i0):
                out.append((r, i0))
    return out


def pairing_lift(A: SimplicialOperadAlgebra, o: Sequence[int], xs: Sequence, Is: SubsetTuple) -> Lift:
    """Lift γ(o; x_1, ..., x_p), with x_i ∈ K_{I_i} at level m-1, to d_m of a Moore element.

    Tries every admissible (r, i0) in order and returns the first whose
    certificate checks: x = γ(o; s_r x_i for i ≠ i0, s_{r-1} x_{i0}) has
    d_j x = 0 for j ≠ r and d_r x = γ(o; x_1, ..., x_p).
    """
    m = Is.ambient
    n = m - 1
    if not 1 <= m <= A.top:
        raise ValueError("levels out of range")
    if not Is.covering:
        raise ValueError("the parts must cover {0..m-1}")
    xs = [np.asarray(x, dtype=np.int64) % A.q for x in xs]
    for x, I in zip(xs, Is.parts):
        if any(np.any(A.d(n, i, x)) for i in I):
            raise ValueError(f"an input is not in the kernel of the faces {I}")
    target = A.act(n, o, xs)
    choices = admissible_choices(Is)
    if not choices:
        raise ValueError("no admissible (r, i0): the tuple needs at least two nonempty parts")
    for r, i0 in choices:
        lifted = [A.s(n, r - 1 if i == i0 else r, x) for i, x in enumerate(xs)]
        x = A.act(m, o, lifted)
        if in_moore(A, m, x, skip=r) and np.array_equal(A.d(m, r, x), target):
            # d_m ψ⁻¹(x) = (−1)^{m−r} d_r x, so the sign fixes the boundary
            a = ((-1) ** (m - r) * psi_map(A, m, r, x, "inverse")) % A.q
            verified = in_moore(A, m, a) and np.array_equal(A.d(m, m, a), target)
            return Lift(x, r, i0, target, a, verified)
    raise RuntimeError(f"no admissible choice certified for {Is.parts}")


def rhs_generators(A: SimplicialOperadAlgebra, m: int, variant: str = "proper"):
    """Every spanning generator γ(e_b; k_1, ..., k_p) of the right-hand side.

    Yields (basis index b, tuple, inputs) with each k_i a basis vector of K_{I_i}.
    """
    n = m - 1
    kernels = {I: kernel_of_faces(A, n, I) for I in subsets(m) if I}
    for p in range(2, min(m, A.operad.max_arity) + 1):
        for T in covering_multisets(m, p, variant):
            for b in range(A.operad.dims[p]):
                o = A.operad.basis(p, b)
                for xs in product(*[kernels[I] for I in T.parts]):
                    yield o, T, list(xs)


@dataclass
class LiftTally:
    generators: int = 0
    certified: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return 1.0 if self.generators == 0 else self.certified / self.generators


def lift_all(A: SimplicialOperadAlgebra, m: int, variant: str = "proper") -> LiftTally:
    tally = LiftTally()
    for o, T, xs in rhs_generators(A, m, variant):
        tally.generators += 1
        try:
            lift = pairing_lift(A, o, xs, T)
        except (RuntimeError, ValueError) as exc:
            tally.failures.append(f"{T.parts}: {exc}")
            continue
        if lift.verified:
            tally.certified += 1
        else:
            tally.failures.append(f"{T.parts}: Moore preimage did not verify")
    return tally


# ---------------------------------------------------------------- formal boundary of decorated terms


@dataclass(frozen=True)
class Factor:
    """a ⊗ x with a ∈ C_i (coordinates) and x an exterior element of degree i."""

    degree: int
    coords: tuple[int, ...]
    exterior: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def pure(cls, degree: int, coords: Sequence[int], support: Sequence[int]) -> "Factor":
        return cls(degree, tuple(coords), ((tuple(support), 1),))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(j for J, _ in self.exterior for j in J)

    def is_zero(self) -> bool:
        return not any(self.coords) or not self.exterior


@dataclass(frozen=True)
class FMSummand:
    choices: tuple[str, ...]  # "d" keeps a and moves x; "delta" differentiates both
    operation: tuple[int, ...]
    factors: tuple[Factor, ...]
    decoration: SubsetTuple


def _reduced(x: dict, ring: Ring) -> tuple:
    return tuple(sorted((J, ring.scalar(c)) for J, c in x.items() if ring.scalar(c)))


def fm_differential(
    C: ChainComplex, m: int, operation: Sequence[int], factors: Sequence[Factor]
) -> list[FMSummand]:
    """Expand d_m of o ⊗ (a_1⊗x_1) ⊗ ... ⊗ (a_p⊗x_p) over all 2^p slot choices.

    Each slot either keeps a_i and applies the face to x_i, or replaces a_i by
    its boundary and x_i by the derivation δ of the face.  Summands in which
    some slot vanishes are dropped; every other summand is kept, including
    the one where every slot takes the face.
    """
    alpha = coface(m, m)
    ring = C.ring
    slots = []
    for f in factors:
        x = dict(f.exterior)
        moved = Factor(f.degree, f.coords, _reduced(lambda_action(alpha, x), ring))
        if f.degree >= 1:
            D = C.boundary(f.degree).matrix
            da = ring.reduce([sum(c * D[b][t] for b, c in enumerate(f.coords)) for t in range(C.module(f.degree - 1).rank)])
            derived = Factor(f.degree - 1, tuple(da), _reduced(delta_derivation(alpha, x), ring))
        else:
            derived = None
        slots.append((moved, derived))
    out = []
    for choice in product(("d", "delta"), repeat=len(factors)):
        picked = [s[0] if c == "d" else s[1] for s, c in zip(slots, choice)]
        if any(f is None or f.is_zero() for f in picked):
            continue
        deco = SubsetTuple(m - 1, tuple(tuple(sorted(f.support)) for f in picked))
        out.append(FMSummand(choice, tuple(operation), tuple(picked), deco))
    return out


def factor_vector(A: SimplicialOperadAlgebra, n: int, f: Factor) -> np.ndarray:
    """The element a ⊗ x of K(C)_n, as a degree-one vector of the symmetric algebra."""
    if A.kfunctor is None or A.monomials is None:
        raise ValueError("factor evaluation needs a symmetric example")
    v = A.kfunctor.element(n, [(f.degree, list(f.coords), dict(f.exterior))])
    out = np.zeros(A.rank(n), dtype=np.int64)
    index = {mono: i for i, mono in enumerate(A.monomials[n])}
    for k, c in enumerate(v):
        if c:
            out[index[(k,)]] = c
    return out % A.q


def fm_term_value(A: SimplicialOperadAlgebra, n: int, operation: Sequence[int], factors: Sequence[Factor]) -> np.ndarray:
    return A.act(n, operation, [factor_vector(A, n, f) for f in factors])


def fm_evaluate(A: SimplicialOperadAlgebra, m: int, summands: Sequence[FMSummand]) -> np.ndarray:
    out = np.zeros(A.rank(m - 1), dtype=np.int64)
    for t in summands:
        out = (out + fm_term_value(A, m - 1, t.operation, t.factors)) % A.q
    return out


def random_decorated_term(C: ChainComplex, m: int, p: int, rng) -> list[Factor]:
    """p pure factors a ⊗ φ_J with random chain elements and supports."""
    out = []
    degrees = [i for i in range(min(m, C.top) + 1) if C.module(i).rank]
    for _ in range(p):
        i = rng.choice(degrees)
        coords = [rng.randrange(C.ring.modulus or 5) for _ in range(C.module(i).rank)]
        J = sorted(rng.sample(range(m), i))
        out.append(Factor.pure(i, coords, J))
    return out
