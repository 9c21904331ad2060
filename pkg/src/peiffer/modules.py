"""Finitely generated modules over Z and Z/q with canonical submodule
arithmetic, chain complexes, simplicial modules and the Moore complex."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .simplicial import normalize_degeneracies


class ValidationError(ValueError):
    """Raised when an input object fails its structural invariants."""

    def __init__(self, violation: "Violation"):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class Violation:
    """A named failing identity with its level and indices."""

    identity: str
    level: int
    indices: tuple[int, ...] = ()
    detail: str = ""

    def __str__(self) -> str:
        idx = ",".join(map(str, self.indices))
        msg = f"{self.identity} fails at level {self.level}"
        if idx:
            msg += f" for indices ({idx})"
        if self.detail:
            msg += f": {self.detail}"
        return msg


@dataclass(frozen=True)
class Ring:
    """Z (``modulus == 0``) or Z/q."""

    modulus: int = 0

    def __post_init__(self) -> None:
        if self.modulus == 1 or self.modulus < 0:
            raise ValueError("modulus must be 0 (integers) or at least 2")

    @classmethod
    def integers(cls) -> "Ring":
        return cls(0)

    @classmethod
    def mod(cls, q: int) -> "Ring":
        return cls(q)

    @cached_property
    def prime(self) -> int | None:
        """The prime used by the field backend, or None for the HNF backend."""
        return self.modulus if linalg.is_prime(self.modulus) else None

    @property
    def is_field(self) -> bool:
        return self.prime is not None

    def reduce(self, v: Iterable[int]) -> list[int]:
        if self.modulus:
            return [int(x) % self.modulus for x in v]
        return [int(x) for x in v]

    def scalar(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def __str__(self) -> str:
        return f"Z/{self.modulus}" if self.modulus else "Z"

    def to_json(self):
        return {"mod": self.modulus} if self.modulus else "Z"

    @classmethod
    def from_json(cls, data) -> "Ring":
        if data == "Z":
            return cls(0)
        if isinstance(data, dict) and "mod" in data:
            return cls(int(data["mod"]))
        raise ValueError(f"unrecognised ring {data!r}")


def _lattice_rows(ring: Ring, rank: int, rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Canonical echelon rows of ``rows`` plus the ring's torsion rows."""
    rows = [ring.reduce(r) for r in rows]
    if ring.modulus and ring.prime is None:
        rows = rows + [[ring.modulus if i == j else 0 for j in range(rank)] for i in range(rank)]
    H = linalg.echelon(rows, rank, ring.prime)
    return tuple(tuple(r) for r in H)


class ExactModule:
    """The module R^rank / (relations) over a ring R = Z or Z/q."""

    __slots__ = ("ring", "rank", "relations", "__dict__")

    def __init__(self, ring: Ring, rank: int, relations: Sequence[Sequence[int]] = ()):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        for r in relations:
            if len(r) != rank:
                raise ValueError("relation row has the wrong length")
        self.ring = ring
        self.rank = rank
        self.relations = _lattice_rows(ring, rank, relations)

    @classmethod
    def free(cls, ring: Ring, rank: int) -> "ExactModule":
        return cls(ring, rank)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactModule)
            and self.ring == other.ring
            and self.rank == other.rank
            and self.relations == other.relations
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.rank, self.relations))

    def __repr__(self) -> str:
        rel = f", {len(self.relations)} relation rows" if self.relations else ""
        return f"ExactModule({self.ring}^{self.rank}{rel})"

    @property
    def prime(self) -> int | None:
        return self.ring.prime

    def zero(self) -> list[int]:
        return [0] * self.rank

    def basis_vector(self, i: int) -> list[int]:
        v = [0] * self.rank
        v[i] = 1
        return v

    def normalize(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical coset representative of ``v``."""
        return tuple(linalg.canonical_residue(self.relations, self.ring.reduce(v), self.prime))

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.normalize(v))

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(u, v)])

    def add(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        return self.ring.reduce(a + b for a, b in zip(u, v))

    def sub(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        return self.ring.reduce(a - b for a, b in zip(u, v))

    def scale(self, c: int, v: Sequence[int]) -> list[int]:
        return self.ring.reduce(c * a for a in v)

    def is_free(self) -> bool:
        return self.relations == _lattice_rows(self.ring, self.rank, [])

    def order(self) -> int | None:
        """Number of elements, or None when infinite."""
        if self.ring.modulus == 0:
            if len(self.relations) < self.rank:
                return None
            out = 1
            for row in self.relations:
                out *= next(x for x in row if x)
            return out
        if self.prime is not None:
            return self.prime ** (self.rank - len(self.relations))
        out = 1
        for row in self.relations:
            out *= next(x for x in row if x)
        return out

    def to_json(self):
        if not self.relations or self.is_free():
            return self.rank
        return {"rank": self.rank, "relations": [list(r) for r in self.relations]}

    @classmethod
    def from_json(cls, ring: Ring, data) -> "ExactModule":
        if isinstance(data, int):
            return cls(ring, data)
        return cls(ring, int(data["rank"]), data.get("relations", []))


class Subspan:
    """A submodule of an :class:`ExactModule`, stored as canonical echelon rows.

    The rows always include the relation lattice, so two subspans are equal
    exactly when their row tuples agree.
    """

    __slots__ = ("module", "rows")

    def __init__(self, module: ExactModule, rows: Sequence[Sequence[int]] = ()):
        for r in rows:
            if len(r) != module.rank:
                raise ValueError("generator row has the wrong length")
        self.module = module
        self.rows = _lattice_rows(module.ring, module.rank, list(rows) + list(module.relations))

    @classmethod
    def zero(cls, module: ExactModule) -> "Subspan":
        return cls(module, ())

    @classmethod
    def full(cls, module: ExactModule) -> "Subspan":
        return cls(module, [module.basis_vector(i) for i in range(module.rank)])

    def _check(self, other: "Subspan") -> None:
        if self.module != other.module:
            raise ValueError("subspans live in different ambient modules")

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspan) and self.module == other.module and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.module, self.rows))

    def __repr__(self) -> str:
        return f"Subspan(dim/index {self.describe()} in {self.module!r})"

    def __add__(self, other: "Subspan") -> "Subspan":
        self._check(other)
        return Subspan(self.module, list(self.rows) + list(other.rows))

    def contains(self, v: Sequence[int]) -> bool:
        _, residual = linalg.reduce_by_echelon(self.rows, self.module.ring.reduce(v), self.module.prime)
        return not any(residual)

    def __le__(self, other: "Subspan") -> bool:
        self._check(other)
        return all(other.contains(r) for r in self.rows)

    def __ge__(self, other: "Subspan") -> bool:
        return other <= self

    def __lt__(self, other: "Subspan") -> bool:
        return self <= other and self != other

    def __gt__(self, other: "Subspan") -> bool:
        return other < self

    def __and__(self, other: "Subspan") -> "Subspan":
        return self.intersect(other)

    def intersect(self, other: "Subspan") -> "Subspan":
        self._check(other)
        S, T = list(self.rows), list(other.rows)
        if not S or not T:
            return Subspan.zero(self.module)
        ker = linalg.left_kernel(S + T, self.module.rank, self.module.prime)
        rows = [linalg.vecmat(y[: len(S)], S, self.module.rank) for y in ker]
        return Subspan(self.module, rows)

    def is_zero(self) -> bool:
        return self.rows == self.module.relations

    def is_full(self) -> bool:
        return self == Subspan.full(self.module)

    def generators(self) -> list[list[int]]:
        """Echelon rows not already lying in the relation lattice."""
        return [list(r) for r in self.rows if not self.module.is_zero(r)]

    def quotient_size(self) -> int | None:
        """|S / relations|, or None when infinite."""
        mod = self.module
        if mod.ring.modulus == 0:
            if len(self.rows) != len(mod.relations):
                return None
            num = 1
            for row in mod.relations:
                num *= next(x for x in row if x)
            den = 1
            for row in self.rows:
                den *= next(x for x in row if x)
            return num // den if den else None
        if mod.prime is not None:
            return mod.prime ** (len(self.rows) - len(mod.relations))
        num = 1
        for row in mod.relations:
            num *= next(x for x in row if x)
        den = 1
        for row in self.rows:
            den *= next(x for x in row if x)
        return num // den

    def describe(self) -> str:
        size = self.quotient_size()
        if size is None:
            return f"rank {len(self.rows) - len(self.module.relations)}"
        return f"order {size}"

    def coordinates_in(self, generators: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
        """Coefficients c with sum c_j g_j == v modulo the relations."""
        rel = [list(r) for r in self.module.relations]
        x = linalg.solve_left(
            [list(g) for g in generators] + rel, self.module.ring.reduce(v), self.module.rank, self.module.prime
        )
        if x is None:
            return None
        return self.module.ring.reduce(x[: len(generators)])

    def to_json(self):
        return [list(r) for r in self.generators()]


class ModuleMap:
    """A homomorphism given by a matrix whose rows are images of source basis vectors.

    Composition follows the row convention: ``f.then(g)`` has matrix ``F @ G``.
    """

    __slots__ = ("source", "target", "matrix", "__dict__")

    def __init__(self, source: ExactModule, target: ExactModule, matrix: Sequence[Sequence[int]], check: bool = True):
        rows = [target.ring.reduce(r) for r in matrix]
        if len(rows) != source.rank or any(len(r) != target.rank for r in rows):
            raise ValueError(
                f"matrix shape does not match {source.rank} -> {target.rank}"
            )
        self.source = source
        self.target = target
        self.matrix = tuple(tuple(r) for r in rows)
        if check and not self.is_well_defined():
            raise ValueError("map does not send source relations into target relations")

    def is_well_defined(self) -> bool:
        for rel in self.source.relations:
            if not self.target.is_zero(self.apply_raw(rel)):
                return False
        return True

    @classmethod
    def identity(cls, module: ExactModule) -> "ModuleMap":
        return cls(module, module, [module.basis_vector(i) for i in range(module.rank)], check=False)

    @classmethod
    def zero(cls, source: ExactModule, target: ExactModule) -> "ModuleMap":
        return cls(source, target, [[0] * target.rank for _ in range(source.rank)], check=False)

    def apply_raw(self, v: Sequence[int]) -> list[int]:
        return linalg.vecmat(v, self.matrix, self.target.rank, self.target.ring.modulus)

    def __call__(self, v: Sequence[int]) -> list[int]:
        return self.apply_raw(v)

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """First ``self``, then ``other``."""
        if self.target != other.source:
            raise ValueError("maps are not composable")
        return ModuleMap(
            self.source,
            other.target,
            linalg.matmul(self.matrix, other.matrix, other.target.rank, other.target.ring.modulus),
            check=False,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.target.equal(a, b) for a, b in zip(self.matrix, other.matrix))

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(
            self.source,
            self.target,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)],
            check=False,
        )

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [[-a for a in r] for r in self.matrix], check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(self.target.is_zero(r) for r in self.matrix)

    def image(self, span: Subspan | None = None) -> Subspan:
        rows = span.rows if span is not None else [self.source.basis_vector(i) for i in range(self.source.rank)]
        return Subspan(self.target, [self.apply_raw(r) for r in rows])

    def preimage(self, span: Subspan) -> Subspan:
        """{x : f(x) in span}."""
        if span.module != self.target:
            raise ValueError("span is not in the target module")
        F = [list(r) for r in self.matrix]
        T = [list(r) for r in span.rows]
        if not F:
            return Subspan.zero(self.source)
        ker = linalg.left_kernel(F + T, self.target.rank, self.target.prime)
        return Subspan(self.source, [y[: len(F)] for y in ker])

    def kernel(self) -> Subspan:
        return self.preimage(Subspan.zero(self.target))

    def to_json(self):
        return [list(r) for r in self.matrix]


def joint_kernel(maps: Sequence[ModuleMap]) -> Subspan:
    """Intersection of the kernels of maps sharing a source, in one solve."""
    if not maps:
        raise ValueError("need at least one map")
    source = maps[0].source
    if not all(m.source == source for m in maps):
        raise ValueError("maps must share a source")
    widths = [m.target.rank for m in maps]
    total = sum(widths)
    rows = []
    for i in range(source.rank):
        rows.append([x for m in maps for x in m.matrix[i]])
    offset = 0
    for m in maps:
        for rel in m.target.relations:
            row = [0] * total
            row[offset : offset + m.target.rank] = rel
            rows.append(row)
        offset += m.target.rank
    if source.rank == 0:
        return Subspan.zero(source)
    ker = linalg.left_kernel(rows, total, source.prime)
    return Subspan(source, [y[: source.rank] for y in ker])


@dataclass
class Presentation:
    """A subspan re-presented as a module of its own, with the inclusion map."""

    span: Subspan
    module: ExactModule
    generators: list[list[int]]
    inclusion: ModuleMap

    def coordinates(self, v: Sequence[int]) -> list[int]:
        c = self.span.coordinates_in(self.generators, v)
        if c is None:
            raise ValueError("vector does not lie in the presented subspan")
        return c


def present(span: Subspan) -> Presentation:
    ambient = span.module
    gens = span.generators()
    free = ExactModule(ambient.ring, len(gens))
    cover = ModuleMap(free, ambient, gens, check=False)
    rel = cover.kernel()
    module = ExactModule(ambient.ring, len(gens), [list(r) for r in rel.rows])
    inclusion = ModuleMap(module, ambient, gens, check=False)
    return Presentation(span, module, [list(g) for g in gens], inclusion)


class ChainComplex:
    """C_0 <- C_1 <- ... <- C_N with ``boundary(i): C_i -> C_{i-1}``."""

    def __init__(self, ring: Ring, levels: Sequence[ExactModule], boundaries: Sequence[ModuleMap]):
        if len(boundaries) != max(len(levels) - 1, 0):
            raise ValueError("need one boundary per positive degree")
        for i, d in enumerate(boundaries, start=1):
            if d.source != levels[i] or d.target != levels[i - 1]:
                raise ValueError(f"boundary {i} has mismatched source/target")
        self.ring = ring
        self.levels = list(levels)
        self.boundaries = list(boundaries)

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def module(self, i: int) -> ExactModule:
        if 0 <= i <= self.top:
            return self.levels[i]
        return ExactModule(self.ring, 0)

    def boundary(self, i: int) -> ModuleMap:
        """d: C_i -> C_{i-1}; zero outside the stored range."""
        if 1 <= i <= self.top:
            return self.boundaries[i - 1]
        return ModuleMap.zero(self.module(i), self.module(i - 1))

    def validate(self) -> Violation | None:
        for i in range(2, self.top + 1):
            if not self.boundary(i).then(self.boundary(i - 1)).is_zero():
                return Violation("d∘d = 0", i, (i - 1, i), "boundary composite is nonzero")
        return None

    @classmethod
    def from_matrices(cls, ring: Ring, ranks: Sequence[int], matrices: Sequence[Sequence[Sequence[int]]]) -> "ChainComplex":
        levels = [ExactModule(ring, r) for r in ranks]
        bds = [ModuleMap(levels[i], levels[i - 1], matrices[i - 1]) for i in range(1, len(levels))]
        return cls(ring, levels, bds)

    def to_json(self) -> dict:
        return {
            "kind": "chain_complex",
            "ring": self.ring.to_json(),
            "levels": [m.to_json() for m in self.levels],
            "d": [d.to_json() for d in self.boundaries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChainComplex":
        ring = Ring.from_json(data["ring"])
        levels = [ExactModule.from_json(ring, x) for x in data["levels"]]
        bds = [ModuleMap(levels[i], levels[i - 1], m) for i, m in enumerate(data.get("d", []), start=1)]
        return cls(ring, levels, bds)


class SimplicialModule:
    """A simplicial module truncated at level ``top``.

    ``faces[n][i]`` is d_i: A_n -> A_{n-1} (for n >= 1) and ``degeneracies[n][i]``
    is s_i: A_n -> A_{n+1} (for n < top).
    """

    def __init__(
        self,
        ring: Ring,
        levels: Sequence[ExactModule],
        faces: Sequence[Sequence[ModuleMap]],
        degeneracies: Sequence[Sequence[ModuleMap]],
        labels: Sequence[Sequence[object]] | None = None,
    ):
        self.ring = ring
        self.levels = list(levels)
        self.faces = [list(f) for f in faces]
        self.degeneracies = [list(s) for s in degeneracies]
        self.labels = [list(x) for x in labels] if labels is not None else None
        top = self.top
        if len(self.faces) != top + 1 or self.faces[0]:
            raise ValueError("faces must be indexed by level with none at level 0")
        if len(self.degeneracies) != top:
            raise ValueError("degeneracies must be given for levels 0..top-1")
        for n in range(1, top + 1):
            if len(self.faces[n]) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} faces")
            for f in self.faces[n]:
                if f.source != self.levels[n] or f.target != self.levels[n - 1]:
                    raise ValueError(f"face at level {n} has wrong source/target")
        for n in range(top):
            if len(self.degeneracies[n]) != n + 1:
                raise ValueError(f"level {n} needs {n + 1} degeneracies")
            for s in self.degeneracies[n]:
                if s.source != self.levels[n] or s.target != self.levels[n + 1]:
                    raise ValueError(f"degeneracy at level {n} has wrong source/target")

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def d(self, n: int, i: int) -> ModuleMap:
        return self.faces[n][i]

    def s(self, n: int, i: int) -> ModuleMap:
        return self.degeneracies[n][i]

    def apply_degeneracies(self, level: int, members: Sequence[int], v: Sequence[int]) -> list[int]:
        """Evaluate s_I on ``v`` in level ``level`` (s_{i_1} applied first)."""
        out = list(v)
        n = level
        for i in members:
            out = self.s(n, i)(out)
            n += 1
        return out

    def apply_degeneracy_word(self, level: int, applied: Sequence[int], v: Sequence[int]) -> list[int]:
        return self.apply_degeneracies(level, normalize_degeneracies(applied), v)

    def validate(self) -> Violation | None:
        top = self.top
        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.d(n, j).then(self.d(n - 1, i))
                    rhs = self.d(n, i).then(self.d(n - 1, j - 1))
                    if lhs != rhs:
                        return Violation("d_i d_j = d_{j-1} d_i", n, (i, j))
        for n in range(top):
            for j in range(n + 1):
                s = self.s(n, j)
                for i in range(n + 2):
                    lhs = s.then(self.d(n + 1, i))
                    if i < j:
                        rhs = self.d(n, i).then(self.s(n - 1, j - 1))
                        name = "d_i s_j = s_{j-1} d_i"
                    elif i in (j, j + 1):
                        rhs = ModuleMap.identity(self.levels[n])
                        name = "d_j s_j = d_{j+1} s_j = id"
                    else:
                        rhs = self.d(n, i - 1).then(self.s(n - 1, j))
                        name = "d_i s_j = s_j d_{i-1}"
                    if lhs != rhs:
                        return Violation(name, n, (i, j))
        for n in range(top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = self.s(n, j).then(self.s(n + 1, i))
                    rhs = self.s(n, i).then(self.s(n + 1, j + 1))
                    if lhs != rhs:
                        return Violation("s_i s_j = s_{j+1} s_i", n, (i, j))
        return None

    def to_json(self) -> dict:
        return {
            "kind": "simplicial_module",
            "ring": self.ring.to_json(),
            "levels": [m.to_json() for m in self.levels],
            "maps": {
                "d": [[f.to_json() for f in self.faces[n]] for n in range(1, self.top + 1)],
                "s": [[s.to_json() for s in self.degeneracies[n]] for n in range(self.top)],
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialModule":
        ring = Ring.from_json(data["ring"])
        levels = [ExactModule.from_json(ring, x) for x in data["levels"]]
        dm = data["maps"]["d"]
        sm = data["maps"]["s"]
        faces = [[]] + [
            [ModuleMap(levels[n], levels[n - 1], m) for m in dm[n - 1]] for n in range(1, len(levels))
        ]
        degs = [[ModuleMap(levels[n], levels[n + 1], m) for m in sm[n]] for n in range(len(levels) - 1)]
        return cls(ring, levels, faces, degs)

    @classmethod
    def constant(cls, module: ExactModule, top: int) -> "SimplicialModule":
        ident = ModuleMap.identity(module)
        return cls(
            module.ring,
            [module] * (top + 1),
            [[]] + [[ident] * (n + 1) for n in range(1, top + 1)],
            [[ident] * (n + 1) for n in range(top)],
        )


@dataclass
class MooreComplex:
    """N A with the inclusions N_m -> A_m and the kernel subspans."""

    complex: ChainComplex
    presentations: list[Presentation] = field(default_factory=list)

    @property
    def kernels(self) -> list[Subspan]:
        return [p.span for p in self.presentations]

    @property
    def inclusions(self) -> list[ModuleMap]:
        return [p.inclusion for p in self.presentations]


def moore_kernel(A: SimplicialModule, m: int) -> Subspan:
    if m == 0:
        return Subspan.full(A.levels[0])
    return joint_kernel([A.d(m, i) for i in range(m)])


def moore_complex(A: SimplicialModule, check: bool = True) -> MooreComplex:
    if check:
        bad = A.validate()
        if bad is not None:
            raise ValidationError(bad)
    pres = [present(moore_kernel(A, m)) for m in range(A.top + 1)]
    bds = []
    for m in range(1, A.top + 1):
        rows = []
        for g in pres[m].generators:
            rows.append(pres[m - 1].coordinates(A.d(m, m)(g)))
        bds.append(ModuleMap(pres[m].module, pres[m - 1].module, rows))
    cx = ChainComplex(A.ring, [p.module for p in pres], bds)
    if check:
        bad = cx.validate()
        if bad is not None:
            raise ValidationError(bad)
    return MooreComplex(cx, pres)


def validate(obj: ChainComplex | SimplicialModule) -> Violation | None:
    """Return the first failing identity, or None when ``obj`` is valid."""
    return obj.validate()
