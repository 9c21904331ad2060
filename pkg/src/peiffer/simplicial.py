"""Combinatorics of finite ordinals: maps [m] -> [n], canonical face and
degeneracy composites, subset orders and covering tuples."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence


@dataclass(frozen=True)
class SimplicialMap:
    """A set map [m] -> [n] stored as its value table.

    ``monotone`` marks morphisms of the simplex category; general finite
    maps carry ``monotone=False``.
    """

    source_dim: int
    target_dim: int
    values: tuple[int, ...]
    monotone: bool = True

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if self.source_dim < 0 or self.target_dim < 0:
            raise ValueError("dimensions must be non-negative")
        if len(values) != self.source_dim + 1:
            raise ValueError(
                f"value table has length {len(values)}, expected {self.source_dim + 1}"
            )
        if any(v < 0 or v > self.target_dim for v in values):
            raise ValueError(f"values {values} leave [0, {self.target_dim}]")
        if self.monotone and any(a > b for a, b in zip(values, values[1:])):
            raise ValueError(f"values {values} are not weakly increasing")

    def __call__(self, i: int) -> int:
        return self.values[i]

    @property
    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def __repr__(self) -> str:
        kind = "Δ" if self.monotone else "Fin"
        return f"{kind}[{self.source_dim}->{self.target_dim}]{self.values}"


def identity(n: int) -> SimplicialMap:
    return SimplicialMap(n, n, tuple(range(n + 1)))


def coface(n: int, i: int) -> SimplicialMap:
    """The injection [n-1] -> [n] skipping ``i`` (underlies the face d_i)."""
    if not 0 <= i <= n or n < 1:
        raise ValueError(f"coface index {i} out of range for target {n}")
    return SimplicialMap(n - 1, n, tuple(k if k < i else k + 1 for k in range(n)))


def codegeneracy(n: int, i: int) -> SimplicialMap:
    """The surjection [n+1] -> [n] hitting ``i`` twice (underlies s_i)."""
    if not 0 <= i <= n:
        raise ValueError(f"codegeneracy index {i} out of range for target {n}")
    return SimplicialMap(n + 1, n, tuple(k if k <= i else k - 1 for k in range(n + 2)))


def compose(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """The composite ``g ∘ f`` (first f, then g), evaluated pointwise."""
    if f.target_dim != g.source_dim:
        raise ValueError(
            f"cannot compose: target of f is [{f.target_dim}], source of g is [{g.source_dim}]"
        )
    return SimplicialMap(
        f.source_dim,
        g.target_dim,
        tuple(g.values[v] for v in f.values),
        f.monotone and g.monotone,
    )


def all_maps(m: int, n: int, monotone: bool = False) -> Iterator[SimplicialMap]:
    """Every map [m] -> [n]; only the monotone ones when requested."""
    for values in product(range(n + 1), repeat=m + 1):
        is_mono = all(a <= b for a, b in zip(values, values[1:]))
        if monotone and not is_mono:
            continue
        yield SimplicialMap(m, n, values, monotone=is_mono if monotone else False)


def factor_map(alpha: SimplicialMap) -> list[SimplicialMap]:
    """Codegeneracies then cofaces whose composite (first to last) is ``alpha``."""
    if not alpha.is_monotone:
        raise ValueError("only monotone maps factor through faces and degeneracies")
    vals = list(alpha.values)
    chain: list[SimplicialMap] = []
    m = alpha.source_dim
    # surjective part: merge equal neighbours from the right
    while True:
        j = next((k for k in range(len(vals) - 2, -1, -1) if vals[k] == vals[k + 1]), None)
        if j is None:
            break
        chain.append(codegeneracy(m - 1, j))
        del vals[j + 1]
        m -= 1
    # injective part: peel off missing targets, largest first
    tail: list[SimplicialMap] = []
    n = alpha.target_dim
    while len(vals) < n + 1:
        i = max(set(range(n + 1)) - set(vals))
        tail.append(coface(n, i))
        vals = [v if v < i else v - 1 for v in vals]
        n -= 1
    return chain + list(reversed(tail))


def _check_subset(members: Sequence[int]) -> tuple[int, ...]:
    members = tuple(int(x) for x in members)
    if any(a >= b for a, b in zip(members, members[1:])):
        raise ValueError(f"subset {members} is not strictly increasing")
    if members and members[0] < 0:
        raise ValueError("subset members must be non-negative")
    return members


def canonical_composite(members: Sequence[int], kind: str, level: int) -> SimplicialMap:
    """The simplicial map realising ``s_I`` or ``d_I`` for I = members.

    For ``kind="degeneracy"`` the operator s_I = s_{i_r} ... s_{i_1} starts at
    ``level`` and lands at ``level + |I|``; the underlying map goes
    [level + |I|] -> [level].  For ``kind="face"`` the operator
    d_I = d_{i_1} ... d_{i_r} starts at ``level`` and lands at
    ``level - |I|``; the underlying map goes [level - |I|] -> [level].
    """
    members = _check_subset(members)
    r = len(members)
    if kind == "degeneracy":
        top = level + r
        if members and members[-1] > top - 1:
            raise ValueError(f"degeneracy indices {members} exceed level {top - 1}")
        result = identity(level)
        # s_{i_1} is applied first, so its codegeneracy is the last map in
        # the composite [top] -> ... -> [level].
        current = level
        for i in members:
            if i > current:
                raise ValueError(f"s_{i} is undefined at level {current}")
            result = compose(codegeneracy(current, i), result)
            current += 1
        return result
    if kind == "face":
        if r > level:
            raise ValueError("too many faces for the level")
        result = identity(level)
        current = level
        # d_{i_r} is applied first.
        for i in reversed(members):
            if i > current:
                raise ValueError(f"d_{i} is undefined at level {current}")
            result = compose(coface(current, i), result)
            current -= 1
        return result
    raise ValueError(f"unknown kind {kind!r}")


def normalize_degeneracies(applied: Sequence[int]) -> tuple[int, ...]:
    """Rewrite a degeneracy word into canonical increasing form.

    ``applied`` lists indices in application order, so ``[a, b]`` means
    ``s_b s_a``.  Uses s_i s_j = s_{j+1} s_i for i <= j.
    """
    word = [int(x) for x in applied]
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            first, second = word[k], word[k + 1]
            if second <= first:
                word[k], word[k + 1] = second, first + 1
                changed = True
    return tuple(word)


def normalize_faces(applied: Sequence[int]) -> tuple[int, ...]:
    """Rewrite a face word into the members of canonical d_I.

    ``applied`` lists indices in application order.  Canonical form has
    application order strictly decreasing, using d_b d_a = d_a d_{b+1}
    for a <= b.  The result is returned as the increasing member tuple I.
    """
    word = [int(x) for x in applied]
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            first, second = word[k], word[k + 1]
            if second >= first:
                word[k], word[k + 1] = second + 1, first
                changed = True
    return tuple(reversed(word))


def subsets(n: int) -> list[tuple[int, ...]]:
    """All subsets of {0, ..., n-1}, by size then lexicographically."""
    return [c for k in range(n + 1) for c in combinations(range(n), k)]


def product_order(n: int) -> list[tuple[int, ...]]:
    """Factor order of the ordered products over subsets of {0, ..., n-1}.

    Defined recursively to match the Moore decomposition: the subsets
    containing 0 (built from the order one level down, shifted) come
    first, followed by the subsets avoiding 0 (shifted order of n-1).
    """
    if n == 0:
        return [()]
    lower = product_order(n - 1)
    with_zero = [(0,) + tuple(i + 1 for i in I) for I in lower]
    without_zero = [tuple(i + 1 for i in I) for I in lower]
    return with_zero + without_zero


@dataclass(frozen=True)
class SubsetTuple:
    ambient: int
    parts: tuple[tuple[int, ...], ...]

    @property
    def union(self) -> frozenset[int]:
        return frozenset().union(*map(frozenset, self.parts)) if self.parts else frozenset()

    @property
    def covering(self) -> bool:
        return self.union == frozenset(range(self.ambient))


def covering_tuples(
    m: int, p: int, allow_empty: bool = False, proper: bool = False
) -> list[SubsetTuple]:
    """All p-tuples of subsets of {0, ..., m-1} whose union is everything.

    ``allow_empty=False`` drops tuples with an empty part; ``proper=True``
    additionally drops tuples containing the full set as a part.
    """
    full = tuple(range(m))
    pool = subsets(m)
    if not allow_empty:
        pool = [s for s in pool if s]
    if proper:
        pool = [s for s in pool if s != full]
    target = frozenset(full)
    out = []
    for parts in product(pool, repeat=p):
        union = frozenset().union(*map(frozenset, parts)) if parts else frozenset()
        if union == target:
            out.append(SubsetTuple(m, tuple(parts)))
    return out
