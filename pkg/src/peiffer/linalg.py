"""Exact row-echelon arithmetic over Z (Hermite normal form) and Z/p (RREF).

All matrices are lists of integer rows and act on row vectors.  Callers
pick the backend by passing ``prime=None`` (integers) or a prime.
"""

from __future__ import annotations

from typing import Sequence

Row = list[int]


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _copy(rows: Sequence[Sequence[int]]) -> list[Row]:
    return [[int(x) for x in r] for r in rows]


def _identity(n: int) -> list[Row]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def hnf_with_transform(
    rows: Sequence[Sequence[int]], ncols: int
) -> tuple[list[Row], list[Row], int]:
    """Row-style Hermite normal form over Z.

    Returns ``(H, U, rank)`` with ``U`` unimodular, ``U @ A = H``, the first
    ``rank`` rows of ``H`` in echelon form with positive pivots and entries
    above each pivot reduced into ``[0, pivot)``, and the remaining rows zero.
    The rows ``U[rank:]`` form a basis of the left kernel of ``A``.
    """
    H = _copy(rows)
    m = len(H)
    U = _identity(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if H[i][c] != 0]
            if not nonzero:
                break
            k = min(nonzero, key=lambda i: abs(H[i][c]))
            if k != r:
                H[r], H[k] = H[k], H[r]
                U[r], U[k] = U[k], U[r]
            pivot = H[r][c]
            clean = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // pivot
                    if q:
                        H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                        U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        pivot = H[r][c]
        for i in range(r):
            q = H[i][c] // pivot
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U, r


def rref_with_transform(
    rows: Sequence[Sequence[int]], ncols: int, p: int
) -> tuple[list[Row], list[Row], int]:
    """Reduced row echelon form over Z/p, same contract as the HNF variant."""
    H = [[x % p for x in row] for row in rows]
    m = len(H)
    U = _identity(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        k = next((i for i in range(r, m) if H[i][c] % p), None)
        if k is None:
            continue
        if k != r:
            H[r], H[k] = H[k], H[r]
            U[r], U[k] = U[k], U[r]
        inv = pow(H[r][c], -1, p)
        H[r] = [(a * inv) % p for a in H[r]]
        U[r] = [(a * inv) % p for a in U[r]]
        for i in range(m):
            if i != r and H[i][c]:
                f = H[i][c]
                H[i] = [(a - f * b) % p for a, b in zip(H[i], H[r])]
                U[i] = [(a - f * b) % p for a, b in zip(U[i], U[r])]
        r += 1
    return H, U, r


def echelon_with_transform(
    rows: Sequence[Sequence[int]], ncols: int, prime: int | None
) -> tuple[list[Row], list[Row], int]:
    if prime is None:
        return hnf_with_transform(rows, ncols)
    return rref_with_transform(rows, ncols, prime)


def echelon(rows: Sequence[Sequence[int]], ncols: int, prime: int | None) -> list[Row]:
    """Canonical nonzero echelon rows of the row span."""
    H, _, r = echelon_with_transform(rows, ncols, prime)
    return H[:r]


def pivot_columns(H: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for row in H:
        out.append(next(j for j, x in enumerate(row) if x))
    return out


def left_kernel(
    rows: Sequence[Sequence[int]], ncols: int, prime: int | None
) -> list[Row]:
    """A basis of {y : y @ rows = 0} (over Z or Z/p)."""
    if not rows:
        return []
    _, U, r = echelon_with_transform(rows, ncols, prime)
    return U[r:]


def reduce_by_echelon(
    H: Sequence[Sequence[int]], v: Sequence[int], prime: int | None
) -> tuple[list[int], list[int]]:
    """Divide ``v`` by echelon rows ``H``.

    Returns ``(coeffs, remainder)`` with ``v = coeffs @ H + remainder``.  The
    remainder is zero exactly when ``v`` lies in the row span.
    """
    residual = [int(x) for x in v]
    if prime is not None:
        residual = [x % prime for x in residual]
    coeffs = []
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        piv = row[c]
        if prime is None:
            q = residual[c] // piv
            if residual[c] - q * piv != 0:
                # Cannot clear this entry; a later row cannot either.
                coeffs.append(0)
                continue
        else:
            q = (residual[c] * pow(piv, -1, prime)) % prime
        coeffs.append(q)
        if q:
            residual = [a - q * b for a, b in zip(residual, row)]
            if prime is not None:
                residual = [a % prime for a in residual]
    return coeffs, residual


def solve_left(
    rows: Sequence[Sequence[int]], v: Sequence[int], ncols: int, prime: int | None
) -> list[int] | None:
    """Some ``x`` with ``x @ rows = v``, or ``None`` when no solution exists."""
    if not rows:
        return [] if all((x % prime if prime else x) == 0 for x in v) else None
    H, U, r = echelon_with_transform(rows, ncols, prime)
    coeffs, residual = reduce_by_echelon(H[:r], v, prime)
    if any(residual):
        return None
    x = [0] * len(rows)
    for c, urow in zip(coeffs, U[:r]):
        if c:
            x = [a + c * b for a, b in zip(x, urow)]
    if prime is not None:
        x = [a % prime for a in x]
    return x


def matmul(
    A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int, modulus: int = 0
) -> list[Row]:
    """Plain exact matrix product, reduced mod ``modulus`` when nonzero."""
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        new = [0] * ncols
        for k, a in nz:
            brow = B[k]
            for j in range(ncols):
                if brow[j]:
                    new[j] += a * brow[j]
        if modulus:
            new = [x % modulus for x in new]
        out.append(new)
    return out


def vecmat(v: Sequence[int], B: Sequence[Sequence[int]], ncols: int, modulus: int = 0) -> list[int]:
    out = [0] * ncols
    for k, a in enumerate(v):
        if a:
            brow = B[k]
            for j in range(ncols):
                if brow[j]:
                    out[j] += a * brow[j]
    if modulus:
        out = [x % modulus for x in out]
    return out


def canonical_residue(H: Sequence[Sequence[int]], v: Sequence[int], prime: int | None) -> list[int]:
    """Canonical representative of ``v`` modulo the lattice with echelon rows ``H``.

    For the integer backend every pivot entry is reduced into ``[0, pivot)``,
    which is a normal form when ``H`` is in Hermite form.
    """
    residual = [int(x) for x in v]
    if prime is not None:
        residual = [x % prime for x in residual]
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        piv = row[c]
        if prime is None:
            q = residual[c] // piv
        else:
            q = (residual[c] * pow(piv, -1, prime)) % prime
        if q:
            residual = [a - q * b for a, b in zip(residual, row)]
            if prime is not None:
                residual = [a % prime for a in residual]
    return residual
