"""Linear algebra over GF(2) on bitmask-encoded vectors.

Vectors in a rank-n boolean space are Python ints whose bit i is coordinate i,
which coincides with the group index of the corresponding element tuple.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .groups import SizeLimitError


def echelon_basis(vectors: Iterable[int]) -> list[int]:
    """Row-echelon basis (one row per pivot bit, highest pivot first)."""
    rows: list[int] = []
    for v in vectors:
        for r in rows:
            v = min(v, v ^ r)
        if v:
            rows.append(v)
            rows.sort(reverse=True)
    return rows


def rank(vectors: Iterable[int]) -> int:
    return len(echelon_basis(vectors))


def reduce_vector(basis: Sequence[int], v: int) -> int:
    for r in basis:
        v = min(v, v ^ r)
    return v


def in_span(basis: Sequence[int], v: int) -> bool:
    return reduce_vector(basis, v) == 0


def independent_subset(vectors: Sequence[int]) -> list[int]:
    """Greedy subset of the input (in order) forming a basis of its span."""
    rows: list[int] = []
    picked: list[int] = []
    for v in vectors:
        w = v
        for r in rows:
            w = min(w, w ^ r)
        if w:
            rows.append(w)
            rows.sort(reverse=True)
            picked.append(v)
    return picked


def _rref(vectors: Iterable[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot bit positions)."""
    rows = echelon_basis(vectors)
    pivots = [r.bit_length() - 1 for r in rows]
    for i, r in enumerate(rows):
        for j, p in enumerate(pivots):
            if j != i and (r >> p) & 1:
                r ^= rows[j]
        rows[i] = r
    return rows, pivots


def nullspace_basis(vectors: Iterable[int], n: int) -> list[int]:
    """Basis of {x : <v, x> = 0 for all v}, pairing = parity of AND."""
    rows, pivots = _rref(vectors, n)
    pivot_set = set(pivots)
    basis = []
    for j in range(n):
        if j in pivot_set:
            continue
        x = 1 << j
        for r, p in zip(rows, pivots):
            if (r >> j) & 1:
                x |= 1 << p
        basis.append(x)
    return basis


def subspace_elements(basis: Sequence[int]) -> list[int]:
    """All 2^k masks spanned by the basis, in generation order."""
    elems = [0]
    for b in basis:
        elems.extend([e ^ b for e in elems])
    return elems


def coset_label(basis_rref: Sequence[int], v: int) -> int:
    """Canonical coset representative of v modulo span(basis)."""
    return reduce_vector(basis_rref, v)


def dual_spaces(n: int, dim: int, cap: int) -> Iterable[list[int]]:
    """Yield RREF bases of every dim-dimensional subspace of GF(2)^n.

    Enumeration: choose pivot columns (descending), fill free entries.
    Raises if the count of matrices would exceed cap.
    """
    from itertools import combinations

    if dim == 0:
        yield []
        return
    total = 0
    for pivots in combinations(range(n - 1, -1, -1), dim):
        # free positions per row: bits below the row's pivot, excluding later
        # pivots, and (for RREF) excluding bits above in other rows' pivots
        free: list[list[int]] = []
        pivset = set(pivots)
        for p in pivots:
            cols = [j for j in range(p) if j not in pivset]
            free.append(cols)
        combos = 1
        for cols in free:
            combos <<= len(cols)
        total += combos
        if total > cap:
            raise SizeLimitError(f"subspace enumeration exceeds cap {cap}")
        # enumerate assignments row by row
        def fill(i: int, rows: list[int]):
            if i == dim:
                yield list(rows)
                return
            cols = free[i]
            base = 1 << pivots[i]
            for mask in range(1 << len(cols)):
                r = base
                m = mask
                for j in cols:
                    if m & 1:
                        r |= 1 << j
                    m >>= 1
                rows.append(r)
                yield from fill(i + 1, rows)
                rows.pop()

        yield from fill(0, [])
