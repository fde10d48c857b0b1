"""Gaussian elimination over GF(2) on int bitsets, with row provenance.

Rows are Python ints: bit ``j`` is the coefficient of variable ``j``.  Every
working row carries a second bitset recording which original rows were
XOR-ed into it, so an inconsistent row yields a proof of inconsistency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class GF2Solution:
    solution: Optional[int]
    """Bitset of a solution, or None when the system is inconsistent."""
    witness: Optional[int]
    """Bitset of original row indices summing to ``0 = 1``; None if consistent."""
    rank: int
    pivots: tuple


def solve(rows: list[int], rhs: list[int], n_cols: int) -> GF2Solution:
    """Solve ``M s = b`` over GF(2).

    Pivots are taken on the lowest-index column first and all free variables
    are set to zero, so the returned solution is canonical for a given system.
    """
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs differ in length")
    work = [(r, b & 1, 1 << idx) for idx, (r, b) in enumerate(zip(rows, rhs))]
    pivots = []
    row_idx = 0
    for col in range(n_cols):
        bit = 1 << col
        pivot = None
        for r in range(row_idx, len(work)):
            if work[r][0] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        prow, pb, ph = work[row_idx]
        for r in range(len(work)):
            if r != row_idx and work[r][0] & bit:
                cr, cb, ch = work[r]
                work[r] = (cr ^ prow, cb ^ pb, ch ^ ph)
        pivots.append(col)
        row_idx += 1
        if row_idx == len(work):
            break

    for r in range(row_idx, len(work)):
        coeffs, b, history = work[r]
        if coeffs == 0 and b == 1:
            return GF2Solution(None, history, row_idx, tuple(pivots))

    solution = 0
    for r, col in enumerate(pivots):
        if work[r][1]:
            solution |= 1 << col
    return GF2Solution(solution, None, row_idx, tuple(pivots))


def bits(x: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out
