"""Exact linear algebra over the rationals (Gauss-Jordan elimination)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """Solve ``A x = b`` exactly.

    Returns ``(x, rank)`` where ``x`` is the unique solution, ``None`` with the
    rank when the system is consistent but underdetermined, and ``(None, -1)``
    when it is inconsistent.
    """
    nvars = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    m, piv = rref(aug)
    if nvars in piv:
        return None, -1
    rank = len(piv)
    if rank < nvars:
        return None, rank
    x = [Fraction(0)] * nvars
    for i, c in enumerate(piv):
        x[c] = m[i][nvars]
    return x, rank


def rank(A: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(A)[1]) if A else 0
