"""Probability-simplex helpers: Euclidean projection and regular grids."""

import itertools
from math import comb

import numpy as np

_DENSE_LIMIT = 4_000_000


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of ``v`` onto the probability simplex.

    Sort-based algorithm (Held, Wolfe & Crowder); works on a single vector or
    on a 2-D batch of row vectors.
    """
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    V = np.atleast_2d(v)
    k = V.shape[1]
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ind = np.arange(1, k + 1)
    cond = U - css / ind > 0
    rho = k - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(V.shape[0]), rho] / (rho + 1)
    out = np.maximum(V - theta[:, None], 0.0)
    return out[0] if single else out


def grid_size(k: int, resolution: int) -> int:
    return comb(resolution + k - 1, k - 1)


def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """Integer compositions of ``resolution`` into ``k`` nonnegative parts.

    Rows come in lexicographic order. Divide by ``resolution`` to get points
    of the simplex.
    """
    if k == 1:
        return np.array([[resolution]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(resolution + k - 1), k - 1)),
                    dtype=np.int64)
    padded = np.concatenate([np.full((len(bars), 1), -1), bars,
                             np.full((len(bars), 1), resolution + k - 1)], axis=1)
    return np.diff(padded, axis=1) - 1


def grid_neighbors(counts: np.ndarray, resolution: int) -> np.ndarray:
    """Row indices of the grid neighbours of each composition.

    Two compositions are neighbours when they differ by moving one unit of mass
    between two coordinates. Missing neighbours are marked with -1; the result
    has shape ``(N, k*(k-1))``.
    """
    N, k = counts.shape
    if k < 2:
        return np.empty((N, 0), dtype=np.int64)
    # the first k-1 parts determine a composition; address it in a dense table
    # when that is small enough, otherwise fall back to a sorted-code search
    base = (resolution + 1) ** np.arange(k - 1, dtype=np.int64)
    codes = counts[:, :-1] @ base
    size = (resolution + 1) ** (k - 1)
    if size <= _DENSE_LIMIT:
        table = np.full(size + 1, -1, dtype=np.int64)
        table[codes] = np.arange(N)

        def lookup(target, valid):
            return np.where(valid, table[np.where(valid, target, size)], -1)
    else:
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def lookup(target, valid):
            pos = np.minimum(np.searchsorted(sorted_codes, target), N - 1)
            return np.where(valid & (sorted_codes[pos] == target), order[pos], -1)

    step = np.append(base, 0)  # moving mass into the last part changes no code digit
    cols = []
    for m in range(k):
        for q in range(k):
            if m == q:
                continue
            target = codes + step[m] - step[q]
            cols.append(lookup(target, counts[:, q] >= 1))
    return np.stack(cols, axis=1)
