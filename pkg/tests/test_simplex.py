import itertools

import numpy as np
import pytest

from superrational import simplex
from superrational.simplex import grid_neighbors, grid_size, project_simplex, simplex_grid


def brute_neighbors(counts):
    idx = {tuple(r): i for i, r in enumerate(counts.tolist())}
    k = counts.shape[1]
    out = []
    for r in counts.tolist():
        row = []
        for m, q in itertools.permutations(range(k), 2):
            t = list(r)
            t[m] += 1
            t[q] -= 1
            row.append(idx.get(tuple(t), -1) if t[q] >= 0 else -1)
        out.append(row)
    return np.array(out)


@pytest.mark.parametrize("k,res", [(1, 4), (2, 5), (3, 4), (4, 6), (5, 3)])
@pytest.mark.parametrize("dense", [True, False])
def test_neighbors_match_brute_force(k, res, dense, monkeypatch):
    if not dense:
        monkeypatch.setattr(simplex, "_DENSE_LIMIT", 0)
    c = simplex_grid(k, res)
    assert len(c) == grid_size(k, res)
    assert (c.sum(axis=1) == res).all()
    assert [tuple(r) for r in c.tolist()] == sorted(tuple(r) for r in c.tolist())
    nb = grid_neighbors(c, res)
    if k > 1:
        assert (nb == brute_neighbors(c)).all()


def test_projection_properties():
    rng = np.random.default_rng(0)
    V = rng.normal(size=(500, 4)) * 3
    P = project_simplex(V)
    assert np.allclose(P.sum(axis=1), 1) and (P >= 0).all()
    # optimality: <v - p, q - p> <= 0 for vertices q
    for v, p in zip(V[:50], P[:50]):
        for q in np.eye(4):
            assert np.dot(v - p, q - p) <= 1e-12
    x = np.array([0.2, 0.3, 0.5])
    assert np.allclose(project_simplex(x), x)
