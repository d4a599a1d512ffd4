"""Mixed strategies, expected payoffs and superrational mixed profiles.

A superrational mixed profile gives every player the same strategy sigma and
maximizes every player's expected payoff among such identical profiles. For a
symmetric game all players share one objective, so the search is a plain
maximization of a degree-n polynomial over the simplex. It is done by seeding
from a regular simplex grid (plus random Dirichlet starts), climbing with
projected gradient ascent, and finishing with a Newton step on the face the
ascent settled on.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionMismatch, NonConvergence
from .game import Game, is_symmetric
from .polynomial import DiagonalPolynomial, diagonal_polynomial
from .simplex import grid_neighbors, grid_size, project_simplex, simplex_grid

EMPTY_TOL = 1e-6    # minimax gap below which the diagonal optimum is declared empty
MERGE_TOL = 1e-6    # max-norm distance under which two maximizers are merged
MAX_GRID_POINTS = 50_000
MAX_GRID_SEEDS = 64
_COARSE_TOL = 1e-4
_FLOAT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class MixedStrategy:
    """Probability vector over one player's action list.

    Built from ints/Fractions it stays exact; any float entry makes the whole
    vector float64.
    """

    probs: tuple

    def __post_init__(self):
        probs = tuple(self.probs)
        if not probs:
            raise ValueError("empty strategy")
        if all(isinstance(p, (int, Fraction)) and not isinstance(p, bool) for p in probs):
            probs = tuple(Fraction(p) for p in probs)
            if any(p < 0 for p in probs) or sum(probs) != 1:
                raise ValueError(f"not a probability vector: {probs}")
        else:
            probs = tuple(float(p) for p in probs)
            if any(p < 0 or not np.isfinite(p) for p in probs) or abs(sum(probs) - 1) > _FLOAT_SUM_TOL:
                raise ValueError(f"not a probability vector: {probs}")
        object.__setattr__(self, "probs", probs)

    @property
    def exact(self) -> bool:
        return isinstance(self.probs[0], Fraction)

    @classmethod
    def dirac(cls, index: int, size: int) -> "MixedStrategy":
        return cls(tuple(1 if k == index else 0 for k in range(size)))

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls((Fraction(1, size),) * size)

    @classmethod
    def from_array(cls, x) -> "MixedStrategy":
        """Float strategy from a nonnegative vector, renormalized to sum to 1."""
        x = np.clip(np.asarray(x, dtype=float), 0.0, None)
        return cls(tuple(x / x.sum()))

    def as_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, k):
        return self.probs[k]


MixedProfile = Sequence[MixedStrategy]


def _check_profile(g: Game, profile: MixedProfile):
    if len(profile) != g.n:
        raise DimensionMismatch(f"{len(profile)} strategies for {g.n} players")
    for i, s in enumerate(profile):
        if len(s) != len(g.actions[i]):
            raise DimensionMismatch(
                f"strategy {i} has {len(s)} entries, player has {len(g.actions[i])} actions")


def expected_payoff(g: Game, profile: MixedProfile, player: int):
    """Expected payoff of ``player`` under independent mixing.

    Exact Fraction when every strategy is exact, float otherwise.
    """
    _check_profile(g, profile)
    if all(s.exact for s in profile):
        supports = [[(k, p) for k, p in enumerate(s.probs) if p] for s in profile]
        total = Fraction(0)
        for combo in itertools.product(*supports):
            weight = Fraction(1)
            for _, p in combo:
                weight *= p
            total += weight * g.payoff_at([k for k, _ in combo])[player]
        return total
    T = g.tensor[player]
    for s in profile:
        T = np.tensordot(s.as_array(), T, axes=(0, 0))
    return float(T)


def diagonal_expected_payoff(g: Game, sigma: MixedStrategy, player: int):
    """Expected payoff of ``player`` when everybody plays ``sigma``."""
    g.require_common_actions()
    return expected_payoff(g, (sigma,) * g.n, player)


@dataclass(frozen=True)
class OptimizerConfig:
    tolerance: float = 1e-9
    grid_points_per_dim: int = 101
    multistarts: int = 32
    max_iters: int = 10_000
    rng_seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.grid_points_per_dim < 2:
            raise ValueError("grid_points_per_dim must be at least 2")
        if self.multistarts < 1:
            raise ValueError("multistarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be nonnegative")


@dataclass(frozen=True)
class Maximizer:
    strategy: MixedStrategy
    value: float                   # player 1's expected payoff
    values: tuple[float, ...]      # every player's expected payoff
    stationarity: float            # norm of the projected-gradient step


@dataclass(frozen=True)
class PlayerOptimum:
    player: int
    value: float
    argmax: tuple[MixedStrategy, ...]


@dataclass(frozen=True)
class CriticalPoint:
    player: int
    strategy: MixedStrategy
    value: float


@dataclass(frozen=True)
class SRMixedReport:
    status: str                    # "found" or "empty"
    symmetric: bool
    maximizers: tuple[Maximizer, ...]
    best_value: float | None
    grid_best: float | None
    oracle_gap: float | None       # best value found minus best grid value
    converged: bool
    player_optima: tuple[PlayerOptimum, ...] = ()
    minimax_gap: float | None = None
    interior_minima: tuple[CriticalPoint, ...] = ()
    notes: tuple[str, ...] = field(default=())


class _Objective:
    """Weighted sum of diagonal polynomials."""

    def __init__(self, terms: Sequence[tuple[DiagonalPolynomial, float]]):
        self.terms = list(terms)

    def value(self, X):
        return sum(w * p.value(X) for p, w in self.terms)

    def grad(self, X):
        return sum(w * p.grad(X) for p, w in self.terms)

    def hessian(self, x):
        return sum(w * p.hessian(x) for p, w in self.terms)


def _gradient_step(obj, X):
    G = obj.grad(X)
    D = project_simplex(X + G) - X
    return np.linalg.norm(D, axis=1), G


def _pga(obj, X, stop_tol, max_iters):
    """Projected gradient ascent with Armijo backtracking, batched over rows.

    Returns the final points, their stationarity measure and the iterations used.
    """
    X = np.array(X, dtype=float)
    fx = obj.value(X)
    gm, G = _gradient_step(obj, X)
    step = np.ones(len(X))
    active = gm > stop_tol
    it = 0
    while active.any() and it < max_iters:
        it += 1
        idx = np.flatnonzero(active)
        Xa, Ga, fa, sa = X[idx], G[idx], fx[idx], step[idx].copy()
        f_before = fa.copy()
        pending = np.ones(len(idx), dtype=bool)
        first_try = np.zeros(len(idx), dtype=bool)
        for attempt in range(60):
            rows = np.flatnonzero(pending)
            cand = project_simplex(Xa[rows] + sa[rows, None] * Ga[rows])
            fc = obj.value(cand)
            ok = fc >= fa[rows] + 1e-4 * np.sum(Ga[rows] * (cand - Xa[rows]), axis=1)
            X[idx[rows[ok]]] = cand[ok]
            fx[idx[rows[ok]]] = fc[ok]
            sa[rows[~ok]] *= 0.5
            pending[rows[ok]] = False
            if attempt == 0:
                first_try[rows[ok]] = True
            if not pending.any():
                break
        gm[idx], G[idx] = _gradient_step(obj, X[idx])
        # the slope along the step flipped sign: the step jumped over the optimum
        overshoot = np.sum(G[idx] * (X[idx] - Xa), axis=1) < 0
        sa = np.where(overshoot, sa * 0.5, np.where(first_try, sa * 2.0, sa))
        step[idx] = np.minimum(sa, 1e8)
        # rows that no longer improve are stationary up to rounding
        stalled = np.zeros(len(X), dtype=bool)
        stalled[idx[pending | (fx[idx] - f_before <= 1e-13 * np.abs(f_before))]] = True
        active = (gm > stop_tol) & ~stalled
    return X, gm, it


def _tangent_basis(s):
    """Basis of {d : sum(d) == 0} in R^s (not orthonormal)."""
    return np.vstack([np.eye(s - 1), -np.ones((1, s - 1))])


def _newton_polish(obj, x):
    """Newton iterations on the face spanned by the support of ``x``.

    Only moves while the reduced Hessian is negative definite, i.e. near a
    strict local maximum on that face.
    """
    x = x.copy()
    for _ in range(60):
        S = np.flatnonzero(x > 1e-12)
        if len(S) <= 1:
            break
        g = obj.grad(x[None, :])[0][S]
        H = obj.hessian(x)[np.ix_(S, S)]
        Z = _tangent_basis(len(S))
        r = Z.T @ g
        if np.linalg.norm(r) < 1e-15:
            break
        Hr = Z.T @ H @ Z
        if np.linalg.eigvalsh(Hr).max() >= -1e-14:
            break
        d = -Z @ np.linalg.solve(Hr, r)
        t = 1.0
        neg = d < 0
        if neg.any():
            t = min(1.0, float(np.min(-x[S][neg] / d[neg])))
        xn = x.copy()
        xn[S] += t * d
        xn = np.clip(xn, 0.0, None)
        xn /= xn.sum()
        if obj.value(xn[None, :])[0] < obj.value(x[None, :])[0] - 1e-15:
            break
        if np.max(np.abs(xn - x)) < 1e-16:
            x = xn
            break
        x = xn
    return x


def _polish_rows(obj, X, rows):
    done: list[tuple[np.ndarray, np.ndarray]] = []
    for r in rows:
        for start, result in done:
            # ascent from many seeds piles up on the same few points
            if np.max(np.abs(start - X[r])) < 1e-12:
                X[r] = result
                break
        else:
            start = X[r].copy()
            polished = _newton_polish(obj, X[r])
            if obj.value(polished[None, :])[0] >= obj.value(X[r][None, :])[0] - 1e-15:
                X[r] = polished
            done.append((start, X[r].copy()))
    X[X < 1e-13] = 0.0
    X /= X.sum(axis=1, keepdims=True)
    return _gradient_step(obj, X)[0]


def _maximize(obj, seeds, cfg: OptimizerConfig):
    """Coarse ascent, Newton polish, then a fine ascent for whatever is left."""
    X, gm, used = _pga(obj, seeds, max(cfg.tolerance, _COARSE_TOL), cfg.max_iters)
    gm = _polish_rows(obj, X, range(len(X)))
    vals = obj.value(X)
    # rows far below the best cannot end up among the reported maximizers
    todo = np.flatnonzero((gm > cfg.tolerance) & (vals >= vals.max() - _COARSE_TOL))
    if len(todo) and used < cfg.max_iters:
        Xt, _, _ = _pga(obj, X[todo], cfg.tolerance, cfg.max_iters - used)
        X[todo] = Xt
        gm = _polish_rows(obj, X, todo)
    return X, gm


def _grid(obj_values, k: int, cfg: OptimizerConfig):
    """Grid points, values of each objective in ``obj_values``, and neighbour table."""
    res = cfg.grid_points_per_dim - 1
    while res > 1 and grid_size(k, res) > MAX_GRID_POINTS:
        res //= 2
    counts = simplex_grid(k, res)
    P = counts / res
    vals = []
    for f in obj_values:
        chunks = [f(P[s:s + 20_000]) for s in range(0, len(P), 20_000)]
        vals.append(np.concatenate(chunks))
    return P, vals, grid_neighbors(counts, res)


def _local_maxima(vals, nbrs, limit):
    padded = np.append(vals, -np.inf)
    is_max = np.all(vals[:, None] >= padded[nbrs], axis=1)
    idx = np.flatnonzero(is_max)
    order = np.argsort(-vals[idx], kind="stable")
    return idx[order[:limit]]


def _seeds(P, vals, nbrs, cfg, rng, tol):
    top = np.flatnonzero(vals >= vals.max() - tol)[:MAX_GRID_SEEDS]
    local = _local_maxima(vals, nbrs, MAX_GRID_SEEDS)
    pick = np.unique(np.concatenate([top, local]))
    rand = rng.dirichlet(np.ones(P.shape[1]), size=cfg.multistarts)
    return np.vstack([P[pick], rand])


def _cluster(X, scores):
    """Indices of representatives, best score first, merging points within MERGE_TOL."""
    order = np.argsort(-scores, kind="stable")
    reps: list[int] = []
    for r in order:
        if all(np.max(np.abs(X[r] - X[q])) >= MERGE_TOL for q in reps):
            reps.append(int(r))
    return reps


def _sorted_reps(X, reps):
    return sorted(reps, key=lambda r: tuple(-X[r]))


def _value_at(poly: DiagonalPolynomial, x) -> float:
    """Polynomial value at the float point ``x`` computed exactly, then rounded once."""
    return float(poly.exact([Fraction(float(p)) for p in x]))


def _fmt(x) -> str:
    return "(" + ", ".join(f"{float(p):.6g}" for p in x) + ")"


@lru_cache(maxsize=128)
def superrational_mixed(g: Game, cfg: OptimizerConfig = OptimizerConfig()) -> SRMixedReport:
    """Superrational profiles of mixed strategies.

    Symmetric games always have one (status ``"found"``); every distinct
    strategy whose value is within ``cfg.tolerance`` of the best is reported.
    Tolerances are relative to the largest absolute payoff of the game.

    For a non-symmetric game with common actions each player's own diagonal
    maximum is computed first, then ``min_i (payoff_i(sigma) - max_i)`` is
    maximized; the status is ``"empty"`` when that optimum stays below
    ``-EMPTY_TOL``.
    """
    acts = g.require_common_actions()
    k = len(acts)
    symmetric = bool(is_symmetric(g))
    if k == 1:
        only = MixedStrategy((Fraction(1),))
        vals = tuple(float(v) for v in g.payoff((acts[0],) * g.n))
        m = Maximizer(only, vals[0], vals, 0.0)
        return SRMixedReport("found", symmetric, (m,), vals[0], vals[0], 0.0, True,
                             tuple(PlayerOptimum(i, vals[i], (only,)) for i in range(g.n))
                             if not symmetric else ())
    scale = g.scale
    rng = np.random.default_rng(cfg.rng_seed)
    if symmetric:
        return _symmetric_case(g, [diagonal_polynomial(g, 0)], scale, k, cfg, rng)
    polys = [diagonal_polynomial(g, i) for i in range(g.n)]
    return _asymmetric_case(g, polys, scale, k, cfg, rng)


def _symmetric_case(g, polys, scale, k, cfg, rng):
    obj = _Objective([(polys[0], 1.0 / scale)])
    P, (gv,), nbrs = _grid([obj.value], k, cfg)
    X, gm = _maximize(obj, _seeds(P, gv, nbrs, cfg, rng, cfg.tolerance), cfg)
    vals = obj.value(X)
    best = vals.max()
    keep = np.flatnonzero(vals >= best - cfg.tolerance)
    reps = _cluster(X[keep], vals[keep])
    out = []
    for r in _sorted_reps(X[keep], reps):
        strat = MixedStrategy.from_array(X[keep][r])
        v = _value_at(polys[0], strat.probs)
        out.append(Maximizer(strat, v, (v,) * g.n, float(gm[keep][r])))
    converged = all(m.stationarity <= cfg.tolerance for m in out)
    if not converged:
        warnings.warn("simplex ascent stopped before reaching the stationarity tolerance",
                      NonConvergence, stacklevel=3)
    grid_best = float(gv.max() * scale)
    return SRMixedReport("found", True, tuple(out), float(best * scale), grid_best,
                         float(best * scale) - grid_best, converged)


def _asymmetric_case(g, polys, scale, k, cfg, rng):
    objs = [_Objective([(p, 1.0 / scale)]) for p in polys]
    P, gvals, nbrs = _grid([o.value for o in objs], k, cfg)
    optima = []
    tops = []
    all_conv = True
    for i, (o, gv) in enumerate(zip(objs, gvals)):
        X, gm = _maximize(o, _seeds(P, gv, nbrs, cfg, rng, cfg.tolerance), cfg)
        vals = o.value(X)
        best = vals.max()
        keep = np.flatnonzero(vals >= best - cfg.tolerance)
        reps = _sorted_reps(X[keep], _cluster(X[keep], vals[keep]))
        all_conv &= bool(np.all(gm[keep] <= cfg.tolerance))
        tops.append(best)
        optima.append(PlayerOptimum(i, float(best * scale),
                                    tuple(MixedStrategy.from_array(X[keep][r]) for r in reps)))
    M = np.array(tops)

    def gap(X):
        X = np.atleast_2d(X)
        return np.min(np.stack([o.value(X) - m for o, m in zip(objs, M)]), axis=0)

    grid_gap = np.min(np.stack([gv - m for gv, m in zip(gvals, M)]), axis=0)
    order = np.argsort(-grid_gap, kind="stable")[:16]
    starts = [P[r] for r in order]
    for opt in optima:
        starts.extend(s.as_array() for s in opt.argmax)
    found = []
    for x0 in starts:
        found.append(_minimax_refine(objs, M, x0))
    found = np.array(found)
    gaps = gap(found)
    best_gap = float(gaps.max())

    minima = _interior_minima(objs, P, gvals, nbrs, cfg, rng, scale)
    notes = []
    for cp in minima:
        opt = optima[cp.player]
        notes.append(
            f"player {cp.player + 1}: the diagonal expected payoff has an interior critical "
            f"point at {_fmt(cp.strategy.probs)} which is a minimum (value {cp.value:.6g}); "
            f"its maximum on the diagonal is {opt.value:.6g} at "
            + ", ".join(_fmt(s.probs) for s in opt.argmax))

    if best_gap < -EMPTY_TOL:
        if not all_conv:
            warnings.warn("simplex ascent stopped before reaching the stationarity tolerance",
                          NonConvergence, stacklevel=3)
        return SRMixedReport("empty", False, (), None, None, None, all_conv, tuple(optima),
                             best_gap * scale, tuple(minima), tuple(notes))

    # a common maximizer maximizes the sum of all players' objectives too
    total = _Objective([(p, 1.0 / scale) for p in polys])
    raw = found[gaps >= -EMPTY_TOL]
    Xk, _ = _maximize(total, raw, cfg)
    slipped = gap(Xk) < -EMPTY_TOL
    Xk[slipped] = raw[slipped]
    gms = np.max(np.stack([_gradient_step(o, Xk)[0] for o in objs]), axis=0)
    reps = _sorted_reps(Xk, _cluster(Xk, gap(Xk)))
    out = []
    for r in reps:
        strat = MixedStrategy.from_array(Xk[r])
        values = tuple(_value_at(p, strat.probs) for p in polys)
        out.append(Maximizer(strat, values[0], values, float(gms[r])))
    converged = all_conv and all(m.stationarity <= cfg.tolerance for m in out)
    if not converged:
        warnings.warn("simplex ascent stopped before reaching the stationarity tolerance",
                      NonConvergence, stacklevel=3)
    return SRMixedReport("found", False, tuple(out), out[0].value, None, None, converged,
                         tuple(optima), float(gap(Xk).max() * scale), tuple(minima), tuple(notes))


def _minimax_refine(objs, M, x0):
    """Maximize ``min_i (f_i(x) - M_i)`` over the simplex from ``x0`` (epigraph form)."""
    k = len(x0)
    z0 = np.append(x0, min(o.value(x0)[0] - m for o, m in zip(objs, M)))
    cons = [{"type": "eq", "fun": lambda z: np.sum(z[:k]) - 1.0,
             "jac": lambda z: np.append(np.ones(k), 0.0)}]
    for o, m in zip(objs, M):
        cons.append({"type": "ineq",
                     "fun": lambda z, o=o, m=m: o.value(z[:k])[0] - m - z[k],
                     "jac": lambda z, o=o: np.append(o.grad(z[:k][None, :])[0], -1.0)})
    res = minimize(lambda z: -z[k], z0, jac=lambda z: np.append(np.zeros(k), -1.0),
                   bounds=[(0.0, 1.0)] * k + [(None, None)], constraints=cons,
                   method="SLSQP", options={"ftol": 1e-14, "maxiter": 500})
    return project_simplex(res.x[:k])


def _interior_minima(objs, P, gvals, nbrs, cfg, rng, scale):
    """Strict interior local minima of each player's diagonal payoff."""
    out = []
    for i, (o, gv) in enumerate(zip(objs, gvals)):
        neg = _Objective([(p, -w) for p, w in o.terms])
        seeds = P[_local_maxima(-gv, nbrs, MAX_GRID_SEEDS)]
        X, gm = _maximize(neg, seeds, cfg)
        inside = np.flatnonzero((X.min(axis=1) > 1e-6) & (gm <= 1e-7))
        if not len(inside):
            continue
        Xi = X[inside]
        reps = _sorted_reps(Xi, _cluster(Xi, -neg.value(Xi)))
        for r in reps:
            x = Xi[r]
            Z = _tangent_basis(len(x))
            if np.linalg.eigvalsh(Z.T @ o.hessian(x) @ Z).min() <= 0:
                continue
            out.append(CriticalPoint(i, MixedStrategy.from_array(x), float(o.value(x)[0] * scale)))
    return out
