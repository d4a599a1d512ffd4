"""Random instance generators and brute-force oracles shared by the test modules.

The oracles deliberately avoid the library's own shortcuts: symmetry is checked
over every permutation, best responses by scanning every deviation, mixed
payoffs by direct tensor contraction.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from superrational.bk import BKSpace
from superrational.epistemic import BayesianStrategy, FiniteDistribution, HarsanyiSpace
from superrational.game import Game
from superrational.mixed import MixedStrategy

LETTERS = "abcd"
PROPERTY_INSTANCES = 200


def tenths(rng, size=None):
    """Payoffs drawn from {0, 0.1, ..., 1} as exact fractions."""
    if size is None:
        return Fraction(int(rng.integers(0, 11)), 10)
    return [Fraction(int(v), 10) for v in rng.integers(0, 11, size)]


def random_symmetric_game(rng, n: int, k: int) -> Game:
    acts = LETTERS[:k]
    table = {}
    for own in acts:
        for others in itertools.combinations_with_replacement(acts, n - 1):
            table[(own, others)] = tenths(rng)
    return Game.symmetric(acts, n, lambda own, others: table[(own, others)])


def random_game(rng, shape) -> Game:
    acts = [LETTERS[:m] for m in shape]
    return Game.from_function(acts, lambda prof: tenths(rng, len(shape)))


def random_shape(rng, max_n=3, max_k=4):
    n = int(rng.integers(1, max_n + 1))
    return n, int(rng.integers(1, max_k + 1))


def random_rational_strategy(rng, k: int, denom: int = 12) -> MixedStrategy:
    cuts = sorted(int(c) for c in rng.integers(0, denom + 1, k - 1))
    parts = np.diff([0] + cuts + [denom])
    return MixedStrategy(tuple(Fraction(int(p), denom) for p in parts))


def symmetric_with_unique_srj(rng, n: int, k: int) -> tuple[Game, str]:
    while True:
        g = random_symmetric_game(rng, n, k)
        diag = [g.payoff((a,) * n, 0) for a in g.actions[0]]
        best = max(diag)
        if diag.count(best) == 1:
            return g, g.actions[0][diag.index(best)]


# -- oracles -----------------------------------------------------------------

def brute_force_symmetric(g: Game) -> bool:
    """Invariance under every permutation of the players."""
    if not g.common_actions:
        return False
    n = g.n
    for tau in itertools.permutations(range(n)):
        inv = [0] * n
        for k, t in enumerate(tau):
            inv[t] = k
        for prof in g.profiles():
            moved = tuple(prof[tau[m]] for m in range(n))
            for i in range(n):
                if g.payoff(prof, i) != g.payoff(moved, inv[i]):
                    return False
    return True


def brute_force_nash(g: Game) -> list:
    out = []
    for prof in g.profiles():
        ok = True
        for i in range(g.n):
            here = g.payoff(prof, i)
            for a in g.actions[i]:
                if g.payoff(prof[:i] + (a,) + prof[i + 1:], i) > here:
                    ok = False
        if ok:
            out.append(prof)
    return out


def brute_force_srj(g: Game) -> list:
    n = g.n
    acts = g.actions[0]
    return [a for a in acts
            if all(g.payoff((a,) * n, i) >= g.payoff((b,) * n, i) for b in acts for i in range(n))]


def tensor_diagonal_values(g: Game, X: np.ndarray, player: int = 0) -> np.ndarray:
    """Player's payoff when everyone plays row x of ``X``, by tensor contraction."""
    T = g.tensor[player]
    out = np.empty(len(X))
    for r, x in enumerate(X):
        v = T
        for _ in range(g.n):
            v = np.tensordot(x, v, axes=(0, 0))
        out[r] = float(v)
    return out


def simplex_points(k: int, res: int) -> np.ndarray:
    """All points of the simplex grid with spacing 1/res (no library helpers)."""
    if k == 1:
        return np.ones((1, 1))
    if k == 2:
        p = np.arange(res + 1) / res
        return np.stack([p, 1 - p], axis=1)
    if k == 3:
        i, j = np.meshgrid(np.arange(res + 1), np.arange(res + 1), indexing="ij")
        keep = i + j <= res
        i, j = i[keep], j[keep]
        return np.stack([i, j, res - i - j], axis=1) / res
    pts = [c for c in itertools.product(range(res + 1), repeat=k - 1) if sum(c) <= res]
    return np.array([list(c) + [res - sum(c)] for c in pts]) / res


def diagonal_poly_values(g: Game, X: np.ndarray, player: int = 0) -> np.ndarray:
    """Diagonal payoff at each row of ``X``: payoffs of all profiles with the same
    action counts are pooled, then weighted by the matching monomial."""
    T = g.tensor[player]
    k, n = X.shape[1], g.n
    pooled: dict[tuple[int, ...], float] = {}
    for idx in itertools.product(range(k), repeat=n):
        key = tuple(idx.count(j) for j in range(k))
        pooled[key] = pooled.get(key, 0.0) + float(T[idx])
    powers = [np.ones_like(X)]
    for _ in range(n):
        powers.append(powers[-1] * X)
    out = np.zeros(len(X))
    for key, c in pooled.items():
        if c:
            w = np.full(len(X), c)
            for j, e in enumerate(key):
                w = w * powers[e][:, j]
            out += w
    return out


def grid_oracle(g: Game, res: int = 1000, zoom: int = 5) -> float:
    """Maximum of player 1's diagonal payoff on a dense grid, refined by a
    finer grid around the best few coarse points."""
    k = len(g.actions[0])
    X = simplex_points(k, res)
    vals = diagonal_poly_values(g, X)
    best = float(vals.max())
    h = 1.0 / res
    fine = np.linspace(-h, h, 41)
    for r in np.argsort(-vals)[:zoom]:
        x = X[r]
        if k == 2:
            p = np.clip(x[0] + fine, 0, 1)
            Y = np.stack([p, 1 - p], axis=1)
        else:
            offs = np.array(list(itertools.product(fine, repeat=k - 1)))
            head = x[:-1] + offs
            tail = 1 - head.sum(axis=1, keepdims=True)
            Y = np.hstack([head, tail])
            Y = Y[(Y >= 0).all(axis=1)]
        best = max(best, float(diagonal_poly_values(g, Y).max()))
    return best


# -- type spaces -----------------------------------------------------------------

def random_distribution(rng, outcomes, max_support=3) -> FiniteDistribution:
    m = int(rng.integers(1, min(max_support, len(outcomes)) + 1))
    picks = rng.choice(len(outcomes), size=m, replace=False)
    weights = [int(w) for w in rng.integers(1, 5, m)]
    total = sum(weights)
    return FiniteDistribution(tuple((outcomes[int(p)], Fraction(w, total))
                                    for p, w in zip(picks, weights)))


def opponent_outcomes(acts_per_player, types, i):
    n = len(types)
    pools = [[(a, t) for a in acts_per_player[j] for t in types[j]] for j in range(n) if j != i]
    return [tuple(c) for c in itertools.product(*pools)]


def random_harsanyi(rng, g: Game, target_action, n_types: int, p_sr: float = 0.6,
                    mode: str = "pure", candidates=()):
    """Common type set; each type is made superrational towards ``target_action``
    with probability ``p_sr``, otherwise gets a random belief."""
    n = g.n
    T = tuple(f"t{k}" for k in range(n_types))
    types = (T,) * n
    acts = [g.actions[j] for j in range(n)] if mode == "pure" else [range(len(candidates))] * n
    acts = [tuple(a) for a in acts]
    beliefs = {}
    for i in range(n):
        pool = opponent_outcomes(acts, types, i)
        for t in T:
            if rng.random() < p_sr:
                beliefs[(i, t)] = FiniteDistribution.point(tuple((target_action, t) for _ in range(n - 1)))
            else:
                beliefs[(i, t)] = random_distribution(rng, pool)
    return HarsanyiSpace(g, types, beliefs, mode, candidates)


def random_strategies(rng, h: HarsanyiSpace, follow: dict | None = None, p_follow: float = 0.8):
    """One strategy per player; types in ``follow[(i, t)]`` play the given value with
    probability ``p_follow``, everything else is random."""
    out = []
    for i in range(h.game.n):
        choices = h.game.actions[i] if h.mode == "pure" else list(range(len(h.candidates)))
        m = {}
        for t in h.types[i]:
            if follow and (i, t) in follow and rng.random() < p_follow:
                m[t] = follow[(i, t)]
            else:
                m[t] = choices[int(rng.integers(len(choices)))]
        out.append(BayesianStrategy(i, m))
    return out


def random_bk(rng, g: Game, types, mode="pure", candidates=(), max_set=2,
              planted: dict | None = None) -> BKSpace:
    """Random possibility space. ``planted[(i, t)]`` overrides a belief set."""
    n = g.n
    acts = [tuple(g.actions[j]) for j in range(n)] if mode == "pure" \
        else [tuple(range(len(candidates)))] * n
    beliefs = {}
    for i in range(n):
        pool = opponent_outcomes(acts, types, i)
        for t in types[i]:
            if planted and (i, t) in planted:
                beliefs[(i, t)] = planted[(i, t)]
                continue
            m = int(rng.integers(1, min(max_set, len(pool)) + 1))
            picks = rng.choice(len(pool), size=m, replace=False)
            beliefs[(i, t)] = tuple(pool[int(p)] for p in sorted(picks))
    return BKSpace(g, types, beliefs, mode, candidates)


def set_partitions(items):
    """Every partition of ``items`` (Bell-number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def tensor_diagonal_gradient(g: Game, x: np.ndarray, player: int = 0) -> np.ndarray:
    """Gradient of the diagonal payoff at ``x``: for each position, contract
    every other axis with ``x``."""
    T = g.tensor[player]
    n = g.n
    grad = np.zeros(len(x))
    for m in range(n):
        v = np.moveaxis(T, m, 0)
        for _ in range(n - 1):
            v = np.tensordot(v, x, axes=(v.ndim - 1, 0))
        grad += v
    return grad
