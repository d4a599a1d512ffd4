"""All extreme mixed Nash equilibria of a two-player game by support enumeration.

For a pair of candidate supports (I, J) the equilibria whose supports lie
inside I and J form a product of two polytopes: player 1's strategies that
make every column in J a best response of player 2, and player 2's strategies
that make every row in I a best response of player 1. Each polytope is
described by exact linear equalities (indifference and normalization) and
inequalities (nonnegativity, no profitable column or row outside the
support). Its vertices are found by making extra inequalities tight until the
system has a unique solution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import NotTwoPlayers
from .game import Game
from .mixed import MixedStrategy


@dataclass(frozen=True)
class NashResult:
    equilibria: tuple[tuple[MixedStrategy, MixedStrategy], ...]
    degenerate: bool


def _nonempty_subsets(m):
    for size in range(1, m + 1):
        yield from itertools.combinations(range(m), size)


def _vertices(M, own, opp, m_own):
    """Vertices of the strategy polytope of one player.

    ``M[r][c]`` is the *opponent's* payoff when this player uses ``r`` and the
    opponent ``c``; ``own`` is this player's support candidate and ``opp`` the
    opponent's, whose members must all be best responses.
    Variables are the probabilities on ``own`` followed by the opponent's value.
    """
    nv = len(own) + 1
    eq_a = [[Fraction(1)] * len(own) + [Fraction(0)]]
    eq_b = [Fraction(1)]
    for c in opp:
        eq_a.append([M[r][c] for r in own] + [Fraction(-1)])
        eq_b.append(Fraction(0))
    ineq_a, ineq_b = [], []
    for k in range(len(own)):
        row = [Fraction(0)] * nv
        row[k] = Fraction(-1)
        ineq_a.append(row)
        ineq_b.append(Fraction(0))
    for c in range(len(M[0])):
        if c not in opp:
            ineq_a.append([M[r][c] for r in own] + [Fraction(-1)])
            ineq_b.append(Fraction(0))

    def feasible(x):
        return all(sum(a * xi for a, xi in zip(row, x)) <= b for row, b in zip(ineq_a, ineq_b))

    # a vertex needs nv independent tight constraints
    extra = nv - linalg.rank(eq_a)
    found = []
    for tight in itertools.combinations(range(len(ineq_a)), extra):
        x, _ = linalg.solve(eq_a + [ineq_a[t] for t in tight],
                            eq_b + [ineq_b[t] for t in tight])
        if x is None or not feasible(x):
            continue
        probs = [Fraction(0)] * m_own
        for k, row in enumerate(own):
            probs[row] = x[k]
        vec = tuple(probs)
        if vec not in found:
            found.append(vec)
    return found


def mixed_nash_2p(g: Game) -> NashResult:
    """Extreme Nash equilibria of a two-player game, in exact arithmetic.

    ``degenerate`` is set when some support pair carries a continuum of
    equilibria; the equilibria returned are then the vertices of that set.
    """
    if g.n != 2:
        raise NotTwoPlayers(f"support enumeration needs 2 players, game has {g.n}")
    m1, m2 = g.shape
    A = [[g.payoff_at((r, c))[0] for c in range(m2)] for r in range(m1)]
    B = [[g.payoff_at((r, c))[1] for c in range(m2)] for r in range(m1)]
    At = [list(col) for col in zip(*A)]  # player 1's payoff indexed [col][row]
    found: list[tuple[tuple, tuple]] = []
    degenerate = False
    for I in _nonempty_subsets(m1):
        for J in _nonempty_subsets(m2):
            xs = _vertices(B, I, J, m1)
            if not xs:
                continue
            ys = _vertices(At, J, I, m2)
            if not ys:
                continue
            if len(xs) > 1 or len(ys) > 1:
                degenerate = True
            for x in xs:
                for y in ys:
                    if (x, y) not in found:
                        found.append((x, y))

    def key(eq):
        x, y = eq
        return (sum(p > 0 for p in x) + sum(p > 0 for p in y), tuple(-p for p in x), tuple(-p for p in y))

    found.sort(key=key)
    return NashResult(tuple((MixedStrategy(x), MixedStrategy(y)) for x, y in found), degenerate)
