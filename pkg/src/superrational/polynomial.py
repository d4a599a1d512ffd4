"""Expected payoff on the diagonal of the mixed extension, as a polynomial.

When every player uses the same mixed strategy x, player i's expected payoff
only depends on how many players pick each action, so it collapses to a
homogeneous polynomial of degree n in x. Storing the coefficients per count
vector keeps evaluation, gradient and Hessian cheap even for ten players.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .game import Game


@dataclass(frozen=True)
class DiagonalPolynomial:
    exponents: tuple[tuple[int, ...], ...]
    coefficients: tuple[Fraction, ...]

    @property
    def k(self) -> int:
        return len(self.exponents[0])

    @cached_property
    def _E(self) -> np.ndarray:
        return np.array(self.exponents, dtype=float)

    @cached_property
    def _C(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients])

    def exact(self, probs: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for exps, coef in zip(self.exponents, self.coefficients):
            term = coef
            for p, e in zip(probs, exps):
                if e:
                    term *= p ** e
            total += term
        return total

    def value(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        mono = np.prod(X[:, None, :] ** self._E[None, :, :], axis=2)
        return mono @ self._C

    def grad(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        E, C = self._E, self._C
        out = np.empty_like(X)
        for m in range(X.shape[1]):
            Em = E.copy()
            Em[:, m] = np.maximum(Em[:, m] - 1, 0)
            mono = np.prod(X[:, None, :] ** Em[None, :, :], axis=2)
            out[:, m] = mono @ (C * E[:, m])
        return out

    def hessian(self, x: np.ndarray) -> np.ndarray:
        E, C = self._E, self._C
        k = len(x)
        H = np.empty((k, k))
        for m in range(k):
            for q in range(m, k):
                weight = E[:, m] * (E[:, q] - (1.0 if m == q else 0.0))
                Emq = E.copy()
                Emq[:, m] -= 1
                Emq[:, q] -= 1
                Emq = np.maximum(Emq, 0)
                mono = np.prod(x[None, :] ** Emq, axis=1)
                H[m, q] = H[q, m] = mono @ (C * weight)
        return H


@lru_cache(maxsize=256)
def diagonal_polynomial(g: Game, player: int) -> DiagonalPolynomial:
    """Coefficients of player ``player``'s payoff when all play the same strategy.

    The game must have common actions; callers check this.
    """
    k = len(g.actions[0])
    acc: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for pos in itertools.product(range(k), repeat=g.n):
        counts = [0] * k
        for a in pos:
            counts[a] += 1
        acc[tuple(counts)] += g.payoff_at(pos)[player]
    keys = sorted(acc)
    return DiagonalPolynomial(tuple(keys), tuple(acc[c] for c in keys))
