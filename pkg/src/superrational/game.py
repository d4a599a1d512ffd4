"""Finite normal-form games with exact payoffs and their pure-strategy solution sets.

Action profiles are plain tuples of action labels, one per player. Permutations
are tuples of 0-based player indices. Every profile listing produced here follows
``itertools.product`` order over the players' action lists, so player 0 varies
slowest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DifferentActionSets, DimensionMismatch

Profile = tuple[str, ...]
Permutation = tuple[int, ...]


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Strings such as ``"-10"`` or ``"1/2"`` are parsed exactly. Floats go through
    their shortest repr, so ``0.1`` becomes ``1/10`` rather than the binary
    expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not payoffs")
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class Game:
    """An n-player game in strategic form.

    ``table`` holds one payoff vector per action profile, flattened in
    profile order (see :meth:`profiles`).
    """

    actions: tuple[tuple[str, ...], ...]
    table: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.actions:
            raise ValueError("a game needs at least one player")
        for i, labels in enumerate(self.actions):
            if not labels:
                raise ValueError(f"player {i} has no actions")
            if len(set(labels)) != len(labels):
                raise ValueError(f"player {i} has duplicate action labels")
        expected = 1
        for labels in self.actions:
            expected *= len(labels)
        if len(self.table) != expected:
            raise ValueError(f"payoff table has {len(self.table)} entries, expected {expected}")
        for row in self.table:
            if len(row) != self.n:
                raise ValueError("every payoff vector needs one entry per player")

    # -- construction -------------------------------------------------

    @classmethod
    def from_payoffs(cls, actions: Sequence[Sequence[str]],
                     payoffs: Mapping[Sequence[str], Sequence]) -> "Game":
        """Build a game from a total map ``profile -> payoff vector``."""
        acts = tuple(tuple(a) for a in actions)
        lookup = {tuple(k): v for k, v in payoffs.items()}
        table = []
        for prof in itertools.product(*acts):
            if prof not in lookup:
                raise KeyError(prof)
            table.append(tuple(as_rational(x) for x in lookup[prof]))
        extra = set(lookup) - set(itertools.product(*acts))
        if extra:
            raise ValueError(f"payoffs given for unknown profiles: {sorted(extra)}")
        return cls(acts, tuple(table))

    @classmethod
    def from_function(cls, actions: Sequence[Sequence[str]],
                      payoff: Callable[[Profile], Sequence]) -> "Game":
        acts = tuple(tuple(a) for a in actions)
        table = tuple(tuple(as_rational(x) for x in payoff(prof))
                      for prof in itertools.product(*acts))
        return cls(acts, table)

    @classmethod
    def bimatrix(cls, row_actions: Sequence[str], col_actions: Sequence[str],
                 cells: Sequence[Sequence[tuple]]) -> "Game":
        """Two-player game from a matrix of ``(row payoff, column payoff)`` cells."""
        table = []
        for r in range(len(row_actions)):
            for c in range(len(col_actions)):
                table.append(tuple(as_rational(x) for x in cells[r][c]))
        return cls((tuple(row_actions), tuple(col_actions)), tuple(table))

    @classmethod
    def symmetric(cls, actions: Sequence[str], n: int,
                  payoff: Callable[[str, tuple[str, ...]], object]) -> "Game":
        """Symmetric game where a player's payoff depends on their own action and
        on the multiset of the others' actions.

        ``payoff(own, others)`` receives ``others`` sorted by position in ``actions``.
        """
        acts = tuple(actions)
        pos = {a: k for k, a in enumerate(acts)}

        def vector(prof):
            out = []
            for i in range(n):
                others = tuple(sorted(prof[:i] + prof[i + 1:], key=pos.__getitem__))
                out.append(payoff(prof[i], others))
            return out

        return cls.from_function([acts] * n, vector)

    # -- basic structure ----------------------------------------------

    @property
    def n(self) -> int:
        return len(self.actions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    @property
    def common_actions(self) -> bool:
        first = self.actions[0]
        return all(a == first for a in self.actions)

    @cached_property
    def _positions(self) -> tuple[dict[str, int], ...]:
        return tuple({a: k for k, a in enumerate(labels)} for labels in self.actions)

    def action_index(self, player: int, label: str) -> int:
        try:
            return self._positions[player][label]
        except KeyError:
            raise KeyError(f"player {player} has no action {label!r}") from None

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*self.actions)

    def _flat_index(self, profile: Sequence[str]) -> int:
        if len(profile) != self.n:
            raise DimensionMismatch(f"profile has {len(profile)} entries for {self.n} players")
        idx = 0
        for i, label in enumerate(profile):
            idx = idx * len(self.actions[i]) + self.action_index(i, label)
        return idx

    def payoff(self, profile: Sequence[str], player: int | None = None):
        """Payoff vector at ``profile``, or a single player's entry."""
        row = self.table[self._flat_index(profile)]
        return row if player is None else row[player]

    def payoff_at(self, positions: Sequence[int]) -> tuple[Fraction, ...]:
        """Payoff vector addressed by action positions instead of labels."""
        idx = 0
        for i, k in enumerate(positions):
            idx = idx * len(self.actions[i]) + k
        return self.table[idx]

    @cached_property
    def tensor(self) -> np.ndarray:
        """Float copy of the payoffs with shape ``(n, |A_1|, ..., |A_n|)``."""
        arr = np.array([[float(x) for x in row] for row in self.table], dtype=float)
        return np.moveaxis(arr.reshape(self.shape + (self.n,)), -1, 0).copy()

    @cached_property
    def payoff_ids(self) -> np.ndarray:
        """Integer tensor shaped like :attr:`tensor`; equal payoffs get equal ids.

        Lets equality-only checks run in numpy without losing exactness.
        """
        ids: dict[tuple[int, int], int] = {}
        flat = [[ids.setdefault((x.numerator, x.denominator), len(ids)) for x in row]
                for row in self.table]
        arr = np.array(flat, dtype=np.int64).reshape(self.shape + (self.n,))
        return np.moveaxis(arr, -1, 0).copy()

    @cached_property
    def _hash(self) -> int:
        return hash((self.actions, self.table))

    def __hash__(self):
        return self._hash

    @cached_property
    def scale(self) -> float:
        """Largest absolute payoff (as a float), or 1 for an all-zero game."""
        m = float(np.abs(self.tensor).max())
        return m if m else 1.0

    def require_common_actions(self) -> tuple[str, ...]:
        if not self.common_actions:
            raise DifferentActionSets(
                "superrationality needs identical action lists for every player, got "
                + "; ".join(",".join(a) for a in self.actions))
        return self.actions[0]


@dataclass(frozen=True)
class SymmetryVerdict:
    symmetric: bool
    witness: tuple[Permutation, Profile, int] | None = None
    reason: str = ""

    def __bool__(self):
        return self.symmetric


def permutation_violation(g: Game, tau: Permutation) -> tuple[Profile, int] | None:
    """First ``(profile, player)`` where the payoff map fails to be invariant
    under ``tau``, or None.

    Invariance means ``pi_i(a) == pi_{tau^-1(i)}(a_tau(0), ..., a_tau(n-1))``.
    Requires common actions.
    """
    n = g.n
    if sorted(tau) != list(range(n)):
        raise ValueError(f"{tau} is not a permutation of range({n})")
    inv = [0] * n
    for k, t in enumerate(tau):
        inv[t] = k
    ids = g.payoff_ids
    # moved[j][a] == ids[j][a_tau(0), ..., a_tau(n-1)]
    moved = np.stack([np.transpose(ids[j], inv) for j in range(n)])
    bad = ids != moved[inv]
    if not bad.any():
        return None
    hit = np.argwhere(bad)
    first = min(hit.tolist(), key=lambda row: (row[1:], row[0]))
    player, pos = first[0], first[1:]
    return tuple(g.actions[m][k] for m, k in enumerate(pos)), player


def is_symmetric(g: Game) -> SymmetryVerdict:
    """Check payoff invariance under all player permutations.

    Only the adjacent transpositions are tested; they generate the symmetric
    group, and invariance is preserved under composition.
    """
    if not g.common_actions:
        return SymmetryVerdict(False, None, "differing action sets")
    for k in range(g.n - 1):
        tau = list(range(g.n))
        tau[k], tau[k + 1] = tau[k + 1], tau[k]
        tau = tuple(tau)
        hit = permutation_violation(g, tau)
        if hit is not None:
            prof, player = hit
            return SymmetryVerdict(False, (tau, prof, player),
                                   f"payoff of player {player} at {prof} changes under {tau}")
    return SymmetryVerdict(True)


def diagonal(g: Game) -> list[Profile]:
    acts = g.require_common_actions()
    return [(a,) * g.n for a in acts]


def sr_justifiable_actions(g: Game) -> tuple[str, ...]:
    """Actions a* such that every player weakly prefers (a*,...,a*) to every
    other all-same profile. Listed in action order; possibly empty."""
    acts = g.require_common_actions()
    diag = [g.payoff((a,) * g.n) for a in acts]
    best = [max(v[i] for v in diag) for i in range(g.n)]
    return tuple(a for a, v in zip(acts, diag) if all(v[i] == best[i] for i in range(g.n)))


def superrational_profiles(g: Game) -> list[Profile]:
    """Diagonal profiles that are payoff-maximal on the diagonal for every player."""
    diag = diagonal(g)
    out = []
    for cand in diag:
        pc = g.payoff(cand)
        if all(pc[i] >= g.payoff(other)[i] for other in diag for i in range(g.n)):
            out.append(cand)
    return out


def pure_nash(g: Game) -> list[Profile]:
    """All pure profiles without a strictly profitable unilateral deviation."""
    shape = g.shape
    # best[i][opp] = player i's best payoff against the others' positions opp
    best: list[dict[tuple[int, ...], Fraction]] = []
    for i in range(g.n):
        table: dict[tuple[int, ...], Fraction] = {}
        for pos in itertools.product(*(range(m) for m in shape)):
            key = pos[:i] + pos[i + 1:]
            v = g.payoff_at(pos)[i]
            if key not in table or v > table[key]:
                table[key] = v
        best.append(table)
    out = []
    for pos in itertools.product(*(range(m) for m in shape)):
        vec = g.payoff_at(pos)
        if all(vec[i] >= best[i][pos[:i] + pos[i + 1:]] for i in range(g.n)):
            out.append(tuple(g.actions[i][k] for i, k in enumerate(pos)))
    return out
