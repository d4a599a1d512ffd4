"""Finite Harsanyi type spaces and the epistemic conditions for superrational play.

A type of player i carries a belief: a finitely supported distribution over
the opponents' (action, type) pairs. Outcomes are tuples with one
``(action, type)`` pair per opponent, in increasing player order. In mixed
mode the action slot holds an index into the space's list of candidate mixed
strategies instead of an action label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import (BadCoordinate, ModeMismatch, TypeSetsDiffer, UnknownType)
from .game import Game, sr_justifiable_actions
from .mixed import (MixedStrategy, OptimizerConfig, diagonal_expected_payoff,
                    superrational_mixed)

PURE = "pure"
MIXED = "mixed"


@dataclass(frozen=True)
class FiniteDistribution:
    """Finitely supported probability distribution with exact weights."""

    items: tuple[tuple[Hashable, Fraction], ...]

    def __post_init__(self):
        items = tuple((o, Fraction(p)) for o, p in self.items)
        outcomes = [o for o, _ in items]
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("duplicate outcomes in distribution")
        if any(p < 0 for _, p in items):
            raise ValueError("negative probability")
        if sum(p for _, p in items) != 1:
            raise ValueError(f"probabilities sum to {sum(p for _, p in items)}, not 1")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "FiniteDistribution":
        return cls(tuple(mapping.items()))

    @classmethod
    def point(cls, outcome) -> "FiniteDistribution":
        return cls(((outcome, Fraction(1)),))

    @property
    def support(self) -> tuple:
        return tuple(o for o, p in self.items if p)

    def prob(self, outcome) -> Fraction:
        for o, p in self.items:
            if o == outcome:
                return p
        return Fraction(0)

    def as_dict(self) -> dict:
        return dict(self.items)


def pushforward(d: FiniteDistribution, f) -> FiniteDistribution:
    """Image of ``d`` under ``f``; masses of outcomes with equal images add up."""
    acc: dict = {}
    for o, p in d.items:
        key = f(o)
        acc[key] = acc.get(key, Fraction(0)) + p
    return FiniteDistribution(tuple(acc.items()))


def marginal(d: FiniteDistribution, coordinate: int, kind: str) -> FiniteDistribution:
    """Marginal on the action (``kind="action"``) or type (``kind="type"``) of
    the opponent stored at tuple position ``coordinate``."""
    if kind not in ("action", "type"):
        raise BadCoordinate(f"kind must be 'action' or 'type', got {kind!r}")
    slot = 0 if kind == "action" else 1
    for o, _ in d.items:
        if not isinstance(o, tuple) or not 0 <= coordinate < len(o):
            raise BadCoordinate(f"coordinate {coordinate} out of range for outcome {o!r}")
    return pushforward(d, lambda o: o[coordinate][slot])


def as_dirac(d: FiniteDistribution):
    """The outcome carrying all the mass, or None. Zero-mass entries are ignored."""
    live = [(o, p) for o, p in d.items if p]
    if len(live) == 1 and live[0][1] == 1:
        return live[0][0]
    return None


@dataclass(frozen=True)
class Verdict:
    ok: bool
    value: object = None     # certified action label / candidate index / strategy
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class HarsanyiSpace:
    game: Game
    types: tuple[tuple[str, ...], ...]
    beliefs: Mapping[tuple[int, str], FiniteDistribution]
    mode: str = PURE
    candidates: tuple[MixedStrategy, ...] = ()

    def __post_init__(self):
        g = self.game
        object.__setattr__(self, "types", tuple(tuple(t) for t in self.types))
        object.__setattr__(self, "beliefs", dict(self.beliefs))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        _validate_space(self)
        for (i, t), d in self.beliefs.items():
            if not isinstance(d, FiniteDistribution):
                raise TypeError(f"belief of {i}:{t} is not a FiniteDistribution")
            for o, _ in d.items:
                _check_tuple(self, i, o)
        if self.mode == MIXED:
            for c in self.candidates:
                if len(c) != len(g.actions[0]) or not g.common_actions:
                    raise ValueError("mixed candidates need common actions of matching size")

    def opponents(self, i: int) -> list[int]:
        return [j for j in range(self.game.n) if j != i]

    def position(self, i: int, j: int) -> int:
        if i == j or not 0 <= j < self.game.n:
            raise BadCoordinate(f"player {j} is not an opponent of {i}")
        return j if j < i else j - 1

    def belief(self, i: int, t: str) -> FiniteDistribution:
        if not 0 <= i < self.game.n or t not in self.types[i]:
            raise UnknownType(f"player {i} has no type {t!r}")
        return self.beliefs[(i, t)]

    def action_marginal(self, i, t, j) -> FiniteDistribution:
        return marginal(self.belief(i, t), self.position(i, j), "action")

    def type_marginal(self, i, t, j) -> FiniteDistribution:
        return marginal(self.belief(i, t), self.position(i, j), "type")

    @property
    def common_types(self) -> bool:
        return all(set(ts) == set(self.types[0]) for ts in self.types)


def _validate_space(space):
    g = space.game
    if space.mode not in (PURE, MIXED):
        raise ValueError(f"mode must be 'pure' or 'mixed', got {space.mode!r}")
    if len(space.types) != g.n:
        raise ValueError(f"{len(space.types)} type sets for {g.n} players")
    for i, ts in enumerate(space.types):
        if not ts:
            raise ValueError(f"player {i} has no types")
        if len(set(ts)) != len(ts):
            raise ValueError(f"player {i} has duplicate type labels")
    expected = {(i, t) for i in range(g.n) for t in space.types[i]}
    missing = expected - set(space.beliefs)
    if missing:
        i, t = sorted(missing)[0]
        raise ValueError(f"no belief given for type {t!r} of player {i}")
    extra = set(space.beliefs) - expected
    if extra:
        i, t = sorted(extra)[0]
        raise UnknownType(f"belief given for unknown type {t!r} of player {i}")
    if space.mode == MIXED and not space.candidates:
        raise ValueError("mixed mode needs at least one candidate strategy")


def _check_tuple(space, i, o):
    g = space.game
    if not isinstance(o, tuple) or len(o) != g.n - 1:
        raise ValueError(f"belief outcome {o!r} of player {i} needs {g.n - 1} (action, type) pairs")
    opps = [j for j in range(g.n) if j != i]
    for j, pair in zip(opps, o):
        if not isinstance(pair, tuple) or len(pair) != 2:
            raise ValueError(f"{pair!r} is not an (action, type) pair")
        a, t = pair
        if space.mode == PURE:
            if a not in g.actions[j]:
                raise ValueError(f"player {j} has no action {a!r}")
        else:
            if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < len(space.candidates):
                raise ModeMismatch(f"{a!r} is not a candidate index")
        if t not in space.types[j]:
            raise UnknownType(f"player {j} has no type {t!r}")


@dataclass(frozen=True)
class BayesianStrategy:
    """Map from one player's types to actions (pure) or candidate indices (mixed)."""

    player: int
    choice: Mapping[str, object] = field(hash=False)

    def __call__(self, t: str):
        try:
            return self.choice[t]
        except KeyError:
            raise UnknownType(f"strategy of player {self.player} undefined on type {t!r}") from None


def _check_strategy(h, b: BayesianStrategy):
    if not 0 <= b.player < h.game.n:
        raise ValueError(f"no player {b.player}")
    missing = set(h.types[b.player]) - set(b.choice)
    if missing:
        raise UnknownType(f"strategy of player {b.player} undefined on {sorted(missing)}")
    for t, v in b.choice.items():
        if h.mode == PURE:
            if not isinstance(v, str):
                raise ModeMismatch(f"pure strategy maps {t!r} to non-label {v!r}")
            if v not in h.game.actions[b.player]:
                raise ValueError(f"player {b.player} has no action {v!r}")
        else:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < len(h.candidates):
                raise ModeMismatch(f"mixed strategy maps {t!r} to non-candidate {v!r}")


def _require_common(h, i, t):
    if not h.common_types:
        raise TypeSetsDiffer("players do not share one set of type labels")
    h.belief(i, t)


def _certain_of_own_type(h, i, t) -> Verdict | None:
    for j in h.opponents(i):
        if as_dirac(h.type_marginal(i, t, j)) != t:
            return Verdict(False, reason=f"not certain that player {j + 1} is of type {t}")
    return None


def _common_action(h, i, t):
    seen = set()
    for j in h.opponents(i):
        a = as_dirac(h.action_marginal(i, t, j))
        if a is None:
            return None, f"uncertain about the action of player {j + 1}"
        seen.add(a)
    if len(seen) > 1:
        return None, "expects different actions from different opponents"
    return (seen.pop() if seen else None), ""


def is_superrational_type(h: HarsanyiSpace, i: int, t: str) -> Verdict:
    """Type ``t`` of player ``i`` is certain every opponent is also of type ``t``
    and will play one common superrationally justifiable action."""
    if h.mode != PURE:
        raise ModeMismatch("use is_superrational_type_mixed for mixed-mode spaces")
    _require_common(h, i, t)
    bad = _certain_of_own_type(h, i, t)
    if bad is not None:
        return bad
    srj = sr_justifiable_actions(h.game)
    a, why = _common_action(h, i, t)
    if why:
        return Verdict(False, reason=why)
    if a is None:  # single player: nothing to believe about
        return Verdict(True, srj[0]) if srj else Verdict(False, reason="no superrationally justifiable action")
    if a not in srj:
        return Verdict(False, reason=f"expected action {a} is not superrationally justifiable")
    return Verdict(True, a)


def is_sr_mixed_strategy(game: Game, sigma: MixedStrategy,
                         cfg: OptimizerConfig = OptimizerConfig()) -> Verdict:
    """Whether ``sigma`` attains every player's optimum on the mixed diagonal,
    up to ``cfg.tolerance`` relative to the payoff scale."""
    report = superrational_mixed(game, cfg)
    if report.status != "found":
        return Verdict(False, reason="the game has no superrational mixed profile")
    if report.symmetric:
        targets = [report.best_value] * game.n
    else:
        targets = [opt.value for opt in report.player_optima]
    slack = cfg.tolerance * game.scale
    for i, target in enumerate(targets):
        v = float(diagonal_expected_payoff(game, sigma, i))
        if abs(v - target) > slack:
            return Verdict(False, reason=f"diagonal payoff {v:.6g} of player {i + 1} "
                                         f"misses the optimum {target:.6g}")
    return Verdict(True, sigma)


def is_superrational_type_mixed(h: HarsanyiSpace, i: int, t: str,
                                cfg: OptimizerConfig = OptimizerConfig()) -> Verdict:
    """Mixed counterpart of :func:`is_superrational_type`.

    On success ``value`` is the candidate index the type is certain of.
    """
    if h.mode != MIXED:
        raise ModeMismatch("is_superrational_type_mixed needs a mixed-mode space")
    _require_common(h, i, t)
    bad = _certain_of_own_type(h, i, t)
    if bad is not None:
        return bad
    c, why = _common_action(h, i, t)
    if why:
        return Verdict(False, reason=why)
    if c is None:
        report = superrational_mixed(h.game, cfg)
        if report.status != "found":
            return Verdict(False, reason="the game has no superrational mixed profile")
        for k, cand in enumerate(h.candidates):
            if is_sr_mixed_strategy(h.game, cand, cfg):
                return Verdict(True, k)
        return Verdict(False, reason="no candidate is a superrational mixed strategy")
    check = is_sr_mixed_strategy(h.game, h.candidates[c], cfg)
    if not check:
        return Verdict(False, reason=f"candidate {c}: {check.reason}")
    return Verdict(True, c)


def _type_verdict(h, i, t, cfg):
    if h.mode == PURE:
        return is_superrational_type(h, i, t)
    return is_superrational_type_mixed(h, i, t, cfg)


def is_superrational_bayesian_strategy(h: HarsanyiSpace, b: BayesianStrategy,
                                       cfg: OptimizerConfig = OptimizerConfig()) -> Verdict:
    """Every superrational type of ``b.player`` plays what it is certain the others play.

    ``witness`` is the first type (in declaration order) where this fails.
    """
    _check_strategy(h, b)
    for t in h.types[b.player]:
        v = _type_verdict(h, b.player, t, cfg)
        if v and b(t) != v.value:
            return Verdict(False, reason=f"type {t} is superrational for {v.value!r} "
                                         f"but the strategy plays {b(t)!r}", witness=t)
    return Verdict(True)


@dataclass(frozen=True)
class PlayResult:
    profile: tuple
    theorem_flag: bool
    superrational_profile: tuple | None = None


def _check_play_inputs(h, types, strategies):
    if len(types) != h.game.n or len(strategies) != h.game.n:
        raise ValueError("need one type and one strategy per player")
    for i, (t, b) in enumerate(zip(types, strategies)):
        if t not in h.types[i]:
            raise UnknownType(f"player {i} has no type {t!r}")
        if b.player != i:
            raise ValueError(f"strategy #{i} belongs to player {b.player}")
        _check_strategy(h, b)


def play(h: HarsanyiSpace, types: Sequence[str], strategies: Sequence[BayesianStrategy],
         cfg: OptimizerConfig = OptimizerConfig()) -> PlayResult:
    """Apply each player's strategy to their type.

    ``theorem_flag`` is raised when the premises for a guaranteed superrational
    outcome hold: a unique superrationally justifiable action (pure mode) or
    strategy (mixed mode), every player's type superrational, every strategy
    superrational.
    """
    _check_play_inputs(h, types, strategies)
    picks = tuple(b(t) for b, t in zip(strategies, types))
    if h.mode == PURE:
        profile: tuple = picks
    else:
        profile = tuple(h.candidates[c] for c in picks)
    flag, target = False, None
    if h.common_types and h.game.common_actions:
        if h.mode == PURE:
            srj = sr_justifiable_actions(h.game)
            if len(srj) == 1:
                target = (srj[0],) * h.game.n
        else:
            report = superrational_mixed(h.game, cfg)
            if report.status == "found" and len(report.maximizers) == 1:
                target = (report.maximizers[0].strategy,) * h.game.n
        if target is not None:
            flag = all(_type_verdict(h, i, t, cfg) for i, t in enumerate(types)) and \
                all(is_superrational_bayesian_strategy(h, b, cfg) for b in strategies)
    return PlayResult(profile, flag, target)


def nash_epistemic_check(h: HarsanyiSpace, types: Sequence[str],
                         strategies: Sequence[BayesianStrategy], target: Sequence[str]) -> bool:
    """Each player is certain of the others' target actions, plays their own
    target action, and that action is a best reply to the others'."""
    if h.mode != PURE:
        raise ModeMismatch("the Nash check is defined for pure-action spaces")
    _check_play_inputs(h, types, strategies)
    g = h.game
    target = tuple(target)
    for i, t in enumerate(types):
        for j in h.opponents(i):
            if as_dirac(h.action_marginal(i, t, j)) != target[j]:
                return False
        if strategies[i](t) != target[i]:
            return False
        here = g.payoff(target, i)
        for a in g.actions[i]:
            if g.payoff(target[:i] + (a,) + target[i + 1:], i) > here:
                return False
    return True


def make_superrational_space(game: Game, mode: str = PURE,
                             cfg: OptimizerConfig = OptimizerConfig(),
                             type_label: str = "t") -> HarsanyiSpace:
    """One type per player, certain that everybody shares it and plays the
    (first) superrationally justifiable action or mixed strategy."""
    if mode == PURE:
        srj = sr_justifiable_actions(game)
        if not srj:
            raise ValueError("the game has no superrationally justifiable action")
        act, candidates = srj[0], ()
    else:
        report = superrational_mixed(game, cfg)
        if report.status != "found":
            raise ValueError("the game has no superrational mixed profile")
        act, candidates = 0, (report.maximizers[0].strategy,)
    beliefs = {}
    for i in range(game.n):
        outcome = tuple((act, type_label) for _ in range(game.n - 1))
        beliefs[(i, type_label)] = FiniteDistribution.point(outcome)
    return HarsanyiSpace(game, tuple((type_label,) for _ in range(game.n)), beliefs,
                         mode, candidates)


def superrational_strategy(h: HarsanyiSpace, i: int,
                           cfg: OptimizerConfig = OptimizerConfig()) -> BayesianStrategy:
    """A superrational Bayesian strategy for player ``i``: superrational types
    play what they are certain of, other types play the first action/candidate."""
    default = h.game.actions[i][0] if h.mode == PURE else 0
    choice = {}
    for t in h.types[i]:
        v = _type_verdict(h, i, t, cfg) if h.common_types else Verdict(False)
        choice[t] = v.value if v else default
    return BayesianStrategy(i, choice)


def superrational_types(h: HarsanyiSpace, i: int,
                        cfg: OptimizerConfig = OptimizerConfig()) -> list[tuple[str, object]]:
    return [(t, v.value) for t in h.types[i] if (v := _type_verdict(h, i, t, cfg))]

