"""Possibility-style (Brandenburger-Keisler) type spaces.

Each type of player i believes a finite nonempty *set* of opponent states,
one ``(action, type)`` pair per opponent in increasing player order. Types are
tagged with their owner, ``(player, label)``, so equal labels of different
players stay distinct. Identification relations are partitions of those tagged
types; the greatest one is found by partition refinement, as for bisimulation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .epistemic import (MIXED, PURE, Verdict, _check_tuple, _validate_space,
                        is_sr_mixed_strategy)
from .errors import NotAPartition, TypeSetsDiffer, UnknownType
from .game import Game, is_symmetric, sr_justifiable_actions
from .mixed import MixedStrategy, OptimizerConfig, superrational_mixed

TaggedType = tuple[int, str]
BeliefTuple = tuple[tuple[object, str], ...]


@dataclass(frozen=True)
class PlayerState:
    action: object   # action label, or candidate index in mixed mode
    type: str


@dataclass(frozen=True)
class BKSpace:
    game: Game
    types: tuple[tuple[str, ...], ...]
    beliefs: Mapping[tuple[int, str], tuple[BeliefTuple, ...]]
    mode: str = PURE
    candidates: tuple[MixedStrategy, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(tuple(t) for t in self.types))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        clean = {}
        for key, tuples in dict(self.beliefs).items():
            seen = []
            for u in tuples:
                u = tuple(tuple(p) for p in u)
                if u not in seen:
                    seen.append(u)
            clean[key] = tuple(seen)
        object.__setattr__(self, "beliefs", clean)
        _validate_space(self)
        for (i, t), tuples in clean.items():
            if not tuples:
                raise ValueError(f"type {t!r} of player {i} has an empty belief set")
            for u in tuples:
                _check_tuple(self, i, u)

    def belief(self, i: int, t: str) -> tuple[BeliefTuple, ...]:
        if not 0 <= i < self.game.n or t not in self.types[i]:
            raise UnknownType(f"player {i} has no type {t!r}")
        return self.beliefs[(i, t)]

    @property
    def common_types(self) -> bool:
        return all(set(ts) == set(self.types[0]) for ts in self.types)

    @property
    def carrier(self) -> list[TaggedType]:
        """All tagged types, player by player in declaration order."""
        return [(i, t) for i, ts in enumerate(self.types) for t in ts]

    def opponents(self, i: int) -> list[int]:
        return [j for j in range(self.game.n) if j != i]


# -- superrational types and states (common type set) --------------------

def _justified(s: BKSpace, a, cfg: OptimizerConfig) -> bool:
    if s.mode == PURE:
        return a in sr_justifiable_actions(s.game)
    return bool(is_sr_mixed_strategy(s.game, s.candidates[a], cfg))


def _singleton_action(s: BKSpace, i: int, t: str):
    """The common action ``a`` if ``f_i(t)`` is one tuple with the same action
    for every opponent, with the types in that tuple; else ``(None, reason)``."""
    f = s.belief(i, t)
    if len(f) != 1:
        return None, None, f"belief set has {len(f)} elements"
    (u,) = f
    acts = {a for a, _ in u}
    if len(acts) > 1:
        return None, None, "expects different actions from different opponents"
    if not u:
        return None, (), ""
    return acts.pop(), tuple(x for _, x in u), ""


def is_bk_superrational_type(s: BKSpace, i: int, t: str,
                             cfg: OptimizerConfig = OptimizerConfig()) -> Verdict:
    """``f_i(t)`` is the single tuple ``((a,t),...,(a,t))`` with ``a`` superrationally justifiable."""
    if not s.common_types:
        raise TypeSetsDiffer("players do not share one set of type labels")
    a, others, why = _singleton_action(s, i, t)
    if why:
        return Verdict(False, reason=why)
    if any(x != t for x in others):
        return Verdict(False, reason=f"does not expect every opponent to be of type {t}")
    if a is None:  # single player
        if s.mode == PURE:
            srj = sr_justifiable_actions(s.game)
            return Verdict(True, srj[0]) if srj else Verdict(False, reason="no superrationally justifiable action")
        ok = [k for k in range(len(s.candidates)) if _justified(s, k, cfg)]
        return Verdict(True, ok[0]) if ok else Verdict(False, reason="no superrational candidate")
    if not _justified(s, a, cfg):
        return Verdict(False, reason=f"expected action {a!r} is not superrationally justifiable")
    return Verdict(True, a)


def as_state(st) -> PlayerState:
    return st if isinstance(st, PlayerState) else PlayerState(*st)


def is_superrational_state(s: BKSpace, i: int, st, weak: bool = False,
                           cfg: OptimizerConfig = OptimizerConfig()) -> bool:
    """Player ``i`` is in state ``(a, t)`` with ``t`` a superrational type for ``a``.

    ``weak`` drops the requirement that ``a`` be superrationally justifiable.
    """
    st = as_state(st)
    if not s.common_types:
        raise TypeSetsDiffer("players do not share one set of type labels")
    if weak:
        a, others, why = _singleton_action(s, i, st.type)
        if why or any(x != st.type for x in others):
            return False
        return a is None or a == st.action
    v = is_bk_superrational_type(s, i, st.type, cfg)
    return bool(v) and v.value == st.action


# -- identification relations ---------------------------------------------

@dataclass(frozen=True)
class IdentificationRelation:
    """An equivalence on tagged types, stored as its blocks."""

    blocks: tuple[tuple[TaggedType, ...], ...]

    @classmethod
    def from_blocks(cls, s: BKSpace, blocks: Iterable[Iterable[TaggedType]]) -> "IdentificationRelation":
        order = {x: k for k, x in enumerate(s.carrier)}
        norm = []
        seen: set = set()
        for b in blocks:
            b = [tuple(x) for x in b]
            if not b:
                raise NotAPartition("empty block")
            for x in b:
                if x not in order:
                    raise NotAPartition(f"{x} is not a type of the space")
                if x in seen:
                    raise NotAPartition(f"{x} occurs in two blocks")
                seen.add(x)
            norm.append(tuple(sorted(b, key=order.__getitem__)))
        if seen != set(order):
            missing = min(set(order) - seen, key=order.__getitem__)
            raise NotAPartition(f"{missing} is not covered")
        norm.sort(key=lambda b: order[b[0]])
        return cls(tuple(norm))

    @classmethod
    def generated_by(cls, s: BKSpace, pairs: Iterable[tuple[TaggedType, TaggedType]]) -> "IdentificationRelation":
        """Smallest equivalence containing ``pairs``."""
        parent = {x: x for x in s.carrier}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in pairs:
            x, y = tuple(x), tuple(y)
            if x not in parent or y not in parent:
                raise NotAPartition(f"{x if x not in parent else y} is not a type of the space")
            parent[find(x)] = find(y)
        groups: dict = {}
        for x in s.carrier:
            groups.setdefault(find(x), []).append(x)
        return cls.from_blocks(s, groups.values())

    @classmethod
    def identity(cls, s: BKSpace) -> "IdentificationRelation":
        return cls.from_blocks(s, [[x] for x in s.carrier])

    def block_index(self) -> dict[TaggedType, int]:
        return {x: k for k, b in enumerate(self.blocks) for x in b}

    def related(self, x: TaggedType, y: TaggedType) -> bool:
        idx = self.block_index()
        return idx[tuple(x)] == idx[tuple(y)]

    def refines(self, other: "IdentificationRelation") -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        idx = other.block_index()
        return all(len({idx[x] for x in b}) == 1 for b in self.blocks)


def _permutations(n: int, i: int, j: int):
    """Permutations of range(n) with tau(i) == j."""
    rest_src = [k for k in range(n) if k != i]
    rest_dst = [k for k in range(n) if k != j]
    for image in itertools.permutations(rest_dst):
        tau = [0] * n
        tau[i] = j
        for k, v in zip(rest_src, image):
            tau[k] = v
        yield tuple(tau)


def _pos(i: int, k: int) -> int:
    return k if k < i else k - 1


def _first_unmatched(s: BKSpace, x: TaggedType, y: TaggedType, tau, block):
    """First tuple of ``f(x)`` without a partner in ``f(y)`` under ``tau``, or None."""
    i, j = x[0], y[0]
    ys = s.beliefs[y]
    for u in s.beliefs[x]:
        ok = False
        for v in ys:
            for k in s.opponents(i):
                a, uk = u[_pos(i, k)]
                b, vk = v[_pos(j, tau[k])]
                if a != b or block[(k, uk)] != block[(tau[k], vk)]:
                    break
            else:
                ok = True
                break
        if not ok:
            return u
    return None


def _match(s: BKSpace, x, y, block):
    """None if some permutation matches ``x`` into ``y``; else an unmatched tuple."""
    witness = None
    for tau in _permutations(s.game.n, x[0], y[0]):
        u = _first_unmatched(s, x, y, tau, block)
        if u is None:
            return None
        if witness is None:
            witness = u
    return witness


def is_identification_relation(s: BKSpace, r: IdentificationRelation) -> Verdict:
    """Check the matching condition for every ordered pair of related types.

    On failure ``witness`` is ``((x, y), u)``: related tagged types ``x``, ``y``
    and a tuple ``u`` of ``f(x)`` that no permutation can match into ``f(y)``.
    """
    r = IdentificationRelation.from_blocks(s, r.blocks)
    block = r.block_index()
    for b in r.blocks:
        for x in b:
            for y in b:
                u = _match(s, x, y, block)
                if u is not None:
                    return Verdict(False, reason=f"{x} and {y} are related but {u} has no match",
                                   witness=((x, y), u))
    return Verdict(True)


def _refine_once(s: BKSpace, r: IdentificationRelation) -> IdentificationRelation:
    # Mutual matchability is an equivalence inside a block (identity permutation
    # for reflexivity, composed permutations for transitivity), so greedy
    # grouping against one representative per class is exact.
    block = r.block_index()
    out = []
    for b in r.blocks:
        classes: list[list[TaggedType]] = []
        for x in b:
            for cls in classes:
                rep = cls[0]
                if _match(s, x, rep, block) is None and _match(s, rep, x, block) is None:
                    cls.append(x)
                    break
            else:
                classes.append([x])
        out.extend(classes)
    return IdentificationRelation.from_blocks(s, out)


def refinement_trace(s: BKSpace) -> list[IdentificationRelation]:
    """Partitions visited by the refinement, from one block to the fixpoint."""
    r = IdentificationRelation.from_blocks(s, [s.carrier])
    trace = [r]
    while True:
        nxt = _refine_once(s, r)
        if nxt == r:
            return trace
        trace.append(nxt)
        r = nxt


def greatest_identification_relation(s: BKSpace) -> IdentificationRelation:
    """Coarsest identification relation; contains every other one."""
    return refinement_trace(s)[-1]


# -- dissimilar type spaces ------------------------------------------------

def is_superrational_state_dissimilar(s: BKSpace, i: int, st, weak: bool = False,
                                      cfg: OptimizerConfig = OptimizerConfig(),
                                      relation: IdentificationRelation | None = None) -> bool:
    """``f_i(t)`` is the single tuple ``((a,t_j))_{j != i}`` with every ``t_j``
    identified with ``t``, and the player plays ``a``.

    Identification is decided with the greatest relation. ``weak`` drops the
    requirement that ``a`` be superrationally justifiable.
    """
    st = as_state(st)
    a, others, why = _singleton_action(s, i, st.type)
    if why:
        return False
    if a is None:  # single player
        if weak:
            return True
        v = is_bk_superrational_type(s, i, st.type, cfg) if s.common_types else Verdict(False)
        return bool(v) and v.value == st.action
    if a != st.action:
        return False
    r = relation if relation is not None else greatest_identification_relation(s)
    idx = r.block_index()
    me = idx[(i, st.type)]
    if any(idx[(j, tj)] != me for j, tj in zip(s.opponents(i), others)):
        return False
    return weak or _justified(s, a, cfg)


@dataclass(frozen=True)
class BKOutcome:
    profile: tuple
    theorem_flag: bool
    superrational_profile: tuple | None = None


def bk_outcome(s: BKSpace, states: Sequence, cfg: OptimizerConfig = OptimizerConfig()) -> BKOutcome:
    """Project the actions of a state of the world.

    ``theorem_flag`` is raised when the game is symmetric, there is a unique
    superrationally justifiable action (pure) or mixed strategy (mixed), and
    each player's state passes the common-type-set check or the
    dissimilar-type-space check.
    """
    states = [as_state(st) for st in states]
    if len(states) != s.game.n:
        raise ValueError("need one state per player")
    for i, st in enumerate(states):
        s.belief(i, st.type)
        if s.mode == PURE and st.action not in s.game.actions[i]:
            raise ValueError(f"player {i} has no action {st.action!r}")
        if s.mode == MIXED and not (isinstance(st.action, int) and 0 <= st.action < len(s.candidates)):
            raise ValueError(f"{st.action!r} is not a candidate index")
    if s.mode == PURE:
        profile = tuple(st.action for st in states)
    else:
        profile = tuple(s.candidates[st.action] for st in states)
    target = None
    if is_symmetric(s.game):
        if s.mode == PURE:
            srj = sr_justifiable_actions(s.game)
            if len(srj) == 1:
                target = (srj[0],) * s.game.n
        else:
            report = superrational_mixed(s.game, cfg)
            if report.status == "found" and len(report.maximizers) == 1:
                target = (report.maximizers[0].strategy,) * s.game.n
    flag = False
    if target is not None:
        r = greatest_identification_relation(s)
        flag = all((s.common_types and is_superrational_state(s, i, st, cfg=cfg))
                   or is_superrational_state_dissimilar(s, i, st, cfg=cfg, relation=r)
                   for i, st in enumerate(states))
    return BKOutcome(profile, flag, target)


def make_superrational_bk_space(game: Game, mode: str = PURE,
                                cfg: OptimizerConfig = OptimizerConfig(),
                                type_label: str = "t") -> BKSpace:
    """One type per player whose belief set is the single all-``a`` tuple."""
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
    u = tuple((act, type_label) for _ in range(game.n - 1))
    beliefs = {(i, type_label): (u,) for i in range(game.n)}
    return BKSpace(game, tuple((type_label,) for _ in range(game.n)), beliefs, mode, candidates)
