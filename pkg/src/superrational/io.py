"""JSON documents for games and type spaces.

Payoffs and probabilities are written as strings (``"3"``, ``"-10"``,
``"1/2"``) so nothing is lost to floating point. Player indices in files are
1-based; candidate mixed strategies are referred to by their 0-based position
in the ``candidates`` list.

Game document::

    {"players": 2,
     "actions": [["C", "D"], ["C", "D"]],
     "payoffs": {"C,C": ["3", "3"], "C,D": ["0", "5"], ...}}

Type-space document::

    {"kind": "harsanyi" | "bk", "mode": "pure" | "mixed",
     "game": {...} or "path/relative/to/this/file.json",
     "types": [["r", "s"], ["u"]],
     "candidates": [["1/3", "2/3"]],                      # mixed mode only
     "beliefs": {"1:r": [{"prob": "1", "actions": {"2": "C"}, "types": {"2": "u"}}],   # harsanyi
                 "1:r": [[["C", "u"]]]},                                          # bk
     "states": [["C", "r"], ["C", "u"]]}                  # bk, optional
"""

from __future__ import annotations

import itertools
import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .bk import BKSpace, PlayerState
from .epistemic import (MIXED, PURE, BayesianStrategy, FiniteDistribution, HarsanyiSpace,
                        _check_strategy)
from .errors import ParseError, SuperrationalError
from .game import Game
from .mixed import MixedStrategy

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(text, where: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ParseError(f"{where}: expected a rational string like \"3\" or \"-1/2\", got {text!r}")
    value = text.replace(" ", "")
    if "/" in value and int(value.split("/")[1]) == 0:
        raise ParseError(f"{where}: zero denominator in {text!r}")
    return Fraction(value)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    return doc[key]


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _player(key, n: int, where: str) -> int:
    try:
        k = int(key)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: {key!r} is not a player number") from None
    if not 1 <= k <= n:
        raise ParseError(f"{where}: player {k} out of range 1..{n}")
    return k - 1


# -- games ------------------------------------------------------------------

def game_from_dict(doc: Any, where: str = "game") -> Game:
    n = _need(doc, "players", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{where}: 'players' must be a positive integer")
    actions = _need(doc, "actions", where)
    if not isinstance(actions, list) or len(actions) != n:
        raise ParseError(f"{where}: 'actions' must list one label list per player ({n})")
    for i, labels in enumerate(actions):
        if not isinstance(labels, list) or not labels or not all(isinstance(a, str) for a in labels):
            raise ParseError(f"{where}: actions of player {i + 1} must be a nonempty list of strings")
        if any("," in a or a != a.strip() or not a for a in labels):
            raise ParseError(f"{where}: action labels of player {i + 1} must be nonempty, "
                             "without commas or surrounding spaces")
        if len(set(labels)) != len(labels):
            raise ParseError(f"{where}: duplicate action labels for player {i + 1}")
    payoffs = _need(doc, "payoffs", where)
    if not isinstance(payoffs, dict):
        raise ParseError(f"{where}: 'payoffs' must be an object")
    table = {}
    for key, vec in payoffs.items():
        prof = tuple(key.split(","))
        if len(prof) != n or any(a not in actions[i] for i, a in enumerate(prof)):
            raise ParseError(f"{where}: payoff key {key!r} is not an action profile")
        if not isinstance(vec, list) or len(vec) != n:
            raise ParseError(f"{where}: payoff {key!r} needs {n} entries")
        table[prof] = [parse_rational(x, f"{where}: payoff {key!r}") for x in vec]
    try:
        for prof in itertools.product(*actions):
            if prof not in table:
                raise ParseError(f"{where}: missing payoff for profile {','.join(prof)!r}")
        return Game.from_payoffs(actions, table)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{where}: {exc}") from None


def game_to_dict(g: Game) -> dict:
    return {
        "players": g.n,
        "actions": [list(a) for a in g.actions],
        "payoffs": {",".join(p): [format_rational(x) for x in g.payoff(p)] for p in g.profiles()},
    }


def read_game(path: str) -> Game:
    return game_from_dict(_load(path), where=path)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- type spaces --------------------------------------------------------------

@dataclass(frozen=True)
class TypeSpaceFile:
    kind: str                                  # "harsanyi" or "bk"
    space: HarsanyiSpace | BKSpace
    states: tuple[PlayerState, ...] | None = None


def _candidate(vec, where: str) -> MixedStrategy:
    if not isinstance(vec, list):
        raise ParseError(f"{where}: a candidate is a list of probability strings")
    try:
        return MixedStrategy(tuple(parse_rational(p, where) for p in vec))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{where}: {exc}") from None


def _action(value, mode: str, where: str):
    if mode == PURE:
        if not isinstance(value, str):
            raise ParseError(f"{where}: pure-mode actions are labels, got {value!r}")
    elif not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{where}: mixed-mode actions are candidate indices, got {value!r}")
    return value


def _belief_key(key: str, n: int, types, where: str) -> tuple[int, str]:
    if not isinstance(key, str) or ":" not in key:
        raise ParseError(f"{where}: belief key {key!r} must look like 'player:type'")
    p, t = key.split(":", 1)
    i = _player(p, n, f"{where}: belief key {key!r}")
    if t not in types[i]:
        raise ParseError(f"{where}: belief key {key!r} names an unknown type of player {i + 1}")
    return i, t


def _harsanyi_belief(entries, i: int, n: int, mode: str, where: str) -> FiniteDistribution:
    if not isinstance(entries, list) or not entries:
        raise ParseError(f"{where}: belief must be a nonempty list of weighted outcomes")
    opps = [j for j in range(n) if j != i]
    items = []
    for e in entries:
        prob = parse_rational(_need(e, "prob", where), where)
        acts, tys = _need(e, "actions", where), _need(e, "types", where)
        if not isinstance(acts, dict) or not isinstance(tys, dict):
            raise ParseError(f"{where}: 'actions' and 'types' map opponent numbers to labels")
        a_map = {_player(k, n, where): v for k, v in acts.items()}
        t_map = {_player(k, n, where): v for k, v in tys.items()}
        if set(a_map) != set(opps) or set(t_map) != set(opps):
            raise ParseError(f"{where}: each outcome needs an action and a type for players "
                             + ", ".join(str(j + 1) for j in opps))
        items.append((tuple((_action(a_map[j], mode, where), t_map[j]) for j in opps), prob))
    try:
        return FiniteDistribution(tuple(items))
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _bk_belief(entries, i: int, n: int, mode: str, where: str) -> tuple:
    if not isinstance(entries, list):
        raise ParseError(f"{where}: belief must be a list of tuples")
    if not entries:
        raise ParseError(f"{where}: empty belief set")
    out = []
    for u in entries:
        if not isinstance(u, list) or len(u) != n - 1:
            raise ParseError(f"{where}: each tuple needs {n - 1} [action, type] pairs")
        pairs = []
        for pair in u:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}: {pair!r} is not an [action, type] pair")
            pairs.append((_action(pair[0], mode, where), pair[1]))
        out.append(tuple(pairs))
    return tuple(out)


def type_space_from_dict(doc: Any, where: str = "type space", base_dir: str = ".") -> TypeSpaceFile:
    kind = _need(doc, "kind", where)
    if kind not in ("harsanyi", "bk"):
        raise ParseError(f"{where}: 'kind' must be 'harsanyi' or 'bk', got {kind!r}")
    mode = doc.get("mode", PURE)
    if mode not in (PURE, MIXED):
        raise ParseError(f"{where}: 'mode' must be 'pure' or 'mixed', got {mode!r}")
    gdoc = _need(doc, "game", where)
    if isinstance(gdoc, str):
        game = read_game(os.path.join(base_dir, gdoc))
    else:
        game = game_from_dict(gdoc, f"{where}: game")
    n = game.n
    types = _need(doc, "types", where)
    if not isinstance(types, list) or len(types) != n:
        raise ParseError(f"{where}: 'types' must list one label list per player ({n})")
    for i, ts in enumerate(types):
        if not isinstance(ts, list) or not ts or not all(isinstance(t, str) and t for t in ts):
            raise ParseError(f"{where}: types of player {i + 1} must be a nonempty list of strings")
    candidates = ()
    if mode == MIXED:
        raw = _need(doc, "candidates", where)
        if not isinstance(raw, list) or not raw:
            raise ParseError(f"{where}: mixed mode needs a nonempty 'candidates' list")
        candidates = tuple(_candidate(c, f"{where}: candidate {k}") for k, c in enumerate(raw))
    elif "candidates" in doc:
        raise ParseError(f"{where}: 'candidates' only belongs in mixed mode")
    raw_beliefs = _need(doc, "beliefs", where)
    if not isinstance(raw_beliefs, dict):
        raise ParseError(f"{where}: 'beliefs' must be an object")
    beliefs = {}
    for key, entries in raw_beliefs.items():
        i, t = _belief_key(key, n, types, where)
        sub = f"{where}: belief of {key}"
        if kind == "harsanyi":
            beliefs[(i, t)] = _harsanyi_belief(entries, i, n, mode, sub)
        else:
            beliefs[(i, t)] = _bk_belief(entries, i, n, mode, sub)
    for i, ts in enumerate(types):
        for t in ts:
            if (i, t) not in beliefs:
                raise ParseError(f"{where}: missing belief for type '{i + 1}:{t}'")
    states = None
    if "states" in doc:
        if kind != "bk":
            raise ParseError(f"{where}: 'states' only belongs in bk documents")
        raw = doc["states"]
        if not isinstance(raw, list) or len(raw) != n or \
                not all(isinstance(p, list) and len(p) == 2 for p in raw):
            raise ParseError(f"{where}: 'states' must give one [action, type] pair per player")
        states = tuple(PlayerState(_action(a, mode, where), t) for a, t in raw)
    cls = HarsanyiSpace if kind == "harsanyi" else BKSpace
    try:
        space = cls(game, tuple(tuple(ts) for ts in types), beliefs, mode, candidates)
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        raise ParseError(f"{where}: {msg}") from None
    return TypeSpaceFile(kind, space, states)


def read_type_space(path: str) -> TypeSpaceFile:
    return type_space_from_dict(_load(path), where=path, base_dir=os.path.dirname(path) or ".")


def _format_prob(p) -> str:
    if isinstance(p, float):
        return format_rational(Fraction(p).limit_denominator(10 ** 12))
    return format_rational(p)


def _candidate_to_list(sigma: MixedStrategy) -> list[str]:
    if sigma.exact:
        return [format_rational(p) for p in sigma.probs]
    # float candidate: round to nearby rationals, keep the vector summing to 1
    head = [Fraction(p).limit_denominator(10 ** 12) for p in sigma.probs[:-1]]
    return [format_rational(p) for p in head] + [format_rational(1 - sum(head))]


def type_space_to_dict(f: TypeSpaceFile) -> dict:
    s = f.space
    n = s.game.n
    doc: dict = {"kind": f.kind, "mode": s.mode, "game": game_to_dict(s.game),
                 "types": [list(ts) for ts in s.types]}
    if s.mode == MIXED:
        doc["candidates"] = [_candidate_to_list(c) for c in s.candidates]
    beliefs = {}
    for i, ts in enumerate(s.types):
        opps = [j for j in range(n) if j != i]
        for t in ts:
            b = s.beliefs[(i, t)]
            if f.kind == "harsanyi":
                beliefs[f"{i + 1}:{t}"] = [
                    {"prob": format_rational(p),
                     "actions": {str(j + 1): a for j, (a, _) in zip(opps, o)},
                     "types": {str(j + 1): x for j, (_, x) in zip(opps, o)}}
                    for o, p in b.items]
            else:
                beliefs[f"{i + 1}:{t}"] = [[[a, x] for a, x in u] for u in b]
    doc["beliefs"] = beliefs
    if f.states is not None:
        doc["states"] = [[st.action, st.type] for st in f.states]
    return doc


# -- strategies ----------------------------------------------------------------

@dataclass(frozen=True)
class StrategyFile:
    strategies: tuple[BayesianStrategy, ...]
    types: tuple[str, ...] | None = None


def strategies_from_dict(doc: Any, h: HarsanyiSpace, where: str = "strategies") -> StrategyFile:
    """``{"strategies": {"1": {"t": "C"}, ...}, "types": {"1": "t", ...}}``;
    ``types`` (the realized type of each player) is optional."""
    n = h.game.n
    raw = _need(doc, "strategies", where)
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: 'strategies' must be an object")
    by_player = {}
    for key, mapping in raw.items():
        i = _player(key, n, where)
        if not isinstance(mapping, dict):
            raise ParseError(f"{where}: strategy of player {i + 1} must map types to actions")
        for t, v in mapping.items():
            if t not in h.types[i]:
                raise ParseError(f"{where}: player {i + 1} has no type {t!r}")
            _action(v, h.mode, f"{where}: player {i + 1}")
        missing = [t for t in h.types[i] if t not in mapping]
        if missing:
            raise ParseError(f"{where}: strategy of player {i + 1} misses type {missing[0]!r}")
        by_player[i] = BayesianStrategy(i, dict(mapping))
    if set(by_player) != set(range(n)):
        k = min(set(range(n)) - set(by_player))
        raise ParseError(f"{where}: missing strategy for player {k + 1}")
    types = None
    if "types" in doc:
        rt = doc["types"]
        if not isinstance(rt, dict):
            raise ParseError(f"{where}: 'types' must map players to type labels")
        tmap = {_player(k, n, where): v for k, v in rt.items()}
        if set(tmap) != set(range(n)):
            raise ParseError(f"{where}: 'types' needs one type per player")
        for i, t in tmap.items():
            if t not in h.types[i]:
                raise ParseError(f"{where}: player {i + 1} has no type {t!r}")
        types = tuple(tmap[i] for i in range(n))
    try:
        for b in by_player.values():
            _check_strategy(h, b)
    except (SuperrationalError, ValueError) as exc:
        raise ParseError(f"{where}: {exc.args[0] if exc.args else exc}") from None
    return StrategyFile(tuple(by_player[i] for i in range(n)), types)


def read_strategies(path: str, h: HarsanyiSpace) -> StrategyFile:
    return strategies_from_dict(_load(path), h, where=path)
