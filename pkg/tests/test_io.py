import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from helpers import random_bk, random_game, random_harsanyi, symmetric_with_unique_srj
from superrational import catalog
from superrational.epistemic import make_superrational_space
from superrational.errors import ParseError
from superrational.io import (TypeSpaceFile, dumps, game_from_dict, game_to_dict, parse_rational,
                              read_game, read_strategies, read_type_space, strategies_from_dict,
                              type_space_from_dict, type_space_to_dict)
from superrational.mixed import MixedStrategy

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def test_parse_rational():
    assert parse_rational("3", "x") == 3
    assert parse_rational("-1/2", "x") == Fraction(-1, 2)
    assert parse_rational(" 4 / 6 ", "x") == Fraction(2, 3)
    for bad in ("0.5", "1/0", "", "a", 3, None, "1/-2"):
        with pytest.raises(ParseError):
            parse_rational(bad, "x")


def test_game_round_trip():
    rng = np.random.default_rng(40)
    games = [catalog.prisoners_dilemma(), catalog.battle_of_sexes(), catalog.platonia(3)]
    games += [random_game(rng, tuple(int(m) for m in rng.integers(1, 4, int(rng.integers(1, 4)))))
              for _ in range(20)]
    for g in games:
        doc = game_to_dict(g)
        assert game_from_dict(json.loads(dumps(doc))) == g


def test_game_errors():
    doc = game_to_dict(catalog.coordination_ab())
    del doc["payoffs"]["a,a"]
    with pytest.raises(ParseError, match="missing payoff for profile 'a,a'"):
        game_from_dict(doc)
    doc = game_to_dict(catalog.prisoners_dilemma())
    doc["payoffs"]["C,C"] = ["3", "0.5"]
    with pytest.raises(ParseError, match="rational"):
        game_from_dict(doc)
    with pytest.raises(ParseError, match="players"):
        game_from_dict({"players": 0, "actions": [], "payoffs": {}})
    with pytest.raises(ParseError, match="missing key 'actions'"):
        game_from_dict({"players": 2})
    doc = game_to_dict(catalog.prisoners_dilemma())
    doc["actions"][0] = ["C", "C"]
    with pytest.raises(ParseError, match="duplicate"):
        game_from_dict(doc)


def test_read_errors(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        read_game(str(tmp_path / "nope.json"))
    p = tmp_path / "broken.json"
    p.write_text("{")
    with pytest.raises(ParseError, match="invalid JSON"):
        read_game(str(p))


def test_demo_files_load():
    for name in ("prisoners_dilemma", "battle_of_sexes", "chicken", "platonia3",
                 "coordination", "anti_coordination"):
        read_game(str(DATA / f"{name}.json"))
    f = read_type_space(str(DATA / "dissimilar_types.json"))
    assert f.kind == "bk" and f.space.game == catalog.prisoners_dilemma()
    h = read_type_space(str(DATA / "harsanyi_pd.json"))
    sf = read_strategies(str(DATA / "defecting_strategies.json"), h.space)
    assert sf.types == ("t", "t") and sf.strategies[0]("t") == "D"


def test_harsanyi_round_trip():
    rng = np.random.default_rng(41)
    for _ in range(30):
        n = int(rng.integers(2, 4))
        g, a = symmetric_with_unique_srj(rng, n, 2)
        if rng.random() < 0.5:
            h = random_harsanyi(rng, g, a, int(rng.integers(1, 3)))
        else:
            cands = (MixedStrategy((Fraction(1, 3), Fraction(2, 3))), MixedStrategy.dirac(0, 2))
            h = random_harsanyi(rng, g, 1, 2, mode="mixed", candidates=cands)
        f = TypeSpaceFile("harsanyi", h)
        back = type_space_from_dict(json.loads(dumps(type_space_to_dict(f))))
        assert back == f


def test_bk_round_trip():
    rng = np.random.default_rng(42)
    for _ in range(30):
        n = int(rng.integers(2, 4))
        g, _ = symmetric_with_unique_srj(rng, n, 2)
        types = tuple(tuple(f"p{i}t{k}" for k in range(int(rng.integers(1, 3)))) for i in range(n))
        s = random_bk(rng, g, types)
        f = TypeSpaceFile("bk", s)
        assert type_space_from_dict(json.loads(dumps(type_space_to_dict(f)))) == f


def test_float_candidates_are_written_as_rationals():
    h = make_superrational_space(catalog.platonia(3), "mixed")
    doc = type_space_to_dict(TypeSpaceFile("harsanyi", h))
    (cand,) = doc["candidates"]
    assert sum(Fraction(p) for p in cand) == 1
    assert abs(Fraction(cand[0]) - Fraction(1, 3)) < Fraction(1, 10 ** 6)
    assert type_space_from_dict(doc).space.candidates[0].exact


def test_type_space_errors():
    base = json.loads((DATA / "dissimilar_types.json").read_text())
    base["game"] = game_to_dict(catalog.prisoners_dilemma())

    doc = json.loads(json.dumps(base))
    doc["beliefs"]["1:r"] = []
    with pytest.raises(ParseError, match="empty belief set"):
        type_space_from_dict(doc)

    doc = json.loads(json.dumps(base))
    del doc["beliefs"]["2:w"]
    with pytest.raises(ParseError, match="missing belief for type '2:w'"):
        type_space_from_dict(doc)

    doc = json.loads(json.dumps(base))
    doc["beliefs"]["1:q"] = doc["beliefs"].pop("1:r")
    with pytest.raises(ParseError, match="unknown type"):
        type_space_from_dict(doc)

    doc = json.loads(json.dumps(base))
    doc["kind"] = "lattice"
    with pytest.raises(ParseError, match="kind"):
        type_space_from_dict(doc)

    doc = json.loads(json.dumps(base))
    doc["candidates"] = [["1"]]
    with pytest.raises(ParseError, match="only belongs in mixed mode"):
        type_space_from_dict(doc)

    doc = json.loads(json.dumps(base))
    doc["beliefs"]["1:r"] = [[["C", "zz"]]]
    with pytest.raises(ParseError):
        type_space_from_dict(doc)


def test_strategy_errors():
    h = read_type_space(str(DATA / "harsanyi_pd.json")).space
    ok = {"strategies": {"1": {"t": "C", "x": "D"}, "2": {"t": "C", "x": "D"}}}
    assert strategies_from_dict(ok, h).types is None
    with pytest.raises(ParseError, match="misses type 'x'"):
        strategies_from_dict({"strategies": {"1": {"t": "C"}, "2": {"t": "C", "x": "D"}}}, h)
    with pytest.raises(ParseError, match="missing strategy for player 2"):
        strategies_from_dict({"strategies": {"1": {"t": "C", "x": "D"}}}, h)
    with pytest.raises(ParseError, match="out of range"):
        strategies_from_dict({"strategies": {"3": {}}}, h)
    bad = {"strategies": {"1": {"t": "Z", "x": "D"}, "2": {"t": "C", "x": "D"}}}
    with pytest.raises(ParseError):
        strategies_from_dict(bad, h)
