from fractions import Fraction

import numpy as np
import pytest

from helpers import PROPERTY_INSTANCES, random_game
from superrational import catalog
from superrational.errors import NotTwoPlayers
from superrational.game import pure_nash
from superrational.linalg import rank, solve
from superrational.mixed import MixedStrategy, expected_payoff
from superrational.nash import mixed_nash_2p


def probs(eq):
    return tuple(s.probs for s in eq)


def test_battle_of_sexes():
    r = mixed_nash_2p(catalog.battle_of_sexes())
    got = [probs(e) for e in r.equilibria]
    assert ((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3))) in got
    assert len(got) == 3 and not r.degenerate


def test_anti_coordination():
    r = mixed_nash_2p(catalog.anti_coordination())
    half = (Fraction(1, 2), Fraction(1, 2))
    assert sorted(probs(e) for e in r.equilibria) == sorted([
        ((1, 0), (0, 1)), ((0, 1), (1, 0)), (half, half)])


def test_prisoners_dilemma_only_defection():
    r = mixed_nash_2p(catalog.prisoners_dilemma())
    assert [probs(e) for e in r.equilibria] == [((0, 1), (0, 1))]


def test_platonia_is_degenerate():
    r = mixed_nash_2p(catalog.platonia(2))
    assert r.degenerate
    assert ((1, 0), (0, 1)) in [probs(e) for e in r.equilibria]


def test_needs_two_players():
    with pytest.raises(NotTwoPlayers):
        mixed_nash_2p(catalog.platonia(3))


def test_linalg():
    F = Fraction
    x, r = solve([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)])
    assert x == [F(4, 5), F(7, 5)] and r == 2
    assert solve([[F(1), F(1)]], [F(1)]) == (None, 1)
    assert solve([[F(1)], [F(1)]], [F(1), F(2)]) == (None, -1)
    assert rank([[F(1), F(2)], [F(2), F(4)]]) == 1


def is_equilibrium(g, x, y) -> bool:
    """No pure deviation gains anything, in exact arithmetic."""
    m1, m2 = g.shape
    v1 = expected_payoff(g, (x, y), 0)
    v2 = expected_payoff(g, (x, y), 1)
    for r in range(m1):
        if expected_payoff(g, (MixedStrategy.dirac(r, m1), y), 0) > v1:
            return False
    for c in range(m2):
        if expected_payoff(g, (x, MixedStrategy.dirac(c, m2)), 1) > v2:
            return False
    return True


def nash2p_best_response_scan(instances=PROPERTY_INSTANCES, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        shape = tuple(int(m) for m in rng.integers(1, 4, 2))
        g = random_game(rng, shape)
        r = mixed_nash_2p(g)
        assert r.equilibria
        for x, y in r.equilibria:
            assert x.exact and y.exact
            assert is_equilibrium(g, x, y)
        listed = {probs(e) for e in r.equilibria}
        for prof in pure_nash(g):
            pure = tuple(tuple(int(k == g.action_index(i, a)) for k in range(shape[i]))
                         for i, a in enumerate(prof))
            assert pure in listed or r.degenerate
    return instances


def test_best_response_scan():
    nash2p_best_response_scan(40, seed=17)
