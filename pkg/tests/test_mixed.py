import warnings
from fractions import Fraction

import numpy as np
import pytest

from helpers import (PROPERTY_INSTANCES, grid_oracle, random_rational_strategy, random_shape,
                     random_symmetric_game, tensor_diagonal_gradient,
                     tensor_diagonal_values)
from superrational import catalog
from superrational.errors import DifferentActionSets, DimensionMismatch, NonConvergence
from superrational.game import Game
from superrational.mixed import (MixedStrategy, OptimizerConfig, diagonal_expected_payoff,
                                 expected_payoff, superrational_mixed)
from superrational.simplex import project_simplex


def test_strategy_validation():
    assert MixedStrategy((Fraction(1, 3), Fraction(2, 3))).exact
    assert not MixedStrategy((0.5, 0.5)).exact
    with pytest.raises(ValueError):
        MixedStrategy((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        MixedStrategy((-0.5, 1.5))
    with pytest.raises(ValueError):
        MixedStrategy(())
    assert MixedStrategy.from_array([2, 2]).probs == (0.5, 0.5)
    assert MixedStrategy.dirac(1, 3).probs == (0, 1, 0)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(tolerance=0)
    with pytest.raises(ValueError):
        OptimizerConfig(grid_points_per_dim=1)
    with pytest.raises(ValueError):
        OptimizerConfig(multistarts=0)


def test_dirac_profiles_give_pure_payoffs():
    g = catalog.coordination_ab()
    for prof in g.profiles():
        sig = [MixedStrategy.dirac(g.action_index(i, a), 3) for i, a in enumerate(prof)]
        assert expected_payoff(g, sig, 0) == g.payoff(prof, 0)
        assert expected_payoff(g, sig, 1) == g.payoff(prof, 1)


def test_exact_and_float_payoffs_agree():
    g = catalog.prisoners_dilemma()
    u = MixedStrategy.uniform(2)
    assert diagonal_expected_payoff(g, u, 0) == Fraction(9, 4)
    assert diagonal_expected_payoff(g, MixedStrategy((0.5, 0.5)), 0) == pytest.approx(2.25)
    with pytest.raises(DimensionMismatch):
        expected_payoff(g, (u,), 0)
    with pytest.raises(DimensionMismatch):
        expected_payoff(g, (u, MixedStrategy.uniform(3)), 0)


@pytest.mark.parametrize("p", [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)])
def test_chicken_diagonal_is_minus_ten_p_squared(p):
    g = catalog.chicken()
    sigma = MixedStrategy((p, 1 - p))
    assert diagonal_expected_payoff(g, sigma, 0) == -10 * p * p
    assert diagonal_expected_payoff(g, sigma, 1) == -10 * p * p


def test_chicken_mixed():
    rep = superrational_mixed(catalog.chicken())
    assert rep.status == "found" and rep.converged
    assert len(rep.maximizers) == 1
    assert abs(rep.maximizers[0].strategy[0]) <= 1e-9
    assert rep.best_value == 0


def test_anti_coordination_mixed():
    rep = superrational_mixed(catalog.anti_coordination())
    (m,) = rep.maximizers
    assert abs(m.strategy[0] - 0.5) <= 1e-6
    assert m.value == pytest.approx(0.5)


def test_prisoners_dilemma_mixed():
    rep = superrational_mixed(catalog.prisoners_dilemma())
    (m,) = rep.maximizers
    assert m.strategy.probs == (1.0, 0.0)
    assert m.value == 3.0


def test_coordination_two_maximizers():
    rep = superrational_mixed(catalog.coordination_ab())
    assert rep.status == "found"
    tops = sorted(tuple(round(p, 9) for p in m.strategy.probs) for m in rep.maximizers)
    assert tops == [(0.0, 1.0, 0.0), (1.0, 0.0, 0.0)]


def test_battle_of_sexes_is_empty():
    rep = superrational_mixed(catalog.battle_of_sexes())
    assert rep.status == "empty" and not rep.symmetric
    p1, p2 = rep.player_optima
    assert p1.value == pytest.approx(2) and p2.value == pytest.approx(2)
    assert p1.argmax[0].probs == pytest.approx((1, 0))
    assert p2.argmax[0].probs == pytest.approx((0, 1))
    assert rep.minimax_gap == pytest.approx(-1)
    mins = sorted((cp.player, round(cp.strategy[0], 6)) for cp in rep.interior_minima)
    assert mins == [(0, round(1 / 3, 6)), (1, round(2 / 3, 6))]
    assert len(rep.notes) == 2 and "minimum" in rep.notes[0]


def test_single_action_and_different_sets():
    g = Game.from_payoffs([["a"], ["a"]], {("a", "a"): (1, 2)})
    rep = superrational_mixed(g)
    assert rep.status == "found" and rep.maximizers[0].values == (1.0, 2.0)
    with pytest.raises(DifferentActionSets):
        superrational_mixed(Game.bimatrix("ab", "xy", [[(0, 0), (0, 0)], [(0, 0), (0, 0)]]))


@pytest.mark.parametrize("n", range(2, 11))
def test_platonia_mixed(n):
    rep = superrational_mixed(catalog.platonia(n))
    (m,) = rep.maximizers
    assert abs(m.strategy[0] - 1 / n) <= 1e-6
    exact = 1_000_000 * (1 / n) * (1 - 1 / n) ** (n - 1)
    assert abs(m.value - exact) <= 1e-6 * exact
    assert rep.converged


def test_nonconvergence_warns():
    with pytest.warns(NonConvergence):
        rep = superrational_mixed(catalog.platonia(5), OptimizerConfig(
            tolerance=1e-30, max_iters=1, multistarts=1, grid_points_per_dim=3))
    assert not rep.converged


def test_seed_determinism():
    g = random_symmetric_game(np.random.default_rng(9), 3, 3)
    a = superrational_mixed(g, OptimizerConfig(rng_seed=5))
    superrational_mixed.cache_clear()
    b = superrational_mixed(g, OptimizerConfig(rng_seed=5))
    assert a == b


def diagonal_payoffs_player_independent(instances=PROPERTY_INSTANCES, seed=5):
    """Exact diagonal payoffs coincide across players; the optimizer beats every
    pure diagonal profile."""
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        n, k = random_shape(rng)
        g = random_symmetric_game(rng, n, k)
        sigma = random_rational_strategy(rng, k)
        vals = {diagonal_expected_payoff(g, sigma, i) for i in range(n)}
        assert len(vals) == 1
        rep = superrational_mixed(g)
        best_pure = max(g.payoff((a,) * n, 0) for a in g.actions[0])
        assert rep.best_value >= float(best_pure) - 1e-9
    return instances


def optimizer_vs_grid(instances=PROPERTY_INSTANCES, seed=6):
    rng = np.random.default_rng(seed)
    for r in range(instances):
        n = int(rng.integers(2, 4))
        k = 2 + r % 2
        g = random_symmetric_game(rng, n, k)
        rep = superrational_mixed(g)
        oracle = grid_oracle(g)
        assert rep.best_value >= oracle - 1e-9
        assert abs(rep.best_value - oracle) <= 1e-6
        X = np.array([m.strategy.as_array() for m in rep.maximizers])
        assert np.allclose(tensor_diagonal_values(g, X), rep.best_value, atol=1e-9)
    return instances


def test_maximizers_are_stationary():
    """Projected gradient step at each maximizer, with the gradient taken by
    tensor contraction rather than the library's polynomial."""
    rng = np.random.default_rng(24)
    cfg = OptimizerConfig()
    for _ in range(PROPERTY_INSTANCES // 4):
        n, k = int(rng.integers(2, 4)), int(rng.integers(2, 5))
        g = random_symmetric_game(rng, n, k)
        for m in superrational_mixed(g, cfg).maximizers:
            x = m.strategy.as_array()
            assert abs(x.sum() - 1) <= 1e-12 and (x >= 0).all()
            step = project_simplex(x + tensor_diagonal_gradient(g, x)) - x
            assert np.abs(step).max() <= cfg.tolerance
            assert m.stationarity <= cfg.tolerance


def test_diagonal_payoffs_player_independent():
    diagonal_payoffs_player_independent(40, seed=15)


def test_optimizer_matches_dense_grid():
    with warnings.catch_warnings():
        warnings.simplefilter("error", NonConvergence)
        optimizer_vs_grid(30, seed=16)
