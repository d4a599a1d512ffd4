"""Small games used throughout the docs and tests."""

from .game import Game

PRIZE = 1_000_000


def prisoners_dilemma() -> Game:
    return Game.bimatrix("CD", "CD", [[(3, 3), (0, 5)],
                                      [(5, 0), (1, 1)]])


def battle_of_sexes() -> Game:
    acts = ("Box", "Ballet")
    return Game.bimatrix(acts, acts, [[(2, 1), (0, 0)],
                                      [(0, 0), (1, 2)]])


def chicken() -> Game:
    return Game.bimatrix("SY", "SY", [[(-10, -10), (1, -1)],
                                      [(-1, 1), (0, 0)]])


def coordination_ab() -> Game:
    """Non-symmetric 3x3 game with two superrationally justifiable actions."""
    return Game.bimatrix("abc", "abc", [[(2, 3), (0, 0), (0, 0)],
                                        [(0, 0), (2, 3), (0, 0)],
                                        [(0, 0), (0, 0), (2, 2)]])


def coordination_ab_symmetric() -> Game:
    return Game.bimatrix("abc", "abc", [[(3, 3), (0, 0), (0, 0)],
                                        [(0, 0), (3, 3), (0, 0)],
                                        [(0, 0), (0, 0), (2, 2)]])


def off_diagonal_better() -> Game:
    """Non-symmetric game where (b, a) beats the only superrational profile."""
    return Game.bimatrix("ab", "ab", [[(0, 0), (0, 0)],
                                      [(2, 2), (1, 1)]])


def anti_coordination() -> Game:
    return Game.bimatrix("ab", "ab", [[(0, 0), (1, 1)],
                                      [(1, 1), (0, 0)]])


def platonia(n: int) -> Game:
    """n players each send (S) or don't send (D) a letter; a lone sender wins the prize."""
    if n < 1:
        raise ValueError("need at least one player")

    def payoff(own, others):
        return PRIZE if own == "S" and "S" not in others else 0

    return Game.symmetric("SD", n, payoff)
