"""Pure and mixed superrational solutions next to Nash equilibria for the
catalog games.

    python3 demos/solve_games.py
"""

from superrational import catalog
from superrational.game import pure_nash, superrational_profiles
from superrational.mixed import superrational_mixed


def show(name, g):
    print(f"== {name}")
    print("  superrational:", superrational_profiles(g) if g.common_actions else "n/a")
    ne = pure_nash(g)
    print("  pure Nash:    ", ne if len(ne) <= 4 else f"{len(ne)} profiles")
    rep = superrational_mixed(g)
    if rep.status == "found":
        for m in rep.maximizers:
            probs = ", ".join(f"{a}={p:.4g}" for a, p in zip(g.actions[0], m.strategy.probs))
            print(f"  mixed:         ({probs}) value {m.value:.6g}")
    else:
        print("  mixed:         none, players disagree on the best diagonal strategy")
        for opt in rep.player_optima:
            print(f"    player {opt.player + 1} would pick {opt.argmax[0].probs} (value {opt.value:.6g})")
    for note in rep.notes:
        print("  note:", note)


if __name__ == "__main__":
    show("prisoner's dilemma", catalog.prisoners_dilemma())
    show("chicken", catalog.chicken())
    show("anti-coordination", catalog.anti_coordination())
    show("battle of the sexes", catalog.battle_of_sexes())
    for n in (2, 3, 5):
        show(f"platonia, {n} players", catalog.platonia(n))
