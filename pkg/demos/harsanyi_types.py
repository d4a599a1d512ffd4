"""Probabilistic type spaces: which types are superrational, and when play
is guaranteed to land on the superrational profile.

    python3 demos/harsanyi_types.py
"""

from fractions import Fraction

from superrational import catalog
from superrational.epistemic import (BayesianStrategy, FiniteDistribution, HarsanyiSpace,
                                     is_superrational_bayesian_strategy, is_superrational_type,
                                     play)

pd = catalog.prisoners_dilemma()
half = Fraction(1, 2)

# type t is sure the other player is also t and cooperates;
# type x hedges between a cooperating t and a defecting x
beliefs = {
    (0, "t"): FiniteDistribution.point((("C", "t"),)),
    (1, "t"): FiniteDistribution.point((("C", "t"),)),
    (0, "x"): FiniteDistribution.from_mapping({(("C", "t"),): half, (("D", "x"),): half}),
    (1, "x"): FiniteDistribution.point((("D", "x"),)),
}
h = HarsanyiSpace(pd, (("t", "x"), ("t", "x")), beliefs)

for i in range(2):
    for t in ("t", "x"):
        v = is_superrational_type(h, i, t)
        print(f"player {i + 1}, type {t}: {'superrational, plays ' + v.value if v else v.reason}")

follow = [BayesianStrategy(i, {"t": "C", "x": "D"}) for i in range(2)]
stray = BayesianStrategy(0, {"t": "D", "x": "D"})
for label, strategies in (("following", follow), ("player 1 defects", [stray, follow[1]])):
    checks = [bool(is_superrational_bayesian_strategy(h, b)) for b in strategies]
    r = play(h, ("t", "t"), strategies)
    print(f"{label}: strategies superrational {checks}, outcome {r.profile}, "
          f"guaranteed {r.theorem_flag}")
