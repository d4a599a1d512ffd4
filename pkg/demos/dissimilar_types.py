"""Possibility type spaces whose players use different type labels. The
greatest identification relation decides which types count as alike.

    python3 demos/dissimilar_types.py
"""

import itertools
from pathlib import Path

from superrational.bk import (IdentificationRelation, bk_outcome,
                              greatest_identification_relation, is_identification_relation,
                              is_superrational_state_dissimilar, refinement_trace)
from superrational.io import read_type_space

s = read_type_space(str(Path(__file__).parent / "data" / "dissimilar_types.json")).space

print("refinement:")
for r in refinement_trace(s):
    print("  ", [[f"{i + 1}:{t}" for i, t in b] for b in r.blocks])

top = greatest_identification_relation(s)
print("greatest relation passes the check:", bool(is_identification_relation(s, top)))

bad = IdentificationRelation.generated_by(s, [((0, "r"), (1, "w"))])
v = is_identification_relation(s, bad)
print("identifying r with w fails:", v.reason)

for weak in (False, True):
    states = [(i + 1, st) for i, ts in enumerate(s.types) for st in itertools.product("CD", ts)
              if is_superrational_state_dissimilar(s, i, st, weak=weak, relation=top)]
    print("weak" if weak else "strict", "superrational states:", states)

for world in ([("C", "r"), ("C", "u")], [("C", "r"), ("D", "w")]):
    out = bk_outcome(s, world)
    print(f"world {world}: outcome {out.profile}, guaranteed {out.theorem_flag}")
