"""
Expansions of the unit interval
===============================

Take the cone over [0, 1] and keep blowing up where the open face meets the
center. Sur refines everything and produces breakpoints 1/2, 1/4, ...; él
only opens one new cone per stage and never stops growing.
"""

from fractions import Fraction

from f1cones import expansion_stages
from f1cones.characters import CharacterGroup
from f1cones.cone import Cone
from f1cones.criteria import check_proper_limit

V = Cone.from_rays(CharacterGroup(2), [(0, -1), (-1, -1)])
f, t = (1, 0), (0, 1)


def slopes(S):
    return sorted({Fraction(v[0], v[1]) for pc in S.cones for v in pc.cone.ray_tuple})


for k, S in enumerate(expansion_stages(V, f, [t], "Sur", 4), 1):
    print("Sur stage", k, [str(s) for s in slopes(S)])

el = expansion_stages(V, f, [t], "él", 5)
for k, S in enumerate(el, 1):
    print("él stage", k, len(S.cones), "cones")
print(check_proper_limit(el))
