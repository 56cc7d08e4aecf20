"""
Points and properness of the projective line
============================================

The projective line is glued from two affine lines. Its cone complex is a pair
of opposite rays glued at the origin; here we build it from the charts,
count points and run the separation and properness checks.
"""

from f1cones import F1Algebra, SchemeAtlas, SchemeGluing, sigma, spec
from f1cones import gallery
from f1cones.criteria import check_proper, check_separated, jet_oracle
from f1cones.characters import CharacterGroup

# two charts F1[t] and F1[1/t], glued where t is invertible
Z1 = CharacterGroup(1)
atlas = SchemeAtlas(
    [F1Algebra.free(1), F1Algebra(Z1, ((-1,),))],
    [SchemeGluing(0, (1,), 1, (-1,), ((1,),))],
)
P1 = sigma(atlas)
print(P1)
for i, pc in enumerate(P1.cones):
    print("cone", i, "rays", pc.cone.ray_tuple)

# points are faces up to gluing: the origin plus two rays
print("points:", len(P1.cells))

# the complex knows it came from this atlas
print("round trip:", sigma(spec(P1)) == P1)

print(check_separated(P1))
print(check_proper(P1))

# the affine line has an uncovered direction
print(check_proper(gallery.affine_space(1)))

# jets: v = 5 lifts through the positive ray only
print("lifts of 5:", jet_oracle(P1).lifts((5,)))
