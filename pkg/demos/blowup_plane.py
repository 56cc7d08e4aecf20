"""
Blowing up the plane at the origin
==================================

Blowing up along (x, y) splits the quadrant along the diagonal. The
refinement maps every point of the old complex to exactly one point of the
new one, so the map is proper.
"""

from f1cones import F1Algebra, MonomialIdeal, SchemeAtlas, blow_up, gallery
from f1cones.criteria import check_overconvergent, check_proper

A2 = gallery.affine_space(2)
B, f = blow_up(A2, [[(1, 0), (0, 1)]])
for pc in B.cones:
    print("cone", pc.cone.ray_tuple)

print(check_overconvergent(f))
print(check_proper(f))

# the same at the level of charts: the Rees charts F1[x, y/x] and F1[y, x/y]
A = F1Algebra.free(2)
X, _ = blow_up(SchemeAtlas([A]), [MonomialIdeal(A, ((1, 0), (0, 1)))])
for chart in X.charts:
    print("chart generators", chart.generators)

# Veronese example: the Rees charts need normalizing
V = F1Algebra(A.group, ((2, 0), (1, 1), (0, 2)))
Y, _ = blow_up(SchemeAtlas([V]), [MonomialIdeal(V, ((2, 0), (0, 2)))])
print("non-normal charts:", Y.non_normal)
Y, _ = blow_up(SchemeAtlas([V]), [MonomialIdeal(V, ((2, 0), (0, 2)))], normalize_charts=True)
print("after normalizing:", [c.generators for c in Y.charts])
