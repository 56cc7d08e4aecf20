"""
The Tate loop and algebraisation
================================

A loop of cones whose gluings multiply to the shear [[1,1],[0,1]] is a fine
formal object but comes from no scheme: the monodromy obstructs it. Cutting
the loop open gives a chain that does algebraise.
"""

from f1cones import algebraise, complete, gallery, sigma
from f1cones.complex import monodromy
from f1cones.errors import NonConstantCharacters

loop = gallery.tate_loop(1)
try:
    algebraise(loop)
except NonConstantCharacters as e:
    print("obstruction around cones", list(e.loop[:2]), "matrix", e.matrix)

# cyclic covers pick up powers of the shear
for k in (1, 2, 3):
    ls = monodromy(gallery.tate_loop(k), 0)
    print(k, [l.matrix for l in ls.nontrivial_loops()])

chain = gallery.tate_chain(3)
res = algebraise(chain)
for A, m in zip(res.atlas.charts, res.markings):
    print("chart", A.generators, "marked along", m.generators)
print("completes back:", sigma(complete(res.atlas, res.markings)) == chain)
