"""Named example complexes used by the tests, demos and CLI fixtures.

Cones follow the library's sign convention: the chart F1[x_1, ..., x_n]
corresponds to the negative orthant.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .characters import CharacterGroup
from .complex import ConeComplex, Gluing, identity_matrix, mat_mul, point_complex
from .cone import Cone, PuncturedCone
from .functors import fan_complex

TATE_MONODROMY = ((1, 1), (0, 1))


def _cone(rays: Sequence[Sequence[int]]) -> Cone:
    n = len(rays[0])
    return Cone.from_rays(CharacterGroup(n, ()), rays)


def _ray_set(cone: Cone, rays: Iterable[Sequence[int]]) -> frozenset:
    want = {tuple(r) for r in rays}
    return frozenset(k for k, r in enumerate(cone.ray_tuple) if r in want)


def fan(max_cones: Sequence[Sequence[Sequence[int]]]) -> ConeComplex:
    """A fan in one lattice from the rays of its maximal cones."""
    return fan_complex([_cone(rs) for rs in max_cones])


def punctured(cone_rays, punctures=()) -> PuncturedCone:
    """A cone with the downward closure of the given ray sets removed."""
    c = _cone(cone_rays)
    return PuncturedCone.downward_closed(c, [_ray_set(c, p) for p in punctures])


def glue(cones: Sequence[PuncturedCone], pairs) -> ConeComplex:
    """Glue cones along faces given by rays; each pair is (i, rays_i, j, rays_j, matrix)."""
    gluings = []
    for i, ri, j, rj, m in pairs:
        ci, cj = cones[i].cone, cones[j].cone
        fi = ci.face_of_rays(_ray_set(ci, ri))
        fj = cj.face_of_rays(_ray_set(cj, rj))
        gluings.append(Gluing(i, fi.cutter, j, fj.cutter, m))
    return ConeComplex(cones, gluings)


# basic fans -------------------------------------------------------------------


def affine_space(n: int) -> ConeComplex:
    rays = [tuple(-1 if k == i else 0 for k in range(n)) for i in range(n)]
    return fan([rays])


def torus(n: int) -> ConeComplex:
    return ConeComplex([PuncturedCone(Cone.from_rays(CharacterGroup(n, ()), []))])


def projective_line() -> ConeComplex:
    return fan([[(-1,)], [(1,)]])


def projective_space(n: int) -> ConeComplex:
    rays = [tuple(-1 if k == i else 0 for k in range(n)) for i in range(n)]
    rays.append(tuple(1 for _ in range(n)))
    return fan([[r for k, r in enumerate(rays) if k != skip] for skip in range(n + 1)])


def p1_times_p1() -> ConeComplex:
    return fan([[(a, 0), (0, b)] for a in (-1, 1) for b in (-1, 1)])


def p1_times_a1() -> ConeComplex:
    return fan([[(-1, 0), (0, -1)], [(1, 0), (0, -1)]])


def blowup_plane() -> ConeComplex:
    return fan([[(-1, 0), (-1, -1)], [(-1, -1), (0, -1)]])


def blowup_space() -> ConeComplex:
    e = [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    d = (-1, -1, -1)
    return fan([[d] + [r for k, r in enumerate(e) if k != skip] for skip in range(3)])


def hirzebruch(a: int) -> ConeComplex:
    rays = [(-1, 0), (0, -1), (1, a), (0, 1)]
    return fan([[rays[k], rays[(k + 1) % 4]] for k in range(4)])


def weighted_plane() -> ConeComplex:
    """The fan of P(1,1,2)."""
    rays = [(-1, 0), (0, -1), (1, 2)]
    return fan([[rays[k], rays[(k + 1) % 3]] for k in range(3)])


def square_cone() -> ConeComplex:
    """A non-simplicial 3-dimensional cone over a square."""
    return fan([[(-1, 0, -1), (0, -1, -1), (1, 0, -1), (0, 1, -1)]])


def disjoint_lines() -> ConeComplex:
    """Two affine lines with no gluing."""
    return ConeComplex([punctured([(-1,)]), punctured([(-1,)])])


# formal and non-separated examples ---------------------------------------------


def formal_line() -> ConeComplex:
    return ConeComplex([punctured([(-1,)], [[]])])


def formal_plane() -> ConeComplex:
    """A^2 completed at the origin."""
    return ConeComplex([punctured([(-1, 0), (0, -1)], [[(-1, 0)], [(0, -1)]])])


def formal_plane_along_axis() -> ConeComplex:
    """A^2 completed along the line x = 0."""
    return ConeComplex([punctured([(-1, 0), (0, -1)], [[(0, -1)]])])


def formal_blowup_along_exceptional() -> ConeComplex:
    """Bl_0 A^2 completed along the exceptional curve."""
    a, d, b = (-1, 0), (-1, -1), (0, -1)
    cones = [punctured([a, d], [[a]]), punctured([d, b], [[b]])]
    return glue(cones, [(0, [d], 1, [d], identity_matrix(2))])


def doubled_line() -> ConeComplex:
    """The affine line with a doubled origin."""
    return glue([punctured([(-1,)]), punctured([(-1,)])], [(0, [], 1, [], identity_matrix(1))])


def formal_doubled_line() -> ConeComplex:
    """The doubled line times A^1, completed along the doubled line (origins punctured)."""
    q = [(-1, 0), (0, -1)]
    cones = [punctured(q, [[(-1, 0)]]), punctured(q, [[(-1, 0)]])]
    return glue(cones, [(0, [(0, -1)], 1, [(0, -1)], identity_matrix(2))])


def doubled_plane() -> ConeComplex:
    """Two quadrants glued along one ray."""
    q = [(-1, 0), (0, -1)]
    return glue([punctured(q), punctured(q)], [(0, [(0, -1)], 1, [(0, -1)], identity_matrix(2))])


# the Tate loop -------------------------------------------------------------------


def _tate_rays(count: int) -> list[tuple]:
    rays = [(-1, 0), (-2, 1), (-1, 1)]
    while len(rays) < count:
        x, y = rays[-2]
        rays.append((x, y - x))
    return rays[:count]


def tate_chain(n: int) -> ConeComplex:
    """n consecutive cones of the Tate gallery in one lattice, origins punctured."""
    rays = _tate_rays(n + 1)
    cones = [punctured([rays[k], rays[k + 1]], [[]]) for k in range(n)]
    return glue(cones, [(k, [rays[k + 1]], k + 1, [rays[k + 1]], identity_matrix(2)) for k in range(n - 1)])


def _mat_pow(m, k: int):
    out = identity_matrix(len(m))
    for _ in range(k):
        out = mat_mul(out, m, len(m))
    return out


def tate_loop(k: int = 1) -> ConeComplex:
    """The Tate loop (k=1) or its k-fold cyclic cover: 2k cones closed up by M^k."""
    n = 2 * k
    rays = _tate_rays(n + 1)
    cones = [punctured([rays[j], rays[j + 1]], [[]]) for j in range(n)]
    pairs = [(j, [rays[j + 1]], j + 1, [rays[j + 1]], identity_matrix(2)) for j in range(n - 1)]
    pairs.append((n - 1, [rays[n]], 0, [rays[0]], _mat_pow(TATE_MONODROMY, k)))
    return glue(cones, pairs)


# the corpus ----------------------------------------------------------------------

GALLERY: dict[str, Callable[[], ConeComplex]] = {
    "point": point_complex,
    "torus-1": lambda: torus(1),
    "torus-2": lambda: torus(2),
    "A1": lambda: affine_space(1),
    "A2": lambda: affine_space(2),
    "A3": lambda: affine_space(3),
    "P1": projective_line,
    "P2": lambda: projective_space(2),
    "P3": lambda: projective_space(3),
    "P1xP1": p1_times_p1,
    "P1xA1": p1_times_a1,
    "Bl0A2": blowup_plane,
    "Bl0A3": blowup_space,
    "F1": lambda: hirzebruch(1),
    "F2": lambda: hirzebruch(2),
    "P112": weighted_plane,
    "square-cone": square_cone,
    "A1+A1": disjoint_lines,
    "formal-line": formal_line,
    "formal-plane": formal_plane,
    "formal-plane-axis": formal_plane_along_axis,
    "formal-Bl0A2-exceptional": formal_blowup_along_exceptional,
    "doubled-line": doubled_line,
    "formal-doubled-line": formal_doubled_line,
    "doubled-plane": doubled_plane,
    "tate-chain-2": lambda: tate_chain(2),
    "tate-chain-3": lambda: tate_chain(3),
    "tate-chain-4": lambda: tate_chain(4),
    "tate-loop": lambda: tate_loop(1),
    "tate-loop-2": lambda: tate_loop(2),
    "tate-loop-3": lambda: tate_loop(3),
}

# loops are locally fans but not globally separated; they are kept out of oracle comparisons
LOOPS = ("tate-loop", "tate-loop-2", "tate-loop-3")


def corpus(include_loops: bool = True) -> dict[str, ConeComplex]:
    return {name: make() for name, make in GALLERY.items() if include_loops or name not in LOOPS}
