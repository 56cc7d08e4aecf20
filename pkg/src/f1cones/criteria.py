"""Decision procedures on cone complexes and an independent jet-counting oracle.

Both overconvergence and the oracle work cell by cell. Around a cell c with
face tau, the local star is the set of cells containing c. Its cones are
transported into the frame of one node of c and projected to N / <tau>.
The exact test refines the relevant region by every wall of the projected
star cones and checks that each stratum of the refinement is covered. The
oracle instead counts, for every integer point of a box in N / <tau>, the
star cells whose relative interior contains it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import lattice as lat
from .characters import CharacterGroup
from .complex import (
    ComplexMorphism,
    ConeComplex,
    apply,
    components,
    mat_inv,
    mat_t,
    monodromy,
    node_key,
    preimage,
    shared_faces,
)
from .cone import Cone, intersect
from .errors import NotLocallyFinite
from .polyhedra import face_ray_sets, generated_cone_dual


@dataclass(frozen=True)
class Verdict:
    property: str
    holds: bool
    witness: Any = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"property": self.property, "holds": self.holds, "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = sorted(x) if isinstance(x, (frozenset, set)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _as_morphism(obj) -> ComplexMorphism:
    if isinstance(obj, ComplexMorphism):
        return obj
    return ComplexMorphism.to_point(obj)


# local stars -----------------------------------------------------------------


@dataclass
class LocalStar:
    """Cells containing a given cell, projected to N / <tau> in a fixed frame."""

    cell: int
    frame: tuple  # node (chart, face rays) whose lattice is used
    projection: list  # rows: basis of characters vanishing on tau
    dim: int  # rank of N / <tau>
    cones: dict = field(default_factory=dict)  # star cell -> projected Cone
    incidence: dict = field(default_factory=dict)  # star cell -> (chart, face ray set)


def local_star(S: ConeComplex, c: int) -> LocalStar:
    cell = S.cells[c]
    frame = cell.root
    a, tau = frame
    pc = S.cones[a]
    r = pc.group.rank
    tau_rays = [pc.cone.ray_tuple[k] for k in tau]
    proj = [list(b) for b in lat.integer_kernel([list(v) for v in tau_rays], r)] if tau_rays else lat.identity(r)
    m = len(proj)
    qg = CharacterGroup(m)
    star = LocalStar(c, frame, proj, m)
    for nb in cell.nodes:
        b, tau_b = nb
        to_frame = mat_t(mat_inv(cell.transition(frame, nb)), r)
        cb = S.cones[b].cone
        for F in cb._face_table:
            if F >= frozenset(tau_b):
                rho = S.cell_index(b, F)
                if rho in star.cones:
                    continue
                rays = [apply(to_frame, cb.ray_tuple[k]) for k in sorted(F)]
                prays = [lat.primitive(p) for p in (apply(proj, v) for v in rays) if any(p)]
                star.cones[rho] = Cone.from_rays(qg, prays)
                star.incidence[rho] = (b, F)
    return star


def _region(f: ComplexMorphism, star: LocalStar) -> list[Cone]:
    """Cones in N / <tau> that the star must cover: pullbacks of the target
    cones around the image of the cell."""
    S, T = f.source, f.target
    a, tau = star.frame
    t = f.assignments[a].target
    phi = f.target_face(a, tau)
    tcell = T.cells[T.cell_index(t, phi)]
    tframe = node_key(t, phi)
    rt = T.cones[t].group.rank
    ra = S.cones[a].group.rank
    L = f.linear_map(a)
    img_tau = [apply(L, S.cones[a].cone.ray_tuple[k]) for k in tau]
    targets = []
    for nb in tcell.nodes:
        b, phi_b = nb
        to_frame = mat_t(mat_inv(tcell.transition(tframe, nb)), rt)
        cb = T.cones[b].cone
        for F in cb._face_table:
            if F >= frozenset(phi_b) and not T.cones[b].is_punctured(F):
                cone_rays = tuple(sorted(apply(to_frame, cb.ray_tuple[k]) for k in F))
                if cone_rays not in targets:
                    targets.append(cone_rays)
    targets = [x for x in targets if not any(set(x) < set(y) for y in targets)]
    qg = CharacterGroup(star.dim)
    out = []
    for cone_rays in sorted(targets):
        facets, eqs = generated_cone_dual(list(cone_rays), img_tau, rt)
        ineqs = []
        for h in list(facets) + list(eqs) + [tuple(-x for x in e) for e in eqs]:
            pulled = [sum(L[i][j] * h[i] for i in range(rt)) for j in range(ra)]
            coords = lat.row_lattice_coordinates(star.projection, pulled) if star.dim else ()
            ineqs.append(tuple(coords))
        out.append(Cone(qg, ineqs))
    return out


def _target_cell(f: ComplexMorphism, star: LocalStar, rho: int) -> int:
    b, F = star.incidence[rho]
    t = f.assignments[b].target
    return f.target.cell_index(t, f.target_face(b, F))


def _covered(point, cones: Sequence[Cone]) -> bool:
    return any(c.contains(point) for c in cones)


def _uncovered_point(region: Cone, cones: list[Cone]) -> Optional[tuple]:
    """An integer point of the region outside every cone, or None (exact)."""
    walls = set()
    for c in cones:
        for h in c.polar_generators():
            if any(h):
                walls.add(lat.primitive(h))
    pieces = [region]
    for h in sorted(walls):
        nxt = []
        for P in pieces:
            if P.is_nonpositive(h) or P.is_nonpositive(tuple(-x for x in h)):
                parts = [P]
            else:
                parts = [Cone(P.group, P.inequalities + (h,)), Cone(P.group, P.inequalities + (tuple(-x for x in h),))]
            for Q in parts:
                if Q not in nxt:
                    nxt.append(Q)
        pieces = nxt
    m = region.rank
    for P in pieces:
        table = face_ray_sets(P.ray_tuple, P.facets)
        for F in sorted(table, key=lambda s: (len(s), sorted(s))):
            pt = [0] * m
            for k in F:
                pt = [x + y for x, y in zip(pt, P.ray_tuple[k])]
            if not _covered(pt, cones):
                return lat.primitive(pt) if any(pt) else tuple(pt)
    return None


# verdicts -----------------------------------------------------------------


def check_separated(obj) -> Verdict:
    """Every contiguous pair meets in a single shared face, and the two cones,
    developed through that face, intersect exactly in it."""
    if isinstance(obj, ComplexMorphism):
        for j in range(len(obj.target.cones)):
            v = check_separated(preimage(obj, j))
            if not v.holds:
                return Verdict("separated", False, {"target_cone": j, **v.witness})
        return Verdict("separated", True)
    S = obj
    for a in range(len(S.cones)):
        for b in range(a + 1, len(S.cones)):
            sh = shared_faces(S, a, b)
            if not sh:
                continue
            if len(sh) > 1:
                return Verdict(
                    "separated",
                    False,
                    {"pair": [a, b], "reason": "several maximal shared faces", "faces": [sorted(x[0]) for x in sh]},
                )
            fa, fb, m = sh[0]
            ca, cb = S.cones[a].cone, S.cones[b].cone
            r = ca.rank
            to_a = mat_t(mat_inv(m), r)
            moved = Cone.from_rays(ca.group, [apply(to_a, v) for v in cb.ray_tuple])
            meet = intersect(ca, moved)
            face = Cone.from_rays(ca.group, [ca.ray_tuple[k] for k in sorted(fa)])
            if meet != face:
                return Verdict(
                    "separated",
                    False,
                    {
                        "pair": [a, b],
                        "reason": "developed cones meet beyond the shared face",
                        "shared_face": [list(ca.ray_tuple[k]) for k in sorted(fa)],
                        "intersection": [list(v) for v in meet.ray_tuple],
                    },
                )
    return Verdict("separated", True)


def check_overconvergent(obj) -> Verdict:
    """Around every cell the projected star covers the pulled-back target region."""
    f = _as_morphism(obj)
    S = f.source
    if len(S.cones) > 10_000:
        raise NotLocallyFinite("atlas too large to be treated as locally finite")
    for c in range(len(S.cells)):
        star = local_star(S, c)
        cones = list(star.cones.values())
        for region in _region(f, star):
            pt = _uncovered_point(region, cones)
            if pt is not None:
                a, tau = star.frame
                return Verdict(
                    "overconvergent",
                    False,
                    {"cone": a, "face": [list(S.cones[a].cone.ray_tuple[k]) for k in tau], "direction": list(pt)},
                )
    return Verdict("overconvergent", True)


def check_quasicompact(S: ConeComplex) -> Verdict:
    return Verdict("quasicompact", True, None)


def check_proper(obj) -> Verdict:
    """Overconvergent, finitely many cones, quasi-separated (automatic for finite atlases)."""
    v = check_overconvergent(obj)
    if not v.holds:
        return Verdict("proper", False, v.witness)
    return Verdict("proper", True)


def check_proper_limit(stages: Sequence[ConeComplex]) -> Verdict:
    """Flags a tower of stages whose cone counts keep growing: each stage may be
    proper, but the limit has infinitely many cones and is not quasi-compact."""
    counts = [len(s.cones) for s in stages]
    growing = len(counts) >= 2 and all(b > a for a, b in zip(counts, counts[1:]))
    if growing:
        return Verdict("proper_in_limit", False, {"cone_counts": counts})
    return Verdict("proper_in_limit", True, {"cone_counts": counts})


def check_algebraisable(S: ConeComplex) -> Verdict:
    for comp in components(S):
        ls = monodromy(S, comp[0])
        bad = ls.nontrivial_loops()
        if bad:
            return Verdict("algebraisable", False, {"loop": list(bad[0].edge[:2]), "matrix": [list(r) for r in bad[0].matrix]})
    return Verdict("algebraisable", True)


def check_noetherian(S: ConeComplex) -> Verdict:
    """The integer points of every cone span its linear span (always the case
    for rational cones, reported for completeness)."""
    for i, pc in enumerate(S.cones):
        rays = list(pc.cone.ray_tuple)
        if rays and lat.rank(lat.saturation(rays, pc.cone.rank), pc.cone.rank) != pc.cone.dim:
            return Verdict("noetherian", False, {"cone": i})
    return Verdict("noetherian", True)


def check_normal(S: ConeComplex) -> Verdict:
    from .f1algebra import normalize
    from .functors import spec

    X = spec(S)
    for i, A in enumerate(X.charts):
        _, was_normal = normalize(A)
        if not was_normal:
            return Verdict("normal", False, {"chart": i})
    return Verdict("normal", True)


def classify(S: ConeComplex) -> dict:
    comps = components(S)
    return {
        "cones": len(S.cones),
        "quasicompact": True,
        "rational_polyhedral": True,
        "noetherian": check_noetherian(S).holds,
        "normal": check_normal(S).holds,
        "connected": len(comps) == 1,
        "components": len(comps),
        "separated": check_separated(S).holds,
        "algebraisable": check_algebraisable(S).holds,
    }


# jet oracle ------------------------------------------------------------------


@dataclass
class JetReport:
    radius: int
    counts: dict  # (cell, target cell, point) -> number of lifting cells
    uncovered: list  # (cell, point) in the region with no lift
    multiple: list  # (cell, target cell, point) with several lifts

    @property
    def separated(self) -> bool:
        return not self.multiple

    @property
    def overconvergent(self) -> bool:
        return not self.uncovered

    def lifts(self, point: Sequence[int], cell: int = 0) -> int:
        pt = tuple(point)
        return sum(n for (c, _, p), n in self.counts.items() if c == cell and p == pt)


def _grid(m: int, radius: int) -> np.ndarray:
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = [np.arange(-radius, radius + 1, dtype=np.int64)] * m
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([x.ravel() for x in mesh], axis=1)


def _relint_mask(grid: np.ndarray, cone: Cone) -> np.ndarray:
    mask = np.ones(len(grid), dtype=bool)
    if cone.facets:
        mask &= (grid @ np.array(cone.facets, dtype=np.int64).T < 0).all(axis=1)
    if cone.equations:
        mask &= (grid @ np.array(cone.equations, dtype=np.int64).T == 0).all(axis=1)
    return mask


def _closed_mask(grid: np.ndarray, cone: Cone) -> np.ndarray:
    mask = np.ones(len(grid), dtype=bool)
    ineqs = [cone.group.free(f) for f in cone.inequalities]
    if ineqs and grid.shape[1]:
        mask &= (grid @ np.array(ineqs, dtype=np.int64).T <= 0).all(axis=1)
    return mask


def jet_oracle(obj, H: str = "Z", radius: int = 10) -> JetReport:
    """Count lifts of integer jets through every cell, exhaustively on a box.

    For H = "Q" the same box is used: rational jets are positive multiples of
    integer ones, and lifting only depends on the ray."""
    if H not in ("Z", "Q"):
        raise ValueError(f"unsupported value group {H!r}")
    f = _as_morphism(obj)
    S = f.source
    counts, uncovered, multiple = {}, [], []
    for c in range(len(S.cells)):
        star = local_star(S, c)
        grid = _grid(star.dim, radius)
        by_target: dict[int, np.ndarray] = {}
        total = np.zeros(len(grid), dtype=np.int64)
        for rho, cone in star.cones.items():
            mask = _relint_mask(grid, cone)
            tc = _target_cell(f, star, rho)
            by_target.setdefault(tc, np.zeros(len(grid), dtype=np.int64))
            by_target[tc] += mask
            total += mask
        for tc, arr in sorted(by_target.items()):
            for k in np.nonzero(arr)[0]:
                pt = tuple(int(x) for x in grid[k])
                counts[(c, tc, pt)] = int(arr[k])
                if arr[k] > 1:
                    multiple.append((c, tc, pt))
        region = np.zeros(len(grid), dtype=bool)
        for R in _region(f, star):
            region |= _closed_mask(grid, R)
        for k in np.nonzero(region & (total == 0))[0]:
            uncovered.append((c, tuple(int(x) for x in grid[k])))
    return JetReport(radius, counts, uncovered, multiple)


def oracle_verdicts(obj, radius: int = 10) -> tuple[Verdict, Verdict]:
    rep = jet_oracle(obj, "Z", radius)
    sep = Verdict("separated", rep.separated, {"jet": list(rep.multiple[0])} if rep.multiple else None)
    over = Verdict("overconvergent", rep.overconvergent, {"jet": list(rep.uncovered[0])} if rep.uncovered else None)
    return sep, over
