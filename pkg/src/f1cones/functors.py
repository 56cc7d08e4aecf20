"""Passing between scheme atlases and cone complexes, plus the geometric
constructions built on top: normalization, blow-ups, formal completion,
algebraisation and expansions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from . import lattice as lat
from .characters import CharacterGroup
from .complex import (
    ComplexMorphism,
    ConeComplex,
    Gluing,
    apply,
    as_matrix,
    big_star,
    components,
    identity_matrix,
    mat_inv,
    mat_mul,
    mat_t,
    monodromy,
    shared_faces,
)
from .cone import Cone, PuncturedCone, hilbert_basis, linearity_domains
from .errors import InvariantError, KrullWarning, NonConstantCharacters, NonIsomorphicGluing, ZeroCenter, ZeroIdeal
from .f1algebra import (
    F1Algebra,
    MonomialIdeal,
    completion_punctures,
    krull_injective,
    localize,
    normalize,
    rees_chart,
    underlying_integral,
)


@dataclass(frozen=True)
class SchemeGluing:
    """Identifies localize(A_i, f_i) with localize(A_j, f_j); the matrix maps K_j -> K_i."""

    i: int
    f_i: tuple
    j: int
    f_j: tuple
    charmap: tuple

    def __post_init__(self):
        object.__setattr__(self, "f_i", tuple(int(x) for x in self.f_i))
        object.__setattr__(self, "f_j", tuple(int(x) for x in self.f_j))
        object.__setattr__(self, "charmap", as_matrix(self.charmap))


def _transport(group: CharacterGroup, m, x) -> tuple:
    r = group.rank
    free = apply(m, x[:r]) if r else ()
    return group.element(tuple(free) + tuple(x[r:]))


class SchemeAtlas:
    """Affine charts glued along principal localizations."""

    def __init__(self, charts: Sequence[F1Algebra], gluings: Sequence = ()):
        self.charts = tuple(charts)
        gl = []
        for g in gluings:
            if not isinstance(g, SchemeGluing):
                g = SchemeGluing(*g)
            self._check(g)
            gl.append(g)
        self.gluings = tuple(gl)

    def _check(self, g: SchemeGluing):
        n = len(self.charts)
        if not (0 <= g.i < n and 0 <= g.j < n):
            raise InvariantError(f"gluing refers to a missing chart: {g.i}, {g.j}")
        A, B = self.charts[g.i], self.charts[g.j]
        if A.group.rank != B.group.rank or A.group.torsion != B.group.torsion:
            raise NonIsomorphicGluing(f"charts {g.i} and {g.j} have different character groups")
        r = A.group.rank
        if len(g.charmap) != r or (r and abs(lat.det(g.charmap)) != 1):
            raise NonIsomorphicGluing(f"charmap of gluing {g.i}-{g.j} is not invertible over Z")
        la, lb = localize(A, g.f_i), localize(B, g.f_j)
        inv = mat_inv(g.charmap)
        if not all(la.contains(_transport(A.group, g.charmap, y)) for y in lb.generators) or not all(
            lb.contains(_transport(B.group, inv, x)) for x in la.generators
        ):
            raise NonIsomorphicGluing(f"gluing {g.i}-{g.j} does not identify the two localizations")

    def __eq__(self, other):
        if not isinstance(other, SchemeAtlas):
            return NotImplemented
        return self.charts == other.charts and sigma(self) == sigma(other)

    def __hash__(self):
        return hash(len(self.charts))

    def __repr__(self):
        return f"SchemeAtlas({len(self.charts)} charts, {len(self.gluings)} gluings)"


class FormalSchemeAtlas:
    """A scheme atlas with an ideal of definition per chart (None: no completion)."""

    def __init__(self, atlas: SchemeAtlas, ideals: Sequence[Optional[MonomialIdeal]], krull_flags: Sequence[int] = ()):
        if len(ideals) != len(atlas.charts):
            raise InvariantError("one ideal (or None) per chart is required")
        self.atlas = atlas
        self.ideals = tuple(ideals)
        self.krull_flags = tuple(krull_flags)
        for k, T in enumerate(self.ideals):
            if T is not None and T.owner != atlas.charts[k]:
                raise InvariantError(f"ideal {k} belongs to a different algebra")

    @property
    def charts(self):
        return self.atlas.charts

    @property
    def gluings(self):
        return self.atlas.gluings

    def __eq__(self, other):
        if not isinstance(other, FormalSchemeAtlas):
            return NotImplemented
        return self.atlas.charts == other.atlas.charts and sigma(self) == sigma(other)

    def __hash__(self):
        return hash(len(self.atlas.charts))

    def __repr__(self):
        return f"FormalSchemeAtlas({len(self.charts)} charts, ideals={[None if t is None else list(t.generators) for t in self.ideals]})"


# sigma and spec ----------------------------------------------------------------


def sigma(X) -> ConeComplex:
    """The punctured cone complex of an atlas."""
    if isinstance(X, FormalSchemeAtlas):
        atlas, ideals = X.atlas, X.ideals
    else:
        atlas, ideals = X, (None,) * len(X.charts)
    cones = []
    for A, T in zip(atlas.charts, ideals):
        B = underlying_integral(A)
        cone = Cone(B.group, B.log_generators())
        punct = [] if T is None else completion_punctures(A, T)
        cones.append(PuncturedCone(cone, punct))
    gluings = []
    for g in atlas.gluings:
        ci, cj = cones[g.i], cones[g.j]
        fi, fj = ci.cone.face(g.f_i), cj.cone.face(g.f_j)
        if ci.is_punctured(fi) or cj.is_punctured(fj):
            continue
        gluings.append(Gluing(g.i, g.f_i, g.j, g.f_j, g.charmap))
    return ConeComplex(cones, gluings)


def spec(S: ConeComplex) -> FormalSchemeAtlas:
    """Normal charts (Hilbert bases of the polar monoids) with ideals of definition
    generated by the cutters of the maximal punctures."""
    charts, ideals = [], []
    for pc in S.cones:
        A = F1Algebra(pc.group, tuple(hilbert_basis(pc.cone)))
        charts.append(A)
        maxp = pc.maximal_punctures()
        ideals.append(MonomialIdeal(A, tuple(f.cutter for f in maxp)) if maxp else None)
    gluings = [SchemeGluing(g.i, g.cutter_i, g.j, g.cutter_j, g.charmap) for g in S.gluings]
    return FormalSchemeAtlas(SchemeAtlas(charts, gluings), ideals)


def normalize_scheme(X: SchemeAtlas) -> SchemeAtlas:
    charts = [normalize(A)[0] for A in X.charts]
    return SchemeAtlas(charts, X.gluings)


# blow-ups ------------------------------------------------------------------------


@dataclass
class _Piece:
    chart: int
    cone: Cone
    top: tuple  # the ideal generator that is maximal on this piece


def _ideal_generators(ideal, group) -> list[tuple]:
    if ideal is None:
        raise ZeroIdeal("blow-up needs a nonzero ideal on every chart")
    gens = ideal.generators if isinstance(ideal, MonomialIdeal) else ideal
    gens = [group.element(t) for t in gens]
    if not gens:
        raise ZeroIdeal("blow-up needs a nonzero ideal on every chart")
    return gens


def _refine(S: ConeComplex, ideals: Sequence) -> tuple[ConeComplex, list[_Piece]]:
    pieces: list[_Piece] = []
    for i, pc in enumerate(S.cones):
        gens = _ideal_generators(ideals[i], pc.group)
        for cone, top in linearity_domains(pc.cone, gens):
            pieces.append(_Piece(i, cone, top))
    new_cones = []
    for p in pieces:
        parent = S.cones[p.chart]
        punct = []
        for F in p.cone._face_table:
            rays = [p.cone.ray_tuple[k] for k in F]
            centre = tuple(sum(x) for x in zip(*rays)) if rays else (0,) * p.cone.rank
            if parent.is_punctured(parent.cone.minimal_face_containing(centre)):
                punct.append(F)
        new_cones.append(PuncturedCone(p.cone, punct))
    gluings = []
    # pieces of one cone meet where their top generators agree
    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            pa, pb = pieces[a], pieces[b]
            if pa.chart != pb.chart:
                continue
            grp = S.cones[pa.chart].group
            ca, cb = grp.sub(pb.top, pa.top), grp.sub(pa.top, pb.top)
            fa, fb = pa.cone.face(ca), pb.cone.face(cb)
            if new_cones[a].is_punctured(fa) or new_cones[b].is_punctured(fb):
                continue
            gluings.append(Gluing(a, ca, b, cb, identity_matrix(grp.rank)))
    # pieces across an original gluing
    for g in S.gluings:
        ci, cj = S.cones[g.i], S.cones[g.j]
        Fi, Fj = ci.cone.face(ci.group.element(g.cutter_i)), cj.cone.face(cj.group.element(g.cutter_j))
        mt = mat_t(g.charmap, ci.group.rank)
        gi = _ideal_generators(ideals[g.i], ci.group)
        gj = [ci.group.element(apply(g.charmap, ci.group.free(t))) for t in _ideal_generators(ideals[g.j], cj.group)]
        if not (_divides_on(Fi.rays, gj, gi) and _divides_on(Fi.rays, gi, gj)):
            raise InvariantError(f"ideals are not compatible across gluing {g.i}-{g.j}")

        def restricted(chart, F):
            out = {}
            for k, p in enumerate(pieces):
                if p.chart != chart:
                    continue
                face = p.cone.face(S.cones[chart].group.element(F.cutter))
                if face.dim == F.dim:
                    out[k] = face
            return out

        side_i, side_j = restricted(g.i, Fi), restricted(g.j, Fj)
        keyed_j = {tuple(sorted(face.rays)): (k, face) for k, face in side_j.items()}
        if len(side_i) != len(side_j):
            raise InvariantError(f"ideals are not compatible across gluing {g.i}-{g.j}")
        for k, face in side_i.items():
            key = tuple(sorted(apply(mt, v) for v in face.rays))
            if key not in keyed_j:
                raise InvariantError(f"ideals are not compatible across gluing {g.i}-{g.j}")
            l, face_j = keyed_j[key]
            if new_cones[k].is_punctured(face) or new_cones[l].is_punctured(face_j):
                continue
            gluings.append(Gluing(k, face.cutter, l, face_j.cutter, g.charmap))
    return ConeComplex(new_cones, gluings), pieces


def _divides_on(rays, gens, others) -> bool:
    """Every element of ``others`` lies in the ideal generated by ``gens`` after
    localizing to the face spanned by ``rays``."""
    return all(any(all(lat.dot(_minus(o, h), r) <= 0 for r in rays) for h in gens) for o in others)


def _minus(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def blow_up(X, ideals: Sequence, normalize_charts: bool = False):
    """Blow up an atlas or complex along per-chart monomial ideals.

    Returns (result, morphism to the original complex). For a complex the
    result is the refinement; for a scheme atlas it is the atlas of Rees
    charts (optionally normalized), and ``result.non_normal`` lists charts
    that are not normal."""
    if isinstance(X, ConeComplex):
        refined, pieces = _refine(X, ideals)
        morph = ComplexMorphism(refined, X, [(p.chart, identity_matrix(X.cones[p.chart].group.rank)) for p in pieces])
        return refined, morph
    if isinstance(X, FormalSchemeAtlas):
        raise InvariantError("blow up the underlying scheme atlas and complete afterwards")
    base = sigma(X)
    gens = [_ideal_generators(ideals[i], A.group) for i, A in enumerate(X.charts)]
    refined, pieces = _refine(base, gens)
    charts = []
    for p in pieces:
        A = X.charts[p.chart]
        T = ideals[p.chart] if isinstance(ideals[p.chart], MonomialIdeal) else MonomialIdeal(A, tuple(gens[p.chart]))
        R = rees_chart(A, T, p.top)
        charts.append(normalize(R)[0] if normalize_charts else R)
    sg = []
    for g in refined.gluings:
        ai, aj = charts[g.i], charts[g.j]
        fi = _algebra_cutter(ai, refined.cones[g.i].cone, g.cutter_i)
        fj = _algebra_cutter(aj, refined.cones[g.j].cone, g.cutter_j)
        sg.append(SchemeGluing(g.i, fi, g.j, fj, g.charmap))
    atlas = SchemeAtlas(charts, sg)
    atlas.non_normal = [k for k, A in enumerate(charts) if not normalize(A)[1]]
    morph = ComplexMorphism(sigma(atlas), base, [(p.chart, identity_matrix(X.charts[p.chart].group.rank)) for p in pieces])
    return atlas, morph


def _algebra_cutter(A: F1Algebra, cone: Cone, cutter) -> tuple:
    """An element of A cutting out the same face as ``cutter``."""
    target = cone.face(cone.group.element(cutter)).ray_indices
    for face in cone.faces(restrict_to=A):
        if face.ray_indices == target:
            return face.cutter
    raise InvariantError("face is not cut out by an element of the chart")


# completion ----------------------------------------------------------------------


def _coerce_ideal(A: F1Algebra, ideal) -> Optional[MonomialIdeal]:
    if ideal is None:
        return None
    if isinstance(ideal, MonomialIdeal):
        if ideal.is_zero:
            raise ZeroIdeal("completion needs a nonzero ideal")
        return ideal
    gens = tuple(A.group.element(t) for t in ideal)
    if not gens:
        raise ZeroIdeal("completion needs a nonzero ideal")
    return MonomialIdeal(A, gens)


def complete(X, ideals: Sequence) -> FormalSchemeAtlas:
    """Formal completion along per-chart ideals (None leaves a chart alone).

    Completing a formal atlas again adds the new ideal to the old one, so
    completing twice along the same ideals changes nothing."""
    if isinstance(X, FormalSchemeAtlas):
        atlas, old = X.atlas, X.ideals
    else:
        atlas, old = X, (None,) * len(X.charts)
    if len(ideals) != len(atlas.charts):
        raise InvariantError("one ideal (or None) per chart is required")
    new, flags = [], []
    for k, (A, T0, T) in enumerate(zip(atlas.charts, old, ideals)):
        T = _coerce_ideal(A, T)
        if T is None:
            new.append(T0)
            continue
        gens = list(T0.generators) if T0 is not None else []
        for t in T.generators:
            if t not in gens:
                gens.append(t)
        merged = MonomialIdeal(A, tuple(gens))
        if not krull_injective(A, merged):
            flags.append(k)
            warnings.warn(
                f"chart {k}: an ideal generator has identically zero logarithm on the cone", KrullWarning, stacklevel=2
            )
        new.append(merged)
    out = FormalSchemeAtlas(atlas, new, flags)
    if not flags:
        try:
            sigma(out)
        except NonIsomorphicGluing as e:
            raise InvariantError(f"ideals are not compatible across gluings: {e}") from None
    return out


# algebraisation -------------------------------------------------------------------


@dataclass
class Algebraisation:
    atlas: SchemeAtlas
    markings: list
    filled: ConeComplex


def algebraise(S: ConeComplex) -> Algebraisation:
    """An ordinary atlas plus markings whose completion gives back S."""
    trans = {}
    for comp in components(S):
        ls = monodromy(S, comp[0])
        bad = ls.nontrivial_loops()
        if bad:
            loop = bad[0]
            raise NonConstantCharacters(
                f"monodromy {[list(r) for r in loop.matrix]} around the loop through cones {list(loop.edge[:2])}",
                loop=loop.edge,
                matrix=loop.matrix,
            )
        trans.update(ls.transitions)
    comp_of = {c: k for k, comp in enumerate(components(S)) for c in comp}
    cones = [PuncturedCone(pc.cone) for pc in S.cones]
    gluings = []
    for a in range(len(S.cones)):
        for b in range(a + 1, len(S.cones)):
            if comp_of[a] != comp_of[b]:
                continue
            sh = shared_faces(S, a, b)
            ca, cb = S.cones[a].cone, S.cones[b].cone
            if sh:
                for fa, fb, m in sorted(sh, key=lambda x: (sorted(x[0]), sorted(x[1]))):
                    gluings.append(Gluing(a, ca.face_of_rays(fa).cutter, b, cb.face_of_rays(fb).cutter, m))
            else:
                r = ca.rank
                m = mat_mul(mat_inv(trans[a]), trans[b], r)
                gluings.append(Gluing(a, ca.face_of_rays(frozenset()).cutter, b, cb.face_of_rays(frozenset()).cutter, m))
    filled = ConeComplex(cones, gluings)
    formal = spec(filled)
    atlas = formal.atlas
    markings = []
    for A, pc in zip(atlas.charts, S.cones):
        maxp = pc.maximal_punctures()
        markings.append(MonomialIdeal(A, tuple(f.cutter for f in maxp)) if maxp else None)
    result = Algebraisation(atlas, markings, filled)
    if sigma(complete(atlas, markings)) != S:
        raise InvariantError("algebraisation does not complete back to the input")
    return result


def embedded_closure(S: ConeComplex, chart: int) -> ConeComplex:
    """The formally embedded closure of the open subcomplex generated by one cone."""
    return big_star(S, chart)


# expansions ----------------------------------------------------------------------


def fan_complex(cones: Sequence[Cone]) -> ConeComplex:
    """Cones in one lattice, glued along their common faces with the identity."""
    pcs = [PuncturedCone(c) for c in cones]
    gluings = []
    for a in range(len(cones)):
        for b in range(a + 1, len(cones)):
            ca, cb = cones[a], cones[b]
            common = set(ca.ray_tuple) & set(cb.ray_tuple)
            fa = ca.face_of_rays(frozenset(k for k, v in enumerate(ca.ray_tuple) if v in common))
            fb = cb.face_of_rays(frozenset(k for k, v in enumerate(cb.ray_tuple) if v in common))
            gluings.append(Gluing(a, fa.cutter, b, fb.cutter, identity_matrix(ca.rank)))
    return ConeComplex(pcs, gluings)


def _center(cone: Cone, f, T, balanced: bool) -> list:
    g = cone.group
    if not balanced:
        return [g.element(f)] + [g.element(t) for t in T]
    d = 0
    while all(cone.is_nonpositive(g.sub(t, g.scale(f, d + 1))) for t in T):
        d += 1
        if d > 10_000:
            raise ZeroCenter("center does not meet the divisor of f")
    fd = g.scale(f, d)
    return [fd] + [g.sub(t, fd) for t in T]


def _step(cone: Cone, f, T, balanced: bool) -> tuple[Optional[Cone], list[Cone]]:
    """Blow up the center on one chart; return (piece where f^d is maximal, other pieces)."""
    center = _center(cone, f, T, balanced)
    doms = linearity_domains(cone, center)
    adjacent = next((c for c, top in doms if top == center[0]), None)
    return adjacent, [c for c, _top in doms if c != adjacent]


def _shared_cutter(chart: Cone, neighbour: Cone) -> tuple:
    common = frozenset(k for k, v in enumerate(chart.ray_tuple) if v in set(neighbour.ray_tuple))
    return chart.face_of_rays(common).cutter


def expansion_stages(V: Cone, f, T: Sequence, kind: str, k: int, balanced: bool = True) -> list[ConeComplex]:
    """Stages 1..k of an expansion of V along the open face cut out by f,
    with center generated by T.

    ``Sur`` blows up every chart at each stage, ``sur`` keeps only the chart
    next to the open face, and ``él`` grows the open part by the chart next
    to it and continues on the remaining frontier."""
    if k < 1:
        raise InvariantError("at least one stage is required")
    g = V.group
    T = [g.element(t) for t in T]
    if not T or all(not any(g.free(t)) for t in T):
        raise ZeroCenter("the center is zero")
    f = g.element(f)
    kind = {"el": "él", "él": "él", "Sur": "Sur", "sur": "sur"}.get(kind, kind)
    if kind not in ("él", "Sur", "sur"):
        raise InvariantError(f"unknown expansion kind {kind!r}")
    stages = []
    if kind == "Sur":
        charts = [V]
        for _ in range(k):
            nxt = []
            for c in charts:
                adj, rest = _step(c, f, T, balanced)
                nxt.extend(([adj] if adj is not None else []) + rest)
            charts = sorted(nxt, key=lambda c: c.ray_tuple)
            stages.append(fan_complex(charts))
    elif kind == "sur":
        chart = V
        for _ in range(k):
            adj, _rest = _step(chart, f, T, balanced)
            chart = adj if adj is not None else chart
            stages.append(fan_complex([chart]))
    else:
        opened: list[Cone] = []
        frontier, ff = V, f
        for _ in range(k):
            adj, rest = _step(frontier, ff, T, balanced)
            if adj is None:
                adj, rest = frontier, []
            opened.append(adj)
            stages.append(fan_complex(sorted(opened, key=lambda c: c.ray_tuple)))
            if not rest:
                break
            frontier = rest[0]
            ff = _shared_cutter(frontier, adj)
    return stages


def breakpoints(S: ConeComplex, slope) -> list:
    """Distinct values of ``slope`` on the rays of a complex (helper for expansions)."""
    vals = set()
    for pc in S.cones:
        for v in pc.cone.ray_tuple:
            vals.add(slope(v))
    return sorted(vals)
