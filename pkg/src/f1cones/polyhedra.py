"""Double description for rational polyhedral cones, in exact integers.

A cone is described either by inequalities ``a . x <= 0`` (H-side) or by
extreme rays plus a lineality basis (V-side). Both directions go through
one Motzkin-style incremental routine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import lattice as lat


def _prim(v) -> tuple[int, ...]:
    return lat.primitive(v)


def double_description(ineqs: Iterable[Sequence[int]], n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Rays and lineality basis of {x in Q^n : a . x <= 0 for all a}.

    Rays are primitive integer vectors sorted lexicographically; they are
    extreme modulo the lineality space.
    """
    cons = [tuple(int(x) for x in a) for a in ineqs if any(a)]
    lin = [tuple(r) for r in lat.identity(n)]
    rays: list[tuple[int, ...]] = []
    done: list[tuple[int, ...]] = []
    for a in cons:
        vals = [lat.dot(a, l) for l in lin]
        k = next((i for i, x in enumerate(vals) if x), None)
        if k is not None:
            l0 = lin[k]
            alpha = vals[k]
            if alpha > 0:
                l0 = tuple(-x for x in l0)
                alpha = -alpha
            new_lin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                al = lat.dot(a, l)
                w = _prim([alpha * x - al * y for x, y in zip(l, l0)])
                if any(w):
                    new_lin.append(w)
            new_rays = []
            for r in rays:
                ar = lat.dot(a, r)
                w = _prim([-alpha * x + ar * y for x, y in zip(r, l0)])
                if any(w):
                    new_rays.append(w)
            new_rays.append(_prim(l0))
            lin = new_lin
            rays = _dedupe(new_rays)
        else:
            tight = [frozenset(j for j, b in enumerate(done) if lat.dot(b, r) == 0) for r in rays]
            pos, neg, keep = [], [], []
            for i, r in enumerate(rays):
                s = lat.dot(a, r)
                if s > 0:
                    pos.append(i)
                else:
                    keep.append(r)
                    if s < 0:
                        neg.append(i)
            for p in pos:
                ap = lat.dot(a, rays[p])
                for q in neg:
                    common = tight[p] & tight[q]
                    if any(common <= tight[r] for r in range(len(rays)) if r != p and r != q):
                        continue
                    aq = lat.dot(a, rays[q])
                    w = _prim([ap * x - aq * y for x, y in zip(rays[q], rays[p])])
                    if any(w):
                        keep.append(w)
            rays = _dedupe(keep)
        done.append(a)
    return sorted(rays), _canonical_span(lin, n)


def _dedupe(vs):
    seen, out = set(), []
    for v in vs:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _canonical_span(vectors: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Integerized reduced row echelon basis of a rational span."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    red, _ = lat.rref(vecs, n)
    return [_prim(r) for r in red]


def canonical_span(vectors, n):
    return _canonical_span(vectors, n)


def generated_cone_dual(rays: Sequence[Sequence[int]], lineality: Sequence[Sequence[int]], n: int):
    """H-description of cone(rays) + span(lineality).

    Returns (facet normals a with a . x <= 0, equation basis e with e . x = 0).
    Facet normals are reduced modulo the equations so the output is canonical.
    """
    ineqs = [tuple(r) for r in rays]
    for l in lineality:
        ineqs.append(tuple(l))
        ineqs.append(tuple(-x for x in l))
    facets, eqs = double_description(ineqs, n)
    facets = sorted(set(reduce_modulo(f, eqs, n) for f in facets))
    return facets, eqs


def reduce_modulo(v: Sequence[int], span_basis: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Canonical representative of v modulo a span given in canonical RREF form."""
    if not span_basis:
        return tuple(v)
    red, piv = lat.rref(span_basis, n)
    w = [Fraction(x) for x in v]
    for row, p in zip(red, piv):
        if w[p]:
            c = w[p]
            w = [x - c * y for x, y in zip(w, row)]
    return _prim(w)


def face_ray_sets(rays: Sequence[Sequence[int]], facets: Sequence[Sequence[int]]) -> dict[frozenset, list[int]]:
    """All faces of a pointed cone as ray-index sets, each mapped to the
    indices of the facets containing it."""
    full = frozenset(range(len(rays)))
    facet_sets = [frozenset(i for i, r in enumerate(rays) if lat.dot(f, r) == 0) for f in facets]
    faces = {full: []}
    frontier = [full]
    while frontier:
        nxt = []
        for face in frontier:
            for s in facet_sets:
                g = face & s
                if g not in faces:
                    faces[g] = []
                    nxt.append(g)
        frontier = nxt
    for face in faces:
        faces[face] = [j for j, s in enumerate(facet_sets) if face <= s]
    return faces
