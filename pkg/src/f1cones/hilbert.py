"""Hilbert bases of lattice cones.

The pointed part is triangulated (pulling triangulation over the face
lattice); each simplicial piece contributes its generators and the lattice
points of its half-open fundamental parallelepiped. Irreducible candidates
form the Hilbert basis. Lineality is split off first through a saturated
complement.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Sequence

from . import lattice as lat
from .polyhedra import double_description, face_ray_sets, generated_cone_dual


def lattice_points_basis(rays: Sequence[Sequence[int]], lineality: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Minimal generating set of the monoid (cone(rays) + span(lineality)) intersected with Z^n.

    Lineality directions appear as a +/- pair of lattice basis vectors.
    """
    lin_basis = lat.saturation(lineality, n)
    k = len(lin_basis)
    proj, section = lat.complement_projection(lin_basis, n)
    pr = [lat.matvec(proj, r) for r in rays]
    pr = [lat.primitive(v) for v in pr if any(v)]
    pointed = _pointed_basis(pr, n - k)
    out = [tuple(lat.matvec(section, h)) for h in pointed]
    for b in lin_basis:
        out.append(tuple(b))
        out.append(tuple(-x for x in b))
    return sorted(set(out))


def _pointed_basis(rays: list[tuple[int, ...]], m: int) -> list[tuple[int, ...]]:
    if not rays:
        return []
    span = lat.saturation(rays, m)
    d = len(span)
    # coordinates of the rays in the saturated basis of their span
    coords = [tuple(lat.row_lattice_coordinates(span, r)) for r in rays]
    facets, _ = generated_cone_dual(coords, [], d)
    ext, lin = double_description(facets, d)
    if lin:
        raise ValueError("cone is not pointed after removing lineality")
    basis = _full_dim_basis(tuple(ext), tuple(facets), d)
    cols = lat.transpose(span)
    return [tuple(lat.dot(h, col) for col in cols) for h in basis]


def _full_dim_basis(rays: tuple, facets: tuple, d: int) -> list[tuple[int, ...]]:
    faces = face_ray_sets(rays, facets)
    dims = {f: lat.rank([rays[i] for i in f], d) if f else 0 for f in faces}

    def facets_of(g):
        dg = dims[g]
        return [f for f in faces if f < g and dims[f] == dg - 1]

    @lru_cache(maxsize=None)
    def triangulate(g: frozenset) -> tuple[frozenset, ...]:
        if len(g) == dims[g]:
            return (g,)
        v = min(g)
        out = []
        for f in facets_of(g):
            if v in f:
                continue
            for t in triangulate(f):
                out.append(t | {v})
        return tuple(out)

    full = frozenset(range(len(rays)))
    candidates = set(tuple(r) for r in rays)
    for simplex in triangulate(full):
        gens = [rays[i] for i in sorted(simplex)]
        candidates.update(_parallelepiped_points(gens, d))
    candidates.discard((0,) * d)
    cands = sorted(candidates)

    def in_cone(x):
        return all(lat.dot(f, x) <= 0 for f in facets)

    basis = []
    for x in cands:
        reducible = False
        for h in cands:
            if h != x and in_cone([a - b for a, b in zip(x, h)]):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis


def _parallelepiped_points(gens: list[tuple[int, ...]], d: int) -> set[tuple[int, ...]]:
    """Lattice points sum(l_i w_i), 0 <= l_i < 1, for linearly independent w_i spanning Q^d."""
    diag, _, v = lat.smith([list(g) for g in gens], d, d)
    vinv = lat.unimodular_inverse(v)
    winv = lat.inverse([list(g) for g in gens])
    out = set()
    ranges = [range(x) for x in diag]

    def rec(i, acc):
        if i == d:
            x = [sum(acc[j] * vinv[j][c] for j in range(d)) for c in range(d)]
            lam = [sum(Fraction(x[r]) * winv[r][c] for r in range(d)) for c in range(d)]
            frac = [l - floor(l) for l in lam]
            p = [sum(frac[i2] * gens[i2][c] for i2 in range(d)) for c in range(d)]
            out.add(tuple(int(z) for z in p))
            return
        for a in ranges[i]:
            acc.append(a)
            rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return out
