"""Brute-force references that share no code with the algorithms they check."""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

import sympy


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(x // g for x in v) if g else tuple(v)


def box(dim, radius):
    return product(range(-radius, radius + 1), repeat=dim)


def polar_points(rays, radius):
    """Integer characters f in the box with f . r <= 0 for every ray."""
    return [f for f in box(len(rays[0]), radius) if all(dot(f, r) <= 0 for r in rays)]


def generated_by(basis, rays):
    """Membership in the monoid generated by ``basis`` for a full-dimensional cone,
    by recursion on the grading f -> -f . (sum of rays)."""
    w = tuple(sum(c) for c in zip(*rays))

    @lru_cache(maxsize=None)
    def member(f):
        if not any(f):
            return True
        for b in basis:
            g = tuple(x - y for x, y in zip(f, b))
            if all(dot(g, r) <= 0 for r in rays) and -dot(g, w) < -dot(f, w):
                if member(g):
                    return True
        return False

    return member


def extreme_rays_and_facets_ok(input_rays, rays, facets, equations):
    """Independent certificate for a V/H pair of a pointed cone:
    every extreme ray is an input ray, every input ray satisfies the
    H-description, and every facet is tight on dim-1 independent input rays."""
    prim = {primitive(r) for r in input_rays if any(r)}
    if not set(rays) <= prim:
        return False
    dim = sympy.Matrix([list(r) for r in prim]).rank() if prim else 0
    for r in prim:
        if any(dot(f, r) > 0 for f in facets) or any(dot(e, r) != 0 for e in equations):
            return False
    for f in facets:
        tight = [list(r) for r in prim if dot(f, r) == 0]
        if (sympy.Matrix(tight).rank() if tight else 0) != dim - 1:
            return False
    return True


def cone_rays_2d(generators):
    """Rays of {v in Q^2 : g . v <= 0 for all g}, assuming the cone is pointed and 2-dimensional."""
    cands = set()
    for g in generators:
        for s in (1, -1):
            v = primitive((-s * g[1], s * g[0]))
            if any(v) and all(dot(h, v) <= 0 for h in generators):
                cands.add(v)
    return sorted(cands)


def rees_stages(A, f, center_numerator, stages):
    """Expansion stages computed directly on algebras: every chart is replaced by
    its Rees charts for the ideal (f^d, T / f^d), with d maximal such that T / f^d
    is regular on the chart. Returns, per stage, the sorted ray pairs of the charts."""
    from f1cones.f1algebra import MonomialIdeal, rees_chart

    charts = [A]
    out = []
    for _ in range(stages):
        nxt = []
        for B in charts:
            d = 0
            while B.contains(tuple(t - (d + 1) * x for t, x in zip(center_numerator, f))):
                d += 1
            fd = tuple(d * x for x in f)
            other = tuple(t - d * x for t, x in zip(center_numerator, f))
            T = MonomialIdeal(B, (fd, other))
            for s in (fd, other):
                C = rees_chart(B, T, s)
                rays = cone_rays_2d(C.generators)
                if len(rays) == 2:
                    nxt.append((C, tuple(rays)))
        seen, charts, cones = set(), [], []
        for C, rays in nxt:
            if rays not in seen:
                seen.add(rays)
                charts.append(C)
                cones.append(rays)
        out.append(sorted(cones))
    return out


def slope(v):
    return Fraction(v[0], v[1])


def relint(point, rays):
    """Whether ``point`` is a strictly positive combination of ``rays`` (rays linearly independent)."""
    if not rays:
        return not any(point)
    M = sympy.Matrix([list(r) for r in rays]).T
    try:
        x, params = M.gauss_jordan_solve(sympy.Matrix(list(point)))
    except ValueError:
        return False
    if params.shape[0]:
        return False
    return all(c > 0 for c in x)
