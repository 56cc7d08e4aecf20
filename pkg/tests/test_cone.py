import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f1cones.characters import CharacterGroup
from f1cones.cone import (
    Cone,
    Membership,
    PuncturedCone,
    faces,
    hilbert_basis,
    intersect,
    membership,
    polar_cone,
    pullback_character,
    quotient_by_face,
    rays,
    refine_by_function,
)
from f1cones.errors import CharacterMismatch, DimensionBound, InvariantError, NotPointed
from f1cones.f1algebra import F1Algebra, normalize

from oracles import dot, extreme_rays_and_facets_ok, generated_by, polar_points

Z1, Z2, Z3 = CharacterGroup(1), CharacterGroup(2), CharacterGroup(3)
QUADRANT = Cone(Z2, [(1, 0), (0, 1)])

small_vec = st.integers(-3, 3)


def vectors(dim):
    return st.tuples(*[small_vec] * dim).filter(any)


# polar cones and rays -----------------------------------------------------------


def test_polar_cone_examples():
    assert polar_cone(F1Algebra.free(1)).cone.ray_tuple == ((-1,),)
    assert polar_cone(F1Algebra.laurent(1)).cone.ray_tuple == ()
    assert polar_cone(F1Algebra.free(2)).cone == QUADRANT
    assert polar_cone(F1Algebra.free(2)).punctures == frozenset()


def test_rays_examples():
    assert rays(QUADRANT) == [(-1, 0), (0, -1)]
    assert rays(Cone(Z2, [(1, 0), (-1, 0), (0, 1), (0, -1)])) == []
    assert rays(Cone(Z2, [(1, 0), (0, 1), (1, 1)])) == [(-1, 0), (0, -1)]
    with pytest.raises(NotPointed):
        rays(Cone(Z2, [(1, 0)]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.lists(vectors(d), min_size=1, max_size=d + 3)))
def test_polar_involution(raw):
    dim = len(raw[0])
    c = Cone.from_rays(CharacterGroup(dim), raw)
    if not c.is_pointed:
        return
    assert Cone(CharacterGroup(dim), c.polar_generators()) == c
    assert extreme_rays_and_facets_ok(raw, list(c.ray_tuple), list(c.facets), list(c.equations))


# faces ---------------------------------------------------------------------------------


def test_faces_of_quadrant():
    fs = faces(QUADRANT)
    assert len(fs) == 4
    assert sorted(len(f.ray_indices) for f in fs) == [0, 1, 1, 2]


def test_faces_restricted_to_algebra():
    ray = Cone(Z1, [(1,)])
    fs = faces(ray, restrict_to=F1Algebra.free(1))
    assert [f.cutter for f in fs] == [(1,), (0,)]
    A = F1Algebra(Z2, ((2, 0), (1, 1), (0, 2)))
    fs = faces(QUADRANT, restrict_to=A)
    assert len(fs) == 4
    for f in fs:
        assert A.contains(f.cutter)
        assert f.parent.face(f.cutter).ray_indices == f.ray_indices


def test_face_cutters_are_exact():
    c = Cone.from_rays(Z3, [(-1, 0, -1), (0, -1, -1), (1, 0, -1), (0, 1, -1)])
    fs = c.faces()
    assert len(fs) == 10
    for f in fs:
        assert c.is_nonpositive(f.cutter)
        zero = {k for k, r in enumerate(c.ray_tuple) if dot(f.cutter, r) == 0}
        assert zero == set(f.ray_indices)
        # faces of a face are faces, with cutters adding up
        for g in fs:
            if g <= f:
                both = c.face(c.group.add(f.cutter, g.cutter))
                assert both.ray_indices == g.ray_indices


def test_bad_cutter_rejected():
    with pytest.raises(InvariantError):
        QUADRANT.face((-1, 0))


# intersections and refinements ---------------------------------------------------------


def test_intersect_examples():
    opposite = Cone(Z2, [(-1, 0), (0, -1)])
    assert intersect(QUADRANT, opposite).ray_tuple == ()
    half = Cone(Z2, [(-1, 1)])  # v1 >= v2
    assert intersect(QUADRANT, half).ray_tuple == ((-1, -1), (0, -1))
    assert intersect(QUADRANT, QUADRANT) == QUADRANT
    with pytest.raises(CharacterMismatch):
        intersect(QUADRANT, Cone(Z1, [(1,)]))


def test_refine_examples():
    pieces = refine_by_function(QUADRANT, [(1, 0), (0, 1)])
    assert [p.ray_tuple for p in pieces] == [((-1, -1), (-1, 0)), ((-1, -1), (0, -1))]
    assert refine_by_function(QUADRANT, [(1, 1)]) == [QUADRANT]
    pieces = refine_by_function(QUADRANT, [(1, 0), (0, 2)])
    assert [p.ray_tuple for p in pieces] == [((-2, -1), (-1, 0)), ((-2, -1), (0, -1))]


def test_refine_with_zero():
    # max(0, v1 + v2) changes slope inside this cone but not inside the next one
    c = Cone.from_rays(Z2, [(1, 0), (-1, -1)])
    pieces = refine_by_function(c, [(1, 1)], include_zero=True)
    assert [p.ray_tuple for p in pieces] == [((-1, -1), (1, -1)), ((1, -1), (1, 0))]
    c = Cone.from_rays(Z2, [(1, 0), (-1, 1)])
    assert refine_by_function(c, [(1, 1)], include_zero=True) == [c]


def test_refine_needs_functions():
    with pytest.raises(InvariantError):
        refine_by_function(QUADRANT, [])


@settings(max_examples=40, deadline=None)
@given(st.lists(vectors(2), min_size=1, max_size=3))
def test_refinement_covers_quadrant(fs):
    from f1cones.cone import linearity_domains

    domains = linearity_domains(QUADRANT, fs)
    for v in [(a, b) for a in range(-5, 1) for b in range(-5, 1)]:
        top = max(dot(f, v) for f in fs)
        holders = [(p, f) for p, f in domains if p.contains(v)]
        assert holders
        assert all(dot(f, v) == top for _, f in holders)
        interior = [p for p, _ in holders if all(dot(h, v) < 0 for h in p.facets)]
        assert len(interior) <= 1


# Hilbert bases ---------------------------------------------------------------------------


def test_hilbert_basis_examples():
    assert hilbert_basis(Cone(Z1, [(1,)])) == [(1,)]
    assert hilbert_basis(QUADRANT) == [(0, 1), (1, 0)]
    # the saturation of <2,3> has the same cone as F1[t]
    cusp_cone = Cone(Z1, [(2,), (3,)])
    assert hilbert_basis(cusp_cone) == [(1,)]
    assert normalize(F1Algebra(Z1, ((2,), (3,))))[0].generators == ((1,),)


def test_hilbert_basis_of_classic_cone():
    # polar of cone((0,-1), (-2,... )) : the A_1 singularity x^2 = yz-type example
    c = Cone.from_rays(Z2, [(-1, 0), (1, -2)])
    basis = hilbert_basis(c)
    assert basis == [(0, 1), (1, 1), (2, 1)]


def test_hilbert_dimension_bound(monkeypatch):
    monkeypatch.setenv("F1CONES_HILBERT_DIM", "2")
    with pytest.raises(DimensionBound):
        hilbert_basis(Cone(Z3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))


def test_hilbert_basis_against_brute_force():
    rng = random.Random(3)
    for k in range(15):
        dim = 2 + k % 2
        while True:
            raw = [tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(dim + 1)]
            c = Cone.from_rays(CharacterGroup(dim), [r for r in raw if any(r)] or [(1,) * dim])
            if c.is_pointed and c.dim == dim:
                break
        basis = hilbert_basis(c)
        member = generated_by(basis, list(c.ray_tuple))
        assert all(member(p) for p in polar_points(list(c.ray_tuple), 4))


def test_hilbert_basis_with_torsion():
    g = CharacterGroup(1, (2,))
    c = Cone(g, [(1, 0)])
    assert hilbert_basis(c) == [(0, 1), (1, 0)]


# quotients -------------------------------------------------------------------------------


def test_quotient_by_face_examples():
    ray = QUADRANT.face((0, 1))  # where v2 = 0: the ray (-1, 0)
    proj, q = quotient_by_face(QUADRANT, ray)
    assert q.rank == 1 and q.ray_tuple == ((-1,),)
    origin = QUADRANT.face((1, 1))
    proj, q = quotient_by_face(QUADRANT, origin)
    assert q.ray_tuple == QUADRANT.ray_tuple
    whole = QUADRANT.face((0, 0))
    proj, q = quotient_by_face(QUADRANT, whole)
    assert q.rank == 0 and q.ray_tuple == ()


def test_quotient_pullback_recovers_vanishing_inequalities():
    c = Cone.from_rays(Z3, [(-1, 0, -1), (0, -1, -1), (1, 0, -1), (0, 1, -1)])
    for tau in c.faces():
        proj, q = quotient_by_face(c, tau)
        pulled = {pullback_character(proj, c.group, f) for f in q.inequalities}
        vanishing = {f for f in c.inequalities if all(dot(f, r) == 0 for r in tau.rays)}
        assert pulled == vanishing


# punctured cones --------------------------------------------------------------------------


def test_membership_examples():
    disc = PuncturedCone(Cone(Z1, [(1,)]), [frozenset()])
    assert membership(disc, (-3,), "Z") is Membership.KEPT
    assert membership(disc, (0,), "Z") is Membership.PUNCTURED
    assert membership(disc, (2,), "Z") is Membership.OUTSIDE
    assert membership(disc, (Fraction(-1, 2),), "Q") is Membership.KEPT
    plane = PuncturedCone.downward_closed(QUADRANT, [frozenset({0}), frozenset({1})])
    assert membership(plane, (-1, 0)) is Membership.PUNCTURED
    assert membership(plane, (-1, -2)) is Membership.KEPT


def test_punctures_must_be_downward_closed():
    with pytest.raises(InvariantError, match=r"\[\]"):
        PuncturedCone(QUADRANT, [frozenset({0})])
    with pytest.raises(InvariantError):
        PuncturedCone(QUADRANT, [frozenset({0, 1}), frozenset(), frozenset({0}), frozenset({1})])
