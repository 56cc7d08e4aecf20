
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f1cones.characters import CharacterGroup, present_quotient
from f1cones.errors import (
    EmptyCompletion,
    EmptyPresentation,
    SNotInIdeal,
    UndecidedWithinBound,
    ZeroElement,
    ZeroIdeal,
    ZeroRelation,
)
from f1cones.f1algebra import (
    EMBEDDED,
    F1Algebra,
    MonomialIdeal,
    completion_punctures,
    from_presentation,
    has_enough_jets,
    ideal_membership,
    is_integral,
    krull_injective,
    localize,
    normalize,
    primes,
    quotient_by_prime,
    rees_chart,
    underlying_integral,
    units,
)

from oracles import box, dot

Z1, Z2 = CharacterGroup(1), CharacterGroup(2)
A1 = F1Algebra.free(1)
A2 = F1Algebra.free(2)
XW = from_presentation(2, [((1, 1), (0, 1))])
CUSP = from_presentation(2, [((2, 0), (0, 3))])


# presentations ---------------------------------------------------------------


def test_free_presentation():
    A = from_presentation(1, [])
    assert A.group == Z1 and A.generators == ((1,),)


def test_xw_equals_w_presentation():
    assert XW.group == Z1
    assert XW.generators == ((0,), (1,))


def test_cusp_presentation():
    assert CUSP.group == Z1
    assert CUSP.generators == ((3,), (2,))


def test_presentation_errors():
    with pytest.raises(EmptyPresentation):
        from_presentation(0, [((), ())])
    with pytest.raises(ZeroRelation):
        from_presentation(1, [((1,), 0)])
    assert from_presentation(0, []).group == CharacterGroup(0)


def test_smith_form_of_torsion_presentation():
    # x^2 = 1 style relation x^2 y = y gives torsion Z/2
    A = from_presentation(2, [((2, 1), (0, 1))])
    assert A.group == CharacterGroup(1, (2,))


def test_present_quotient_hand_computation():
    g, images = present_quotient(3, [[2, 0, 0], [0, 3, 0]])
    assert g == CharacterGroup(1, (6,))
    assert len(images) == 3


# integrality -------------------------------------------------------------------


def test_underlying_integral_examples():
    assert underlying_integral(A1) is A1
    U = underlying_integral(XW)
    assert U.mode == EMBEDDED and U == F1Algebra(Z1, ((1,),))
    C = underlying_integral(CUSP)
    assert C == F1Algebra(Z1, ((2,), (3,)))
    assert underlying_integral(U) is U


def test_is_integral_examples():
    assert is_integral(A2)
    assert is_integral(XW) is False
    assert is_integral(CUSP) is True


def test_is_integral_torsion_and_non_cancellative():
    # x^2 = y^2 embeds in Z x Z/2 (x -> (1,0), y -> (1,1)), so it is cancellative
    assert is_integral(from_presentation(2, [((2, 0), (0, 2))])) is True
    # x^2 = xy: x.x = x.y with x != y
    assert is_integral(from_presentation(2, [((2, 0), (1, 1))])) is False


def test_is_integral_reports_truncation():
    # x = y^3 = z: x and z have the same log, but joining them passes through degree 3
    A = from_presentation(3, [((1, 0, 0), (0, 3, 0)), ((0, 0, 1), (0, 3, 0))])
    with pytest.raises(UndecidedWithinBound):
        is_integral(A, degree_bound=1)
    assert is_integral(A, degree_bound=3) is True


# normalization -------------------------------------------------------------------


def test_normalize_cusp():
    B, was = normalize(F1Algebra(Z1, ((2,), (3,))))
    assert B == A1 and was is False


def test_normalize_free_plane():
    B, was = normalize(A2)
    assert B == A2 and was is True


def test_normalize_index_two_monoid():
    A = F1Algebra(Z2, ((2, 0), (1, 1), (0, 2)))
    B, was = normalize(A)
    assert was is True and B == A
    # oracle: every point of the span cone inside the generated group, coordinates <= 4, is in A
    for v in box(2, 4):
        if v[0] >= 0 and v[1] >= 0 and (v[0] + v[1]) % 2 == 0:
            assert A.contains(v)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(any), min_size=1, max_size=4))
def test_normalize_properties(gens):
    g = Z2
    A = F1Algebra(g, tuple(gens))
    B, _ = normalize(A)
    for x in A.generators:
        assert B.contains(x)
    C, was = normalize(B)
    assert was is True and C == B


# units, localization, primes ---------------------------------------------------------


def test_units_examples():
    assert units(A1).rank == 0
    assert units(F1Algebra.laurent(1)) == Z1
    assert units(XW).rank == 0
    # x is killed in the groupification: its image is the identity
    assert XW.generators[0] == Z1.zero


def test_localize_examples():
    assert localize(A1, (1,)) == F1Algebra.laurent(1)
    L = localize(A2, (1, 0))
    assert L == F1Algebra(Z2, ((1, 0), (-1, 0), (0, 1)))
    assert localize(A2, (1, 1)) == F1Algebra.laurent(2)
    with pytest.raises(ZeroElement):
        localize(A2, None)


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_localize_composes(f, g):
    A = F1Algebra(Z2, ((1, 0), (0, 1), (1, 1)))
    twice = localize(localize(A, f), g)
    once = localize(A, (f[0] + g[0], f[1] + g[1]))
    assert twice == once


def test_prime_counts():
    assert len(primes(A1)) == 2
    assert len(primes(A2)) == 4
    assert len(primes(F1Algebra.laurent(1))) == 1


def test_primes_reverse_faces():
    ps = primes(A2)
    for p in ps:
        for q in ps:
            if p.face <= q.face:
                # larger face, smaller complement: the prime grows
                assert set(q.complement_generators) <= set(p.complement_generators)


def test_quotient_by_prime_examples():
    ps = {len(p.face.ray_indices): p for p in primes(A2)}
    ray_primes = [p for p in primes(A2) if len(p.face.ray_indices) == 1]
    # the ray where x vanishes keeps the monomials in x
    p_x = next(p for p in ray_primes if p.complement_generators == ((1, 0),))
    assert quotient_by_prime(A2, p_x) == F1Algebra(Z1, ((1,),))
    zero = ps[0]
    assert zero.is_zero_prime and quotient_by_prime(A2, zero) == A2
    maximal = ps[2]
    assert quotient_by_prime(A2, maximal).group.rank == 0


def test_ideal_membership_examples():
    assert ideal_membership(MonomialIdeal(A2, ((1, 0), (0, 1))), (1, 1))
    assert not ideal_membership(MonomialIdeal(A1, ((2,),)), (1,))
    C = F1Algebra(Z1, ((1,),))
    assert ideal_membership(MonomialIdeal(C, ((2,), (3,))), (5,))


# Rees charts and completion ----------------------------------------------------------


def test_rees_chart_examples():
    T = MonomialIdeal(A2, ((1, 0), (0, 1)))
    assert rees_chart(A2, T, (1, 0)) == F1Algebra(Z2, ((1, 0), (-1, 1)))
    assert rees_chart(A2, MonomialIdeal(A2, ((1, 0),)), (1, 0)) == A2
    T2 = MonomialIdeal(A2, ((1, 0), (0, 2)))
    assert rees_chart(A2, T2, (0, 2)) == F1Algebra(Z2, ((0, 1), (1, -2)))
    with pytest.raises(SNotInIdeal):
        rees_chart(A2, T, (-1, 0))


def test_completion_punctures_examples():
    got = completion_punctures(A2, MonomialIdeal(A2, ((1, 0), (0, 1))))
    assert sorted(sorted(f.rays) for f in got) == [[], [(-1, 0)], [(0, -1)]]
    got = completion_punctures(A2, MonomialIdeal(A2, ((1, 0),)))
    assert sorted(sorted(f.rays) for f in got) == [[], [(0, -1)]]
    got = completion_punctures(A1, MonomialIdeal(A1, ((1,),)))
    assert [f.rays for f in got] == [[]]
    with pytest.raises(ZeroIdeal):
        completion_punctures(A1, MonomialIdeal(A1, ()))
    L = F1Algebra.laurent(1)
    with pytest.raises(EmptyCompletion):
        completion_punctures(L, MonomialIdeal(L, ((1,),)))


def test_krull_examples():
    assert krull_injective(A2, MonomialIdeal(A2, ((1, 0),)))
    assert not krull_injective(XW, MonomialIdeal(XW, (XW.generators[0],)))
    for A in (A1, A2, F1Algebra(Z2, ((2, 0), (1, 1), (0, 2)))):
        assert krull_injective(A, MonomialIdeal(A, A.generators))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-2, 3), st.integers(-2, 3)).filter(any), min_size=2, max_size=4),
    st.integers(0, 3),
)
def test_krull_matches_orthogonality(gens, pick):
    A = F1Algebra(Z2, tuple(gens))
    cone = __import__("f1cones.cone", fromlist=["Cone"]).Cone(Z2, A.log_generators())
    if not cone.is_pointed:
        return
    t = A.generators[pick % len(A.generators)]
    orth = all(dot(t, r) == 0 for r in cone.ray_tuple)
    assert krull_injective(A, MonomialIdeal(A, (t,))) == (not orth)


def test_has_enough_jets():
    assert has_enough_jets(A2)
