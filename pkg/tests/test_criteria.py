import itertools
import random

import pytest

from f1cones import gallery
from f1cones.complex import ComplexMorphism, ConeComplex, Gluing, big_star, identity_matrix, restrict
from f1cones.criteria import (
    check_algebraisable,
    check_noetherian,
    check_normal,
    check_overconvergent,
    check_proper,
    check_proper_limit,
    check_quasicompact,
    check_separated,
    classify,
    jet_oracle,
    oracle_verdicts,
)
from f1cones.cone import Cone
from f1cones.characters import CharacterGroup
from f1cones.functors import blow_up, expansion_stages

SMALL = [name for name in gallery.GALLERY if name not in gallery.LOOPS]


def relabel(S: ConeComplex, perm) -> ConeComplex:
    """The same complex with cone i stored at position perm[i]."""
    cones = [None] * len(S.cones)
    for i, p in enumerate(perm):
        cones[p] = S.cones[i]
    gl = [Gluing(perm[g.i], g.cutter_i, perm[g.j], g.cutter_j, g.charmap) for g in S.gluings]
    return ConeComplex(cones, gl)


# separation ------------------------------------------------------------------------------


def test_separated_examples():
    assert check_separated(gallery.projective_line()).holds
    v = check_separated(gallery.doubled_line())
    assert not v.holds and v.witness["pair"] == [0, 1]
    assert check_separated(gallery.affine_space(2)).holds


def test_separated_relative():
    B, A = gallery.blowup_plane(), gallery.affine_space(2)
    f = ComplexMorphism(B, A, [(0, identity_matrix(2))] * 2)
    assert check_separated(f).holds
    D = gallery.doubled_line()
    g = ComplexMorphism(D, gallery.affine_space(1), [(0, identity_matrix(1))] * 2)
    v = check_separated(g)
    assert not v.holds and v.witness["target_cone"] == 0


@pytest.mark.parametrize("name", SMALL)
def test_separation_is_monotone(name):
    S = gallery.GALLERY[name]()
    if not check_separated(S).holds:
        return
    for i in range(len(S.cones)):
        assert check_separated(big_star(S, i)).holds
    for size in range(1, len(S.cones)):
        for sub in itertools.combinations(range(len(S.cones)), size):
            assert check_separated(restrict(S, sub)).holds


# overconvergence and properness -----------------------------------------------------------


def test_overconvergent_examples():
    assert check_overconvergent(gallery.projective_line()).holds
    v = check_overconvergent(gallery.affine_space(1))
    assert not v.holds and v.witness["direction"] == [1]
    B, A = gallery.blowup_plane(), gallery.affine_space(2)
    assert check_overconvergent(ComplexMorphism(B, A, [(0, identity_matrix(2))] * 2)).holds


def test_proper_examples():
    assert check_proper(gallery.projective_line()).holds
    assert check_proper(gallery.projective_space(3)).holds
    from f1cones.complex import point_complex

    assert check_proper(point_complex()).holds
    assert not check_proper(gallery.affine_space(1)).holds


def test_el_tower_is_not_proper_in_the_limit():
    V = Cone.from_rays(CharacterGroup(2), [(0, -1), (-1, -1)])
    stages = expansion_stages(V, (1, 0), [(0, 1)], "él", 4)
    v = check_proper_limit(stages)
    assert not v.holds and v.witness["cone_counts"] == [1, 2, 3, 4]
    assert check_proper_limit(stages[:1]).holds


@pytest.mark.parametrize("name", ["P1", "P2", "Bl0A2", "A2", "doubled-line", "F2"])
def test_proper_is_invariant_under_relabeling(name):
    S = gallery.GALLERY[name]()
    rng = random.Random(len(name))
    perm = list(range(len(S.cones)))
    rng.shuffle(perm)
    T = relabel(S, perm)
    assert check_proper(T).holds == check_proper(S).holds
    assert check_separated(T).holds == check_separated(S).holds


@pytest.mark.parametrize("name", ["A2", "P2", "Bl0A2", "P1xA1", "F1"])
def test_blow_ups_are_overconvergent_over_their_base(name):
    S = gallery.GALLERY[name]()
    ideals = [[tuple(h) for h in pc.cone.polar_generators()] for pc in S.cones]
    _, f = blow_up(S, ideals)
    assert check_overconvergent(f).holds


# classification ----------------------------------------------------------------------------


def test_classify_examples():
    rep = classify(gallery.projective_line())
    assert rep["quasicompact"] and rep["noetherian"] and rep["connected"]
    rep = classify(gallery.disjoint_lines())
    assert rep["quasicompact"] and not rep["connected"] and rep["components"] == 2
    assert not classify(gallery.tate_loop(1))["algebraisable"]


def test_single_checks():
    assert check_quasicompact(gallery.projective_line()).holds
    assert check_noetherian(gallery.square_cone()).holds
    assert check_normal(gallery.weighted_plane()).holds
    v = check_algebraisable(gallery.tate_loop(2))
    assert not v.holds and v.witness["matrix"] == [[1, 2], [0, 1]]


def test_verdicts_serialize():
    v = check_separated(gallery.doubled_line())
    js = v.to_json()
    assert js["property"] == "separated" and js["holds"] is False and js["witness"]["pair"] == [0, 1]


# the jet oracle ------------------------------------------------------------------------------


def test_oracle_examples():
    rep = jet_oracle(gallery.projective_line())
    assert rep.lifts((5,)) == 1
    rep = jet_oracle(gallery.doubled_line())
    assert rep.lifts((-3,)) == 2 and rep.lifts((0,)) == 1
    L = gallery.disjoint_lines()
    rep = jet_oracle(L)
    origins = [c for c, cell in enumerate(L.cells) if cell.nodes[0][1] == ()]
    assert [rep.lifts((0,), c) for c in origins] == [1, 1]


def test_oracle_over_q_matches_z():
    for name in ("P1", "doubled-line", "A1"):
        S = gallery.GALLERY[name]()
        assert jet_oracle(S, "Q", 4).counts == jet_oracle(S, "Z", 4).counts
    with pytest.raises(ValueError):
        jet_oracle(gallery.projective_line(), "R")


@pytest.mark.parametrize("name", ["P1", "A1", "doubled-line", "formal-doubled-line", "Bl0A2", "tate-chain-3"])
def test_oracle_agrees_with_exact_checks(name):
    S = gallery.GALLERY[name]()
    sep, over = oracle_verdicts(S, radius=6)
    assert sep.holds == check_separated(S).holds
    assert over.holds == check_overconvergent(S).holds
