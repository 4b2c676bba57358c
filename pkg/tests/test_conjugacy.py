import random
from fractions import Fraction

import pytest

from cstar_graph import algebra as alg
from cstar_graph import conjugacy as cj
from cstar_graph import endo as en
from cstar_graph.algebra import Element
from cstar_graph.conjugacy import Direction, HypothesisError, Verdict
from cstar_graph.graph import build_graph
from cstar_graph.parsing import parse_element

from conftest import O2, O3, VW, random_B_unitary, random_word_unitary


def pe(text, g=O2):
    return parse_element(text, g)


# quasi-free MASA criterion


def test_masa_flip(flip):
    assert flip * pe("P1") * flip.adjoint() == pe("P2")
    v = cj.masa_check(flip, depth=4)
    assert v.verdict is Verdict.INVARIANT
    assert v.diagonal_level1_preserved and not v.moved_generators


def test_masa_rotation(rotation):
    # u S1 = 3/5 S1 - 4/5 S2, so the cross terms carry -12/25
    img = rotation * pe("P1") * rotation.adjoint()
    assert img == pe("9/25 P1 - 12/25 (S1 S2' + S2 S1') + 16/25 P2")
    v = cj.masa_check(rotation)
    assert v.verdict is Verdict.NOT_INNER_CONJUGATE
    moved = dict(v.moved_generators)
    assert moved["1"] == img
    assert not alg.membership(moved["1"], "Dk", 1)


def test_masa_w_inapplicable(w):
    v = cj.masa_check(w)
    assert v.verdict is Verdict.INAPPLICABLE
    assert not v.u_in_B and v.unitary


def test_masa_non_unitary_inapplicable():
    assert cj.masa_check(pe("S1 S2'")).verdict is Verdict.INAPPLICABLE


def test_masa_on_two_vertex_graph():
    # B over the {v, w} graph: the e1/e2 block at v and the f block at w
    swap = pe("S(e1) S(e2)' + S(e2) S(e1)' + S(f) S(f)'", VW)
    assert cj.masa_check(swap).verdict is Verdict.INVARIANT
    rot = pe("(3/5)(S(e1) S(e1)' + S(e2) S(e2)') + (4/5)(S(e1) S(e2)' - S(e2) S(e1)') + S(f) S(f)'", VW)
    v = cj.masa_check(rot)
    assert v.verdict is Verdict.NOT_INNER_CONJUGATE
    assert sorted(e for e, _ in v.moved_generators) == ["e1", "e2"]


@pytest.mark.parametrize("seed", range(15))
def test_masa_verdict_soundness(seed):
    u = random_B_unitary(random.Random(seed))
    v = cj.masa_check(u)
    moved = [e for e in O2.edges if not alg.membership(u * pe(f"P{e}") * u.adjoint(), "Dk", 1)]
    assert v.u_in_B and v.unitary
    assert (v.verdict is Verdict.NOT_INNER_CONJUGATE) == bool(moved)
    if v.verdict is Verdict.INVARIANT:
        e = en.make_endo(u)
        for mu in O2.enumerate_paths(4):
            assert alg.membership(e.apply(alg.p(O2, mu)), "Dk", 4)


def test_masa_pairwise(rotation, flip):
    one = Element.unit(O2)
    assert cj.masa_pairwise(rotation, rotation).verdict is Verdict.INVARIANT
    assert cj.masa_pairwise(rotation, one).verdict is Verdict.NOT_INNER_CONJUGATE
    assert cj.masa_pairwise(flip, one).verdict is Verdict.INVARIANT


def test_masa_pairwise_inapplicable(w, flip):
    assert cj.masa_pairwise(w, flip).verdict is Verdict.INAPPLICABLE


def test_masa_report_serialises(rotation):
    d = cj.masa_check(rotation).to_dict()
    assert d["verdict"] == "NOT_INNER_CONJUGATE"
    assert d["moved_generators"][0][0] == "1"


# trace ratios


def test_trace_ratio_examples(w, flip):
    assert cj.trace_ratio(en.identity(O2), "2121") == 1
    assert cj.trace_ratio(en.make_endo(w), "22") == Fraction(1, 2)
    assert cj.trace_ratio(en.make_endo(flip), "1") == 1
    with pytest.raises(alg.AlgebraError):
        cj.trace_ratio(en.identity(VW), ("e1",))


def test_example_images_and_ratios(w):
    lw = en.make_endo(w)
    for k in range(1, 9):
        beta = "2" * k
        gamma = "2" + "12" * (k - 1)
        assert lw.apply(pe(f"P{beta}")) == pe(f"P{gamma}")
        assert alg.trace(pe(f"P{gamma}")) == Fraction(1, 2 ** (2 * k - 1))
        assert cj.trace_ratio(lw, beta) == Fraction(1, 2 ** (k - 1))


def test_ratio_scan_identity_and_flip(flip):
    for endo, L in ((en.identity(O2), 6), (en.make_endo(flip), 4)):
        rep = cj.ratio_scan(endo, L)
        assert rep.observed_bounds == (1, 1)
        assert all(r.min_ratio == r.max_ratio == 1 for r in rep.lengths.values())


def test_ratio_scan_w(w):
    rep = cj.ratio_scan(en.make_endo(w), 6)
    assert rep.lengths[1].argmin == "1"  # all ratios 1 at length one; tie goes to "1"
    for k, row in rep.lengths.items():
        if k > 1:
            assert row.argmin == "2" * k
        assert row.min_ratio == Fraction(1, 2 ** (k - 1))
        assert row.min_ratio <= row.max_ratio
    assert rep.observed_bounds == (Fraction(1, 32), Fraction(6))


def test_ratio_scan_ties_and_serialisation(w):
    rep = cj.ratio_scan(en.identity(O2), 2)
    assert rep.lengths[2].argmin == rep.lengths[2].argmax == "11"
    d = cj.ratio_scan(en.make_endo(w), 3).to_dict()
    assert d["lengths"]["3"]["min_ratio"] == "1/4"
    assert d["observed_bounds"] == ["1/4", "2"]


def test_ratio_scan_parallel_matches_serial(w):
    lw = en.make_endo(w)
    assert cj.ratio_scan(lw, 5, workers=3) == cj.ratio_scan(lw, 5, workers=1)


@pytest.mark.parametrize("seed", range(6))
def test_trace_preserved_by_core_permutative_unitaries(seed):
    rng = random.Random(seed)
    while True:
        u = random_word_unitary(rng, O2, 3)
        if alg.membership(u, "F"):
            break
    rep = cj.ratio_scan(en.make_endo(u), 4)
    assert rep.observed_bounds == (1, 1)


def _spread_bound_holds(endo, L, K, n=2):
    rep = cj.ratio_scan(endo, L)
    return all(r.max_ratio <= r.min_ratio * n ** (2 * K) for r in rep.lengths.values())


@pytest.mark.parametrize("seed", range(4))
def test_ratio_spread_bound_for_core_word_unitaries(seed):
    rng = random.Random(seed)
    while True:
        u = random_word_unitary(rng, O2, 2)
        if alg.membership(u, "F"):
            break
    assert _spread_bound_holds(en.make_endo(u), 4, u.max_word_length())


def test_ratio_spread_bound_fails_for_w(w):
    # min ratios 2^-(k-1) go to 0 while K = 3 stays fixed, so max/min outgrows n^(2K)
    lw = en.make_endo(w)
    assert _spread_bound_holds(lw, 5, 3)
    rep = cj.ratio_scan(lw, 6)
    assert rep.lengths[6].max_ratio / rep.lengths[6].min_ratio == 192 > 2 ** 6


# witness families


def test_family_w_to_zero(w):
    fam = cj.family_ratio(en.make_endo(w), "", "2", 12)
    assert fam.ratios == [Fraction(1, 2 ** (k - 1)) for k in range(1, 13)]
    assert fam.detected_law == (1, Fraction(1, 2))
    assert fam.direction is Direction.TO_ZERO
    assert fam.assessment == "EVIDENCE"


def test_family_identity():
    fam = cj.family_ratio(en.identity(O2), "1", "21", 5)
    assert fam.detected_law == (1, 1)
    assert fam.direction is Direction.NONE
    assert fam.assessment == "INCONCLUSIVE"


def test_family_inverse_direction(w):
    inv = en.inverse_search(en.make_endo(w), 3)
    # gamma words 2(12)^k map back onto beta words
    fam = cj.family_ratio(inv, "2", "12", 6)
    assert fam.ratios == [Fraction(2 ** k) for k in range(1, 7)]
    assert fam.detected_law == (2, 2)
    assert fam.direction is Direction.TO_INFINITY


def test_family_without_law():
    # r_k = (2^k + 1) / 2 diverges but is not exactly geometric
    u = pe("S11 S1' + S12 S21' + S2 S22'")
    fam = cj.family_ratio(en.make_endo(u), "", "2", 5)
    assert fam.ratios == [Fraction(2 ** k + 1, 2) for k in range(1, 6)]
    assert fam.detected_law is None
    assert fam.direction is Direction.NONE and fam.assessment == "INCONCLUSIVE"
    fam = cj.family_ratio(en.make_endo(u), "", "12", 5)
    assert fam.detected_law == (Fraction(3, 4), Fraction(1, 2))


def test_family_errors(w):
    lw = en.make_endo(w)
    with pytest.raises(ValueError):
        cj.family_ratio(lw, "1", "", 3)
    with pytest.raises(ValueError):
        cj.family_ratio(lw, "1", "2", 0)


# finite Fourier structure


def test_check_D_into_F_examples(w, flip, rotation):
    assert cj.check_D_into_F(flip) and cj.check_D_into_F(rotation)
    assert cj.check_D_into_F(w)
    assert cj.check_D_into_F(w, extra_depth=1)
    # permutes the diagonal words 11 -> 1, 12 -> 21, 2 -> 22
    assert cj.check_D_into_F(pe("S11 S1' + S12 S21' + S2 S22'"))


def test_check_D_into_F_failure():
    u = pe("S11 S1' + S12 S21' + S2 S22'") * pe("(3/5)(S1 S1' + S2 S2') + (4/5)(S1 S2' - S2 S1')")
    assert alg.is_unitary(u)
    assert not cj.check_D_into_F(u)
    assert cj.diagonal_into_core_failure(u).word() == "1"


def test_dk_family_w(w):
    fam = dict(cj.dk_family(w))
    assert fam == {-1: pe("P212"), 0: pe("P1 + P211"), 1: pe("P22")}
    assert fam[0] + fam[-1] + fam[1] == Element.unit(O2)
    for a in fam.values():
        assert a * a == a
        for b in fam.values():
            if a is not b:
                assert alg.is_zero(a * b)


def test_dk_family_core_unitaries(flip, rotation):
    for u in (flip, rotation):
        assert [(k, d) for k, d in cj.dk_family(u)] == [(0, Element.unit(O2))]


def test_dk_family_refuses():
    bad = pe("S11 S1' + S12 S21' + S2 S22'") * pe("(3/5)(S1 S1' + S2 S2') + (4/5)(S1 S2' - S2 S1')")
    with pytest.raises(HypothesisError, match="leaves the core"):
        cj.dk_family(bad)
    with pytest.raises(HypothesisError, match="unitary"):
        cj.dk_family(pe("S1"))


@pytest.mark.parametrize("seed", range(8))
def test_dk_family_random_word_unitaries(seed):
    u = random_word_unitary(random.Random(seed), O2, 3)
    fam = cj.dk_family(u)
    assert sum((d for _, d in fam), Element.zero(O2)) == Element.unit(O2)
    for k, d in fam:
        assert alg.fourier_component(u, k) == u * d


def test_criteria_need_cuntz_graph():
    assert alg.cuntz_rank(O3) == 3
    with pytest.raises(alg.AlgebraError):
        cj.ratio_scan(en.identity(VW), 2)
    loops = build_graph(["a", "b"], [("x", "a", "b"), ("y", "b", "a"), ("z", "a", "a")])
    with pytest.raises(alg.AlgebraError):
        cj.check_D_into_F(Element.unit(loops))
