import pytest
from hypothesis import assume, given, settings, strategies as st

from platdist.curves import (CurveDiagram, PunctureWord, apply_braid, apply_generator, bounds_above, bounds_below,
                             canonical_loop, canonical_word, cyclic_reduce, geometric_intersection, puncture_word,
                             reduce_word, round_curve, transport)
from platdist.oracle import enumerate_curves
from platdist.plat import PlatPresentation, projection_word, uniform_plat
from platdist.polyline import intersection_by_interleaving, twist_by_polygon

M = 6
SMALL = enumerate_curves(M, 8).curves


# -- frozen values (computed by the polyline oracle, then frozen) --------------

def test_half_twist_of_round_curve():
    r12 = round_curve(6, 1, 2)
    img = apply_generator(r12, 2, 1)
    assert img.word == (1, 6, 3, 2)
    assert twist_by_polygon(r12, 2, 1) == img
    assert geometric_intersection(img, round_curve(6, 2, 3)) == 2
    assert geometric_intersection(img, r12) == 2


def test_intersection_of_round_curves():
    r12, r23, r34 = round_curve(6, 1, 2), round_curve(6, 2, 3), round_curve(6, 3, 4)
    assert geometric_intersection(r12, r23) == 2
    assert geometric_intersection(r12, r34) == 0
    assert geometric_intersection(r12, r12) == 0


def test_loops_of_first_two_planes_meet_twice():
    P = uniform_plat(3, 4)
    assert geometric_intersection(canonical_loop(P, 0, 1), canonical_loop(P, 1, 1)) == 2


def test_puncture_words():
    assert str(puncture_word(round_curve(6, 1, 2))) == "x2^-1 x1^-1"
    assert str(puncture_word(round_curve(6, 2, 3))) == "x2 x3"
    assert str(puncture_word(apply_generator(round_curve(6, 1, 2), 2, 1))) == "x1^-1 x3^-1"


def test_disk_membership():
    assert bounds_below(round_curve(6, 1, 2))
    assert not bounds_below(round_curve(6, 2, 3))
    assert bounds_below(round_curve(6, 1, 4))
    with pytest.raises(ValueError):
        bounds_below(round_curve(6, 1, 1))


def test_transported_loop():
    P = PlatPresentation(3, 2, ((3, 3),))
    c = transport(P, canonical_loop(P, 2, 1), 2, 1)
    assert c.word == (1, 2, 3, 1, 3, 6, 1, 3)


def test_top_disk_set_contains_cap_loops():
    # with an even number of rows the top caps pair (1,2),(3,4),(5,6) in top coordinates
    P = PlatPresentation(3, 2, ((3, 3),))
    for j in (1, 2, 3):
        top = canonical_loop(P, 2, j)
        assert bounds_above(transport(P, top, 2, 1), P)


# -- words and diagrams ------------------------------------------------------

def test_gap_zero_is_infinity():
    assert CurveDiagram.from_word(6, (0, 2)) == CurveDiagram.from_word(6, (6, 2))
    with pytest.raises(ValueError):
        CurveDiagram.from_word(6, (7, 2))
    with pytest.raises(ValueError):
        CurveDiagram.from_word(6, (1, 2, 3))


def test_reduce_removes_bigons():
    assert reduce_word((1, 3, 3, 2)) == (1, 2)
    assert reduce_word((2, 2)) == ()
    assert CurveDiagram.from_word(6, (1, 3, 3, 2)) == CurveDiagram.from_word(6, (1, 2))


def test_essential():
    assert round_curve(6, 1, 2).is_essential()
    assert round_curve(6, 2, 5).is_essential()
    assert not round_curve(6, 3, 3).is_essential()
    assert not round_curve(6, 2, 6).is_essential()
    assert not CurveDiagram.from_word(6, ()).is_essential()


def test_json_infinity_placement():
    assert round_curve(6, 1, 2).to_json()["gaps"] == [0, 2]
    assert round_curve(6, 2, 3).to_json()["gaps"] == [1, 3]
    assert round_curve(6, 1, 1).to_json()["gaps"] == [0, 1]


def test_from_matchings_rejects_crossing_and_split():
    with pytest.raises(ValueError):
        CurveDiagram.from_matchings(6, [1, 2, 3, 4], [(0, 2), (1, 3)], [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        CurveDiagram.from_matchings(6, [1, 2, 3, 4], [(0, 1), (2, 3)], [(0, 1), (2, 3)])


# -- properties --------------------------------------------------------------

curves = st.sampled_from(SMALL)
gens = st.integers(1, M - 1)
signs = st.sampled_from([1, -1])
braids = st.lists(st.integers(1, M - 1).flatmap(lambda k: st.sampled_from([k, -k])), max_size=6)


@given(curves, gens, signs)
@settings(max_examples=300, deadline=None)
def test_inverse_generator_undoes(c, k, s):
    assert apply_generator(apply_generator(c, k, s), k, -s) == c


@given(curves, gens, signs)
@settings(max_examples=150, deadline=None)
def test_half_twist_matches_polyline_oracle(c, k, s):
    assume(len(c) <= 6)
    assert apply_generator(c, k, s) == twist_by_polygon(c, k, s)


@given(curves, st.integers(1, M - 2))
@settings(max_examples=200, deadline=None)
def test_braid_relation_adjacent(c, k):
    assert apply_braid(c, (k, k + 1, k)) == apply_braid(c, (k + 1, k, k + 1))


@given(curves, st.integers(1, M - 1), st.integers(1, M - 1))
@settings(max_examples=200, deadline=None)
def test_far_generators_commute(c, a, b):
    assume(abs(a - b) >= 2)
    assert apply_braid(c, (a, b)) == apply_braid(c, (b, a))


@given(curves, braids)
@settings(max_examples=200, deadline=None)
def test_braid_then_inverse_is_identity(c, w):
    inv = [-x for x in reversed(w)]
    assert apply_braid(apply_braid(c, w), inv) == c


@given(curves, curves, braids)
@settings(max_examples=150, deadline=None)
def test_intersection_is_braid_invariant(a, b, w):
    i = geometric_intersection(a, b)
    assert geometric_intersection(apply_braid(a, w), apply_braid(b, w)) == i
    assert geometric_intersection(b, a) == i


@given(curves, curves)
@settings(max_examples=120, deadline=None)
def test_intersection_matches_interleaving_oracle(a, b):
    assume(len(a) + len(b) <= 10)
    assert geometric_intersection(a, b) == intersection_by_interleaving(a, b)


@given(curves, st.lists(st.integers(0, 20), min_size=1, max_size=4), st.data())
@settings(max_examples=200, deadline=None)
def test_bigon_removal_is_confluent(c, spots, data):
    # insert cancelling pairs, then reduce in a random order
    w = list(c.word)
    for t in spots:
        g = data.draw(st.integers(1, M))
        t = t % (len(w) + 1)
        # only insert at a position of the right parity so the arc structure stays alternating
        t -= t % 2
        w[t:t] = [g, g]
    d = CurveDiagram.from_word(M, w, reduce=False)
    while d.bigons():
        d = d.remove_bigon(data.draw(st.sampled_from(d.bigons())))
    assert canonical_word(d.word) == c.word


def _artin(k, s):
    if s > 0:
        return {k: [k + 1], k + 1: [-(k + 1), k, k + 1]}
    return {k: [k, k + 1, -k], k + 1: [k]}


def _act(pw: PunctureWord, k, s):
    images = _artin(k, s)
    out = []
    for x in pw.letters:
        img = images.get(abs(x), [abs(x)])
        out += img if x > 0 else [-y for y in reversed(img)]
    return PunctureWord(pw.puncture_count, cyclic_reduce(out))


@given(curves, gens, signs)
@settings(max_examples=400, deadline=None)
def test_puncture_word_follows_artin_action(c, k, s):
    lhs = puncture_word(apply_generator(c, k, s))
    rhs = _act(puncture_word(c), k, s)
    inv = PunctureWord(M, tuple(-x for x in reversed(rhs.letters)))
    assert lhs.same_class(rhs) or lhs.same_class(inv)


@given(curves)
@settings(max_examples=300, deadline=None)
def test_json_round_trip(c):
    assert CurveDiagram.from_json(c.to_json()) == c


@given(curves)
@settings(max_examples=300, deadline=None)
def test_canonical_form_is_stable(c):
    assert canonical_word(c.word) == c.word
    w = c.word
    assert CurveDiagram.from_word(M, w[2:] + w[:2]) == c
    assert CurveDiagram.from_word(M, tuple(reversed(w))) == c


def test_enumerated_curves_are_simple_and_essential():
    for c in SMALL:
        assert c.is_simple() and c.is_essential()


def test_transport_composes():
    P = uniform_plat(3, 4)
    c = canonical_loop(P, 3, 1)
    via = transport(P, transport(P, c, 3, 2), 2, 1)
    assert via == transport(P, c, 3, 1)
    assert apply_braid(c, projection_word(P, 3, 1)) == via
