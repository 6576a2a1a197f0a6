import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quakebend.errors import BadGenus, InvalidLength
from quakebend.framed import loop_element
from quakebend.moebius import random_sl2, trace_sq
from quakebend.surface import (
    FNCoordinates,
    character,
    coordinate_words,
    crossing_data,
    fn_to_rep,
    standard_pants,
)

TEMPLATES = ("chain", "theta")


@pytest.mark.parametrize("genus", [2, 3, 4])
@pytest.mark.parametrize("template", TEMPLATES)
def test_pants_counts(genus, template):
    P = standard_pants(genus, template)
    assert P.n_curves == 3 * genus - 3
    assert P.n_pants == 2 * genus - 2
    assert len(P.adapted_names) == 6 * genus - 6


def test_separating_curves():
    assert [c.separating for c in standard_pants(2, "chain").curves] == [False] * 3
    assert [c.separating for c in standard_pants(2, "theta").curves] == [True, False, False]


@pytest.mark.parametrize("genus", [1, 0, 2.5])
def test_bad_genus(genus):
    with pytest.raises(BadGenus):
        standard_pants(genus)


def test_unknown_template():
    with pytest.raises(ValueError):
        standard_pants(2, "ring")


def test_lengths_must_be_positive():
    with pytest.raises(InvalidLength):
        FNCoordinates([1, 0, 1], [0, 0, 0])
    with pytest.raises(ValueError):
        FNCoordinates([1, 1], [0, 0, 0])


def test_coordinate_word_count():
    assert len(coordinate_words(standard_pants(2))) == 25


@pytest.mark.parametrize("template", TEMPLATES)
def test_loop_trace_matches_length(template):
    # hyperbolic element of translation length l: tr^2 = 4 cosh^2(l/2)
    P = standard_pants(2, template)
    lengths = [0.3, 1.7, 4.0]
    rep = fn_to_rep(P, FNCoordinates(lengths, [0.4, -2.0, 5.0]))
    for m, l in enumerate(lengths):
        expect = 4 * math.cosh(l / 2) ** 2
        assert abs(trace_sq(loop_element(rep, m)) - expect) < 1e-12 * expect


@pytest.mark.parametrize("template", TEMPLATES)
def test_complex_length_trace(template):
    P = standard_pants(2, template)
    l = 1.2 + 0.7j
    rep = fn_to_rep(P, FNCoordinates([l, 1, 1], [0.5, 0, 0]))
    expect = 4 * np.cosh(l / 2) ** 2
    assert abs(trace_sq(loop_element(rep, 0)) - expect) < 1e-12


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(TEMPLATES),
    st.lists(st.floats(0.1, 6), min_size=3, max_size=3),
    st.lists(st.floats(-10, 10), min_size=3, max_size=3),
)
def test_relations_hold(template, lengths, twists):
    rep = fn_to_rep(standard_pants(2, template), FNCoordinates(lengths, twists))
    assert rep.relation_residual < 1e-8


def test_genus_three_relations():
    rng = np.random.default_rng(3)
    for template in TEMPLATES:
        P = standard_pants(3, template)
        fn = FNCoordinates(rng.uniform(0.5, 3, 6), rng.uniform(-2, 2, 6))
        assert fn_to_rep(P, fn).relation_residual < 1e-8


@pytest.mark.parametrize("template", TEMPLATES)
def test_fuchsian_character_is_real(template):
    rep = fn_to_rep(standard_pants(2, template), FNCoordinates([1, 2, 3], [0.1, -0.5, 2]))
    vals = character(rep).values
    assert np.max(np.abs(vals.imag)) < 1e-9 * np.max(np.abs(vals))


def test_character_conjugation_invariant():
    rep = fn_to_rep(standard_pants(2), FNCoordinates([1, 2, 3], [0.1, -0.5, 2]))
    g = random_sl2(np.random.default_rng(5))
    a, b = character(rep), character(rep.conjugate(g))
    assert a.distance(b) < 1e-9 * a.sup_norm()


@pytest.mark.parametrize("template", TEMPLATES)
def test_full_twist_keeps_words_off_the_curve(template):
    # a Dehn twist about curve 0 fixes the free loops a_k, which miss curve 0;
    # products of based loops can still cross it through their tails
    P = standard_pants(2, template)
    fn = FNCoordinates([1, 2, 3], [0.1, -0.5, 2])
    twisted = fn.with_twists(fn.twists + np.array([1.0, 0, 0]))
    a = character(fn_to_rep(P, fn)).values
    b = character(fn_to_rep(P, twisted)).values
    labels = coordinate_words(P).labels()
    disjoint = [k for k, w in enumerate(labels) if w in ("a0", "a1", "a2")]
    assert np.max(np.abs(a[disjoint] - b[disjoint])) < 1e-9
    assert np.max(np.abs(a - b)) > 1e-3


def test_loops_cross_nothing():
    for template in TEMPLATES:
        P = standard_pants(2, template)
        for m in range(3):
            assert crossing_data(P, f"a{m}", [0, 1, 2]) == []


def test_dual_loops_cross_their_curve():
    P = standard_pants(2, "theta")
    assert crossing_data(P, "b1", [0, 1, 2]) == [(1, 1)]
    assert crossing_data(P, "b2", [0, 1, 2]) == [(2, 1)]
    # the separating curve is crossed twice, once each way
    assert sorted(crossing_data(P, "b0", [0])) == [(0, -1), (0, 1)]
