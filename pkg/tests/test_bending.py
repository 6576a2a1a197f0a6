import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quakebend.bending import (
    bend,
    canonical_bend,
    complexified_bend,
    quakebend,
    support_axes,
    unbend,
)
from quakebend.framed import FramedRep, WeightedMultiloop
from quakebend.surface import FNCoordinates, character, fn_to_rep, standard_pants

TEMPLATES = ("chain", "theta")
FN = FNCoordinates([1.0, 1.5, 2.0], [0.5, -1.0, 2.0])


def framed(template="chain", M=None, fn=FN):
    P = standard_pants(2, template)
    M = M or WeightedMultiloop.single(0, 1.0)
    return FramedRep.canonical(fn_to_rep(P, fn), M)


def rel(a, b):
    return float(np.max(np.abs(a.values - b.values) / np.maximum(1.0, np.abs(a.values))))


def test_zero_weight_is_identity():
    fr = framed(M=WeightedMultiloop((0, 1), (0.0, 0.0)))
    bent = bend(fr)
    for name in fr.rep.pants.presentation_generators:
        assert np.array_equal(bent.matrix(name), fr.rep.matrix(name))


@pytest.mark.parametrize("template", TEMPLATES)
def test_full_turn_is_trivial_in_psl(template):
    fr = framed(template)
    a = character(fr.rep)
    b = character(bend(fr, {0: 2 * math.pi}))
    assert rel(a, b) < 1e-9


@pytest.mark.parametrize("template", TEMPLATES)
def test_bends_about_one_axis_add(template):
    # the bent loop commutes with its rotation, so the same axes frame the bend
    fr = framed(template)
    once = bend(fr, {0: 0.4})
    twice = bend(FramedRep(once, fr.M, fr.framing), {0: 0.7})
    assert rel(character(twice), character(bend(fr, {0: 1.1}))) < 1e-9


@pytest.mark.parametrize("template", TEMPLATES)
@pytest.mark.parametrize("m", [0, 1, 2])
def test_bend_matches_quakebend(template, m):
    M = WeightedMultiloop.single(m, 0.8)
    fr = framed(template, M)
    assert rel(character(bend(fr)), character(quakebend(fr.rep.pants, FN, M))) < 1e-9


def test_orientation_flips_the_bend():
    P = standard_pants(2)
    plus = quakebend(P, FN, WeightedMultiloop((1,), (0.8,), (1,)))
    minus = bend(framed(M=WeightedMultiloop((1,), (0.8,), (-1,))))
    assert rel(character(plus), character(fn_to_rep(P, FN))) > 1e-3
    assert rel(character(minus), character(quakebend(P, FN, WeightedMultiloop((1,), (0.8,), (-1,))))) < 1e-9


def test_real_s_is_bending_imaginary_s_is_earthquake():
    P = standard_pants(2)
    M = WeightedMultiloop.single(0, 0.5)
    quake = quakebend(P, FN, M, s=-1j)
    shifted = fn_to_rep(P, FN.with_twists(FN.twists + np.array([0.5, 0, 0])))
    assert rel(character(quake), character(shifted)) < 1e-12
    vals = character(quakebend(P, FN, M, s=1.0)).values
    assert np.max(np.abs(vals.imag)) > 1e-3


@pytest.mark.parametrize("template", TEMPLATES)
def test_bent_reps_satisfy_relations(template):
    fr = framed(template, WeightedMultiloop((0, 1, 2), (0.3, math.pi / 2, 2.5)))
    assert bend(fr).relation_residual < 1e-8
    pair = complexified_bend(fr)
    assert pair.first.relation_residual < 1e-8 and pair.second.relation_residual < 1e-8


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(TEMPLATES),
    st.integers(0, 2),
    st.floats(0.05, 3.0),
    st.lists(st.floats(0.3, 3), min_size=3, max_size=3),
    st.lists(st.floats(-2, 2), min_size=3, max_size=3),
)
def test_paired_characters_are_conjugate(template, m, w, lengths, twists):
    fr = framed(template, WeightedMultiloop.single(m, w), FNCoordinates(lengths, twists))
    c1, c2 = complexified_bend(fr).characters
    assert np.max(np.abs(c2.values - np.conj(c1.values))) < 1e-9 * max(1.0, c1.sup_norm())


@pytest.mark.parametrize("template", TEMPLATES)
def test_unbend_recovers_the_source(template):
    fr = framed(template, WeightedMultiloop((0, 2), (0.7, 1.3)))
    pair = complexified_bend(fr)
    back = unbend(pair, support_axes(pair))
    assert rel(character(back.rep), character(fr.rep)) < 1e-8
    for m in fr.M.loops:
        u, v = fr.framing[m]
        assert back.framing[m][0].same_as(u, 1e-7) and back.framing[m][1].same_as(v, 1e-7)


def test_canonical_bend_shortcut():
    fr = framed()
    assert rel(character(canonical_bend(fr.rep, fr.M)), character(bend(fr))) == 0.0
