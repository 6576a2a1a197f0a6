import math

import numpy as np
import pytest

from quakebend.errors import InvalidFraming, NotLoxodromic, UnknownLoop
from quakebend.framed import (
    FramedRep,
    Framing,
    WeightedMultiloop,
    canonical_framing,
    framed_character,
    loop_element,
    swap_framing,
    validate_framing,
)
from quakebend.moebius import apply, fixed_points
from quakebend.surface import FNCoordinates, fn_to_rep, standard_pants


def rep(template="chain", twists=(0.3, -1.0, 2.0)):
    return fn_to_rep(standard_pants(2, template), FNCoordinates([1.0, 1.5, 2.0], list(twists)))


def test_canonical_framing_is_fixed():
    r = rep()
    M = WeightedMultiloop((0, 2), (1.0, 0.5))
    framing = canonical_framing(r, M)
    report = validate_framing(r, M, framing)
    assert report.passed and report.residual < 1e-12
    for m in M.loops:
        u, v = framing[m]
        g = loop_element(r, m)
        assert apply(g, u).same_as(u) and apply(g, v).same_as(v)


def test_orientation_swaps_the_pair():
    r = rep()
    plus = canonical_framing(r, WeightedMultiloop((1,), (1.0,), (1,)))[1]
    minus = canonical_framing(r, WeightedMultiloop((1,), (1.0,), (-1,)))[1]
    assert plus[0].same_as(minus[1]) and plus[1].same_as(minus[0])


def test_wrong_framing_rejected():
    r = rep()
    M = WeightedMultiloop.single(0, 1.0)
    p, q = fixed_points(loop_element(r, 1))
    with pytest.raises(InvalidFraming):
        FramedRep(r, M, Framing({0: (p, q)}))
    with pytest.raises(InvalidFraming):
        FramedRep(r, M, Framing({}))


def test_elliptic_loop_has_no_canonical_framing():
    r = fn_to_rep(standard_pants(2), FNCoordinates([1j * 0.5 + 1e-9, 1, 1], [0, 0, 0]))
    with pytest.raises(NotLoxodromic):
        canonical_framing(r, WeightedMultiloop.single(0, 1.0))


def test_swap_unknown_loop():
    fr = FramedRep.canonical(rep(), WeightedMultiloop.single(0, 1.0))
    with pytest.raises(UnknownLoop):
        swap_framing(fr, 1)


def test_swap_twice_is_identity():
    fr = FramedRep.canonical(rep(), WeightedMultiloop.single(0, 1.0))
    back = swap_framing(swap_framing(fr, 0), 0)
    u, v = fr.framing[0]
    assert back.framing[0][0].same_as(u) and back.framing[0][1].same_as(v)


def test_pi_weight_character_ignores_order():
    fr = FramedRep.canonical(rep("theta"), WeightedMultiloop.single(1, math.pi))
    a = framed_character(fr)
    b = framed_character(swap_framing(fr, 1))
    assert a.distance(b) < 1e-9 * a.sup_norm()


def test_generic_weight_character_sees_order():
    fr = FramedRep.canonical(rep("theta"), WeightedMultiloop.single(1, 1.0))
    a = framed_character(fr)
    b = framed_character(swap_framing(fr, 1))
    assert a.distance(b) > 1e-3


def test_fuchsian_point_flags():
    flags = FramedRep.canonical(rep(), WeightedMultiloop.single(0, 1.0)).flags
    assert not flags.in_Xp and not flags.in_Xr


def test_multiloop_validation():
    with pytest.raises(ValueError):
        WeightedMultiloop((0, 0), (1.0, 1.0))
    with pytest.raises(ValueError):
        WeightedMultiloop((0,), (-1.0,))
    M = WeightedMultiloop((2,), (0.5,), (-1,))
    assert M.weight(2) == 0.5 and M.sign(2) == -1
    with pytest.raises(UnknownLoop):
        M.weight(0)
    with pytest.raises(ValueError):
        WeightedMultiloop.single(5, 1.0).check_against(standard_pants(2))
