"""Bending, quakebends and the complexified bending into pairs of representations.

Bending a representation along a weighted multiloop multiplies the image of
each generator by rotations about the lifts of the multiloop that its
based path crosses. The rotation about a lift ``h . m~`` is the framing
rotation conjugated by ``rho(h)``, by the weight with the crossing's sign.
A crossing counts as +1 from the pants of the curve loop's own cuff into
the other side.

The quakebend is the same deformation read off in Fenchel-Nielsen
coordinates: the twist along a bent curve picks up an imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import InconsistentAxes, ParabolicLoop
from .framed import (
    FramedRep,
    Framing,
    WeightedMultiloop,
    canonical_framing,
    loop_element,
    validate_framing,
)
from .moebius import CL, MoebiusElement, ProjectivePoint, elliptic_about, fixed_points, multiplier_at, trace_sq
from .surface import (
    CharacterVector,
    FNCoordinates,
    PantsDecomposition,
    SurfaceGroupRep,
    _inv,
    character,
    fn_to_rep,
)

UNBEND_TOL = 1e-7
AXIS_TOL = 1e-7

Pair = tuple[ProjectivePoint, ProjectivePoint]


def bend(fr: FramedRep, angles: Mapping[int, complex] | None = None) -> SurfaceGroupRep:
    """Bend ``fr.rep`` about the framing axes by the weights of ``fr.M``.

    ``angles`` overrides the weights (any real or complex angle per loop).
    Generators whose based path misses M keep their image object unchanged.
    The framing is validated when ``fr`` is built.
    """
    rep, P = fr.rep, fr.rep.pants
    if angles is None:
        angles = {m: w for m, w in zip(fr.M.loops, fr.M.weights)}
    rot = {}
    for m in fr.M.loops:
        if angles[m] == 0:
            # identity insertion; skipping it keeps the images bit-identical
            continue
        u, v = fr.framing[m]
        e = elliptic_about(u, v, angles[m]).matrix
        rot[m] = {1: e, -1: _inv(e)}
    images = {}
    for name in P.presentation_generators:
        crossings = [c for c in P.generator_crossings[name] if c[0] in rot]
        g = rep.matrix(name)
        if not crossings:
            images[name] = g
            continue
        # lifts are either based (h empty) or translated by the generator
        # itself, so rho(g) E rho(g)^-1 rho(g) collapses to rho(g) E
        left = np.eye(2, dtype=CL)
        right = np.eye(2, dtype=CL)
        for m, sign, h in crossings:
            if not h:
                left = left @ rot[m][sign]
            elif h == ((name, 1),):
                right = right @ rot[m][sign]
            else:
                raise AssertionError(f"unexpected lift {h} for {name}")
        images[name] = left @ g @ right
    return SurfaceGroupRep(P, images)


def quakebend(P: PantsDecomposition, fn: FNCoordinates, M: WeightedMultiloop, s: complex = 1.0) -> SurfaceGroupRep:
    """``fn_to_rep`` with twist ``t_m + i s w_m sigma_m`` on every loop of M.

    ``sigma_m`` is the loop's orientation sign; at s = 1 this matches ``bend``
    with the canonical framing. Real ``s`` adds an imaginary part only through
    ``i``, so ``s`` on the imaginary axis gives earthquakes.
    """
    M.check_against(P)
    twists = np.array(fn.twists, dtype=complex)
    for m, w, sign in zip(M.loops, M.weights, M.signs):
        twists[m] += 1j * s * w * sign
    return fn_to_rep(P, fn.with_twists(twists))


@dataclass(frozen=True)
class AxisSystem:
    """Per loop: (first-factor axis, second-factor axis), each an ordered pair."""

    axes: Mapping[int, tuple[Pair, Pair]]

    def first(self) -> Framing:
        return Framing({m: a[0] for m, a in self.axes.items()})

    def second(self) -> Framing:
        return Framing({m: a[1] for m, a in self.axes.items()})


@dataclass(frozen=True, eq=False)
class BentPair:
    first: SurfaceGroupRep
    second: SurfaceGroupRep
    M: WeightedMultiloop
    source_framing: Framing
    # multiplier of each loop's holonomy at u_m, used to order bent fixed points
    multipliers: Mapping[int, complex]

    @cached_property
    def characters(self) -> tuple[CharacterVector, CharacterVector]:
        return character(self.first), character(self.second)


def _multipliers(fr: FramedRep) -> dict:
    out = {}
    for m in fr.M.loops:
        g = loop_element(fr.rep, m)
        if abs(trace_sq(g) - 4) < 1e-12 and g.psl_distance(MoebiusElement.identity()) < 1e-12:
            out[m] = 1.0
        else:
            out[m] = multiplier_at(g, fr.framing[m][0])
    return out


def complexified_bend(fr: FramedRep) -> BentPair:
    """Bend by +w for the first factor and by -w for the second, about the same axes."""
    plus = {m: w for m, w in zip(fr.M.loops, fr.M.weights)}
    minus = {m: -w for m, w in plus.items()}
    return BentPair(bend(fr, plus), bend(fr, minus), fr.M, fr.framing, _multipliers(fr))


def _ordered_axis(g: MoebiusElement, mult: complex, m: int) -> Pair:
    if abs(trace_sq(g) - 4) < 1e-8:
        raise ParabolicLoop(f"loop {m} has tr^2 = 4 in a bent factor")
    p, q = fixed_points(g)
    if abs(multiplier_at(g, p) - mult) <= abs(multiplier_at(g, q) - mult):
        return p, q
    return q, p


def support_axes(pair: BentPair) -> AxisSystem:
    """Fixed-point pairs of each loop's bent holonomy in both factors, framing-ordered."""
    axes = {}
    for m in pair.M.loops:
        mult = pair.multipliers[m]
        a1 = _ordered_axis(loop_element(pair.first, m), mult, m)
        a2 = _ordered_axis(loop_element(pair.second, m), mult, m)
        axes[m] = (a1, a2)
    return AxisSystem(axes)


def unbend(pair: BentPair, axes: AxisSystem, tol: float = UNBEND_TOL) -> FramedRep:
    """Undo ``complexified_bend`` using the given axes and check that both factors agree."""
    M = pair.M
    f1 = FramedRep(pair.first, M, axes.first(), check=False)
    f2 = FramedRep(pair.second, M, axes.second(), check=False)
    for f, label in ((f1, "first"), (f2, "second")):
        report = validate_framing(f.rep, M, f.framing, AXIS_TOL)
        if not report.passed:
            raise InconsistentAxes(f"{label}-factor axes are not fixed (residual {report.residual:.3g})")
    plus = {m: w for m, w in zip(M.loops, M.weights)}
    back1 = bend(f1, {m: -w for m, w in plus.items()})
    back2 = bend(f2, plus)
    c1, c2 = character(back1).values, character(back2).values
    gap = float(np.max(np.abs(c1 - c2) / np.maximum(1.0, np.abs(c1))))
    if gap > tol:
        raise InconsistentAxes(f"unbent factors disagree (relative gap {gap:.3g})")
    pairs = {}
    for m in M.loops:
        g = loop_element(back1, m)
        if abs(trace_sq(g) - 4) < 1e-8:
            # trivial or parabolic loop: the framing is not pinned by the holonomy
            pairs[m] = axes.axes[m][0]
        else:
            pairs[m] = _ordered_axis(g, pair.multipliers[m], m)
    return FramedRep(back1, M, Framing(pairs), check=False)


def canonical_bend(rep: SurfaceGroupRep, M: WeightedMultiloop) -> SurfaceGroupRep:
    return bend(FramedRep(rep, M, canonical_framing(rep, M)))
