"""Framed representations along weighted multiloops.

A framing of a representation along a loop is an ordered pair of fixed
points of the loop's holonomy. The framed character adds a stable letter
``g{m}`` per loop, sent to a loxodromic (or, at weight pi, a half-turn)
about the framing pair, and records tr^2 on words that mix surface and
stable letters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidFraming, NotLoxodromic, UnknownLoop
from .moebius import (
    CL,
    MoebiusElement,
    ProjectivePoint,
    apply,
    elliptic_about,
    fixed_points,
    loxodromic_about,
    trace_sq,
)
from .surface import (
    CharacterVector,
    PantsDecomposition,
    SurfaceGroupRep,
    Word,
    WordList,
    _inv,
    coordinate_words,
)

STABLE_MULTIPLIER = 4.0
FRAMING_TOL = 1e-8
XP_TOL = 1e-8
XR_TOL = 1e-8

Pair = tuple[ProjectivePoint, ProjectivePoint]


def is_pi_weight(w: float, tol: float = 1e-9) -> bool:
    """True when ``w`` is pi modulo 2 pi."""
    return abs(math.remainder(w - math.pi, 2 * math.pi)) < tol


@dataclass(frozen=True)
class WeightedMultiloop:
    """Pants curves ``loops`` with bending weights (radians) and orientation signs."""

    loops: tuple[int, ...]
    weights: tuple[float, ...]
    signs: tuple[int, ...] = ()

    def __post_init__(self):
        loops = tuple(int(m) for m in self.loops)
        weights = tuple(float(w) for w in self.weights)
        signs = tuple(int(s) for s in self.signs) or (1,) * len(loops)
        if len(set(loops)) != len(loops):
            raise ValueError(f"repeated loop in {loops}")
        if not (len(loops) == len(weights) == len(signs)):
            raise ValueError("loops, weights and signs must have equal length")
        if any(w < 0 or not math.isfinite(w) for w in weights):
            raise ValueError(f"weights must be finite and >= 0, got {weights}")
        if any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be +1 or -1, got {signs}")
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def single(cls, m: int, w: float, sign: int = 1) -> "WeightedMultiloop":
        return cls((m,), (w,), (sign,))

    def weight(self, m: int) -> float:
        return self.weights[self._index(m)]

    def sign(self, m: int) -> int:
        return self.signs[self._index(m)]

    def _index(self, m: int) -> int:
        try:
            return self.loops.index(m)
        except ValueError:
            raise UnknownLoop(m) from None

    def with_weights(self, weights: Iterable[float]) -> "WeightedMultiloop":
        return replace(self, weights=tuple(weights))

    def check_against(self, P: PantsDecomposition) -> None:
        for m in self.loops:
            if not 0 <= m < P.n_curves:
                raise UnknownLoop(m)


@dataclass(frozen=True)
class Framing:
    """An ordered pair ``(u_m, v_m)`` per loop."""

    pairs: Mapping[int, Pair]

    def __post_init__(self):
        object.__setattr__(self, "pairs", dict(self.pairs))

    def __getitem__(self, m: int) -> Pair:
        try:
            return self.pairs[m]
        except KeyError:
            raise UnknownLoop(m) from None

    def swapped(self, m: int) -> "Framing":
        u, v = self[m]
        pairs = dict(self.pairs)
        pairs[m] = (v, u)
        return Framing(pairs)


@dataclass(frozen=True)
class FramingReport:
    residual: float
    passed: bool
    per_loop: dict


@dataclass(frozen=True)
class SubvarietyFlags:
    in_Xp: bool
    xp_loop: int | None
    in_Xr: bool
    xr_component: tuple[int, ...] | None
    residuals: dict


def loop_element(rep: SurfaceGroupRep, m: int) -> MoebiusElement:
    return rep.evaluate(((f"a{m}", 1),))


def canonical_framing(rep: SurfaceGroupRep, M: WeightedMultiloop, tol: float = 1e-9) -> Framing:
    """Repelling then attracting fixed point of each loop, swapped for sign -1."""
    M.check_against(rep.pants)
    pairs = {}
    for m, sign in zip(M.loops, M.signs):
        g = loop_element(rep, m)
        t2 = trace_sq(g)
        if abs(t2.imag) > tol * max(1.0, abs(t2)) or not t2.real > 4 + tol:
            raise NotLoxodromic(f"loop {m} has tr^2 = {t2}, not in (4, inf)")
        attracting, repelling = fixed_points(g)
        pairs[m] = (repelling, attracting) if sign == 1 else (attracting, repelling)
    return Framing(pairs)


def validate_framing(
    rep: SurfaceGroupRep, M: WeightedMultiloop, framing: Framing, tol: float = FRAMING_TOL
) -> FramingReport:
    """Largest projective displacement of a framing point by its loop's holonomy."""
    per_loop = {}
    ok = True
    for m in M.loops:
        g = loop_element(rep, m)
        u, v = framing[m]
        r = max(apply(g, u).distance(u), apply(g, v).distance(v))
        per_loop[m] = r
        if u.distance(v) < tol:
            ok = False
    worst = max(per_loop.values(), default=0.0)
    return FramingReport(worst, ok and worst < tol, per_loop)


def extend_framing(rep: SurfaceGroupRep, framing: Framing, m: int, gamma: Word) -> Pair:
    """The framing at the conjugate loop ``gamma a{m} gamma^-1``."""
    g = rep.evaluate(gamma)
    u, v = framing[m]
    return apply(g, u), apply(g, v)


@dataclass(frozen=True, eq=False)
class FramedRep:
    rep: SurfaceGroupRep
    M: WeightedMultiloop
    framing: Framing
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.M.check_against(self.rep.pants)
        missing = [m for m in self.M.loops if m not in self.framing.pairs]
        if missing:
            raise InvalidFraming(f"no framing for loops {missing}")
        if self.check:
            report = validate_framing(self.rep, self.M, self.framing)
            if not report.passed:
                raise InvalidFraming(f"framing not fixed by loop holonomy (residual {report.residual:.3g})")

    @classmethod
    def canonical(cls, rep: SurfaceGroupRep, M: WeightedMultiloop) -> "FramedRep":
        return cls(rep, M, canonical_framing(rep, M))

    @cached_property
    def flags(self) -> SubvarietyFlags:
        xp, xp_loop, xp_res = _xp(self, XP_TOL)
        xr, xr_comp, xr_res = _xr(self, XR_TOL)
        return SubvarietyFlags(xp, xp_loop, xr, xr_comp, {"Xp": xp_res, "Xr": xr_res})


def swap_framing(fr: FramedRep, m: int) -> FramedRep:
    if m not in fr.M.loops:
        raise UnknownLoop(m)
    return FramedRep(fr.rep, fr.M, fr.framing.swapped(m), check=fr.check)


def _xp(fr: FramedRep, tol: float):
    best, loop = math.inf, None
    for m in fr.M.loops:
        d = abs(trace_sq(loop_element(fr.rep, m)) - 4)
        if d < best:
            best, loop = d, m
    return best < tol, (loop if best < tol else None), best


def _xr(fr: FramedRep, tol: float):
    P = fr.rep.pants
    worst_over_components = math.inf
    for comp in P.complement_components(fr.M.loops):
        gens = [fr.rep.word_matrix(w) for w in P.subsurface_generators(comp, fr.M.loops)]
        worst = 0.0
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                g, h = gens[i], gens[j]
                c = g @ h @ _inv(g) @ _inv(h)
                worst = max(worst, float(abs(c[0, 0] + c[1, 1] - 2)))
        if worst < tol:
            return True, comp, worst
        worst_over_components = min(worst_over_components, worst)
    return False, None, worst_over_components


def in_Xp(fr: FramedRep, tol: float = XP_TOL) -> bool:
    """Some loop of M has parabolic or trivial holonomy (tr^2 = 4)."""
    return _xp(fr, tol)[0]


def in_Xr(fr: FramedRep, tol: float = XR_TOL) -> bool:
    """The restriction to some complementary piece of M is reducible.

    Every pair of generators of the piece must have commutator trace 2,
    i.e. share a fixed point. This pairwise test is the finite criterion
    used throughout; it can report a false positive for three generators
    that pairwise share different fixed points.
    """
    return _xr(fr, tol)[0]


def stable_letter(fr: FramedRep, m: int) -> MoebiusElement:
    u, v = fr.framing[m]
    if is_pi_weight(fr.M.weight(m)):
        return elliptic_about(u, v, math.pi)
    return loxodromic_about(u, v, STABLE_MULTIPLIER)


def framed_words(P: PantsDecomposition, M: WeightedMultiloop) -> WordList:
    """Coordinate words plus each adapted generator followed by each stable letter."""
    base = coordinate_words(P)
    extra = tuple(((g, 1), (f"g{m}", 1)) for m in M.loops for g in P.adapted_names)
    loops = ",".join(str(m) for m in M.loops)
    return WordList(f"{base.ident}+framed[{loops}]", base.words + extra)


def framed_character(fr: FramedRep, words: WordList | None = None) -> CharacterVector:
    """tr^2 over surface words and words that involve the stable letters ``g{m}``."""
    if words is None:
        words = framed_words(fr.rep.pants, fr.M)
    mats = dict(fr.rep.adapted_matrices)
    for m in fr.M.loops:
        mats[f"g{m}"] = stable_letter(fr, m).matrix
    vals = np.empty(len(words), dtype=complex)
    for k, word in enumerate(words):
        acc = np.eye(2, dtype=CL)
        for name, e in word:
            g = mats.get(name)
            if g is None:
                g = fr.rep.word_matrix(((name, 1),))
            acc = acc @ (g if e == 1 else _inv(g))
        t = acc[0, 0] + acc[1, 1]
        vals[k] = t * t
    return CharacterVector(vals, words)
