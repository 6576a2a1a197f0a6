"""Sequence drivers and desk-scale checks for bending maps.

Each sweep walks a deterministic sequence of Fenchel-Nielsen points,
records the sup-norm of the monitored character vector at every step and
the distance between successive vectors, then calls a verdict:

* diverged: final sup-norm above ``diverge`` (default 1e6),
* converged: the last ``window`` successive distances all below ``converge``,
* undecided otherwise.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bending import bend, complexified_bend, quakebend
from .errors import QuakebendError, WeightNearPi
from .framed import FramedRep, Framing, WeightedMultiloop, framed_character, in_Xr, swap_framing
from .moebius import CL, ProjectivePoint, loxodromic_about
from .surface import (
    FNCoordinates,
    PantsDecomposition,
    SurfaceGroupRep,
    Word,
    WordList,
    character,
    coordinate_words,
    fn_to_rep,
    standard_pants,
)

PI_MARGIN = 0.05


@dataclass(frozen=True)
class Thresholds:
    diverge: float = 1e6
    converge: float = 1e-6
    window: int = 5

    def as_dict(self) -> dict:
        return {"diverge": self.diverge, "converge": self.converge, "window": self.window}


@dataclass(frozen=True)
class LengthRule:
    """How one curve's length moves with the step index i = 1..N.

    ``fixed``: l0; ``linear``: l0 + rate i; ``geometric``: l0 rate^i; ``pinch``: l0 / i.
    """

    kind: str = "fixed"
    rate: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fixed", "linear", "geometric", "pinch"):
            raise ValueError(f"unknown length rule {self.kind!r}")

    def __call__(self, l0: float, i: int) -> float:
        if self.kind == "linear":
            return l0 + self.rate * i
        if self.kind == "geometric":
            return l0 * self.rate**i
        if self.kind == "pinch":
            return l0 / i
        return l0


@dataclass(frozen=True)
class SequenceSpec:
    """A sequence of FN points indexed by i = 1..steps.

    Twists move by ``twist_steps[k] * i``. With ``twist_units="turns"`` the
    base twist and the increments count full Dehn twists, so the twist
    displacement is that number times the curve's current length.
    """

    base: FNCoordinates
    steps: int
    lengths: tuple[LengthRule, ...] = ()
    twist_steps: tuple[float, ...] = ()
    twist_units: str = "length"

    def __post_init__(self):
        n = len(self.base.lengths)
        lengths = tuple(self.lengths) or (LengthRule(),) * n
        twist_steps = tuple(float(x) for x in self.twist_steps) or (0.0,) * n
        if len(lengths) != n or len(twist_steps) != n:
            raise ValueError(f"need one length rule and one twist step per curve ({n})")
        if self.steps < 3:
            raise ValueError(f"a sequence needs at least 3 steps, got {self.steps}")
        if self.twist_units not in ("length", "turns"):
            raise ValueError(f"twist_units must be 'length' or 'turns', got {self.twist_units!r}")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "twist_steps", twist_steps)

    def point(self, i: int) -> FNCoordinates:
        l0 = self.base.lengths.real
        t0 = self.base.twists.real
        ls = np.array([rule(x, i) for rule, x in zip(self.lengths, l0)])
        ts = t0 + np.array(self.twist_steps) * i
        if self.twist_units == "turns":
            ts = ts * ls
        return FNCoordinates(ls, ts)

    def points(self) -> list[FNCoordinates]:
        return [self.point(i) for i in range(1, self.steps + 1)]


@dataclass(frozen=True)
class ConvergenceReport:
    verdict: str
    sup_norms: tuple[float, ...]
    cauchy: tuple[float, ...]
    thresholds: Thresholds
    # log-log slope of the successive distances over the last third of the run
    cauchy_decay: float
    monotone_tail: bool
    extras: dict = field(default_factory=dict)


def _decide(sups: Sequence[float], diffs: Sequence[float], th: Thresholds) -> str:
    last = sups[-1]
    if not math.isfinite(last) or last > th.diverge:
        return "diverged"
    tail = diffs[-th.window :]
    if len(tail) == th.window and all(d < th.converge for d in tail):
        return "converged"
    return "undecided"


def _decay(diffs: Sequence[float]) -> float:
    n = len(diffs)
    idx = np.arange(n - max(2, n // 3), n)
    d = np.asarray(diffs, dtype=float)[idx]
    if np.any(~np.isfinite(d)) or np.any(d <= 0):
        return float("nan")
    slope = np.polyfit(np.log(idx + 2.0), np.log(d), 1)[0]
    return float(slope)


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep(
    vectors: Callable[[FNCoordinates], np.ndarray],
    seq: SequenceSpec,
    thresholds: Thresholds = Thresholds(),
    threads: int = 1,
) -> tuple[ConvergenceReport, list[np.ndarray]]:
    """Evaluate ``vectors`` along ``seq`` and call the verdict."""
    with np.errstate(all="ignore"):
        vals = _map(vectors, seq.points(), threads)
        sups = [float(np.max(np.abs(v))) for v in vals]
        diffs = [float(np.max(np.abs(b - a))) for a, b in zip(vals, vals[1:])]
    third = sups[-max(2, len(sups) // 3) :]
    report = ConvergenceReport(
        verdict=_decide(sups, diffs, thresholds),
        sup_norms=tuple(sups),
        cauchy=tuple(diffs),
        thresholds=thresholds,
        cauchy_decay=_decay(diffs),
        monotone_tail=bool(all(b >= a for a, b in zip(third, third[1:]))),
    )
    return report, vals


def check_weights_away_from_pi(M: WeightedMultiloop, margin: float = PI_MARGIN) -> None:
    for m, w in zip(M.loops, M.weights):
        if abs(math.remainder(w - math.pi, 2 * math.pi)) <= margin:
            raise WeightNearPi(f"loop {m} has weight {w}, within {margin} of pi")


def bent_character(P: PantsDecomposition, M: WeightedMultiloop, fn: FNCoordinates) -> np.ndarray:
    """Character of the bend of the Fuchsian point ``fn`` with canonical framing."""
    rep = fn_to_rep(P, fn)
    if not M.loops:
        return character(rep).values
    return character(bend(FramedRep.canonical(rep, M))).values


def properness_sweep(
    P: PantsDecomposition,
    M: WeightedMultiloop,
    seq: SequenceSpec,
    thresholds: Thresholds = Thresholds(),
    threads: int = 1,
) -> ConvergenceReport:
    """Bend along M (no weight near pi) at every step; divergence is expected."""
    check_weights_away_from_pi(M)
    report, _ = sweep(lambda fn: bent_character(P, M, fn), seq, thresholds, threads)
    return report


def pinch_experiment(
    P: PantsDecomposition,
    M: WeightedMultiloop,
    m: int,
    seq: SequenceSpec,
    thresholds: Thresholds = Thresholds(),
    threads: int = 1,
) -> ConvergenceReport:
    """Bend along M while the length of loop m shrinks.

    With weight pi on m and converging twists along m the bent characters
    converge; any other weight on m, or a running twist, makes them diverge.
    The final step is flagged when its restriction to a piece is reducible.
    """
    M.check_against(P)
    if m not in M.loops:
        raise ValueError(f"loop {m} is not in the multiloop")
    first, last = seq.point(1).lengths[m].real, seq.point(seq.steps).lengths[m].real
    if not last < first:
        raise ValueError(f"the sequence does not pinch loop {m}")
    report, _ = sweep(lambda fn: bent_character(P, M, fn), seq, thresholds, threads)
    fr = FramedRep.canonical(fn_to_rep(P, seq.point(seq.steps)), M)
    report.extras["final_in_Xr"] = in_Xr(fr)
    report.extras["final_length"] = float(last)
    return report


def pinch_family(
    weight: float, twist_divergent: bool = False, steps: int = 50, template: str = "theta"
) -> tuple[PantsDecomposition, WeightedMultiloop, int, SequenceSpec]:
    """Genus 2, loop 0 pinched as 1/i, all other lengths 1, twists 0 in turns.

    ``twist_divergent`` adds one full twist along loop 0 per step.
    """
    P = standard_pants(2, template)
    n = P.n_curves
    base = FNCoordinates(np.ones(n), np.zeros(n))
    rules = (LengthRule("pinch"),) + (LengthRule(),) * (n - 1)
    twists = (1.0 if twist_divergent else 0.0,) + (0.0,) * (n - 1)
    seq = SequenceSpec(base, steps, rules, twists, twist_units="turns")
    return P, WeightedMultiloop.single(0, weight), 0, seq


def growth_family(steps: int = 50, rate: float = 0.5, template: str = "chain") -> tuple[PantsDecomposition, SequenceSpec]:
    """Genus 2 with loop 0 growing linearly from length 1, everything else fixed."""
    P = standard_pants(2, template)
    n = P.n_curves
    base = FNCoordinates(np.ones(n), np.zeros(n))
    rules = (LengthRule("linear", rate),) + (LengthRule(),) * (n - 1)
    return P, SequenceSpec(base, steps, rules)


def fn_grid(
    P: PantsDecomposition,
    n: int,
    seed: int = 0,
    lengths: tuple[float, float] = (0.1, 6.0),
    twists: tuple[float, float] = (-10.0, 10.0),
) -> list[FNCoordinates]:
    """``n`` uniform random FN points, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    k = P.n_curves
    return [FNCoordinates(rng.uniform(*lengths, k), rng.uniform(*twists, k)) for _ in range(n)]


@dataclass(frozen=True)
class InjectivityReport:
    min_distance: float
    pair: tuple[int, int]
    n_points: int


def injectivity_scan(
    P: PantsDecomposition, M: WeightedMultiloop, points: Sequence[FNCoordinates], threads: int = 1
) -> InjectivityReport:
    """Smallest sup-norm distance between bent characters of distinct grid points."""
    if len(points) < 2:
        raise ValueError("need at least two grid points")
    vals = np.array(_map(lambda fn: bent_character(P, M, fn), list(points), threads))
    best, pair = math.inf, (0, 0)
    for i in range(len(vals) - 1):
        d = np.max(np.abs(vals[i + 1 :] - vals[i]), axis=1)
        j = int(np.argmin(d))
        if d[j] < best:
            best, pair = float(d[j]), (i, i + 1 + j)
    return InjectivityReport(best, pair, len(vals))


@dataclass(frozen=True)
class HolomorphyReport:
    max_residual: float
    per_word: tuple[float, ...]
    grid: tuple[complex, ...]
    step: float


def s_grid(center: complex = 1.0, radius: float = 0.1, n: int = 5) -> list[complex]:
    """An n x n square grid inscribed in the disc of ``radius`` about ``center``."""
    side = np.linspace(-1.0, 1.0, n) * radius / math.sqrt(2)
    return [complex(center) + complex(a, b) for b in side for a in side]


def holomorphy_check(
    P: PantsDecomposition,
    fn: FNCoordinates,
    M: WeightedMultiloop,
    words: Sequence[Word],
    grid: Sequence[complex],
    h: float = 1e-4,
) -> HolomorphyReport:
    """Largest relative d/d(conj s) of tr^2 o quakebend, by central differences.

    The Wirtinger derivative is (f_x + i f_y) / 2 with s = x + iy; it is
    divided by max(1, |f(s)|).
    """
    wl = WordList("holomorphy", tuple(words))

    def f(s: complex) -> np.ndarray:
        return character(quakebend(P, fn, M, s), wl).values

    worst = np.zeros(len(wl))
    for s in grid:
        fx = (f(s + h) - f(s - h)) / (2 * h)
        fy = (f(s + 1j * h) - f(s - 1j * h)) / (2 * h)
        res = np.abs(fx + 1j * fy) / 2 / np.maximum(1.0, np.abs(f(s)))
        worst = np.maximum(worst, res)
    return HolomorphyReport(float(worst.max()), tuple(float(x) for x in worst), tuple(grid), h)


def trace_identity_check(samples: int, seed: int = 0) -> float:
    """max |tr(AE) + tr(AE^-1) - tr A tr E| over random SL(2, C) pairs."""
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)

    def sl(n):
        m = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
        return m / np.sqrt(np.linalg.det(m))[:, None, None]

    a, e = sl(samples), sl(samples)
    e_inv = np.empty_like(e)
    e_inv[:, 0, 0], e_inv[:, 1, 1] = e[:, 1, 1], e[:, 0, 0]
    e_inv[:, 0, 1], e_inv[:, 1, 0] = -e[:, 0, 1], -e[:, 1, 0]
    tr = lambda m: m[:, 0, 0] + m[:, 1, 1]
    return float(np.max(np.abs(tr(a @ e) + tr(a @ e_inv) - tr(a) * tr(e))))


def trivial_side_rep(P: PantsDecomposition, m: int, seed: int = 0) -> SurfaceGroupRep:
    """A rep that is trivial on the piece of S - m away from pants 0.

    Only the genus-2 case with m separating is built: the remaining piece
    is then a one-holed torus whose boundary is trivial, so its two
    generators are commuting loxodromics A and B.
    """
    if P.genus != 2 or not P.curves[m].separating:
        raise ValueError("needs genus 2 and a separating curve")
    comps = P.complement_components((m,))
    home = next(c for c in comps if 0 in c)
    (p, i), (q, j) = P.curves[m].ends
    if p not in home:
        p, i = q, j
    rng = np.random.default_rng(seed)
    u = ProjectivePoint(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
    v = ProjectivePoint(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
    a = loxodromic_about(u, v, complex(3.0 + rng.uniform(), rng.uniform())).matrix
    b = loxodromic_about(u, v, complex(2.0 + rng.uniform(), -rng.uniform())).matrix
    ident = np.eye(2, dtype=CL)
    images = {name: ident for name in P.presentation_generators}
    loop = next(c for c in P.curves if c.index != m and c.ends[0][0] == p and c.ends[1][0] == p)
    (_, k0), (_, k1) = loop.ends
    images[f"c{p}.{k0}"] = a
    images[f"c{p}.{k1}"] = np.linalg.inv(a.astype(complex)).astype(CL)
    images[f"t{loop.index}"] = b
    rep = SurfaceGroupRep(P, images)
    if rep.relation_residual > 1e-8:
        raise QuakebendError(f"trivial-side construction broke a relation ({rep.relation_residual:.3g})")
    return rep


@dataclass(frozen=True)
class NonInjectivityReport:
    spread: float
    control_spread: float
    n_framings: int
    in_Xr: bool


def _paired(fr: FramedRep) -> np.ndarray:
    c1, c2 = complexified_bend(fr).characters
    return np.concatenate([c1.values, c2.values])


def noninjectivity_witness(
    P: PantsDecomposition,
    m: int,
    weight: float = 1.0,
    framings: int = 10,
    seed: int = 0,
    control: FNCoordinates | None = None,
) -> NonInjectivityReport:
    """Complexified bends of a rep trivial on one side of m, over random framings.

    The loop m has trivial holonomy, so every pair u != v is a framing; the
    paired characters should not depend on it. The control bends a Fuchsian
    point with its canonical framing and with the swapped one.
    """
    rep = trivial_side_rep(P, m, seed)
    M = WeightedMultiloop.single(m, weight)
    rng = np.random.default_rng(seed + 1)
    vals, flag = [], False
    for _ in range(framings):
        u, v = (ProjectivePoint(complex(*rng.normal(size=2)), complex(*rng.normal(size=2))) for _ in range(2))
        fr = FramedRep(rep, M, Framing({m: (u, v)}))
        flag = flag or in_Xr(fr)
        vals.append(_paired(fr))
    vals = np.array(vals)
    spread = max(
        (float(np.max(np.abs(vals[i] - vals[j]))) for i in range(len(vals)) for j in range(i + 1, len(vals))),
        default=0.0,
    )
    if control is None:
        control = FNCoordinates(np.ones(P.n_curves), np.full(P.n_curves, 0.25))
    fr = FramedRep.canonical(fn_to_rep(P, control), M)
    control_spread = float(np.max(np.abs(_paired(fr) - _paired(swap_framing(fr, m)))))
    return NonInjectivityReport(spread, control_spread, framings, flag)


def framed_properness_sweep(
    P: PantsDecomposition,
    loop: int,
    weight: float,
    seq: SequenceSpec,
    thresholds: Thresholds = Thresholds(),
    threads: int = 1,
) -> ConvergenceReport:
    """Paired characters of the complexified bend along a non-separating loop."""
    if P.curves[loop].separating:
        raise ValueError(f"loop {loop} separates the surface")
    M = WeightedMultiloop.single(loop, weight)
    check_weights_away_from_pi(M)

    def paired(fn: FNCoordinates) -> np.ndarray:
        return _paired(FramedRep.canonical(fn_to_rep(P, fn), M))

    report, _ = sweep(paired, seq, thresholds, threads)
    last = FramedRep.canonical(fn_to_rep(P, seq.point(seq.steps)), M)
    report.extras["input_sup_norm"] = framed_character(last).sup_norm()
    return report


def default_words(P: PantsDecomposition, count: int = 10) -> list[Word]:
    return list(coordinate_words(P).words[:count])
