"""Upper half-space H^3, piecewise geodesics and quasi-geodesic certificates.

A point (x, y, t) with t > 0 is the quaternion ``w + t j`` with w = x + iy.
SL(2, C) acts by ``g(q) = (a q + b)(c q + d)^-1`` and the base point is
``o = (0, 0, 1)``.

Piecewise geodesics are stored intrinsically: a base frame (an SL(2, C)
matrix sending o to the first vertex, facing the first segment), the
segment lengths, and one rotation in SU(2) per corner. Far-out vertices of a
curve with long segments cannot be written in float64 coordinates without
losing their relative position, so every distance along a curve is
computed from a product of local steps instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateAxis, DegenerateVertex, RadiusTooLarge
from .moebius import MoebiusElement, ProjectivePoint, apply, frame_matrix

UP = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class PointH3:
    x: float
    y: float
    t: float

    def __post_init__(self):
        for name in ("x", "y", "t"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValueError(f"height must be positive and finite, got {self.t}")

    @property
    def w(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_w(cls, w: complex, t: float) -> "PointH3":
        return cls(w.real, w.imag, t)


ORIGIN = PointH3(0.0, 0.0, 1.0)


def dist_h3(p: PointH3, q: PointH3) -> float:
    e = math.sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.t - q.t) ** 2)
    return 2.0 * math.asinh(e / (2.0 * math.sqrt(p.t * q.t)))


def act(g: MoebiusElement | np.ndarray, p: PointH3) -> PointH3:
    """The isometry of H^3 extending the Moebius map ``g``."""
    m = g.matrix if isinstance(g, MoebiusElement) else g
    a, b, c, d = (complex(v) for v in (m[0, 0], m[0, 1], m[1, 0], m[1, 1]))
    w, t = p.w, p.t
    cwd = c * w + d
    den = abs(cwd) ** 2 + abs(c) ** 2 * t * t
    return PointH3.from_w(((a * w + b) * cwd.conjugate() + a * c.conjugate() * t * t) / den, t / den)


def _image_of_origin(m: np.ndarray) -> PointH3:
    a, b, c, d = (complex(v) for v in m.ravel())
    den = abs(c) ** 2 + abs(d) ** 2
    return PointH3.from_w((a * c.conjugate() + b * d.conjugate()) / den, 1.0 / den)


def _lift(p: PointH3) -> np.ndarray:
    # translation then dilation: sends o to p
    s = math.sqrt(p.t)
    return np.array([[s, p.w / s], [0, 1 / s]], dtype=complex)


def _inv(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def _advance(s: float) -> np.ndarray:
    return np.array([[math.exp(s / 2), 0], [0, math.exp(-s / 2)]], dtype=complex)


def _dist_from_origin(m: np.ndarray) -> np.ndarray:
    """d(o, g o) for a stack of SL(2, C) matrices, accurate near zero.

    ``|g|_F^2 - 2 = |a - conj d|^2 + |b + conj c|^2`` avoids the cancellation
    in ``arccosh(|g|_F^2 / 2)``.
    """
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    e = np.abs(a - np.conj(d)) ** 2 + np.abs(b + np.conj(c)) ** 2
    return 2.0 * np.arcsinh(np.sqrt(e) / 2.0)


def _local_direction(p: PointH3) -> np.ndarray:
    """Unit tangent at o pointing at p (Cayley map to the ball centred at o)."""
    v = np.array([2 * p.x, 2 * p.y, p.x * p.x + p.y * p.y + p.t * p.t - 1.0])
    n = np.linalg.norm(v)
    if n == 0:
        raise DegenerateVertex("direction to the base point itself")
    return v / n


def _rotation_toward(n: np.ndarray) -> np.ndarray:
    """An element of SU(2) (so fixing o) turning the upward direction to ``n``."""
    n1, n2, n3 = n
    if n3 >= 0:
        p, q = complex(1 + n3), complex(n1, -n2)
    else:
        p, q = complex(n1, n2), complex(1 - n3)
    r = math.sqrt(abs(p) ** 2 + abs(q) ** 2)
    return np.array([[p, -q.conjugate()], [q, p.conjugate()]]) / r


def _spin(phi: float) -> np.ndarray:
    """Rotation by ``phi`` about the upward axis through o."""
    h = complex(math.cos(phi / 2), math.sin(phi / 2))
    return np.array([[h, 0], [0, h.conjugate()]])


def _heading(u: np.ndarray) -> np.ndarray:
    """Image of the upward direction under the rotation ``u``."""
    a, c = complex(u[0, 0]), complex(u[1, 0])
    z = a * c.conjugate()
    return np.array([2 * z.real, 2 * z.imag, abs(a) ** 2 - abs(c) ** 2]) / (abs(a) ** 2 + abs(c) ** 2)


def _to_su2(m: np.ndarray) -> np.ndarray:
    a = (m[0, 0] + np.conj(m[1, 1])) / 2
    b = (m[0, 1] - np.conj(m[1, 0])) / 2
    r = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    a, b = a / r, b / r
    return np.array([[a, b], [-np.conj(b), np.conj(a)]])


def _angle_between(n1: np.ndarray, n2: np.ndarray) -> float:
    return math.atan2(float(np.linalg.norm(np.cross(n1, n2))), float(np.dot(n1, n2)))


def vertex_angle(a: PointH3, v: PointH3, b: PointH3) -> float:
    """Angle at v between the segments [v, a] and [v, b], in [0, pi]."""
    if a == v or b == v:
        raise DegenerateVertex("an arm of the angle has zero length")
    na = _local_direction(act(_inv(_lift(v)), a))
    nb = _local_direction(act(_inv(_lift(v)), b))
    return _angle_between(na, nb)


@dataclass(frozen=True, eq=False)
class PiecewiseGeodesic:
    """Geodesic segments of the given lengths, joined by the rotations ``turns``.

    Segment k starts at ``frame_k . o`` heading up in ``frame_k``, where
    ``frame_0 = base`` and ``frame_{k+1} = frame_k A(L_k) turns[k]``.
    """

    base: np.ndarray = field(repr=False)
    lengths: tuple[float, ...]
    turns: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        if not lengths:
            raise ValueError("a piecewise geodesic needs at least one segment")
        if any(not (x > 0 and math.isfinite(x)) for x in lengths):
            raise ValueError(f"segment lengths must be positive, got {lengths}")
        if len(self.turns) != len(lengths) - 1:
            raise ValueError("need one turn per interior vertex")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "base", np.asarray(self.base, dtype=complex))
        object.__setattr__(self, "turns", tuple(np.asarray(u, dtype=complex) for u in self.turns))

    @classmethod
    def through(cls, vertices: Sequence[PointH3]) -> "PiecewiseGeodesic":
        """The piecewise geodesic with the given vertices (consecutive ones distinct)."""
        vs = list(vertices)
        if len(vs) < 2:
            raise ValueError("need at least two vertices")
        lengths, turns = [], []
        frame = _lift(vs[0])
        frame = frame @ _rotation_toward(_local_direction(act(_inv(frame), vs[1])))
        base = frame
        for k in range(len(vs) - 1):
            if vs[k] == vs[k + 1]:
                raise ValueError(f"vertices {k} and {k + 1} coincide")
            lengths.append(dist_h3(vs[k], vs[k + 1]))
            if k + 2 < len(vs):
                frame = frame @ _advance(lengths[-1])
                u = _rotation_toward(_local_direction(act(_inv(frame), vs[k + 2])))
                turns.append(u)
                frame = frame @ u
        return cls(base, tuple(lengths), tuple(turns))

    @classmethod
    def from_angles(
        cls,
        lengths: Sequence[float],
        angles: Sequence[float],
        azimuths: Sequence[float] | None = None,
        base: np.ndarray | None = None,
    ) -> "PiecewiseGeodesic":
        """Segments with interior vertex angles ``angles`` (pi means no corner).

        ``azimuths`` spins each turn about the incoming segment; zero keeps
        the curve in one totally geodesic plane turning the same way.
        """
        if azimuths is None:
            azimuths = [0.0] * len(angles)
        turns = []
        for theta, phi in zip(angles, azimuths):
            bend = math.pi - theta
            n = np.array([math.sin(bend), 0.0, math.cos(bend)])
            turns.append(_spin(phi) @ _rotation_toward(n))
        b = np.eye(2, dtype=complex) if base is None else base
        return cls(b, tuple(lengths), tuple(turns))

    @classmethod
    def zigzag(cls, segments: int, length: float, angle: float) -> "PiecewiseGeodesic":
        """A planar curve of equal segments turning alternately left and right."""
        azimuths = [0.0 if k % 2 == 0 else math.pi for k in range(segments - 1)]
        # the spin accumulates, so alternate relative to the current frame
        return cls.from_angles([length] * segments, [angle] * (segments - 1), azimuths)

    @property
    def n_segments(self) -> int:
        return len(self.lengths)

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    @cached_property
    def frames(self) -> tuple[np.ndarray, ...]:
        out = [self.base]
        for length, u in zip(self.lengths, self.turns):
            out.append(out[-1] @ _advance(length) @ u)
        return tuple(out)

    @cached_property
    def vertices(self) -> tuple[PointH3, ...]:
        """Vertex coordinates; lossy for curves that run far from o."""
        pts = [_image_of_origin(f) for f in self.frames]
        pts.append(_image_of_origin(self.frames[-1] @ _advance(self.lengths[-1])))
        return tuple(pts)

    def angles(self) -> tuple[float, ...]:
        """Interior angle at each corner; pi where the curve goes straight on."""
        return tuple(_angle_between(-UP, _heading(u)) for u in self.turns)

    def locate(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(segment index, offset in the segment) for arclength parameters ``s``."""
        s = np.asarray(s, dtype=float)
        edges = np.cumsum((0.0,) + self.lengths)
        k = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, self.n_segments - 1)
        return k, s - edges[k]

    def point(self, s: float) -> PointH3:
        k, off = self.locate(np.array([s]))
        return _image_of_origin(self.frames[int(k[0])] @ _advance(float(off[0])))

    def distances(self, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
        """Hyperbolic distance between the points at arclength s1 and s2."""
        s1, s2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
        lo, hi = np.minimum(s1, s2), np.maximum(s1, s2)
        k1, o1 = self.locate(lo)
        k2, o2 = self.locate(hi)
        acc = np.zeros((len(lo), 2, 2), dtype=complex)
        acc[:, 0, 0] = np.exp(-o1 / 2)
        acc[:, 1, 1] = np.exp(o1 / 2)
        steps = [_advance(length) @ u for length, u in zip(self.lengths, self.turns)]
        for k, step in enumerate(steps):
            mask = (k1 <= k) & (k < k2)
            if mask.any():
                acc[mask] = acc[mask] @ step
        tail = np.zeros_like(acc)
        tail[:, 0, 0] = np.exp(o2 / 2)
        tail[:, 1, 1] = np.exp(-o2 / 2)
        return _dist_from_origin(acc @ tail)

    def interior(self) -> tuple[float, float]:
        """Arclength window that drops one segment at each end (when there are three or more)."""
        if self.n_segments < 3:
            return 0.0, self.total_length
        return self.lengths[0], self.total_length - self.lengths[-1]


def shortcut_curve(c: PiecewiseGeodesic, r: float) -> PiecewiseGeodesic:
    """Cut each corner at distance r along both incident segments and join the cut points."""
    if not (0 < r < min(c.lengths) / 2):
        raise RadiusTooLarge(f"need 0 < r < {min(c.lengths) / 2:.6g}, got {r}")
    if c.n_segments == 1:
        return c
    lengths = [c.lengths[0] - r]
    turns = []
    for k, u in enumerate(c.turns, start=1):
        h = _advance(r) @ u @ _advance(r)
        cut = _image_of_origin(h)
        into = _rotation_toward(_local_direction(cut))
        chord = float(_dist_from_origin(h[None])[0])
        out = _to_su2(_advance(-chord) @ _inv(into) @ h)
        turns += [into, out]
        last = k == c.n_segments - 1
        lengths += [chord, c.lengths[k] - (r if last else 2 * r)]
    return PiecewiseGeodesic(c.base, tuple(lengths), tuple(turns))


class QIConstants(NamedTuple):
    P: float
    Q: float


@dataclass(frozen=True)
class QuasiGeodesicCertificate:
    """Outcome of ``certify_quasigeodesic``.

    ``P`` and ``Q`` are the constants the argument yields; they are reported
    for uncertified curves too, as the target a witness pair violates.
    """

    status: str
    P: float
    Q: float
    R: float
    r: float
    min_length: float
    min_angle: float
    witness: tuple[float, float] | None = None

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def corner_loss(theta: float) -> float:
    """Upper bound for a + b - d across one corner of angle theta with long arms.

    From cosh d >= 2 sinh a sinh b sin^2(theta/2) one gets
    d >= a + b - log(2 / sin^2(theta/2)) once the arms are long.
    """
    return math.log(2.0 / math.sin(theta / 2) ** 2)


def qi_radius(eps: float, min_angle: float) -> tuple[float, float]:
    """(r, R): the shortcut radius for corners of at least ``min_angle`` and the segment bound.

    r = log(2 / sin(min_angle / 2)) bounds half the corner loss, so a curve
    whose segments exceed R = 2 r (1 + eps) / eps loses at most a fraction
    eps / (1 + eps) of its arclength at the corners between two points.
    """
    r = math.log(2.0 / math.sin(min_angle / 2))
    return r, 2.0 * r * (1.0 + eps) / eps


def certify_quasigeodesic(
    c: PiecewiseGeodesic,
    eps: float,
    min_angle: float,
    samples: int = 0,
    seed: int = 0,
) -> QuasiGeodesicCertificate:
    """Certify ``c`` as a (1 + eps, Q) quasi-isometric embedding, or say why not.

    Certified iff every segment is longer than R(eps, min_angle) and every
    corner angle exceeds ``min_angle``. Then Q = 4 r, twice the truncation
    loss of 2 r per corner at the two ends of a sub-arc. With ``samples``
    the empirical oracle looks for a pair violating (1 + eps, Q).
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not 0 < min_angle <= math.pi:
        raise ValueError(f"min_angle must lie in (0, pi], got {min_angle}")
    angles = c.angles()
    seen = min(angles, default=math.pi)
    shortest = min(c.lengths)
    r, R = qi_radius(eps, min_angle)
    if not c.turns:
        return QuasiGeodesicCertificate("certified", 1.0, 0.0, 0.0, 0.0, shortest, seen)
    P, Q = 1.0 + eps, 4.0 * r
    ok = shortest > R and seen > min_angle
    witness = find_violation(c, P, Q, samples, seed) if samples else None
    return QuasiGeodesicCertificate(
        "certified" if ok else "not_certified", P, Q, R, r, shortest, seen, witness
    )


def _sample_pairs(c: PiecewiseGeodesic, samples: int, seed: int):
    if samples < 2:
        raise ValueError("need at least two samples")
    lo, hi = c.interior()
    rng = np.random.default_rng(seed)
    s1 = rng.uniform(lo, hi, samples)
    s2 = rng.uniform(lo, hi, samples)
    return s1, s2, np.abs(s1 - s2), c.distances(s1, s2)


def _excess(d: np.ndarray, dh: np.ndarray, P: float) -> np.ndarray:
    return np.maximum(d / P - dh, dh - P * d)


def empirical_qi_constants(
    c: PiecewiseGeodesic, samples: int, P: float | None = None, seed: int = 0
) -> QIConstants:
    """Sampled (P, Q) with d/P - Q <= dist <= P d + Q on interior parameter pairs.

    With ``P`` given, Q is the least additive constant for it. Otherwise P is
    the stretch d / dist over pairs at least half the interior length apart
    (the large-scale slope) and Q is then the least constant for that P.
    """
    s1, s2, d, dh = _sample_pairs(c, samples, seed)
    if P is None:
        lo, hi = c.interior()
        far = d >= (hi - lo) / 2
        if not far.any():
            far = d >= d.max() / 2
        with np.errstate(divide="ignore"):
            ratio = np.where(dh > 0, d / dh, np.inf)
        P = max(1.0, float(np.max(ratio[far])))
    Q = max(0.0, float(np.max(_excess(d, dh, P))))
    return QIConstants(P, Q)


def find_violation(
    c: PiecewiseGeodesic, P: float, Q: float, samples: int, seed: int = 0
) -> tuple[float, float] | None:
    """The sampled parameter pair that breaks (P, Q) worst, or None."""
    s1, s2, d, dh = _sample_pairs(c, samples, seed)
    ex = _excess(d, dh, P) - Q
    k = int(np.argmax(ex))
    if ex[k] <= 0:
        return None
    return float(s1[k]), float(s2[k])


@dataclass(frozen=True)
class Geodesic:
    """The oriented geodesic of H^3 from the ideal point ``start`` to ``end``."""

    start: ProjectivePoint
    end: ProjectivePoint

    @cached_property
    def frame(self) -> np.ndarray:
        # sends infinity to end and 0 to start, so A(s) o runs from start to end
        return frame_matrix(self.end, self.start).astype(complex)

    def point(self, s: float) -> PointH3:
        return _image_of_origin(self.frame @ _advance(s))

    def apply(self, g: MoebiusElement) -> "Geodesic":
        return Geodesic(apply(g, self.start), apply(g, self.end))

    def same_as(self, other: "Geodesic", tol: float = 1e-9) -> bool:
        return self.start.same_as(other.start, tol) and self.end.same_as(other.end, tol)

    def contains(self, p: PointH3, tol: float = 1e-9) -> bool:
        q = act(_inv(self.frame), p)
        return math.hypot(q.x, q.y) < tol * q.t


def axis_in_h3(u: ProjectivePoint, v: ProjectivePoint) -> Geodesic:
    if u.same_as(v, 1e-12):
        raise DegenerateAxis("u and v coincide")
    return Geodesic(u, v)
