"""PSL(2, C) arithmetic through SL(2, C) lifts.

Elements are stored as 2x2 complex matrices of determinant one. Two lifts
``g`` and ``-g`` represent the same Moebius transformation; equality tests
take the minimum over both signs.

Points of CP^1 are homogeneous pairs ``(z0 : z1)``. In the affine chart
``z = z0 / z1`` the point ``(1 : 0)`` is infinity and ``(0 : 1)`` is zero.

Matrices and points are held in extended precision (``np.clongdouble``).
Holonomy of long loops has entries near 1e5, and relations between such
elements only check out to 1e-8 with the extra digits. Scalar outputs such
as traces come back as Python ``complex``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadMultiplier, DegenerateAxis, IdentityElement

DEFAULT_TOL = 1e-8
CL = np.clongdouble


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of CP^1, normalized to unit norm with first nonzero entry real-positive."""

    z0: complex
    z1: complex

    def __post_init__(self):
        z0, z1 = CL(self.z0), CL(self.z1)
        norm = np.sqrt(abs(z0) ** 2 + abs(z1) ** 2)
        if norm == 0.0:
            raise ValueError("(0 : 0) is not a point of CP^1")
        lead = z0 if abs(z0) > 1e-15 * norm else z1
        phase = abs(lead) / lead
        object.__setattr__(self, "z0", z0 * phase / norm)
        object.__setattr__(self, "z1", z1 * phase / norm)

    @classmethod
    def from_complex(cls, z) -> "ProjectivePoint":
        """The point ``z`` of the affine chart; ``math.inf`` gives infinity."""
        if z is None or (isinstance(z, float) and math.isinf(z)):
            return cls(1.0, 0.0)
        return cls(CL(z), 1.0)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.z0, self.z1], dtype=CL)

    def to_complex(self) -> complex:
        """Affine coordinate ``z0 / z1``; infinity is returned as ``complex(inf)``."""
        if self.z1 == 0:
            return complex(math.inf)
        return complex(self.z0 / self.z1)

    def distance(self, other: "ProjectivePoint") -> float:
        """Chordal distance ``|z0 w1 - z1 w0|`` between unit representatives."""
        return float(abs(self.z0 * other.z1 - self.z1 * other.z0))

    def same_as(self, other: "ProjectivePoint", tol: float = 1e-9) -> bool:
        return self.distance(other) < tol

    def __repr__(self):
        z = self.to_complex()
        return f"ProjectivePoint({z:.6g})" if self.z1 != 0 else "ProjectivePoint(inf)"


INFINITY = ProjectivePoint(1.0, 0.0)
ZERO = ProjectivePoint(0.0, 1.0)


def _normalize_det(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det == 0:
        raise ValueError("singular matrix")
    if det == 1:
        return m
    return m / np.sqrt(det)


@dataclass(frozen=True, eq=False)
class MoebiusElement:
    """An SL(2, C) lift of a Moebius transformation."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=CL).reshape(2, 2)
        m = _normalize_det(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_entries(cls, a, b, c, d) -> "MoebiusElement":
        return cls(np.array([[a, b], [c, d]], dtype=CL))

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(np.eye(2, dtype=CL))

    @property
    def entries(self):
        m = self.matrix
        return m[0, 0], m[0, 1], m[1, 0], m[1, 1]

    def __matmul__(self, other: "MoebiusElement") -> "MoebiusElement":
        return compose(self, other)

    def inverse(self) -> "MoebiusElement":
        a, b, c, d = self.entries
        return MoebiusElement(np.array([[d, -b], [-c, a]]))

    def trace(self) -> complex:
        return complex(self.matrix[0, 0] + self.matrix[1, 1])

    def to_complex128(self) -> np.ndarray:
        return self.matrix.astype(complex)

    def psl_distance(self, other: "MoebiusElement") -> float:
        """Max-entry distance to ``other`` minimized over the sign of the lift."""
        d_plus = np.max(np.abs(self.matrix - other.matrix))
        d_minus = np.max(np.abs(self.matrix + other.matrix))
        return float(min(d_plus, d_minus))

    def psl_equal(self, other: "MoebiusElement", tol: float = 1e-9) -> bool:
        return self.psl_distance(other) < tol

    def __repr__(self):
        a, b, c, d = self.entries
        return f"MoebiusElement([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


@dataclass(frozen=True)
class IsometryClass:
    tag: str
    residual: float

    def __eq__(self, other):
        if isinstance(other, str):
            return self.tag == other
        if isinstance(other, IsometryClass):
            return self.tag == other.tag
        return NotImplemented

    def __hash__(self):
        return hash(self.tag)


def compose(g: MoebiusElement, h: MoebiusElement) -> MoebiusElement:
    return MoebiusElement(g.matrix @ h.matrix)


def apply(g: MoebiusElement, p: ProjectivePoint) -> ProjectivePoint:
    a, b, c, d = g.entries
    return ProjectivePoint(a * p.z0 + b * p.z1, c * p.z0 + d * p.z1)


def trace_sq(g: MoebiusElement) -> complex:
    t = g.matrix[0, 0] + g.matrix[1, 1]
    return complex(t * t)


def classify(g: MoebiusElement, tol: float = DEFAULT_TOL) -> IsometryClass:
    """Identity, elliptic, parabolic or loxodromic, decided from tr^2.

    The residual is the distance of tr^2 to the boundary of the class that
    was chosen (small residuals mean the call was close).
    """
    t2 = trace_sq(g)
    near4 = abs(t2 - 4)
    if near4 < tol:
        if g.psl_distance(MoebiusElement.identity()) < math.sqrt(tol):
            return IsometryClass("identity", near4)
        return IsometryClass("parabolic", near4)
    if abs(t2.imag) < tol and -tol < t2.real < 4:
        return IsometryClass("elliptic", min(abs(t2.real), 4 - t2.real))
    seg_dist = abs(t2 - min(max(t2.real, 0.0), 4.0))
    return IsometryClass("loxodromic", seg_dist)


def fixed_points(g: MoebiusElement, tol: float = DEFAULT_TOL) -> list[ProjectivePoint]:
    """Fixed points of ``g`` as projective eigenvector classes.

    For a loxodromic element the attracting fixed point comes first. Other
    callers order the pair themselves.
    """
    if g.psl_distance(MoebiusElement.identity()) < tol:
        raise IdentityElement("every point is fixed by the identity")
    m = g.matrix
    tr = m[0, 0] + m[1, 1]
    disc = np.sqrt(tr * tr - 4)
    lam1 = (tr + disc) / 2
    lam2 = (tr - disc) / 2
    if abs(lam1) < abs(lam2):
        lam1, lam2 = lam2, lam1
    pts = []
    for lam in (lam1, lam2):
        pts.append(_eigenvector(m, lam))
    if abs(disc) < math.sqrt(tol):
        return [pts[0]]
    return pts


def _eigenvector(m: np.ndarray, lam: complex) -> ProjectivePoint:
    # kernel of (m - lam I); use the row with the larger norm for stability
    a, b = m[0, 0] - lam, m[0, 1]
    c, d = m[1, 0], m[1, 1] - lam
    if abs(a) + abs(b) >= abs(c) + abs(d):
        return ProjectivePoint(-b, a) if abs(a) + abs(b) > 0 else ProjectivePoint(1, 0)
    return ProjectivePoint(-d, c)


def frame_matrix(u: ProjectivePoint, v: ProjectivePoint) -> np.ndarray:
    """An SL(2, C) matrix T with T(1:0) = u and T(0:1) = v."""
    if u.same_as(v, 1e-12):
        raise DegenerateAxis("u and v coincide")
    t = np.array([[u.z0, v.z0], [u.z1, v.z1]], dtype=CL)
    return _normalize_det(t)


def _conjugate_diag(u, v, p, q) -> MoebiusElement:
    t = frame_matrix(u, v)
    a, b, c, d = t[0, 0], t[0, 1], t[1, 0], t[1, 1]
    # T diag(p, q) T^-1 with det T = 1
    return MoebiusElement(
        np.array(
            [[a * d * p - b * c * q, a * b * (q - p)], [c * d * (p - q), a * d * q - b * c * p]]
        )
    )


def elliptic_about(u: ProjectivePoint, v: ProjectivePoint, theta: float) -> MoebiusElement:
    """Rotation by ``theta`` about the geodesic from u to v.

    Conjugate of diag(e^{i theta/2}, e^{-i theta/2}) by a frame sending
    (1:0) to u and (0:1) to v. Seen from u looking toward v the rotation is
    counterclockwise. Complex ``theta`` is accepted (a loxodromic with that
    complex rotation angle).
    """
    if u.same_as(v, 1e-12):
        raise DegenerateAxis("u and v coincide")
    h = np.exp(CL(0.5j) * CL(theta))
    return _conjugate_diag(u, v, h, 1 / h)


def loxodromic_about(u: ProjectivePoint, v: ProjectivePoint, w: complex) -> MoebiusElement:
    """The element acting as z -> w z with u repelling and v attracting."""
    if abs(w) <= 1:
        raise BadMultiplier(f"|w| must exceed 1, got {abs(w)}")
    if u.same_as(v, 1e-12):
        raise DegenerateAxis("u and v coincide")
    r = np.sqrt(CL(w))
    return _conjugate_diag(u, v, 1 / r, r)


def conj_star(g: MoebiusElement) -> MoebiusElement:
    return MoebiusElement(np.conj(g.matrix))


def multiplier_at(g: MoebiusElement, p: ProjectivePoint) -> complex:
    """Derivative of ``g`` at a fixed point ``p`` (a conjugation invariant of (g, p))."""
    a, b, c, d = g.entries
    # eigenvalue of the lift on the line p; derivative = lam^-2
    v = p.vector
    w = g.matrix @ v
    k = 0 if abs(v[0]) >= abs(v[1]) else 1
    lam = w[k] / v[k]
    return complex(1 / (lam * lam))


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> MoebiusElement:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return MoebiusElement(scale * m)
