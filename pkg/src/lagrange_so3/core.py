"""Value types: metric, covector, unit quaternion, rotation.

Quaternions are scalar-first Hamilton quaternions ``(w, x, y, z)``.  A unit
quaternion ``q = cos(phi/2) + sin(phi/2) (a1 i + a2 j + a3 k)`` projects to
the rotation by ``phi`` about ``a``; ``q`` and ``-q`` give the same rotation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-12


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class SolverError(RuntimeError):
    """A numerical solver failed where the theory guarantees success."""


@dataclass(frozen=True)
class Metric:
    """Left-invariant metric with eigenvalues ``(i1, i1, i3)``."""

    i1: float
    i3: float

    def __post_init__(self):
        if not (self.i1 > 0 and self.i3 > 0):
            raise DomainError(f"metric eigenvalues must be positive, got ({self.i1}, {self.i3})")
        if not (math.isfinite(self.i1) and math.isfinite(self.i3)):
            raise DomainError("metric eigenvalues must be finite")

    @property
    def eta(self) -> float:
        """Oblateness ``i1/i3 - 1``; always > -1."""
        return self.i1 / self.i3 - 1.0

    @classmethod
    def from_eta(cls, i1: float, eta: float) -> "Metric":
        if not eta > -1.0:
            raise DomainError(f"eta must exceed -1, got {eta}")
        return cls(i1, i1 / (1.0 + eta))


def make_metric(i1: float, i3: float) -> Metric:
    return Metric(float(i1), float(i3))


@dataclass(frozen=True)
class Covector:
    p1: float
    p2: float
    p3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3])

    def norm(self) -> float:
        return math.sqrt(self.p1 * self.p1 + self.p2 * self.p2 + self.p3 * self.p3)

    def unit(self) -> tuple[float, float, float]:
        n = self.norm()
        return (self.p1 / n, self.p2 / n, self.p3 / n)

    @property
    def pbar3(self) -> float:
        return self.p3 / self.norm()

    @property
    def azimuth(self) -> float:
        return math.atan2(self.p2, self.p1)

    def hamiltonian(self, metric: Metric) -> float:
        return 0.5 * ((self.p1 ** 2 + self.p2 ** 2) / metric.i1 + self.p3 ** 2 / metric.i3)

    def on_surface(self, metric: Metric, tol: float = TOL) -> bool:
        """True if ``2 H(p) = 1`` within ``tol``."""
        return abs(2.0 * self.hamiltonian(metric) - 1.0) <= tol


def check_pbar3(pbar3: float) -> float:
    pbar3 = float(pbar3)
    if not abs(pbar3) <= 1.0:
        raise DomainError(f"|pbar3| must be <= 1, got {pbar3}")
    return pbar3


def p_norm(metric: Metric, pbar3: float) -> float:
    """Euclidean norm of the covector on C whose unit vector has third component ``pbar3``."""
    pbar3 = check_pbar3(pbar3)
    return math.sqrt(metric.i1 / (1.0 + metric.eta * pbar3 * pbar3))


def covector_from_angles(metric: Metric, pbar3: float, azimuth: float) -> Covector:
    pbar3 = check_pbar3(pbar3)
    n = p_norm(metric, pbar3)
    h = n * math.sqrt(max(0.0, 1.0 - pbar3 * pbar3))
    return Covector(h * math.cos(azimuth), h * math.sin(azimuth), n * pbar3)


@dataclass(frozen=True)
class UnitQuaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, a) -> "UnitQuaternion":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def identity(cls) -> "UnitQuaternion":
        return cls(1.0, 0.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def normalized(self) -> "UnitQuaternion":
        n = self.norm()
        return UnitQuaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def __neg__(self) -> "UnitQuaternion":
        return UnitQuaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "UnitQuaternion") -> "UnitQuaternion":
        return UnitQuaternion.from_array(qmul(self.as_array(), other.as_array()))

    def conjugate(self) -> "UnitQuaternion":
        return UnitQuaternion(self.w, -self.x, -self.y, -self.z)


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product over the last axis (broadcasts)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


@dataclass(frozen=True)
class Rotation:
    """Rotation by ``angle`` in [0, pi] about the unit vector ``axis``.

    For ``w`` not parallel to ``axis`` the frame ``(w, R w, axis)`` is
    positively oriented.
    """

    axis: tuple[float, float, float]
    angle: float

    def __post_init__(self):
        n = math.sqrt(sum(c * c for c in self.axis))
        if abs(n - 1.0) > 1e-9:
            raise DomainError(f"rotation axis must be a unit vector, |axis| = {n}")
        if not (-1e-12 <= self.angle <= math.pi + 1e-12):
            raise DomainError(f"rotation angle must lie in [0, pi], got {self.angle}")

    def to_quaternion(self) -> UnitQuaternion:
        return quaternion_from_axis_angle(self.axis, self.angle)

    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.to_quaternion())


E3 = (0.0, 0.0, 1.0)


def quaternion_from_axis_angle(axis, angle: float) -> UnitQuaternion:
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    s = math.sin(0.5 * angle)
    return UnitQuaternion(math.cos(0.5 * angle), s * a[0], s * a[1], s * a[2])


def _canonical_axis_at_pi(v: tuple[float, float, float], tol: float) -> tuple[float, float, float]:
    for c in v:
        if abs(c) > tol:
            return v if c > 0 else (-v[0], -v[1], -v[2])
    return v


def rotation_from_quaternion(q: UnitQuaternion, tol: float = TOL) -> Rotation:
    """Canonical axis-angle form.

    The representative with ``w >= 0`` fixes the angle in [0, pi].  At angle
    pi the axis's first nonzero component is made positive; the identity gets
    axis e3.
    """
    w, x, y, z = q.w, q.x, q.y, q.z
    if w < 0:
        w, x, y, z = -w, -x, -y, -z
    s = math.sqrt(x * x + y * y + z * z)
    if s == 0.0:
        return Rotation(E3, 0.0)
    angle = 2.0 * math.atan2(s, w)
    axis = (x / s, y / s, z / s)
    if abs(w) <= tol:
        axis = _canonical_axis_at_pi(axis, tol)
    return Rotation(axis, min(angle, math.pi))


def so3_chordal_distance(q1: UnitQuaternion, q2: UnitQuaternion) -> float:
    """``min(|q1 - q2|, |q1 + q2|)``: zero iff both project to the same rotation."""
    a, b = q1.as_array(), q2.as_array()
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def su2_distance(q1: UnitQuaternion, q2: UnitQuaternion) -> float:
    """Raw 4-space distance; no sign identification."""
    return float(np.linalg.norm(q1.as_array() - q2.as_array()))


def rotation_matrix(q: UnitQuaternion) -> np.ndarray:
    w, x, y, z = q.normalized().as_array()
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])
