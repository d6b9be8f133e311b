"""Closed-form exponential map, vertical flow and the symmetry group S.

Public functions take physical time ``t``.  Internally everything runs on the
rescaled time ``tau = t |p| / (2 i1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TOL, Covector, DomainError, Metric, UnitQuaternion


def tau_of(metric: Metric, p: Covector, t: float) -> float:
    return t * p.norm() / (2.0 * metric.i1)


def time_of(metric: Metric, pnorm: float, tau: float) -> float:
    return 2.0 * metric.i1 * tau / pnorm


def exp_components(eta, pbar3, azimuth, tau) -> np.ndarray:
    """Quaternion ``(w, x, y, z)`` of the geodesic, vectorized over broadcastable inputs.

    ``azimuth`` is the polar angle of ``(p1, p2)``.  Not normalized.
    """
    eta = np.asarray(eta, dtype=float)
    pbar3 = np.asarray(pbar3, dtype=float)
    tau = np.asarray(tau, dtype=float)
    a = tau * eta * pbar3
    ct, st = np.cos(tau), np.sin(tau)
    ca, sa = np.cos(a), np.sin(a)
    h = st * np.sqrt(np.clip(1.0 - pbar3 * pbar3, 0.0, None))
    phase = np.asarray(azimuth, dtype=float) - a
    return np.stack(np.broadcast_arrays(
        ct * ca - pbar3 * st * sa,
        h * np.cos(phase),
        h * np.sin(phase),
        ct * sa + pbar3 * st * ca,
    ), axis=-1)


def _require_on_surface(metric: Metric, p: Covector, tol: float) -> None:
    if not p.on_surface(metric, tol):
        raise DomainError(f"covector {p} is not on the level surface 2H = 1 (2H = {2 * p.hamiltonian(metric)!r})")


def exp_map(metric: Metric, p: Covector, t: float, tol: float = TOL) -> UnitQuaternion:
    _require_on_surface(metric, p, tol)
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    n = p.norm()
    tau = t * n / (2.0 * metric.i1)
    # (p1, p2) enter through R_{e3, -tau eta pbar3}; azimuth form keeps them exact.
    pb1, pb2, pb3 = p.p1 / n, p.p2 / n, p.p3 / n
    a = tau * metric.eta * pb3
    ca, sa = math.cos(a), math.sin(a)
    ct, st = math.cos(tau), math.sin(tau)
    q = UnitQuaternion(
        ct * ca - pb3 * st * sa,
        st * (ca * pb1 + sa * pb2),
        st * (-sa * pb1 + ca * pb2),
        ct * sa + pb3 * st * ca,
    )
    return q.normalized()


def vertical_flow(metric: Metric, p: Covector, t: float, tol: float = TOL) -> Covector:
    """Covector transported along the geodesic: (p1, p2) turn by ``-2 tau eta pbar3``."""
    _require_on_surface(metric, p, tol)
    angle = -2.0 * tau_of(metric, p, t) * metric.eta * p.pbar3
    c, s = math.cos(angle), math.sin(angle)
    return Covector(c * p.p1 - s * p.p2, s * p.p1 + c * p.p2, p.p3)


@dataclass(frozen=True)
class SymmetryElement:
    """``sigma2^reflect_12 . sigma1^reflect_13 . R_{e3, alpha}``.

    sigma1 reflects in span{e1, e3}; sigma2 reflects in span{e1, e2}.
    """

    alpha: float = 0.0
    reflect_13: bool = False
    reflect_12: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha) % (2.0 * math.pi))

    @property
    def preserves_vertical(self) -> bool:
        """Each reflection flips the sign of the vertical field."""
        return self.reflect_13 == self.reflect_12

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.alpha), math.sin(self.alpha)
        m = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        if self.reflect_13:
            m = np.diag([1.0, -1.0, 1.0]) @ m
        if self.reflect_12:
            m = np.diag([1.0, 1.0, -1.0]) @ m
        return m

    def apply(self, v) -> tuple[float, float, float]:
        c, s = math.cos(self.alpha), math.sin(self.alpha)
        x, y, z = v
        x, y = c * x - s * y, s * x + c * y
        if self.reflect_13:
            y = -y
        if self.reflect_12:
            z = -z
        return (x, y, z)


IDENTITY = SymmetryElement()
SIGMA1 = SymmetryElement(reflect_13=True)
SIGMA2 = SymmetryElement(reflect_12=True)


def rotation_e3(alpha: float) -> SymmetryElement:
    return SymmetryElement(alpha=alpha)


def apply_symmetry_source(metric: Metric, sigma: SymmetryElement, p: Covector, t: float) -> tuple[Covector, float]:
    if sigma.preserves_vertical:
        _require_on_surface(metric, p, TOL)
        return Covector(*sigma.apply((p.p1, p.p2, p.p3))), t
    q = vertical_flow(metric, p, t)
    return Covector(*sigma.apply((q.p1, q.p2, q.p3))), t


def apply_symmetry_target(sigma: SymmetryElement, q: UnitQuaternion) -> UnitQuaternion:
    x, y, z = sigma.apply((q.x, q.y, q.z))
    return UnitQuaternion(q.w, x, y, z)


@dataclass(frozen=True)
class GeodesicSample:
    times: np.ndarray
    quaternions: np.ndarray  # shape (n, 4)

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        for t, q in zip(self.times, self.quaternions):
            yield float(t), UnitQuaternion.from_array(q)


def sample_geodesic(metric: Metric, p: Covector, t_end: float, n: int) -> GeodesicSample:
    if n < 2:
        raise DomainError("need at least two samples")
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    times = np.linspace(0.0, t_end, n)
    qs = np.array([exp_map(metric, p, float(t)).as_array() for t in times])
    return GeodesicSample(times, qs)
