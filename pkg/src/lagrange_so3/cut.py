"""Maxwell strata, cut time, cut locus, wavefronts and the diameter."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .core import (E3, TOL, DomainError, Metric, Rotation, UnitQuaternion, check_pbar3,
                   covector_from_angles, p_norm, rotation_from_quaternion)
from .geodesic import exp_components, exp_map
from .roots import tau0, tau3, tau_conj

BOUNDARY_TOL = 1e-9


class Stratum(str, enum.Enum):
    P_PLANE = "P_plane"
    L_SEGMENT = "L_segment"
    CONJUGATE_ENDPOINT = "conjugate_endpoint"
    NOT_IN_CUT_LOCUS = "not_in_cut_locus"


@dataclass(frozen=True)
class MaxwellStratum:
    """One of the three symmetry Maxwell strata, as a time function of pbar3."""

    label: str  # "M0", "M12" or "M3"

    def tau_at(self, eta: float, pbar3: float) -> float:
        pbar3 = check_pbar3(pbar3)
        if self.label == "M0":
            return tau0(eta, pbar3).tau
        if self.label == "M12":
            if abs(pbar3) == 1.0:
                raise DomainError("M12 excludes pbar3 = +-1")
            return math.pi
        if self.label == "M3":
            if pbar3 == 0.0:
                raise DomainError("M3 excludes pbar3 = 0")
            return tau3(eta, pbar3).tau
        raise ValueError(f"unknown stratum {self.label!r}")

    def time_at(self, metric: Metric, pbar3: float) -> float:
        return 2.0 * self.tau_at(metric.eta, pbar3) * metric.i1 / p_norm(metric, pbar3)


MAXWELL_STRATA = (MaxwellStratum("M0"), MaxwellStratum("M12"), MaxwellStratum("M3"))


def l_threshold(eta: float) -> float:
    """``1/(2|eta|)``: for eta < -1/2, covectors with |pbar3| above it are cut on M12."""
    return math.inf if eta == 0 else 1.0 / (2.0 * abs(eta))


@dataclass(frozen=True)
class CutReport:
    cut_time: float
    stratum: Stratum
    tau_at_cut: float
    pbar3: float


def maxwell_time(metric: Metric, pbar3: float) -> float:
    pbar3 = check_pbar3(pbar3)
    tau = min(math.pi, tau0(metric.eta, pbar3).tau)
    return 2.0 * tau * metric.i1 / p_norm(metric, pbar3)


def cut_time(metric: Metric, pbar3: float) -> CutReport:
    pbar3 = check_pbar3(pbar3)
    eta = metric.eta
    n = p_norm(metric, pbar3)
    if eta < -0.5 and abs(pbar3) >= l_threshold(eta):
        stratum = Stratum.L_SEGMENT
        # The threshold ray ends at R_{e3, pi}, where M0 and M12 meet at tau = tau_conj = pi.
        if abs(abs(pbar3) - l_threshold(eta)) <= BOUNDARY_TOL:
            stratum = Stratum.CONJUGATE_ENDPOINT
        tau = math.pi
    else:
        stratum = Stratum.P_PLANE
        tau = tau0(eta, pbar3).tau
    return CutReport(2.0 * metric.i1 * tau / n, stratum, tau, pbar3)


def conjugate_time(metric: Metric, pbar3: float) -> float:
    return 2.0 * metric.i1 * tau_conj(metric.eta, pbar3).tau / p_norm(metric, pbar3)


def classify_cut_point(metric: Metric, r: Rotation, tol: float = BOUNDARY_TOL) -> Stratum:
    if abs(r.angle - math.pi) <= tol:
        return Stratum.P_PLANE
    eta = metric.eta
    if eta < -0.5:
        on_axis = abs(abs(r.axis[2]) - 1.0) <= tol
        if on_axis and r.angle >= 2.0 * math.pi * (1.0 + eta) - tol:
            return Stratum.L_SEGMENT
    return Stratum.NOT_IN_CUT_LOCUS


@dataclass
class LocusMesh:
    pbar3: np.ndarray
    azimuth: np.ndarray
    quaternions: np.ndarray  # (N, 4)
    tags: list = field(default_factory=list)
    n: int = 0

    def rotations(self) -> list[Rotation]:
        return [rotation_from_quaternion(UnitQuaternion.from_array(q)) for q in self.quaternions]

    def rows(self):
        for i in range(len(self.pbar3)):
            w, x, y, z = self.quaternions[i]
            yield (float(self.pbar3[i]), float(self.azimuth[i]), float(w), float(x), float(y), float(z),
                   self.tags[i] if self.tags else "")


def mesh_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform (pbar3, azimuth) grid, pbar3 including both poles."""
    if n < 4:
        raise DomainError("mesh resolution must be at least 4")
    return np.linspace(-1.0, 1.0, n), np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


def cut_locus_mesh(metric: Metric, n: int) -> LocusMesh:
    pb, az = mesh_grid(n)
    p_col, a_col, qs, tags = [], [], [], []
    for pbar3 in pb:
        report = cut_time(metric, pbar3)
        for azimuth in az:
            p = covector_from_angles(metric, pbar3, azimuth)
            q = exp_map(metric, p, report.cut_time)
            p_col.append(pbar3)
            a_col.append(azimuth)
            qs.append(q.as_array())
            tags.append(classify_cut_point(metric, rotation_from_quaternion(q)).value)
    return LocusMesh(np.array(p_col), np.array(a_col), np.array(qs), tags, n)


def wavefront(metric: Metric, t: float, n: int) -> LocusMesh:
    if not t > 0:
        raise DomainError("wavefront time must be positive")
    pb, az = mesh_grid(n)
    P, A = np.meshgrid(pb, az, indexing="ij")
    norms = np.sqrt(metric.i1 / (1.0 + metric.eta * P ** 2))
    tau = t * norms / (2.0 * metric.i1)
    q = exp_components(metric.eta, P, A, tau).reshape(-1, 4)
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    return LocusMesh(P.ravel(), A.ravel(), q, ["front"] * len(q), n)


class FarthestKind(str, enum.Enum):
    TWO_POLES = "TwoPoles"
    PLANE_P = "PlaneP"
    EQUATOR_CIRCLE = "EquatorCircle"


@dataclass(frozen=True)
class Farthest:
    kind: FarthestKind
    representatives: tuple[Rotation, ...]

    def contains(self, r: Rotation, tol: float = 1e-9) -> bool:
        if abs(r.angle - math.pi) > tol:
            return False
        if self.kind is FarthestKind.PLANE_P:
            return True
        if self.kind is FarthestKind.TWO_POLES:
            return abs(abs(r.axis[2]) - 1.0) <= tol
        return abs(r.axis[2]) <= tol


def diameter_formula(metric: Metric) -> float:
    eta, i1 = metric.eta, metric.i1
    if eta < -0.5:
        return 2.0 * math.pi * math.sqrt(i1) * math.sqrt(1.0 + 1.0 / (4.0 * eta))
    if eta <= 0.0:
        return math.pi * math.sqrt(metric.i3)
    return math.pi * math.sqrt(i1)


def farthest_set(metric: Metric) -> Farthest:
    eta = metric.eta
    if eta < 0.0:
        return Farthest(FarthestKind.TWO_POLES, (Rotation(E3, math.pi),))
    if eta == 0.0:
        return Farthest(FarthestKind.PLANE_P, tuple(
            Rotation(v, math.pi) for v in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), E3)))
    s = math.sqrt(0.5)
    return Farthest(FarthestKind.EQUATOR_CIRCLE, tuple(
        Rotation(v, math.pi) for v in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (s, s, 0.0))))


def diameter(metric: Metric) -> tuple[float, Farthest]:
    return diameter_formula(metric), farthest_set(metric)


def max_cut_time(metric: Metric, n: int = 2001, refine: bool = True) -> tuple[float, float]:
    """Maximum of the cut time over pbar3, returned as ``(value, argmax pbar3)``.

    Grid search over ``n`` nodes in [-1, 1]; with ``refine`` the best node is
    polished by a bounded scalar maximization over its two neighbouring cells.
    """
    grid = np.linspace(-1.0, 1.0, n)
    values = np.array([cut_time(metric, x).cut_time for x in grid])
    i = int(np.argmax(values))
    best, arg = float(values[i]), float(grid[i])
    if refine:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
        if hi > lo:
            res = minimize_scalar(lambda x: -cut_time(metric, x).cut_time, bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-12})
            if -res.fun > best:
                best, arg = float(-res.fun), float(res.x)
    return best, arg

