"""The lifted problem on SU(2): cut time and cut locus.

On the double cover q and -q are different points, so geodesics stay
optimal longer.  For eta <= 0 the cut locus is the segment
T = {-cos(pi eta pbar3) - sin(pi eta pbar3) k}; for eta > 0 it is the disk
D swept at tau3, bounded by a circle S of conjugate points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, Metric, UnitQuaternion, check_pbar3, covector_from_angles, p_norm
from .cut import mesh_grid
from .geodesic import exp_components, exp_map
from .roots import tau3, tau_conj

T_SEGMENT = "T_segment"
D_DISK = "D_disk"
S_LIMIT = "S_limit"
S_CIRCLE = "S_circle"


@dataclass(frozen=True)
class Su2CutReport:
    cut_time: float
    locus_kind: str  # T_SEGMENT iff eta <= 0


def su2_cut_time(metric: Metric, pbar3: float) -> Su2CutReport:
    pbar3 = check_pbar3(pbar3)
    eta = metric.eta
    n = p_norm(metric, pbar3)
    if eta <= 0.0:
        return Su2CutReport(2.0 * math.pi * metric.i1 / n, T_SEGMENT)
    if pbar3 == 0.0:
        # tau3 -> tau_conj(0) as pbar3 -> 0; the ray lands on the circle S.
        tau = tau_conj(eta, 0.0).tau
    else:
        tau = tau3(eta, pbar3).tau
    return Su2CutReport(2.0 * metric.i1 * tau / n, D_DISK)


@dataclass(frozen=True)
class Su2Sample:
    quaternion: UnitQuaternion
    tag: str
    pbar3: float
    azimuth: float


def s_circle(metric: Metric, n: int) -> list[Su2Sample]:
    """``cos tc + sin tc (i cos phi + j sin phi)`` with ``tc = tau_conj(0)``."""
    tc = tau_conj(metric.eta, 0.0).tau
    out = []
    for phi in np.linspace(0.0, 2.0 * math.pi, n, endpoint=False):
        q = UnitQuaternion(math.cos(tc), math.sin(tc) * math.cos(phi), math.sin(tc) * math.sin(phi), 0.0)
        out.append(Su2Sample(q, S_CIRCLE, 0.0, float(phi)))
    return out


def su2_cut_locus_sample(metric: Metric, n: int) -> list[Su2Sample]:
    if n < 4:
        raise DomainError("sample count must be at least 4")
    eta = metric.eta
    pb, az = mesh_grid(n)
    if eta <= 0.0:
        out = []
        for x in pb:
            p = covector_from_angles(metric, x, 0.0)
            q = exp_map(metric, p, su2_cut_time(metric, x).cut_time)
            out.append(Su2Sample(q, T_SEGMENT, float(x), 0.0))
        return out
    tc = tau_conj(eta, 0.0).tau
    out = []
    for x in pb:
        for a in az:
            if x == 0.0:
                # Continuity limit onto S, parametrized by azimuth.
                q = UnitQuaternion(math.cos(tc), math.sin(tc) * math.cos(a), math.sin(tc) * math.sin(a), 0.0)
                out.append(Su2Sample(q, S_LIMIT, 0.0, float(a)))
                continue
            v = exp_components(eta, x, a, tau3(eta, x).tau)
            out.append(Su2Sample(UnitQuaternion.from_array(v / np.linalg.norm(v)), D_DISK, float(x), float(a)))
    return out + s_circle(metric, n)
