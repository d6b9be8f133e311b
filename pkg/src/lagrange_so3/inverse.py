"""Riemannian distance from the identity by inverting the exponential map.

Off the cut locus, Exp is a diffeomorphism from ``0 < t < t_cut(p)`` onto its
image, so a target has exactly one preimage there.  The w and z components
of Exp depend only on ``(pbar3, tau)``; the solver finds that pair by damped
Newton from grid seeds and then reads the azimuth off ``(x, y)``.

On the cut locus the target is reached at the cut time by several
geodesics; ``invert_exp`` then returns a ``BoundaryReport``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.optimize import brentq, least_squares

from .core import (Covector, DomainError, Metric, SolverError, UnitQuaternion, covector_from_angles,
                   p_norm, rotation_from_quaternion, so3_chordal_distance, su2_distance)
from .cut import Stratum, classify_cut_point, cut_time, l_threshold
from .geodesic import exp_components, exp_map
from .roots import eval_q0, eval_q3, tau0

SEED_GRID = 64
FD_STEP = 1e-6
ACCEPT_RESIDUAL = 1e-9


@dataclass(frozen=True)
class InverseSolution:
    covector: Covector
    time: float
    residual: float
    pbar3: float
    tau: float


@dataclass(frozen=True)
class BoundaryReport:
    """Target on the cut locus: all listed geodesics arrive at the same time.

    On P the full preimage can be a continuum; ``solutions`` is a finite
    sample of it.  ``conjugate`` marks the two ends R_{e3, +-2 pi (1 + eta)}
    of the segment, reached by the single geodesic with pbar3 = +-1.
    """

    stratum: Stratum
    time: float
    solutions: tuple[InverseSolution, ...]
    conjugate: bool = False

    @property
    def residual(self) -> float:
        return max(s.residual for s in self.solutions)


def _q03(eta: float, pbar3: float, tau: float) -> np.ndarray:
    return np.array([eval_q0(eta, pbar3, tau)[0], eval_q3(eta, pbar3, tau)[0]])


def _tau_cut(metric: Metric, pbar3: float) -> float:
    return cut_time(metric, pbar3).tau_at_cut


@lru_cache(maxsize=64)
def _seeds(metric: Metric, n: int = SEED_GRID):
    pb = np.linspace(-1.0, 1.0, n)
    u = (np.arange(n) + 0.5) / n
    tau = np.array([_tau_cut(metric, x) for x in pb])[:, None] * u[None, :]
    P = np.broadcast_to(pb[:, None], tau.shape)
    q0 = eval_q0(metric.eta, P, tau)[0]
    q3 = eval_q3(metric.eta, P, tau)[0]
    return P, tau, q0, q3


def _newton(eta: float, target: np.ndarray, pbar3: float, tau: float, max_iter: int = 60):
    """Damped Newton on (q0, q3)(pbar3, tau) = target; pbar3 clamped to [-1, 1]."""
    f = _q03(eta, pbar3, tau) - target
    nf = float(np.hypot(*f))
    for _ in range(max_iter):
        if nf < 1e-15:
            break
        dp = (_q03(eta, pbar3 + FD_STEP, tau) - _q03(eta, pbar3 - FD_STEP, tau)) / (2.0 * FD_STEP)
        dt = np.array([eval_q0(eta, pbar3, tau)[1], eval_q3(eta, pbar3, tau)[1]])
        jac = np.column_stack([dp, dt])
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        while lam > 1e-12:
            pn = min(1.0, max(-1.0, pbar3 + lam * step[0]))
            tn = max(tau + lam * step[1], 1e-300)
            fn = _q03(eta, pn, tn) - target
            nfn = float(np.hypot(*fn))
            if nfn < nf:
                break
            lam *= 0.5
        else:
            break
        moved = abs(pn - pbar3) + abs(tn - tau)
        pbar3, tau, f, nf = pn, tn, fn, nfn
        if moved < 1e-16:
            break
    return pbar3, tau, nf


def _polish(eta: float, goal: np.ndarray, x: np.ndarray, iters: int = 4) -> np.ndarray:
    """Gauss-Newton on all four components over (pbar3, azimuth, tau).

    Near the identity w pins tau only to O(eps / tau); the vector part keeps
    full relative precision there.
    """
    def resid(v):
        return exp_components(eta, v[0], v[1], v[2]) - goal

    r = resid(x)
    nr = float(np.linalg.norm(r))
    for _ in range(iters):
        steps = np.array([1e-7, 1e-7, 1e-7 * max(x[2], 1e-3)])
        jac = np.empty((4, 3))
        for j in range(3):
            e = np.zeros(3)
            e[j] = steps[j]
            jac[:, j] = (resid(x + e) - resid(x - e)) / (2.0 * steps[j])
        dx = np.linalg.lstsq(jac, -r, rcond=1e-10)[0]
        xn = x + dx
        xn[0] = min(1.0, max(-1.0, xn[0]))
        rn = resid(xn)
        nrn = float(np.linalg.norm(rn))
        if not nrn < nr:
            break
        x, r, nr = xn, rn, nrn
    return x


def _solution(metric: Metric, target: UnitQuaternion, sign: float, pbar3: float, tau: float,
              azimuth: float | None = None, polish: bool = False) -> InverseSolution:
    eta = metric.eta
    if azimuth is None:
        azimuth = math.atan2(sign * target.y, sign * target.x) + tau * eta * pbar3
    if polish:
        pbar3, azimuth, tau = _polish(eta, sign * target.as_array(), np.array([pbar3, azimuth, tau]))
    p = covector_from_angles(metric, pbar3, azimuth)
    t = 2.0 * metric.i1 * tau / p.norm()
    residual = so3_chordal_distance(exp_map(metric, p, t), target)
    return InverseSolution(p, t, residual, pbar3, tau)


def _interior(metric: Metric, target: UnitQuaternion, n_candidates: int = 12) -> InverseSolution:
    eta = metric.eta
    P, TAU, Q0, Q3 = _seeds(metric)
    scored = []
    for sign in (1.0, -1.0):
        r = (Q0 - sign * target.w) ** 2 + (Q3 - sign * target.z) ** 2
        flat = np.argsort(r, axis=None)[:n_candidates]
        scored.extend((float(r.flat[k]), sign, k) for k in flat)
    scored.sort()
    best = None
    for _, sign, k in scored:
        goal = np.array([sign * target.w, sign * target.z])
        pbar3, tau, res = _newton(eta, goal, float(P.flat[k]), float(TAU.flat[k]))
        if res > 1e-12 or not (0.0 < tau <= _tau_cut(metric, pbar3) + 1e-9):
            continue
        sol = _solution(metric, target, sign, pbar3, tau, polish=True)
        if sol.residual < ACCEPT_RESIDUAL:
            return sol
        if best is None or sol.residual < best.residual:
            best = sol
    raise SolverError(f"no preimage of {target} found inside the injectivity domain"
                      + (f" (best residual {best.residual:.3e})" if best else ""))


def _q3_on_m0(eta: float, pbar3: float) -> float:
    return float(eval_q3(eta, pbar3, tau0(eta, pbar3).tau)[0])


def _boundary_plane(metric: Metric, target: UnitQuaternion) -> BoundaryReport:
    eta = metric.eta
    rot = rotation_from_quaternion(target)
    v = rot.axis
    pmax = min(1.0, l_threshold(eta)) if eta < -0.5 else 1.0
    sols = []
    for sign in (1.0, -1.0):
        goal = sign * v[2]
        g = lambda x: _q3_on_m0(eta, x) - goal  # noqa: E731
        lo, hi = -pmax, pmax
        if abs(g(hi)) < 1e-15:
            pbar3 = hi
        elif abs(g(lo)) < 1e-15:
            pbar3 = lo
        else:
            pbar3 = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        tau = tau0(eta, pbar3).tau
        if abs(v[0]) + abs(v[1]) < 1e-15:
            az = 0.0
        else:
            az = math.atan2(sign * v[1], sign * v[0]) + tau * eta * pbar3
        sols.append(_solution(metric, UnitQuaternion(0.0, *v), sign, pbar3, tau, az))
    times = [s.time for s in sols]
    return BoundaryReport(Stratum.P_PLANE, float(np.mean(times)), tuple(sols))


def _boundary_segment(metric: Metric, target: UnitQuaternion) -> BoundaryReport:
    eta = metric.eta
    rot = rotation_from_quaternion(target)
    side = math.copysign(1.0, rot.axis[2])
    pbar3 = side * min(1.0, (1.0 - rot.angle / (2.0 * math.pi)) / abs(eta))
    if abs(abs(pbar3) - 1.0) < 1e-12:
        sols = (_solution(metric, target, 1.0, side, math.pi, 0.0),)
        return BoundaryReport(Stratum.L_SEGMENT, sols[0].time, sols, conjugate=True)
    sols = tuple(_solution(metric, target, 1.0, pbar3, math.pi, az) for az in (0.0, math.pi))
    return BoundaryReport(Stratum.L_SEGMENT, sols[0].time, sols)


def invert_exp(metric: Metric, target: UnitQuaternion) -> InverseSolution | BoundaryReport:
    rot = rotation_from_quaternion(target)
    if rot.angle == 0.0 or so3_chordal_distance(target, UnitQuaternion.identity()) < 1e-15:
        raise DomainError("the identity has no preimage at positive time")
    stratum = classify_cut_point(metric, rot)
    if stratum is Stratum.P_PLANE:
        return _boundary_plane(metric, target)
    if stratum is Stratum.L_SEGMENT:
        return _boundary_segment(metric, target)
    return _interior(metric, target)


def distance(metric: Metric, target: UnitQuaternion) -> float:
    """Riemannian distance from the identity to ``target``."""
    if so3_chordal_distance(target, UnitQuaternion.identity()) < 1e-15:
        return 0.0
    return invert_exp(metric, target).time


def distance_between(metric: Metric, a: UnitQuaternion, b: UnitQuaternion) -> float:
    """Left-invariant distance ``d(a, b) = d(id, a^-1 b)``."""
    return distance(metric, a.conjugate() * b)


@dataclass(frozen=True)
class OracleResult:
    distance: float
    ok: bool
    residual: float
    t_step: float
    refinements: int


def shooting_oracle(metric: Metric, target: UnitQuaternion, n_pbar3: int = 64, n_az: int = 64,
                    n_t: int = 256, cover: str = "so3", eps: float = 0.5,
                    max_refine: int = 600) -> OracleResult:
    """Brute-force minimal arrival time over a (pbar3, azimuth, t) grid.

    Every grid point whose chordal miss is a local minimum over its 3x3x3
    neighbourhood and below ``eps`` seeds a bounded least-squares shot onto the target.  The
    smallest converged time wins.  ``cover="su2"`` compares raw quaternions.
    """
    if min(n_pbar3, n_az, n_t) < 16:
        raise DomainError("oracle grid counts must be at least 16")
    if cover not in ("so3", "su2"):
        raise DomainError(f"unknown cover {cover!r}")
    eta, i1 = metric.eta, metric.i1
    # One-parameter subgroups reach everything within pi sqrt(max I) (twice that on SU(2)).
    t_hi = (2.0 if cover == "su2" else 1.0) * math.pi * math.sqrt(max(metric.i1, metric.i3)) * 1.01
    pb = np.linspace(-1.0, 1.0, n_pbar3)
    az = np.linspace(0.0, 2.0 * math.pi, n_az, endpoint=False)
    ts = np.linspace(0.0, t_hi, n_t + 1)[1:]
    dt = ts[1] - ts[0]
    T = target.as_array()
    norms = np.sqrt(i1 / (1.0 + eta * pb ** 2))
    tau = ts[None, None, :] * norms[:, None, None] / (2.0 * i1)
    q = exp_components(eta, pb[:, None, None], az[None, :, None], tau)
    dm = np.linalg.norm(q - T, axis=-1)
    if cover == "so3":
        dp = np.linalg.norm(q + T, axis=-1)
        sign = np.where(dm <= dp, 1.0, -1.0)
        d = np.minimum(dm, dp)
    else:
        sign = np.ones_like(dm)
        d = dm
    # Every preimage sits near a grid-local minimum of the miss; far-off misses are noise.
    cutoff = min(eps, 3.0 * float(d.min()) + 0.05)
    local = minimum_filter(d, size=3, mode=("nearest", "wrap", "nearest"))
    mask = (d <= local) & (d < cutoff)
    idx = np.argwhere(mask)
    order = np.lexsort((d[mask], idx[:, 2])) if len(idx) else []

    def shoot(i, j, k):
        s = sign[i, j, k]

        def resid(x):
            n = math.sqrt(i1 / (1.0 + eta * x[0] ** 2))
            return exp_components(eta, x[0], x[1], x[2] * n / (2.0 * i1)) - s * T

        x0 = np.array([pb[i], az[j], ts[k]])
        lb, ub = np.array([-1.0, -np.inf, 0.0]), np.array([1.0, np.inf, np.inf])
        sol = least_squares(resid, np.clip(x0, lb, ub), bounds=(lb, ub), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        return float(sol.x[2]), float(np.linalg.norm(sol.fun))

    best_t, best_res, count = math.inf, math.inf, 0
    for m in order:
        i, j, k = idx[m]
        if ts[k] > best_t + 3.0 * dt or count >= max_refine:
            break
        t_hit, res = shoot(i, j, k)
        count += 1
        if res < 1e-8 and t_hit < best_t:
            best_t, best_res = t_hit, res
    if math.isfinite(best_t):
        return OracleResult(best_t, True, best_res, dt, count)
    i, j, k = np.unravel_index(int(np.argmin(d)), d.shape)
    return OracleResult(float(ts[k]), False, float(d[i, j, k]), dt, count)


def su2_shooting_oracle(metric: Metric, target: UnitQuaternion, **kw) -> OracleResult:
    return shooting_oracle(metric, target, cover="su2", **kw)


__all__ = ["InverseSolution", "BoundaryReport", "invert_exp", "distance", "distance_between",
           "OracleResult", "shooting_oracle", "su2_shooting_oracle", "p_norm", "su2_distance"]
