"""Sub-Riemannian limit ``i3 -> infinity`` (eta -> -1).

The sub-Riemannian problem lives on the distribution span{i, j} with unit
horizontal inertia.  Values compared against a Riemannian metric with
horizontal inertia ``i1`` are scaled by ``sqrt(i1)``.

Matching covectors: the SR covector ``(theta, c)`` corresponds on the
Riemannian level surface to ``p3 = c``, ``(p1, p2) = sqrt(1 - c^2 (1 + eta))
(cos theta, sin theta)`` when ``i1 = 1``; then ``|p| -> sqrt(1 + c^2)`` and
``pbar3 -> c / sqrt(1 + c^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (Covector, DomainError, Metric, SolverError, UnitQuaternion, qmul,
                   quaternion_from_axis_angle, so3_chordal_distance)
from .geodesic import exp_components, exp_map
from .inverse import invert_exp
from .roots import first_positive_root, tau_conj

DEFAULT_ETAS = tuple(-1.0 + 10.0 ** -k for k in range(1, 5))
THRESHOLD = 1e-2


@dataclass(frozen=True)
class SrCovector:
    """Initial covector ``(1/2)(cos theta i + sin theta j) + c k``."""

    c: float
    theta: float


@dataclass(frozen=True)
class ConvergenceRow:
    eta: float
    riemannian_value: float
    sr_value: float
    abs_error: float


def _qexp(v: np.ndarray) -> np.ndarray:
    """Quaternion of the rotation ``exp(v)``: ``cos(|v|/2) + sin(|v|/2) v/|v|`` (vectorized)."""
    r = np.linalg.norm(v, axis=-1, keepdims=True)
    half = 0.5 * r
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(r > 0, np.sin(half) / np.where(r > 0, r, 1.0), 0.5)
    return np.concatenate([np.cos(half), s * v], axis=-1)


def sr_exp_components(c: float, theta: float, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)[..., None]
    ap = np.array([math.cos(theta), math.sin(theta), c])
    ak = np.array([0.0, 0.0, c])
    return qmul(_qexp(t * ap), _qexp(-t * ak))


def sr_exp(sc: SrCovector, t: float) -> UnitQuaternion:
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    return UnitQuaternion.from_array(sr_exp_components(sc.c, sc.theta, t)).normalized()


def sr_conjugate_time(c: float) -> float:
    return 2.0 * math.pi / math.sqrt(1.0 + c * c)


def sr_cut_time_axis(arg_alpha: float) -> float:
    """SR cut time to ``cos(arg_alpha) + sin(arg_alpha) k``."""
    if not 0.0 < arg_alpha < 2.0 * math.pi:
        raise DomainError(f"arg_alpha must lie in (0, 2 pi), got {arg_alpha}")
    return 2.0 * math.sqrt(arg_alpha * (2.0 * math.pi - arg_alpha))


def riemannian_axis_cut_time(i1: float, eta: float, arg_alpha: float, exact: bool = False) -> float:
    """Riemannian time to ``cos(arg_alpha) + sin(arg_alpha) k`` along the tau = pi family.

    The default uses the limit relation ``arg_alpha = pi - pi pbar3``, so it
    collapses to ``2 pi sqrt(i1)`` at ``arg_alpha = pi`` for every eta and
    tends to the SR value as eta -> -1.  ``exact=True`` solves
    ``arg_alpha = pi + pi eta pbar3`` instead, which is the true time to the
    point of T_eta (needs ``|arg_alpha - pi| <= pi |eta|``).
    """
    if not 0.0 < arg_alpha < 2.0 * math.pi:
        raise DomainError(f"arg_alpha must lie in (0, 2 pi), got {arg_alpha}")
    if exact:
        if eta == 0.0:
            raise DomainError("the segment degenerates to a point at eta = 0")
        pbar3 = (arg_alpha - math.pi) / (math.pi * eta)
        if abs(pbar3) > 1.0:
            raise DomainError("arg_alpha is outside the segment for this eta")
        return 2.0 * math.pi * math.sqrt(i1) * math.sqrt(1.0 + eta * pbar3 * pbar3)
    a = arg_alpha
    return 2.0 * math.sqrt(i1) * math.sqrt(math.pi ** 2 * (1.0 + eta) - 2.0 * math.pi * eta * a + eta * a * a)


def _plane_time(c: float) -> float:
    """First positive t with w(sr_exp(c, 0, t)) = 0."""
    k = math.sqrt(1.0 + c * c)
    f = lambda t: sr_exp_components(c, 0.0, t)[..., 0]  # noqa: E731
    return first_positive_root(f, math.pi / (256.0 * k), 4.0 * math.pi, initial_sign=1.0).tau


def sr_cut_time_plane(alpha_norm: float, c_max: float = 1.0 / math.sqrt(3.0)) -> float:
    """SR cut time to an axial symmetry whose axis has third component ``alpha_norm``.

    Outer bisection on c in [0, c_max]: at each c the inner solve takes the
    first zero of w, and the horizontal part must equal sqrt(1 - alpha_norm^2).
    At c_max the first zero of w falls where the horizontal part vanishes.
    """
    if not 0.0 <= alpha_norm < 1.0:
        raise DomainError(f"alpha_norm must lie in [0, 1), got {alpha_norm}")
    goal = math.sqrt(1.0 - alpha_norm * alpha_norm)

    def g(c):
        t = _plane_time(c)
        q = sr_exp_components(c, 0.0, t)
        return math.hypot(q[1], q[2]) - goal, t

    lo, hi = 0.0, c_max
    glo, t_lo = g(lo)
    ghi, _ = g(hi)
    if glo < 0 or ghi > 0:
        raise SolverError(f"no plane solution for alpha_norm={alpha_norm} in c in [0, {c_max}]: "
                          f"residuals {glo:.3e}, {ghi:.3e}")
    if glo == 0.0:
        return t_lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm, _ = g(mid)
        if gm > 0:
            lo = mid
        else:
            hi = mid
    return g(0.5 * (lo + hi))[1]


def matched_covector(eta: float, c: float, theta: float, i1: float = 1.0) -> Covector:
    h = math.sqrt(1.0 - c * c * (1.0 + eta))
    s = math.sqrt(i1)
    return Covector(s * h * math.cos(theta), s * h * math.sin(theta), s * c)


def _check_eta(eta: float) -> None:
    if not -1.0 < eta < 0.0:
        raise DomainError(f"eta must lie in (-1, 0), got {eta}")


def _endpoint_error(i1: float, eta: float, c: float, theta: float, n_t: int) -> float:
    ts = np.linspace(0.0, 2.0 * math.pi, n_t)
    p = matched_covector(eta, c, theta)
    n = p.norm()
    sr = sr_exp_components(c, theta, ts)
    ri = exp_components(eta, p.p3 / n, math.atan2(p.p2, p.p1), ts * n / 2.0)
    ri /= np.linalg.norm(ri, axis=-1, keepdims=True)
    sr /= np.linalg.norm(sr, axis=-1, keepdims=True)
    return float(np.max(np.minimum(np.linalg.norm(ri - sr, axis=-1), np.linalg.norm(ri + sr, axis=-1))))


def _hausdorff_gap(eta: float, n: int) -> float:
    """Hausdorff distance, in rotation angle, from sampled L_eta to the full e3 circle."""
    if eta >= -0.5:
        raise DomainError("the segment component exists only for eta < -1/2")
    thr = 1.0 / (2.0 * abs(eta))
    pb = np.linspace(thr, 1.0, n)
    q = exp_components(eta, pb, 0.0, np.pi)
    angles = 2.0 * np.arctan2(q[:, 3], q[:, 0])
    angles = np.concatenate([angles, -angles])
    angles = np.sort(np.mod(angles, 2.0 * math.pi))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * math.pi]]))
    return float(0.5 * gaps.max())


QUANTITIES = ("geodesic_endpoint", "conjugate_time", "cut_time_axis", "cut_time_plane", "cut_locus_hausdorff")


def convergence_report(i1: float, quantity: str, etas=DEFAULT_ETAS, **params) -> list[ConvergenceRow]:
    """Riemannian value, SR value and their gap for each eta.

    params: ``c``, ``theta``, ``n_t`` (geodesic_endpoint); ``c`` (conjugate_time);
    ``arg_alpha`` (cut_time_axis); ``alpha_norm`` (cut_time_plane); ``n``
    (cut_locus_hausdorff).
    """
    if not i1 > 0:
        raise DomainError("i1 must be positive")
    if quantity not in QUANTITIES:
        raise DomainError(f"unknown quantity {quantity!r}; expected one of {QUANTITIES}")
    s = math.sqrt(i1)
    rows = []
    for eta in etas:
        eta = float(eta)
        _check_eta(eta)
        if quantity == "geodesic_endpoint":
            # Both sides are group elements; the i1 scaling changes neither.
            err = _endpoint_error(i1, eta, params.get("c", 1.0), params.get("theta", 0.0), params.get("n_t", 1001))
            ri, sr = err, 0.0
        elif quantity == "conjugate_time":
            c = params.get("c", 0.0)
            p = matched_covector(eta, c, 0.0)
            ri = s * 2.0 * tau_conj(eta, p.pbar3).tau / p.norm()
            sr = s * sr_conjugate_time(c)
        elif quantity == "cut_time_axis":
            a = params.get("arg_alpha", math.pi / 2.0)
            ri = riemannian_axis_cut_time(i1, eta, a, exact=params.get("exact", False))
            sr = s * sr_cut_time_axis(a)
        elif quantity == "cut_time_plane":
            a = params.get("alpha_norm", 0.5)
            b = math.sqrt(1.0 - a * a)
            metric = Metric.from_eta(i1, eta)
            ri = invert_exp(metric, quaternion_from_axis_angle((b, 0.0, a), math.pi)).time
            sr = s * sr_cut_time_plane(a)
        else:
            ri, sr = _hausdorff_gap(eta, params.get("n", 4001)), 0.0
        rows.append(ConvergenceRow(eta, float(ri), float(sr), abs(float(ri) - float(sr))))
    return rows


def is_converging(rows: list[ConvergenceRow], threshold: float = THRESHOLD, slack: float = 1e-15) -> bool:
    """Errors non-increasing along the rows and the last one below ``threshold``."""
    errs = [r.abs_error for r in rows]
    return all(b <= a + slack for a, b in zip(errs, errs[1:])) and errs[-1] < threshold


def sr_distance_check(c: float, theta: float, t: float, eta: float) -> float:
    """Chordal gap between SR and matched Riemannian endpoints at one time (i1 = 1)."""
    metric = Metric.from_eta(1.0, eta)
    return so3_chordal_distance(exp_map(metric, matched_covector(eta, c, theta), t, tol=1e-9),
                                sr_exp(SrCovector(c, theta), t))
