"""The functions q0, q3 of rescaled time and their first positive zeros.

Root search: forward scan for the first sign change, bisection of the
bracket, one Newton polish with the analytic derivative.  Both q0 and q3
have only simple zeros, so a sign change between scan nodes is never missed
as long as the scan step resolves the fastest oscillation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import SolverError, check_pbar3

log = logging.getLogger(__name__)

BISECT_WIDTH = 1e-14


@dataclass(frozen=True)
class RootResult:
    tau: float
    residual: float
    bracket: tuple[float, float] | None = None

    @property
    def finite(self) -> bool:
        return math.isfinite(self.tau)


def eval_q0(eta, pbar3, tau):
    """Value and tau-derivative of q0 (vectorized)."""
    a = tau * eta * pbar3
    ct, st = np.cos(tau), np.sin(tau)
    ca, sa = np.cos(a), np.sin(a)
    value = ct * ca - pbar3 * st * sa
    dtau = -(1.0 + eta * pbar3 ** 2) * st * ca - pbar3 * (eta + 1.0) * ct * sa
    return value, dtau


def eval_q3(eta, pbar3, tau):
    """Value and tau-derivative of q3 (vectorized)."""
    a = tau * eta * pbar3
    ct, st = np.cos(tau), np.sin(tau)
    ca, sa = np.cos(a), np.sin(a)
    value = ct * sa + pbar3 * st * ca
    dtau = -(1.0 + eta * pbar3 ** 2) * st * sa + pbar3 * (eta + 1.0) * ct * ca
    return value, dtau


def _bisect(f, lo: float, hi: float, sign_lo: float, width: float = BISECT_WIDTH) -> tuple[float, float]:
    """Shrink a sign-change bracket; ``sign_lo`` is the sign of f just right of ``lo``."""
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = float(f(mid))
        if fm == 0.0:
            return mid, mid
        if math.copysign(1.0, fm) == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _polish(f, df, lo: float, hi: float) -> float:
    flo, fhi = abs(float(f(lo))), abs(float(f(hi)))
    tau = lo if flo <= fhi else hi
    best = min(flo, fhi)
    if df is not None:
        d = float(df(tau))
        if d != 0.0:
            cand = tau - float(f(tau)) / d
            if lo <= cand <= hi and abs(float(f(cand))) <= best:
                tau = cand
    return tau


def first_positive_root(f, step: float, ceiling: float, df=None, initial_sign: float = 1.0,
                        chunk: int = 4096) -> RootResult:
    """Smallest root of ``f`` in (0, ceiling].

    ``f`` must accept numpy arrays.  ``initial_sign`` is the sign of ``f`` on
    (0, step); it matters when ``f(0) = 0``.  Raises ``SolverError`` if no
    sign change is found below ``ceiling``.
    """
    prev_tau, prev_sign = 0.0, math.copysign(1.0, initial_sign)
    start = 0
    while True:
        k = np.arange(start + 1, start + chunk + 1, dtype=float)
        taus = k * step
        if taus[0] > ceiling + step:
            raise SolverError(f"no root found below the scan ceiling {ceiling}")
        vals = np.asarray(f(taus), dtype=float)
        signs = np.sign(vals)
        before = np.concatenate(([prev_sign], signs[:-1]))
        hits = np.nonzero((signs == 0.0) | (signs != before))[0]
        if hits.size:
            i = int(hits[0])
            hi = float(taus[i])
            if vals[i] == 0.0:
                return RootResult(hi, 0.0, (hi, hi))
            lo = float(taus[i - 1]) if i > 0 else prev_tau
            sign_lo = float(before[i])
            lo, hi = _bisect(f, lo, hi, sign_lo)
            tau = _polish(f, df, lo, hi)
            return RootResult(tau, abs(float(f(tau))), (lo, hi))
        prev_tau, prev_sign = float(taus[-1]), float(signs[-1])
        start += chunk


def scan_step(eta: float) -> float:
    return min(math.pi / 64.0, math.pi / (64.0 * (1.0 + abs(eta))))


def scan_ceiling(eta: float) -> float:
    return 4.0 * math.pi / min(1.0, 1.0 + eta)


@lru_cache(maxsize=1 << 16)
def _tau0(eta: float, pbar3: float) -> RootResult:
    try:
        return first_positive_root(
            lambda t: eval_q0(eta, pbar3, t)[0], scan_step(eta), scan_ceiling(eta),
            df=lambda t: eval_q0(eta, pbar3, t)[1])
    except SolverError:
        log.error("tau0 scan exhausted for eta=%r pbar3=%r", eta, pbar3)
        raise


def tau0(eta: float, pbar3: float) -> RootResult:
    """Smallest positive zero of q0."""
    return _tau0(float(eta), check_pbar3(pbar3))


@lru_cache(maxsize=1 << 16)
def _tau3(eta: float, pbar3: float) -> RootResult:
    if pbar3 == 0.0:
        return RootResult(math.inf, 0.0, None)
    return first_positive_root(
        lambda t: eval_q3(eta, pbar3, t)[0], scan_step(eta), scan_ceiling(eta),
        df=lambda t: eval_q3(eta, pbar3, t)[1], initial_sign=pbar3)


def tau3(eta: float, pbar3: float) -> RootResult:
    """Smallest positive zero of q3; ``inf`` at ``pbar3 = 0`` where q3 vanishes identically."""
    return _tau3(float(eta), check_pbar3(pbar3))


def conj_function(eta: float, pbar3: float, tau):
    """``sin(tau)(1 + eta pbar3^2) + eta (1 - pbar3^2) tau cos(tau)`` and its derivative."""
    a = 1.0 + eta * pbar3 * pbar3
    b = eta * (1.0 - pbar3 * pbar3)
    st, ct = np.sin(tau), np.cos(tau)
    return a * st + b * tau * ct, (a + b) * ct - b * tau * st


@lru_cache(maxsize=1 << 16)
def _tau_conj(eta: float, pbar3: float) -> RootResult:
    if eta <= 0.0 or abs(pbar3) == 1.0:
        return RootResult(math.pi, 0.0, None)
    f = lambda t: conj_function(eta, pbar3, t)[0]  # noqa: E731
    df = lambda t: conj_function(eta, pbar3, t)[1]  # noqa: E731
    # f(pi/2) = 1 + eta pbar3^2 > 0 and f(pi) = -eta (1 - pbar3^2) pi < 0.
    lo, hi = _bisect(f, 0.5 * math.pi, math.pi, 1.0)
    tau = _polish(f, df, lo, hi)
    return RootResult(tau, abs(float(f(tau))), (lo, hi))


def tau_conj(eta: float, pbar3: float) -> RootResult:
    """First conjugate time in rescaled units."""
    return _tau_conj(float(eta), check_pbar3(pbar3))
