"""Shared test utilities: an RK4 integrator of the geodesic flow."""
import numpy as np

from lagrange_so3.core import qmul


def _rhs(q, p, i1, i3):
    omega = np.stack([p[:, 0] / i1, p[:, 1] / i1, p[:, 2] / i3], axis=-1)
    om4 = np.concatenate([np.zeros((len(q), 1)), omega], axis=-1)
    return 0.5 * qmul(q, om4), np.cross(p, omega)


def rk4_endpoints(i1, i3, p, t_end, steps):
    """Integrate q' = q (Omega / 2), p' = p x Omega from the identity.

    All inputs are vectorized over the first axis; each row uses its own step t_end/steps.
    """
    i1, i3, t_end = (np.asarray(a, dtype=float) for a in (i1, i3, t_end))
    p = np.array(p, dtype=float)
    q = np.zeros((len(p), 4))
    q[:, 0] = 1.0
    h = (t_end / steps)[:, None]
    for _ in range(steps):
        k1q, k1p = _rhs(q, p, i1, i3)
        k2q, k2p = _rhs(q + 0.5 * h * k1q, p + 0.5 * h * k1p, i1, i3)
        k3q, k3p = _rhs(q + 0.5 * h * k2q, p + 0.5 * h * k2p, i1, i3)
        k4q, k4p = _rhs(q + h * k3q, p + h * k3p, i1, i3)
        q = q + h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q)
        p = p + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
    return q, p


def chordal(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.minimum(np.linalg.norm(a - b, axis=-1), np.linalg.norm(a + b, axis=-1))
