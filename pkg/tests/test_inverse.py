import math

import numpy as np
import pytest

from lagrange_so3.core import (DomainError, Metric, UnitQuaternion, covector_from_angles, quaternion_from_axis_angle,
                               so3_chordal_distance)
from lagrange_so3.cut import Stratum, cut_time
from lagrange_so3.geodesic import SymmetryElement, apply_symmetry_target, exp_map
from lagrange_so3.inverse import (BoundaryReport, InverseSolution, distance, distance_between, invert_exp,
                                  shooting_oracle, su2_shooting_oracle)
from lagrange_so3.su2 import su2_cut_time


def test_identity():
    m = Metric(1, 2)
    assert distance(m, UnitQuaternion.identity()) == 0.0
    with pytest.raises(DomainError):
        invert_exp(m, UnitQuaternion.identity())


def test_euler_case_recovers_axis():
    v = np.array([1.0, -2.0, 0.5])
    sol = invert_exp(Metric(1, 1), quaternion_from_axis_angle(v, 1.1))
    assert sol.time == pytest.approx(1.1, abs=1e-12)
    assert sol.covector.as_array() == pytest.approx(v / np.linalg.norm(v), abs=1e-10)


@pytest.mark.parametrize("eta", [-0.9, -0.75, -0.4, 0.0, 0.5, 3.0])
def test_round_trip_at_seven_tenths(eta):
    m = Metric.from_eta(1.7, eta)
    rng = np.random.default_rng(int(100 * (eta + 1)))
    for _ in range(30):
        x = rng.uniform(-1, 1)
        p = covector_from_angles(m, x, rng.uniform(0, 2 * math.pi))
        t = 0.7 * cut_time(m, x).cut_time
        sol = invert_exp(m, exp_map(m, p, t))
        assert isinstance(sol, InverseSolution)
        assert sol.time == pytest.approx(t, abs=1e-9)
        assert sol.covector.as_array() == pytest.approx(p.as_array(), abs=1e-9)
        assert sol.residual < 1e-9
        assert sol.time <= cut_time(m, sol.pbar3).cut_time + 1e-12


def test_segment_boundary_report():
    m = Metric(1, 4)
    rep = invert_exp(m, quaternion_from_axis_angle((0, 0, 1), 3 * math.pi / 4))
    assert isinstance(rep, BoundaryReport)
    assert rep.stratum is Stratum.L_SEGMENT
    assert len(rep.solutions) == 2
    a, b = rep.solutions
    assert a.time == pytest.approx(b.time)
    assert not np.allclose(a.covector.as_array(), b.covector.as_array())
    assert rep.residual < 1e-12


def test_segment_end_is_conjugate():
    m = Metric(1, 4)
    rep = invert_exp(m, quaternion_from_axis_angle((0, 0, -1), math.pi / 2))
    assert rep.conjugate and len(rep.solutions) == 1
    assert rep.time == pytest.approx(math.pi)
    assert rep.solutions[0].pbar3 == -1.0


@pytest.mark.parametrize("eta", [-0.75, -0.3, 0.0, 1.0])
def test_plane_boundary_report(eta):
    m = Metric.from_eta(1.0, eta)
    for v in [(1, 0, 0), (0.36, 0.48, 0.8), (0, 0, 1), (0.6, -0.8, 0)]:
        rep = invert_exp(m, quaternion_from_axis_angle(v, math.pi))
        assert rep.stratum is Stratum.P_PLANE
        assert len(rep.solutions) >= 2
        assert rep.residual < 1e-12
        times = [s.time for s in rep.solutions]
        assert max(times) - min(times) < 1e-12
        for s in rep.solutions:
            assert s.time == pytest.approx(cut_time(m, s.pbar3).cut_time, rel=1e-12)


def test_distance_examples():
    for eta in (-0.5, -0.25, -0.1):
        m = Metric.from_eta(1.0, eta)
        assert distance(m, quaternion_from_axis_angle((0, 0, 1), math.pi)) == pytest.approx(math.pi * math.sqrt(m.i3))
    assert distance(Metric(1, 0.5), quaternion_from_axis_angle((1, 0, 0), math.pi)) == pytest.approx(math.pi)


def test_oracle_examples():
    m = Metric(1, 1)
    res = shooting_oracle(m, quaternion_from_axis_angle((1, 1, 0), 2.0))
    assert res.ok and abs(res.distance - 2.0) <= 2 * res.t_step
    m = Metric(1, 4)
    res = shooting_oracle(m, quaternion_from_axis_angle((0, 0, 1), math.pi))
    assert abs(res.distance - 2 * math.pi * math.sqrt(2 / 3)) <= 2 * res.t_step
    with pytest.raises(DomainError):
        shooting_oracle(m, UnitQuaternion(0, 1, 0, 0), n_t=8)


def test_su2_oracle_matches_cut_time_on_segment():
    # eta = -1/2, pbar3 = 1: the SU(2) cut time is 2 pi / |p| with |p| = sqrt(2).
    m = Metric.from_eta(1.0, -0.5)
    p = covector_from_angles(m, 1.0, 0.0)
    t = su2_cut_time(m, 1.0).cut_time
    assert t == pytest.approx(math.pi * math.sqrt(2))
    res = su2_shooting_oracle(m, exp_map(m, p, t))
    assert res.ok and abs(res.distance - t) <= 2 * res.t_step


def test_triangle_inequality_and_symmetry():
    rng = np.random.default_rng(5)
    m = Metric.from_eta(1.0, -0.6)
    for _ in range(40):
        a = UnitQuaternion.from_array(rng.normal(size=4)).normalized()
        b = UnitQuaternion.from_array(rng.normal(size=4)).normalized()
        assert distance(m, a * b) <= distance(m, a) + distance(m, b) + 1e-9
        sigma = SymmetryElement(rng.uniform(0, 6), bool(rng.integers(2)), bool(rng.integers(2)))
        assert distance(m, apply_symmetry_target(sigma, a)) == pytest.approx(distance(m, a), abs=1e-9)
        assert distance_between(m, a, a * b) == pytest.approx(distance(m, b), abs=1e-9)


def test_unit_speed_along_geodesic():
    m = Metric.from_eta(1.0, -0.75)
    p = covector_from_angles(m, 0.5, 0.2)
    tc = cut_time(m, 0.5).cut_time
    for t in np.linspace(0.05, 0.99, 12) * tc:
        q = exp_map(m, p, t)
        assert distance(m, q) == pytest.approx(t, abs=1e-9)
        assert so3_chordal_distance(q, exp_map(m, p, t)) == 0.0
