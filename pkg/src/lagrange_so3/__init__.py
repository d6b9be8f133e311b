"""Riemannian geometry of SO(3) for left-invariant metrics with I1 = I2."""
from .core import (Covector, DomainError, Metric, Rotation, SolverError, UnitQuaternion, covector_from_angles,
                   make_metric, p_norm, rotation_from_quaternion, so3_chordal_distance, su2_distance)
from .cut import (CutReport, LocusMesh, Stratum, classify_cut_point, cut_locus_mesh, cut_time, diameter,
                  maxwell_time, wavefront)
from .geodesic import (GeodesicSample, SymmetryElement, apply_symmetry_source, apply_symmetry_target, exp_map,
                       sample_geodesic, vertical_flow)
from .inverse import BoundaryReport, InverseSolution, distance, invert_exp, shooting_oracle
from .roots import RootResult, eval_q0, eval_q3, tau0, tau3, tau_conj
from .srlimit import (ConvergenceRow, SrCovector, convergence_report, sr_conjugate_time, sr_cut_time_axis,
                      sr_cut_time_plane, sr_exp)
from .su2 import Su2CutReport, su2_cut_locus_sample, su2_cut_time

__version__ = "0.1.0"
