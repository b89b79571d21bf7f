"""Homotopy continuation for square homogeneous polynomial systems along
rigid unitary paths: randomized start pairs on the solution variety, adaptive
projective Newton tracking, and Monte Carlo experiments for the governing
condition-number bounds."""

from .conditioning import (ConditionReport, gamma_frob, hat_gamma_frob, kappa,
                           linearization, projective_distance)
from .hpoly import (HomogeneousPoly, PolySystem, evaluate, gradient,
                    kostlan_sample, kostlan_system, restrict_to_line,
                    taylor_shift, weyl_norm)
from .rigid import (ContinuationStats, RigidPair, TrackerSettings,
                    mean_step_count, numerical_continuation,
                    sample_solution_variety, solve)
from .unitary import (ContinuationPath, UnitaryTuple, build_path,
                      evaluate_path, frame_unitary, householder_phase_decompose,
                      log_unitary, min_singular_value, rank_one_rotation,
                      sample_unitary)
from .zeros import (CertificateResult, NewtonFailureError, ProjectivePoint,
                    bivariate_roots, certify_by_contraction, newton_step,
                    rotated_residuals)

__version__ = "0.1.0"

__all__ = [
    "HomogeneousPoly", "PolySystem", "evaluate", "gradient", "weyl_norm",
    "taylor_shift", "restrict_to_line", "kostlan_sample", "kostlan_system",
    "UnitaryTuple", "ContinuationPath", "sample_unitary", "rank_one_rotation",
    "householder_phase_decompose", "log_unitary", "build_path", "evaluate_path",
    "min_singular_value", "frame_unitary",
    "ConditionReport", "linearization", "kappa", "gamma_frob", "hat_gamma_frob",
    "projective_distance",
    "ProjectivePoint", "CertificateResult", "NewtonFailureError", "newton_step",
    "bivariate_roots", "certify_by_contraction", "rotated_residuals",
    "RigidPair", "TrackerSettings", "ContinuationStats",
    "sample_solution_variety", "numerical_continuation", "solve",
    "mean_step_count",
]
