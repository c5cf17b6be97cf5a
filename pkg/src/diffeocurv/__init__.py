"""Sectional curvature and geodesics of right-invariant metrics on diffeomorphism groups."""

from .circle_metrics import ABMetric, MuCHMetric, hs_backend, much_backend, negative_section
from .dynamics import EquationSpec, flow_map, integrate, jacobi_linearized
from .euler_arnold import CurvatureReport, MetricBackend, RigidBody, curvature_S, duality_residual
from .semidirect import SemidirectElement, SemidirectMetric
from .torus_metrics import ABCMetric, BurgersT2, LambdaMetric
from .trigpoly import DomainError, FourierMultiplier, SingularModeError, TrigPoly, VectorField

__version__ = "0.1.0"

__all__ = [
    "ABCMetric", "ABMetric", "BurgersT2", "CurvatureReport", "DomainError", "EquationSpec",
    "FourierMultiplier", "LambdaMetric", "MetricBackend", "MuCHMetric", "RigidBody",
    "SemidirectElement", "SemidirectMetric", "SingularModeError", "TrigPoly", "VectorField",
    "curvature_S", "duality_residual", "flow_map", "hs_backend", "integrate", "jacobi_linearized",
    "much_backend", "negative_section",
]
