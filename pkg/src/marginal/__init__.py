"""Exact subdifferentials of optimal value functions for polyhedral convex programs."""

from .errors import (
    DimensionError, EngineError, HypothesisWarning, MarginalError, MembershipError,
    NotOptimalError, OracleError, ParseError, QualificationError, SlaterError,
)
from .functions import (
    AffineFunctional, PWLConvexFunction, partial_subdifferential, singular_subdifferential,
    subdifferential,
)
from .geometry import (
    HPolyhedron, VPolyhedron, intersect, minkowski_sum, normal_cone_at, project, same_set,
    set_relation, to_hrep, to_vrep,
)
from .jsonio import parse_problem, serialize_problem
from .multipliers import (
    LagrangianSpec, MultiplierPolyhedron, lagrangian_subdifferential, lambda0_set,
    lambda_inf_set, lambda_set, partial_x_lagrangian_union,
)
from .oracle import directional_derivative, dom_mu_projection, support_check
from .program import ParametricProgram, kkt_inclusion_check, slater_point, solve
from .rational import Q
from .stability import (
    StabilityReport, analyze, singular_upper_estimate, singular_value_subdifferential,
    upper_estimate, value_subdifferential, value_subdifferential_via_qstar,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionError",
    "EngineError",
    "HypothesisWarning",
    "MarginalError",
    "MembershipError",
    "NotOptimalError",
    "OracleError",
    "ParseError",
    "QualificationError",
    "SlaterError",
    "AffineFunctional",
    "PWLConvexFunction",
    "partial_subdifferential",
    "singular_subdifferential",
    "subdifferential",
    "HPolyhedron",
    "VPolyhedron",
    "intersect",
    "minkowski_sum",
    "normal_cone_at",
    "project",
    "same_set",
    "set_relation",
    "to_hrep",
    "to_vrep",
    "LagrangianSpec",
    "MultiplierPolyhedron",
    "lagrangian_subdifferential",
    "lambda0_set",
    "lambda_inf_set",
    "lambda_set",
    "partial_x_lagrangian_union",
    "StabilityReport",
    "analyze",
    "singular_upper_estimate",
    "singular_value_subdifferential",
    "upper_estimate",
    "value_subdifferential",
    "value_subdifferential_via_qstar",
    "parse_problem",
    "serialize_problem",
    "directional_derivative",
    "dom_mu_projection",
    "support_check",
    "ParametricProgram",
    "kkt_inclusion_check",
    "slater_point",
    "solve",
    "Q",
]
