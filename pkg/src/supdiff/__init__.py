"""Exact normal cones and subdifferentials of suprema of polyhedral convex functions."""

from .convexfn import Affine, ImproperNegInf, Indicator, MaxAffine, Restricted
from .optimality import ConvexProgram, kkt_certify, silp_certify
from .suprema import (
    Custom,
    FunctionFamily,
    HypothesisError,
    Rho,
    SupremaError,
    Unit,
    normal_cone_dom,
    subdifferential_sup,
)

__all__ = [
    "Affine",
    "ConvexProgram",
    "Custom",
    "FunctionFamily",
    "HypothesisError",
    "ImproperNegInf",
    "Indicator",
    "MaxAffine",
    "Restricted",
    "Rho",
    "SupremaError",
    "Unit",
    "kkt_certify",
    "normal_cone_dom",
    "silp_certify",
    "subdifferential_sup",
]
