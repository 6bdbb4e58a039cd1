"""Integrable chiral Potts weights, their large-N limits, and the
star-triangle and bilateral hypergeometric identities they satisfy."""

from .rapidity import (
    Modulus,
    RapidityPoint,
    curve_residual,
    genus,
    homogeneous_coords,
    rapidity_from_lambda,
    rapidity_from_theta,
)
from .weights import (
    ExponentPair,
    SteResidual,
    WeightTable,
    dual_ste_residual,
    exponents,
    f_pq,
    fourier_dual,
    product_form,
    r_pqr,
    ste_residual,
    weight_w,
    weight_wbar,
)
from .ste_infinite import PrincipalTriple, QuadratureConfig
from .hyp_identity import IdentityInstance

__all__ = [
    "Modulus",
    "RapidityPoint",
    "curve_residual",
    "genus",
    "homogeneous_coords",
    "rapidity_from_lambda",
    "rapidity_from_theta",
    "ExponentPair",
    "SteResidual",
    "WeightTable",
    "dual_ste_residual",
    "exponents",
    "f_pq",
    "fourier_dual",
    "product_form",
    "r_pqr",
    "ste_residual",
    "weight_w",
    "weight_wbar",
    "PrincipalTriple",
    "QuadratureConfig",
    "IdentityInstance",
]

__version__ = "0.1.0"
