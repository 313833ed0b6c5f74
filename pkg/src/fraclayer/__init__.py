"""Boundary layers of singularly perturbed Caputo fractional boundary value problems."""

from ._kernels import BACKEND
from .caputo import CaputoOperator, Mesh, apply, build_operator
from .laplace import TransformFn, conv_layer_transform, reac_layer0_transform_reduced, talbot_invert
from .layers import (
    LayerContext,
    classical_conv_layer,
    conv_layer_correction,
    conv_layer_limit,
    fit_theta_conv,
    mu_reac,
    reac_layer0,
    reac_layer1_model,
    vstar_half_closed,
    vstar_half_series,
)
from .solver import Constant, MonomialSum, ProblemSpec, Solution, assemble, converge_study, solve_bvp
from .specfun import MLParams, erfc, erfcx, gamma, mittag_leffler

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CaputoOperator",
    "Constant",
    "LayerContext",
    "MLParams",
    "Mesh",
    "MonomialSum",
    "ProblemSpec",
    "Solution",
    "TransformFn",
    "apply",
    "assemble",
    "build_operator",
    "classical_conv_layer",
    "conv_layer_correction",
    "conv_layer_limit",
    "conv_layer_transform",
    "converge_study",
    "erfc",
    "erfcx",
    "fit_theta_conv",
    "gamma",
    "mittag_leffler",
    "mu_reac",
    "reac_layer0",
    "reac_layer0_transform_reduced",
    "reac_layer1_model",
    "solve_bvp",
    "talbot_invert",
    "vstar_half_closed",
    "vstar_half_series",
]
