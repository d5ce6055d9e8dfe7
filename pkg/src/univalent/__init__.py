"""Truncated power series tools for univalent maps.

Exact (Gaussian-rational) and approximate series arithmetic, the classical
extremal families, Grunsky matrices and norms, Schwarzian derivatives,
coefficient functionals and a scan harness for coefficient inequalities.
"""

from .catalog import (
    HomotopyParam,
    affine_sigma,
    homotopy_s,
    homotopy_sigma,
    identity,
    koebe,
    koebe_root,
    sigma_identity,
    sigma_root_map,
    sigma_square_root_transform,
    small_k_extremal,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    IntegrationError,
    ModeError,
    NormalizationError,
    SingularityError,
    SpecError,
    TailError,
    TruncationError,
    UnivalentError,
)
from .functionals import (
    FunctionalSpec,
    bieberbach,
    check_homogeneity_numeric,
    eval_functional,
    homogeneity_degree,
    perturbed_zalcman,
    sigma_representation,
    thm51,
    thm52,
    zalcman,
)
from .gaussian import QQi
from .grunsky import (
    GrunskyMatrix,
    GrunskyVector,
    caratheodory_lower_bound,
    grunsky_coefficients,
    grunsky_inequality_check,
    grunsky_norm,
    square_transform_matrix,
)
from .loewner import PiecewiseConstantDriver, loewner_sample
from .maps import SClassMap, SigmaClassMap, circle_inversion, eval_derivative, inverse_circle_inversion
from .polynomial import Poly
from .schwarzian import (
    bnorm,
    homotopy_dilatation_bound,
    hyperbolic_density,
    metric_from_dilatation,
    schwarzian,
)
from .series import Mode, TruncatedSeries, compose, exp_series, log_series, pow_series, substitute_power

__all__ = [name for name in dir() if not name.startswith("_")]
