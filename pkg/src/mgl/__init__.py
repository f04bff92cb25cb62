"""Gaussian mixture graphical lasso with mutual exclusivity regularization."""

from .glasso import kkt_residual, soft_threshold, solve_weighted_glasso
from .mixture import FitConfig, FitTrace, MixtureModel, e_step, fit, m_step, mer_value, penalized_objective

__all__ = [
    "FitConfig",
    "FitTrace",
    "MixtureModel",
    "e_step",
    "fit",
    "kkt_residual",
    "m_step",
    "mer_value",
    "penalized_objective",
    "soft_threshold",
    "solve_weighted_glasso",
]
__version__ = "0.1.0"
