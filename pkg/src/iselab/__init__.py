"""Exact moments, certified constants, asymptotics and Monte Carlo checks for
the center of mass of the ISE and the Brownian excursion areas xi and eta."""

__version__ = "0.1.0"

from .exact import ExactConstant, RationalInterval, half_gamma, to_decimal
from .moments import (
    MomentTable,
    compute_a,
    compute_b,
    eta_moment,
    gaussian_even_moment,
    moment_table,
    s_moment,
)
from .beta import BetaCertificate, beta_coarse, beta_refined, s_k_exact

__all__ = [
    "BetaCertificate",
    "ExactConstant",
    "MomentTable",
    "RationalInterval",
    "beta_coarse",
    "beta_refined",
    "compute_a",
    "compute_b",
    "eta_moment",
    "gaussian_even_moment",
    "half_gamma",
    "moment_table",
    "s_k_exact",
    "s_moment",
    "to_decimal",
]
