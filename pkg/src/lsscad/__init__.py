"""SCAD-penalized least squares for linear models with many covariates.

The estimator minimizes ``||y - X b||^2 + n * sum_j p(b_j)`` with the
smoothly clipped absolute deviation penalty ``p``, computed by a perturbed
majorize-minimize iteration, with lambda chosen by generalized cross
validation and sandwich standard errors for the selected coefficients.
"""

from .baselines import aic_estimator, ls_estimator, oracle_estimator
from .design import Dataset, StandardizedDataset, SupportSplit, destandardize, ols_solve, standardize
from .diagnostics import ConditionReport, EigenQuantities, condition_ratios, eigen_quantities
from .errors import (
    ConfigurationError,
    DegenerateColumnError,
    DegenerateDesignError,
    EmptySupportError,
    NumericalError,
    ParseError,
    SaturatedModelError,
    ScadError,
    SelectorError,
    SingularSystemError,
    ValidationError,
    ZeroSignalError,
)
from .gcv import LambdaGrid, TuningResult, default_grid, effective_params, gcv_score, tune
from .inference import CovarianceEstimate, covariance_estimate
from .io import load_dataset, read_fit_report, write_fit_report
from .penalty import DEFAULT_A, PenaltyParams, penalty, penalty_right_derivative, perturbed_penalty
from .simulation import SimulationConfig, SimulationReport, generate_dataset, run_replications
from .solver import FitResult, SolverConfig, fit_scad

__version__ = "0.1.0"
