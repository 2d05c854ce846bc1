"""Forecasting returns of a jump-augmented Black-Scholes model.

Closed-form mean square errors of the best measurable, best linear, best
linear unbiased and trivial forecasts, with Monte Carlo verification.
"""
from .errors import (
    DomainError,
    EmptyBatchError,
    InsufficientSampleError,
    JumpcastError,
    ParameterError,
    UndefinedGammaError,
)
from .model_core import (
    CriticalVerdict,
    DerivedParams,
    Horizon,
    ModelParams,
    Relation,
    classify_critical,
    derive,
    mean_return,
    second_moment,
)
from .forecasts import (
    ForecastKind,
    MseBreakdown,
    coincident_forecast_beta_zero,
    forecast_value,
    relative_performance,
    theoretical_mse,
)
from .simulation import JumpKind, JumpSpec, PathGrid, TerminalPair, batch_pairs, simulate_path, simulate_terminal_pair
from .montecarlo import MseEstimate, VerificationReport, empirical_mse, moment_check, verify_all
from .analysis import SweepTable, crossing_point, emit_figure, gamma_sweep

__version__ = "0.1.0"
