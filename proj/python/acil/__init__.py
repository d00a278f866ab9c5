"""Analytic class-incremental learning: exact recursive ridge classifier."""

from ._core import (
    AnalyticState,
    FeatureExpander,
    NumericalError,
    ValidationError,
    __version__,
    average_incremental_accuracy,
    compare_states,
    expand,
    fit_base,
    forgetting_rate,
    joint_fit,
    load_state,
    make_expander,
    one_hot,
    phase_accuracy,
    predict,
    run_experiment,
    save_state,
    update_phase,
    verify_experiment,
)

__all__ = [
    "AnalyticState",
    "FeatureExpander",
    "NumericalError",
    "ValidationError",
    "__version__",
    "average_incremental_accuracy",
    "compare_states",
    "expand",
    "fit_base",
    "forgetting_rate",
    "joint_fit",
    "load_state",
    "make_expander",
    "one_hot",
    "phase_accuracy",
    "predict",
    "run_experiment",
    "save_state",
    "update_phase",
    "verify_experiment",
]
