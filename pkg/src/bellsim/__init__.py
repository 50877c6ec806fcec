"""Singlet-state correlations from axis-anchored hidden variables.

Analytic evaluators and a seeded Monte Carlo engine for the
two-particle spin experiment, a colored-ball source/detector protocol
exhibiting the same correlation structure classically, common-cause
diagnostics for both, and a CLI (``bellsim``) tying them together.
"""

from .errors import (
    BellsimError,
    ConditioningUndefinedError,
    ContextMismatchError,
    EmptyReportError,
    ValidationError,
)
from .spinmodel import (
    Description,
    Direction,
    HiddenVariable,
    SpinVector,
    angle_between,
    conditional_outcome_prob,
    joint_outcome_prob,
    marginal_expectation,
    mean_value,
    pair_expectation,
    quantum_correlation,
    quantum_pair_expectation,
    spin_vector,
    subquantum_correlation,
)

__version__ = "0.1.0"

__all__ = [
    "BellsimError",
    "ConditioningUndefinedError",
    "ContextMismatchError",
    "Description",
    "Direction",
    "EmptyReportError",
    "HiddenVariable",
    "SpinVector",
    "ValidationError",
    "__version__",
    "angle_between",
    "conditional_outcome_prob",
    "joint_outcome_prob",
    "marginal_expectation",
    "mean_value",
    "pair_expectation",
    "quantum_correlation",
    "quantum_pair_expectation",
    "spin_vector",
    "subquantum_correlation",
]
