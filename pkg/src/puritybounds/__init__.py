"""Purity of reduced states and its lower bounds from correlation functions."""
from .bipartite import (
    BipartiteState,
    check_theorem,
    optimal_product_state,
    overlap4,
    partial_trace,
    purity,
    sandwich_bounds,
    schmidt,
)
from .errors import CausticError, ContractViolation, InvariantViolation, NotProductStateError
from .gaussian import (
    GaussianShape,
    SymplecticMap,
    cross_correlation_gaussian,
    optimal_reference,
    propagate_shape,
    purity_gaussian,
)
from .jaynes_cummings import build_model, coherent_product_state, run_time_series
from .numerics import BACKEND

__version__ = "0.1.0"
