"""Randomized greedy selection for budget- and threshold-constrained weak-submodular objectives."""

from .core import (
    CostModel,
    GroundSet,
    InfeasibleThreshold,
    RngStream,
    SelectionTrace,
    SetFunctionOracle,
    compute_sample_bound_U,
    marginal_gain,
    sample_size,
    sample_without_replacement,
    total_cost,
)

__version__ = "0.1.0"

__all__ = [
    "CostModel",
    "GroundSet",
    "InfeasibleThreshold",
    "RngStream",
    "SelectionTrace",
    "SetFunctionOracle",
    "compute_sample_bound_U",
    "marginal_gain",
    "sample_size",
    "sample_without_replacement",
    "total_cost",
]
