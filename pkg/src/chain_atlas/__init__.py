"""Exhaustive and approximate analysis of matrix-chain parenthesisations."""

from .core import (
    ChainError,
    EnumerationLimitError,
    Instance,
    Ordering,
    ParseError,
    chain_cost,
    cost_triplet,
    enumerate_orderings,
    ordering_from_triplets,
    ordering_to_triplets,
    parse_instance,
    parse_ordering,
    render_ordering,
)
from .experiments import ExperimentConfig, ExperimentSummary, run_experiment, summarize
from .penalty import PenaltyReport, penalty_nonessential_removed, penalty_of_removal
from .solvers import (
    SolveResult,
    best_essential,
    brute_force_solve,
    chin_condition,
    dp_solve,
    essential_set,
    fan_out,
)
from .synthesis import GrowthSequence, growth_sequence, synthesize, verify_uniquely_optimal

__version__ = "0.1.0"
