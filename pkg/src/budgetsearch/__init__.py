"""Equilibria of the budgeted edge-query search game on trees and lines."""

from .core import (GuardExceeded, HiderDistribution, InvalidInstance, LineInstance,
                   ModInterval, SearchTree, SeekerMixedStrategy, TreeInstance,
                   covered_set, discovery_times, expected_profit, payoff_profile)
from .equilibrium import EquilibriumResult, hider_best_response, solve_equilibrium
from .line import (compute_hw, efficient_strategy, game_value_line, greedy_seeker,
                   hider_coprime, hider_noncoprime, is_maximal_covered_set, sample_seeker,
                   verify_hider)
from .lp import RationalLP, simplex_solve
from .oracle import brute_force_best_response, enumerate_strategies, full_matrix_value
from .simulate import SimulationReport, simulate
from .treedp import (best_response_dp, labeling_is_valid, labeling_to_strategy,
                     strategy_to_labeling, visibility_sequences)

__all__ = [
    "GuardExceeded", "HiderDistribution", "InvalidInstance", "LineInstance", "ModInterval",
    "SearchTree", "SeekerMixedStrategy", "TreeInstance", "covered_set", "discovery_times",
    "expected_profit", "payoff_profile", "EquilibriumResult", "hider_best_response",
    "solve_equilibrium", "compute_hw", "efficient_strategy", "game_value_line",
    "greedy_seeker", "hider_coprime", "hider_noncoprime", "is_maximal_covered_set",
    "sample_seeker", "verify_hider", "RationalLP", "simplex_solve",
    "brute_force_best_response", "enumerate_strategies", "full_matrix_value",
    "SimulationReport", "simulate", "best_response_dp", "labeling_is_valid",
    "labeling_to_strategy", "strategy_to_labeling", "visibility_sequences",
]
