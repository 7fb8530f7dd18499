"""Eisert-Wilkens-Lewenstein quantum games: payoffs, equilibria, regions and circuits."""

from .games import (BATTLE_OF_SEXES, MATCHING_PENNIES, PRISONERS_DILEMMA, BimatrixGame,
                    CorrelatedStrategy, MixedStrategy, RegionSample, classical_region_samples,
                    correlated_payoff, enumerate_equilibria, expected_payoff, is_nash_mixed,
                    is_nash_pure, load_game, parse_game)
from .hull import convex_hull, hausdorff_distance, polygon_contains
from .quantum import (IDENTITY, IX, EwlGame, MixedUnitaryStrategy, StateVector, UnitaryStrategy,
                      entangler, ewl_payoff, ewl_payoff_closed_form, final_state,
                      mixed_unitary_payoff, outcome_distribution, parse_strategy, su2_matrix)
from .analysis import (StrategySetSpec, best_reply, build_extended_bimatrix,
                       no_pure_equilibrium_scan, shift_restricted_set, restricted_payoff_cases,
                       verify_nash_restricted)
from .regions import (ConvexWeights, achieve_target, caratheodory_profile, ewl_region_samples,
                      export_region)
from .qasm import (emit_ewl_qasm, entangler_decomposition, parse_qasm, simulate_shots,
                   to_ibm_params)

__version__ = "0.1.0"
