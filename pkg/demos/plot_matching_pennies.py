"""
Quantum matching pennies
========================

Extending matching pennies by a single quantum strategy produces a 3x3
table with several new equilibria. Once player 2 may use every
one-parameter strategy, most of those equilibria disappear.
"""
import math

import numpy as np

from ewl import MATCHING_PENNIES, MixedUnitaryStrategy, UnitaryStrategy
from ewl import build_extended_bimatrix, enumerate_equilibria, verify_nash_restricted
from ewl.analysis import shift_restricted_set
from ewl.reproduce import format_table

###############################################################################
# The extended table
# ------------------
# Each player gets ``I``, ``iX`` and ``U(pi/2, 0, -pi/2)``. The cells are EWL
# payoffs evaluated in closed form.

shift = UnitaryStrategy(math.pi / 2, 0, -math.pi / 2)
table = build_extended_bimatrix(MATCHING_PENNIES, [shift])
print(format_table(table))

###############################################################################
# Equilibria of the finite table
# ------------------------------
# Besides the classical uniform mixture there are three profiles that use
# the new strategy. The enumeration copes with the degenerate zero row.

for eq in enumerate_equilibria(table):
    print(np.round(eq.row, 3), np.round(eq.col, 3), np.round(eq.payoff, 12) + 0.0)

###############################################################################
# Checking them against the continuous strategy set
# -------------------------------------------------
# Now each player may choose any ``U(theta, 0, 0)`` or the shift. Best
# replies are found on a grid of 721 angles and then refined.

sets = (shift_restricted_set(), shift_restricted_set())
half = MixedUnitaryStrategy.classical(0.5)
for name, profile in [("both shift", (shift, shift)),
                      ("mixed vs shift", (half, shift)),
                      ("shift vs mixed", (shift, half))]:
    verdict = verify_nash_restricted(MATCHING_PENNIES, profile, sets)
    player, strategy, gain = verdict.deviation
    print(f"{name:15s} equilibrium={verdict.is_equilibrium}  "
          f"best deviation: player {player} -> {strategy} (gain {gain:.3g})")
