"""
Payoff regions of the battle of the sexes
=========================================

Mixed strategies cannot reach the fair outcome (3, 3) of the battle of the
sexes. Pure two-parameter EWL strategies do reach it, and in fact cover
the whole cooperative region.
"""
import tempfile
from pathlib import Path

import numpy as np

from ewl import BATTLE_OF_SEXES, achieve_target, classical_region_samples, ewl_region_samples
from ewl import ewl_payoff_closed_form, export_region
from ewl.hull import hausdorff_distance

###############################################################################
# Mixed strategies
# ----------------
# Sample the noncooperative region on a grid of (p, q) and measure how close
# it gets to (3, 3).

nc = classical_region_samples(BATTLE_OF_SEXES, "noncooperative", resolution=501)
gap = np.min(np.hypot(*(nc.points - (3, 3)).T))
print("closest mixed payoff to (3, 3):", round(float(gap), 4))

###############################################################################
# A pure quantum profile
# ----------------------
# ``achieve_target`` triangulates the cooperative hull and returns an
# explicit profile for any point inside it.

(s1, s2), residual = achieve_target(BATTLE_OF_SEXES, (3, 3))
print(s1, s2, ewl_payoff_closed_form(BATTLE_OF_SEXES, s1, s2), residual)

###############################################################################
# The sampled EWL region
# ----------------------
# A coarse grid over ``U(theta, alpha, 0)`` already fills the triangle
# spanned by (0, 0), (4, 2) and (2, 4).

ewl = ewl_region_samples(BATTLE_OF_SEXES, (27, 27, 105, 7))
co = classical_region_samples(BATTLE_OF_SEXES, "cooperative")
print(len(ewl), "points, hull", ewl.hull)
print("Hausdorff distance to the cooperative hull:", hausdorff_distance(ewl.hull, co.hull))

out = Path(tempfile.mkdtemp())
for sample, name in [(nc, "noncooperative"), (ewl, "ewl")]:
    export_region(sample, out / f"bos_{name}.svg", "svg")
print("SVG files written to", out)
