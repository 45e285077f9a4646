"""Copula density estimates for Old Faithful.

The L2 series can dip below zero; the maximum entropy fit is positive and
matches the selected comoments exactly.
"""

import numpy as np

from lpstat import PairedSample, aic_select, copula_l2, copula_maxent, lp_comoment_matrix
from lpstat.datasets import load_geyser

g = load_geyser()
lp = lp_comoment_matrix(PairedSample.from_values(g["eruptions"], g["waiting"]))
model = aic_select(lp)

grid = (np.arange(64) + 0.5) / 64
l2 = copula_l2(model)
me = copula_maxent(model)
z2, ze = l2.grid(grid, grid), me.grid(grid, grid)
print(f"L2:     min {z2.min():7.3f}  max {z2.max():7.3f}  integral {l2.integral():.6f}")
print(f"MaxEnt: min {ze.min():7.3f}  max {ze.max():7.3f}  integral {me.integral():.6f}")
print("MaxEnt solver:", me.info)
print("largest moment mismatch:", np.max(np.abs(me.moments() - model.coefficients)))

for u in (0.1, 0.5, 0.9):
    row = me.grid(np.array([u]), np.array([0.1, 0.5, 0.9]))[0]
    print(f"cop(u={u}, v=.1/.5/.9) = {np.round(row, 3)}")
