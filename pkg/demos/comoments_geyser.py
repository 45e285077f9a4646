"""LP comoments and LPINFOR for the Old Faithful data.

The leading comoment LP(1,1) is the Spearman correlation. AIC keeps the
product scores whose squared comoments beat a 2/n penalty; their sum is
LPINFOR, and n times LPINFOR is a chi-square statistic.
"""

import numpy as np

from lpstat import (PairedSample, aic_select, gini_correlation, lp_comoment_matrix, lpinfor_test,
                    pearson_representation)
from lpstat.datasets import load_geyser

g = load_geyser()
p = PairedSample.from_values(g["eruptions"], g["waiting"])
lp = lp_comoment_matrix(p)
np.set_printoptions(precision=3, suppress=True)
print("LP comoment block (j, k = 1..4):")
print(lp.block)

model = aic_select(lp)
test = lpinfor_test(model)
print(f"AIC keeps {model.size} terms: {model.pairs}")
print(f"LPINFOR = {model.lpinfor:.3f}, chi-square = {test.statistic:.1f} on {test.dof} dof, p = {test.p_value:.2g}")
print(f"top two terms only: {np.sum(model.coefficients[:2] ** 2):.3f}")

rep = pearson_representation(p)
print(f"Pearson r = {rep.r:.3f}; partial sums over score terms: {np.round(rep.partial_sums, 3)}")
print(f"Gini correlation (y|x) = {gini_correlation(p):.3f}")
