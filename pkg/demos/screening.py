"""Ranking column pairs by LPINFOR.

A quadratic relation has almost no linear correlation but stands out on the
higher order comoments.
"""

import numpy as np

from lpstat import screen_pairs

rng = np.random.default_rng(2)
n = 300
cols = {"a": rng.standard_normal(n), "b": rng.standard_normal(n)}
cols["c"] = cols["a"] ** 2 + 0.3 * rng.standard_normal(n)
cols["d"] = cols["b"] + rng.standard_normal(n)
names = list(cols)

print("pair   LPINFOR  p-value   dof  |corr|")
for r in screen_pairs(list(cols.values())):
    a, b = cols[names[r.i]], cols[names[r.j]]
    corr = abs(np.corrcoef(a, b)[0, 1])
    print(f"{names[r.i]}-{names[r.j]}   {r.lpinfor:7.3f}  {r.p_value:8.2g}  {r.dof:3d}  {corr:.3f}")
