"""Quantile functions of a discrete sample.

Ties make the ordinary quantile a step function. The mid-quantile connects
the mid-distribution knots linearly, and the informative quantile rescales it
to a location/scale free curve on [-1, 1]-ish values.
"""

import numpy as np

from lpstat import Sample, informative_quantile, mid_distribution, mid_quantile, quantile
from lpstat.datasets import load_geyser

s = Sample.from_values(load_geyser()["eruptions"])
md = mid_distribution(s)
print(f"n = {s.n}, distinct values = {s.support.size}, sigma_mid^2 = {md.sigma_mid**2:.4f}")

u = np.array([0.1, 0.25, 0.5, 0.75, 0.9])
print("u        Q(u)    Qmid(u)  QIQ(u)")
for row in zip(u, quantile(s, u), mid_quantile(s, u), informative_quantile(s, u)):
    print("{:.2f}  {:8.3f} {:8.3f} {:8.3f}".format(*row))

# a two-valued sample: the mid-quantile interpolates between the two knots
b = Sample.from_values([0] * 7 + [1] * 3)
print("binary knots:", mid_distribution(b).fmid, "Qmid(0.5) =", mid_quantile(b, 0.5))
