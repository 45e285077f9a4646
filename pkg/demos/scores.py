"""Score functions built from the mid-distribution.

For a continuous sample the scores look like shifted Legendre polynomials.
For a binary sample there is a single score, a two-valued step.
"""

import numpy as np

from lpstat import Sample, build_score_basis, eval_S, legendre_basis, mid_distribution

rng = np.random.default_rng(0)
s = Sample.from_values(rng.standard_normal(1000))
basis = build_score_basis(s, 4)
leg = legendre_basis(4).S(mid_distribution(s).fmid)
print("max |T_j - Leg_j| at the knots:", np.round(np.max(np.abs(basis.table - leg), axis=0), 4))

b = build_score_basis(Sample.from_values([0] * 80 + [1] * 20))
print("binary sample, effective m =", b.effective_m)
print("T1 values:", b.T(1), "(expected -1/2 and 2)")
print("S1 at u = .5 and .9:", eval_S(b, 1, [0.5, 0.9]))

# monotone transforms leave the scores unchanged
x = rng.integers(0, 10, 300).astype(float)
a = build_score_basis(Sample.from_values(x)).data_scores()
c = build_score_basis(Sample.from_values(np.exp(x))).data_scores()
print("invariant under exp():", np.allclose(a, c))
