"""
Orthonormal score functions.

For a sample X the first score is the standardized mid-distribution

    T1(x) = (Fmid(x) - .5) / sigma_mid,

and T2, T3, ... are obtained by Gram-Schmidt orthonormalization of the
powers of T1 under the empirical inner product <f, g> = sum_x p(x) f(x) g(x).
In percentile coordinates S_j(u) = T_j(Q(u)) is a step function whose shape
approaches the orthonormal shifted Legendre polynomial Leg_j(u) as ties
disappear and n grows.
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np
import numpy.typing as npt
from numpy.polynomial import legendre as npleg

from ._errors import DegenerateError
from .empirical import Sample, mid_distribution, quantile_index, _check_prob

__all__ = [
    "ScoreBasis",
    "LegendreBasis",
    "build_score_basis",
    "eval_S",
    "legendre_basis",
    "DEFAULT_M",
]

DEFAULT_M = 4
DROP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ScoreBasis:
    """Score functions T_1..T_m tabulated on the support of a sample.

    ``table[a, j - 1]`` holds ``T_j(support[a])``.
    """

    sample: Sample
    m: int
    table: np.ndarray

    @property
    def effective_m(self) -> int:
        return self.table.shape[1]

    @property
    def support(self) -> np.ndarray:
        return self.sample.support

    @property
    def probs(self) -> np.ndarray:
        return self.sample.probs

    def T(self, j: int) -> np.ndarray:
        """Values of T_j over the support."""
        self._check_index(j)
        return self.table[:, j - 1]

    def data_scores(self) -> np.ndarray:
        """Score vectors of the observations, shape ``(n, effective_m)``."""
        return self.table[self.sample.index]

    def S(self, u: npt.ArrayLike) -> np.ndarray:
        """All score functions at percentiles ``u``, shape ``u.shape + (m,)``."""
        return self.table[quantile_index(self.sample, u)]

    def breakpoints(self) -> np.ndarray:
        """Jump locations of every S_j in (0, 1): the interior cumulative masses."""
        return self.sample.cdf[:-1]

    def _check_index(self, j):
        if not 1 <= j <= self.effective_m:
            raise IndexError(f"score index {j} outside 1..{self.effective_m}")


def build_score_basis(s: Sample, m: int = DEFAULT_M) -> ScoreBasis:
    """Construct T_1..T_m for a sample.

    The number of functions is capped at ``#support - 1``; a request for more
    is truncated silently and the achieved count is ``effective_m``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    p = s.probs
    if p.size < 2:
        raise DegenerateError("degenerate: no score functions")
    md = mid_distribution(s)
    t1 = (md.fmid - 0.5) / md.sigma_mid

    def inner(f, g):
        return np.dot(p, f * g)

    # Multiplying the newest function by T1 spans the same nested subspaces as
    # the raw powers T1^j, so the orthonormal output is identical while the
    # inputs stay well conditioned for many support points.
    basis = [np.ones_like(t1), t1]
    target = min(m, p.size - 1)
    while len(basis) - 1 < target:
        v = t1 * basis[-1]
        scale = np.sqrt(inner(v, v))
        for _ in range(2):
            for b in basis:
                v = v - inner(v, b) * b
        norm = np.sqrt(inner(v, v))
        if norm < DROP_TOL * scale:
            break
        basis.append(v / norm)
    table = np.column_stack(basis[1:])
    return ScoreBasis(s, m, table)


def eval_S(basis: ScoreBasis, j: int, u: npt.ArrayLike):
    """S_j(u) = T_j(Q(u)), a step function in u."""
    basis._check_index(j)
    out = basis.T(j)[quantile_index(basis.sample, u)]
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LegendreBasis:
    """Orthonormal shifted Legendre polynomials Leg_j(u) = sqrt(2j+1) P_j(2u-1)."""

    m: int

    @property
    def effective_m(self) -> int:
        return self.m

    def coef(self, j: int) -> np.ndarray:
        c = np.zeros(j + 1)
        c[j] = np.sqrt(2 * j + 1)
        return c

    def leg(self, j: int, u: npt.ArrayLike):
        if not 0 <= j <= self.m:
            raise IndexError(f"Legendre index {j} outside 0..{self.m}")
        out = npleg.legval(2.0 * np.asarray(u, dtype=float) - 1.0, self.coef(j))
        return float(out) if np.ndim(out) == 0 else out

    def S(self, u: npt.ArrayLike) -> np.ndarray:
        """Leg_1..Leg_m at ``u``, shape ``u.shape + (m,)``."""
        t = 2.0 * np.asarray(u, dtype=float) - 1.0
        return np.stack([npleg.legval(t, self.coef(j)) for j in range(1, self.m + 1)], axis=-1)

    def integral(self, j: int, u: npt.ArrayLike):
        """Antiderivative of Leg_j from 0 to u."""
        anti = npleg.legint(self.coef(j), lbnd=-1.0) / 2.0
        return npleg.legval(2.0 * np.asarray(u, dtype=float) - 1.0, anti)


def legendre_basis(m: int = DEFAULT_M) -> LegendreBasis:
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > 12:
        warnings.warn(f"Legendre degree {m} above 12 is numerically fragile", stacklevel=2)
    return LegendreBasis(m)


def _eval_basis(basis, u):
    # Shared helper: both basis kinds expose S(u); ScoreBasis validates u.
    if isinstance(basis, ScoreBasis):
        return basis.S(u)
    return basis.S(_check_prob(u))
