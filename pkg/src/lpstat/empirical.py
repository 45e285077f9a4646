"""
Empirical distribution machinery.

A :class:`Sample` aggregates raw observations into distinct support points
with probability masses. Everything downstream (score functions, comoments,
copula estimates) is built on the mid-distribution

    Fmid(x) = F(x) - 0.5 p(x),

which places each atom at the middle of its jump. Ties are handled by mass
aggregation, never by jittering, and all expectations use divisor ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ._errors import DegenerateError, DomainError, LPError

__all__ = [
    "Sample",
    "PairedSample",
    "MidDistribution",
    "mid_distribution",
    "mid_rank_transform",
    "quantile",
    "mid_quantile",
    "informative_quantile",
]


@dataclass(frozen=True, eq=False)
class Sample:
    """One observed variable.

    Attributes
    ----------
    values : ndarray
        Raw observations in their original order (ties allowed).
    support : ndarray
        Sorted distinct values.
    probs : ndarray
        Mass ``p(x)`` of each support point, ``multiplicity / n``.
    index : ndarray
        For each observation, the position of its value in ``support``.
    """

    values: np.ndarray
    support: np.ndarray
    probs: np.ndarray
    index: np.ndarray

    @classmethod
    def from_values(cls, values: npt.ArrayLike) -> Sample:
        x = np.asarray(values, dtype=float).ravel()
        if x.size == 0:
            raise LPError("empty sample")
        if not np.all(np.isfinite(x)):
            raise LPError("sample contains non-finite values")
        support, index, counts = np.unique(x, return_inverse=True, return_counts=True)
        x.flags.writeable = False
        return cls(x, support, counts / x.size, index.ravel())

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def counts(self) -> np.ndarray:
        return np.rint(self.probs * self.n).astype(int)

    @property
    def cdf(self) -> np.ndarray:
        """F(x) at each support point; the last entry is exactly 1."""
        c = np.cumsum(self.probs)
        c[-1] = 1.0
        return c

    def mean(self) -> float:
        return float(np.dot(self.probs, self.support))

    def var(self) -> float:
        return float(np.dot(self.probs, (self.support - self.mean()) ** 2))

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Two variables observed on the same rows."""

    x: Sample
    y: Sample

    def __post_init__(self):
        if self.x.n != self.y.n:
            raise LPError(f"paired columns differ in length: {self.x.n} != {self.y.n}")

    @classmethod
    def from_values(cls, x: npt.ArrayLike, y: npt.ArrayLike) -> PairedSample:
        return cls(Sample.from_values(x), Sample.from_values(y))

    @property
    def n(self) -> int:
        return self.x.n

    @property
    def rows(self) -> np.ndarray:
        return np.column_stack([self.x.values, self.y.values])

    def joint_probs(self) -> np.ndarray:
        """Cell masses of the contingency table over the two supports."""
        table = np.zeros((self.x.support.size, self.y.support.size))
        np.add.at(table, (self.x.index, self.y.index), 1.0)
        return table / self.n


@dataclass(frozen=True, eq=False)
class MidDistribution:
    support: np.ndarray
    fmid: np.ndarray
    sigma_mid: float


def mid_distribution(s: Sample) -> MidDistribution:
    """Mid-distribution at each support point and the sd of Fmid(X).

    The variance uses the closed form ``(1 - sum p^3) / 12``, which is what
    ``var(Fmid(X))`` reduces to under the empirical law.
    """
    p = s.probs
    fmid = np.cumsum(p) - 0.5 * p
    var = (1.0 - np.sum(p**3)) / 12.0
    return MidDistribution(s.support, fmid, float(np.sqrt(max(var, 0.0))))


def mid_rank_transform(s: Sample) -> np.ndarray:
    """Fmid(X_i) for every observation; ``(rank - .5) / n`` without ties."""
    return mid_distribution(s).fmid[s.index]


def _check_prob(u):
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)) or np.any(np.isnan(u)):
        raise DomainError("probability must lie in the open interval (0, 1)")
    return u


def quantile_index(s: Sample, u: npt.ArrayLike) -> np.ndarray:
    """Position in ``s.support`` of the left-continuous quantile Q(u)."""
    u = _check_prob(u)
    return np.minimum(np.searchsorted(s.cdf, u, side="left"), s.support.size - 1)


def quantile(s: Sample, u: npt.ArrayLike):
    """Smallest support value x with F(x) >= u."""
    out = s.support[quantile_index(s, u)]
    return float(out) if out.ndim == 0 else out


def mid_quantile(s: Sample, u: npt.ArrayLike):
    """Piecewise-linear interpolant through the knots (Fmid(x), x).

    Outside the outermost knots the curve is held at the extreme values.
    """
    md = mid_distribution(s)
    out = np.interp(np.asarray(u, dtype=float), md.fmid, s.support)
    return float(out) if np.ndim(out) == 0 else out


def informative_quantile(s: Sample, u: npt.ArrayLike):
    """QIQ(u) = (Qmid(u) - Qmid(.5)) / (2 IQR) with IQR taken on Qmid."""
    lo, med, hi = mid_quantile(s, [0.25, 0.5, 0.75])
    iqr = hi - lo
    if not iqr > 0:
        raise DegenerateError("degenerate scale")
    return (mid_quantile(s, u) - med) / (2.0 * iqr)
