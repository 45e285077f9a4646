"""
LP comoments and LP score moments.

The comoment matrix mixes score functions and raw values:

    LP(j, k) = E[T_j(X) T_k(Y)]     j, k > 0
    LP(j, 0) = E[T_j(X) Y]
    LP(0, k) = E[X T_k(Y)]
    LP(0, 0) = Cov(X, Y)

All expectations are empirical means over the paired rows (divisor n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple
import warnings

import numpy as np

from ._errors import DegenerateError
from .empirical import PairedSample, Sample
from .scores import DEFAULT_M, ScoreBasis, build_score_basis

__all__ = [
    "LPMatrix",
    "LPMomentVector",
    "lp_comoment_matrix",
    "lp_score_moments",
    "variance_decomposition",
    "lp_tail_order",
    "gini_correlation",
    "extended_multiple_correlation",
    "pearson_representation",
    "TAIL_SHARE",
]

TAIL_SHARE = 0.95


@dataclass(frozen=True, eq=False)
class LPMatrix:
    """LP comoments ``values[j, k]`` for j = 0..m_x, k = 0..m_y.

    ``m_x`` and ``m_y`` are the achieved (effective) degrees.
    """

    values: np.ndarray
    x_basis: ScoreBasis
    y_basis: ScoreBasis
    n: int

    @property
    def m_x(self) -> int:
        return self.values.shape[0] - 1

    @property
    def m_y(self) -> int:
        return self.values.shape[1] - 1

    @property
    def block(self) -> np.ndarray:
        """The score-by-score part, j, k >= 1."""
        return self.values[1:, 1:]

    def __getitem__(self, jk):
        return self.values[jk]


@dataclass(frozen=True, eq=False)
class LPMomentVector:
    lp: np.ndarray
    variance: float
    tail_order: int
    tail_resolved: bool

    @property
    def m(self) -> int:
        return self.lp.size


def _bases(p: PairedSample, m_x, m_y):
    return build_score_basis(p.x, m_x), build_score_basis(p.y, m_y)


def comoments_from_bases(p: PairedSample, bx: ScoreBasis, by: ScoreBasis) -> LPMatrix:
    n = p.n
    x = p.x.values - p.x.mean()
    y = p.y.values - p.y.mean()
    sx = np.column_stack([x, bx.data_scores()])
    sy = np.column_stack([y, by.data_scores()])
    return LPMatrix(sx.T @ sy / n, bx, by, n)


def lp_comoment_matrix(p: PairedSample, m_x: int = DEFAULT_M, m_y: int = DEFAULT_M) -> LPMatrix:
    """Empirical LP comoment matrix of a paired sample.

    Raises :class:`DegenerateError` if either marginal has a single value.
    """
    bx, by = _bases(p, m_x, m_y)
    return comoments_from_bases(p, bx, by)


def lp_score_moments(s: Sample, m: int = DEFAULT_M) -> LPMomentVector:
    """LP(j; X) = E[X T_j(X)] for j = 1..m, with var(X) and the tail order."""
    basis = build_score_basis(s, m)
    lp = basis.table.T @ (s.probs * (s.support - s.mean()))
    var = s.var()
    order, resolved = _tail_order(lp, var)
    return LPMomentVector(lp, var, order, resolved)


def variance_decomposition(v: LPMomentVector) -> np.ndarray:
    """Fraction of var(X) carried by each LP(j; X)^2."""
    if not v.variance > 0:
        raise DegenerateError("zero variance")
    return v.lp**2 / v.variance


def _tail_order(lp, var):
    if not var > 0:
        raise DegenerateError("zero variance")
    cum = np.cumsum(lp**2) / var
    hit = np.flatnonzero(cum > TAIL_SHARE)
    if hit.size:
        return int(hit[0]) + 1, True
    return lp.size, False


def lp_tail_order(v: LPMomentVector) -> int:
    """Smallest m whose leading LP moments explain more than 95% of var(X).

    When the threshold is never crossed the number of available moments is
    returned and a warning flags the result as unresolved.
    """
    order, resolved = _tail_order(v.lp, v.variance)
    if not resolved:
        warnings.warn("tail order unresolved within available score functions", stacklevel=2)
    return order


def gini_correlation(p: PairedSample, direction: str = "y|x") -> float:
    """R_GINI(Y|X) = E[T1(X) Y] / E[T1(Y) Y]; ``direction="x|y"`` mirrors it."""
    if direction == "x|y":
        p = PairedSample(p.y, p.x)
    elif direction != "y|x":
        raise ValueError("direction must be 'y|x' or 'x|y'")
    t1x = build_score_basis(p.x, 1).data_scores()[:, 0]
    t1y = build_score_basis(p.y, 1).data_scores()[:, 0]
    y = p.y.values - p.y.mean()
    den = np.mean(t1y * y)
    if not den > 0:
        raise DegenerateError("degenerate scale")
    return float(np.mean(t1x * y) / den)


class RLP(NamedTuple):
    value: float
    raw: float
    terms: np.ndarray


def extended_multiple_correlation(p: PairedSample, selected_j=None, m: int = DEFAULT_M) -> RLP:
    """R_LP = var(E[Y|X]) / var(Y) from the zero-order comoments LP(j, 0).

    ``selected_j`` restricts the sum to a set of score indices; by default
    all available ones are used. The reported ``value`` is clamped to [0, 1].
    """
    if not p.y.var() > 0:
        raise DegenerateError("zero variance")
    if selected_j is not None and len(selected_j):
        m = max(m, max(selected_j))
    bx = build_score_basis(p.x, m)
    col = bx.data_scores().T @ (p.y.values - p.y.mean()) / p.n
    idx = np.arange(1, bx.effective_m + 1) if selected_j is None else np.asarray(sorted(selected_j), int)
    if idx.size and idx.max() > bx.effective_m:
        raise IndexError(f"score index {idx.max()} outside 1..{bx.effective_m}")
    terms = col[idx - 1] ** 2 / p.y.var()
    raw = float(terms.sum())
    return RLP(min(max(raw, 0.0), 1.0), raw, terms)


class PearsonRepresentation(NamedTuple):
    r: float
    terms: np.ndarray
    partial_sums: np.ndarray


def pearson_representation(p: PairedSample, m: int = DEFAULT_M) -> PearsonRepresentation:
    """Write Pearson R as a sum over j of LP(j,0;X,X) LP(j,0;X,Y) / (sd_X sd_Y)."""
    vx, vy = p.x.var(), p.y.var()
    if not (vx > 0 and vy > 0):
        raise DegenerateError("zero variance")
    sx, sy = np.sqrt(vx), np.sqrt(vy)
    bx = build_score_basis(p.x, m)
    scores = bx.data_scores()
    xx = scores.T @ (p.x.values - p.x.mean()) / p.n
    xy = scores.T @ (p.y.values - p.y.mean()) / p.n
    terms = xx * xy / (sx * sy)
    cov = np.mean((p.x.values - p.x.mean()) * (p.y.values - p.y.mean()))
    return PearsonRepresentation(float(cov / (sx * sy)), terms, np.cumsum(terms))
