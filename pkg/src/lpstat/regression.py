"""
Nonparametric regression on score functions.

    E[Y | X = Q(u; X)] = E[Y] + sum_j LP(j, 0; X, Y) S_j(u; X)

The coefficients are plain empirical means E[T_j(X) Y], so fitting is a
single matrix product; when every score function of X is used the fit
reproduces the groupwise means of Y exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ._errors import LPError
from .empirical import PairedSample, mid_distribution
from .scores import DEFAULT_M, ScoreBasis, build_score_basis

__all__ = ["RegressionFit", "fit_regression", "eval_regression", "conditional_score_regression"]


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """Score-series regression curve.

    ``coefficients[j - 1]`` is LP(j, 0; X, Y) for every available j;
    ``selected`` lists the indices that enter the curve.
    """

    intercept: float
    coefficients: np.ndarray
    selected: np.ndarray
    basis: ScoreBasis
    response_var: float
    n: int

    @property
    def active(self) -> np.ndarray:
        return self.coefficients[self.selected - 1] if self.selected.size else np.zeros(0)

    def __call__(self, u: npt.ArrayLike):
        return eval_regression(self, u)

    def fitted_support(self) -> np.ndarray:
        """The curve at each support point of X."""
        s = self.basis.table[:, self.selected - 1] if self.selected.size else np.zeros((self.basis.support.size, 0))
        return self.intercept + s @ self.active

    def predict(self, x: npt.ArrayLike):
        """Evaluate at raw x through Fmid of the nearest training support point."""
        x = np.asarray(x, dtype=float)
        sup = self.basis.support
        pos = np.clip(np.searchsorted(sup, x), 1, sup.size - 1)
        nearest = np.where(np.abs(x - sup[pos - 1]) <= np.abs(sup[pos] - x), pos - 1, pos)
        out = self.fitted_support()[nearest]
        return float(out) if out.ndim == 0 else out

    def fitted_values(self) -> np.ndarray:
        return self.fitted_support()[self.basis.sample.index]

    def r_lp(self) -> float:
        """var(fitted) / var(Y); zero for a constant response."""
        if not self.response_var > 0:
            return 0.0
        return float(np.sum(self.active**2) / self.response_var)

    def u_knots(self) -> np.ndarray:
        return mid_distribution(self.basis.sample).fmid


def _select(coef, var, n, selection):
    m = coef.size
    if selection == "all":
        return np.arange(1, m + 1)
    if selection != "aic":
        raise ValueError("selection must be 'all' or 'aic'")
    if not var > 0:
        return np.zeros(0, dtype=int)
    sq = coef**2 / var
    order = np.argsort(-sq, kind="stable")
    path = np.concatenate([[0.0], np.cumsum(sq[order])]) - 2.0 * np.arange(m + 1) / n
    best = int(np.argmax(path))
    return np.sort(order[:best] + 1)


def _fit(basis, response, selection):
    n = response.size
    mean = float(np.mean(response))
    centred = response - mean
    coef = basis.data_scores().T @ centred / n
    var = float(np.mean(centred**2))
    return RegressionFit(mean, coef, _select(coef, var, n, selection), basis, var, n)


def fit_regression(p: PairedSample, m: int = DEFAULT_M, selection: str = "all") -> RegressionFit:
    """Regress Y on the score functions of X.

    With ``selection="aic"`` the terms are ranked by LP(j, 0)^2 / var(Y) and
    each costs 2/n, so the criterion does not depend on the units of Y.
    """
    basis = build_score_basis(p.x, m)
    return _fit(basis, p.y.values, selection)


def eval_regression(fit: RegressionFit, u: npt.ArrayLike):
    """intercept + sum over selected j of LP(j, 0) S_j(u)."""
    s = fit.basis.S(u)
    out = fit.intercept + (s[..., fit.selected - 1] @ fit.active if fit.selected.size else 0.0 * s[..., 0])
    return float(out) if np.ndim(out) == 0 else out


def conditional_score_regression(p: PairedSample, k: int, m: int = DEFAULT_M, selection: str = "all") -> RegressionFit:
    """Regress T_k(Y) on the scores of X; the coefficients are LP(j, k; X, Y)."""
    by = build_score_basis(p.y, max(k, m))
    if not 1 <= k <= by.effective_m:
        raise LPError(f"score index {k} outside 1..{by.effective_m}")
    bx = build_score_basis(p.x, m)
    fit = _fit(bx, by.data_scores()[:, k - 1], selection)
    # the score response has mean zero exactly in theory; drop rounding noise
    return RegressionFit(0.0, fit.coefficients, fit.selected, bx, fit.response_var, fit.n)
