"""
Comparison densities.

Given a parametric start G, the comparison density d(u) = f(Q_G(u)) / g(Q_G(u))
is the density of G(X); it is identically one when the start is right. A
Neyman-type orthogonal series

    dhat(u) = 1 + sum_h theta_h Leg_h(u),    theta_h = mean Leg_h(G(X_i)),

with AIC choosing which h to keep, corrects the start multiplicatively:
fhat(x) = g(x) dhat(G(x)).

Also here: the logistic-regression route to a comparison density for a
binary response, odds, and comparison probabilities of discrete pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable
import math
import warnings

import numpy as np
import numpy.typing as npt
from scipy import stats

from ._errors import (
    ConvergenceError,
    DomainError,
    LPError,
    SeparationError,
    SupportMismatchError,
)
from .empirical import PairedSample, Sample, _check_prob, quantile_index
from .scores import DEFAULT_M, LegendreBasis, build_score_basis, legendre_basis

__all__ = [
    "ParametricStart",
    "ComparisonFit",
    "LogisticComparisonFit",
    "fit_start",
    "comparison_distribution",
    "neyman_fit",
    "density_estimate",
    "logistic_comparison_fit",
    "bayes_odds",
    "comparison_probability",
    "conditional_comparison_density",
    "accept_reject_gof",
    "InfiniteOddsWarning",
]

FAMILIES = ("normal", "uniform", "exponential")


@dataclass(frozen=True, eq=False)
class ParametricStart:
    """A fully specified reference distribution G."""

    family: str
    params: dict
    cdf: Callable
    pdf: Callable
    ppf: Callable

    @classmethod
    def from_scipy(cls, family: str, dist, **params) -> ParametricStart:
        return cls(family, params, dist.cdf, dist.pdf, dist.ppf)

    @classmethod
    def normal(cls, loc: float = 0.0, scale: float = 1.0) -> ParametricStart:
        return cls.from_scipy("normal", stats.norm(loc, scale), loc=loc, scale=scale)

    @classmethod
    def uniform(cls, lower: float = 0.0, upper: float = 1.0) -> ParametricStart:
        return cls.from_scipy("uniform", stats.uniform(lower, upper - lower), lower=lower, upper=upper)

    @classmethod
    def exponential(cls, scale: float = 1.0) -> ParametricStart:
        return cls.from_scipy("exponential", stats.expon(scale=scale), scale=scale)

    @classmethod
    def custom(cls, cdf, pdf, ppf, **params) -> ParametricStart:
        return cls("custom", params, cdf, pdf, ppf)


def fit_start(family: str, values: npt.ArrayLike) -> ParametricStart:
    """Fit a start to data by moments.

    Normal uses the sample mean and sd, exponential the mean, uniform the
    range widened on each side by range/n so no observation sits at cdf 0 or 1.
    """
    x = np.asarray(values, dtype=float)
    family = family.lower()
    if family == "normal":
        return ParametricStart.normal(float(x.mean()), float(x.std()))
    if family == "exponential":
        return ParametricStart.exponential(float(x.mean()))
    if family == "uniform":
        lo, hi = float(x.min()), float(x.max())
        pad = (hi - lo) / x.size
        return ParametricStart.uniform(lo - pad, hi + pad)
    raise ValueError(f"unsupported start family {family!r}; choose from {', '.join(FAMILIES)}")


def comparison_distribution(s: Sample, g: ParametricStart, u: npt.ArrayLike):
    """D(u) = F(Q_G(u)) with F the empirical (right-continuous) cdf."""
    u = _check_prob(u)
    q = np.asarray(g.ppf(u), dtype=float)
    pos = np.searchsorted(s.support, q, side="right")
    cdf = np.concatenate([[0.0], s.cdf])
    out = cdf[pos]
    return float(out) if out.ndim == 0 else out


def _aic_keep(theta, n, scale=1.0):
    order = np.argsort(-(theta**2), kind="stable")
    sq = theta[order] ** 2 / scale
    path = np.concatenate([[0.0], np.cumsum(sq)]) - 2.0 * np.arange(sq.size + 1) / n
    best = int(np.argmax(path))
    return np.sort(order[:best] + 1), path


@dataclass(frozen=True, eq=False)
class ComparisonFit:
    """Orthogonal-series comparison density and the density it induces.

    ``theta[h - 1]`` is the raw coefficient of Leg_h; only indices in
    ``selected`` enter ``dhat``.
    """

    start: ParametricStart
    theta: np.ndarray
    selected: np.ndarray
    aic_path: np.ndarray
    n: int
    basis: LegendreBasis
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.theta.size

    def dhat(self, u: npt.ArrayLike, clip: bool = False):
        u = np.asarray(u, dtype=float)
        out = np.ones_like(u)
        if self.selected.size:
            s = self.basis.S(u)
            out = out + s[..., self.selected - 1] @ self.theta[self.selected - 1]
        if clip:
            out = np.maximum(out, 0.0) / self.clipped_mass()
        return float(out) if out.ndim == 0 else out

    def clipped_mass(self) -> float:
        """Integral of max(dhat, 0) over (0, 1); one when dhat is nonnegative."""
        if "mass" not in self._cache:
            x, w = np.polynomial.legendre.leggauss(256)
            # a few panels so the kinks of max(., 0) do not spoil the rule
            edges = np.linspace(0.0, 1.0, 17)
            total = 0.0
            for a, b in zip(edges[:-1], edges[1:]):
                u = a + (b - a) * (x + 1) / 2
                total += (b - a) / 2 * np.dot(w, np.maximum(self.dhat(u), 0.0))
            self._cache["mass"] = float(total)
        return self._cache["mass"]

    def density(self, x: npt.ArrayLike, clip: bool = False):
        return density_estimate(self, x, clip=clip)

    def cdf(self, x: npt.ArrayLike):
        """Fhat(x) = Dhat(G(x)) for the raw (unclipped) series."""
        u = np.asarray(self.start.cdf(np.asarray(x, dtype=float)), dtype=float)
        out = u.copy()
        for h in self.selected:
            out = out + self.theta[h - 1] * self.basis.integral(int(h), u)
        return out

    def integrated_squared_deviation(self) -> float:
        """Integral of (dhat - 1)^2, the sum of squared selected theta."""
        return float(np.sum(self.theta[self.selected - 1] ** 2)) if self.selected.size else 0.0


def neyman_fit(s: Sample | npt.ArrayLike, g: ParametricStart, m: int = DEFAULT_M) -> ComparisonFit:
    """Fit dhat by mean Legendre scores of G(X) with AIC index selection.

    Raises
    ------
    SupportMismatchError
        If the start assigns cdf 0 or 1 to an observation.
    """
    if not isinstance(s, Sample):
        s = Sample.from_values(s)
    if s.n < 10:
        warnings.warn(f"neyman_fit with only n={s.n} observations", stacklevel=2)
    u = np.asarray(g.cdf(s.values), dtype=float)
    if np.any(u <= 0) or np.any(u >= 1):
        raise SupportMismatchError("start support mismatch")
    basis = legendre_basis(m)
    theta = basis.S(u).mean(axis=0)
    selected, path = _aic_keep(theta, s.n)
    return ComparisonFit(g, theta, selected, path, s.n, basis)


def density_estimate(fit: ComparisonFit, x: npt.ArrayLike, clip: bool = False):
    """fhat(x) = g(x) dhat(G(x)).

    Points where the start density vanishes get 0 and a warning. The raw
    series may be negative; ``clip`` floors dhat at zero and renormalizes.
    """
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x)
    gx = np.asarray(fit.start.pdf(flat), dtype=float)
    inside = gx > 0
    if not np.all(inside):
        warnings.warn("points outside the start support get density 0", stacklevel=2)
    out = np.zeros_like(flat)
    u = np.asarray(fit.start.cdf(flat[inside]), dtype=float)
    out[inside] = gx[inside] * fit.dhat(u, clip=clip)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def accept_reject_gof(fit: ComparisonFit, data: npt.ArrayLike, n_sim: int = 200, seed: int | None = None) -> dict:
    """Simulation diagnostic for the fitted density.

    Draws samples of the data's size from the clipped fhat by accept-reject
    with g as envelope (bound: max dhat over a 1024 grid), and compares the
    KS distance of the observed data to Fhat with the KS distances of the
    simulated samples. Not a calibrated test.
    """
    rng = np.random.default_rng(seed)
    x = np.asarray(data, dtype=float)
    n = x.size
    grid = (np.arange(1024) + 0.5) / 1024
    bound = float(np.max(fit.dhat(grid, clip=True)))
    ug = np.linspace(0.0, 1.0, 4097)
    dens = fit.dhat(np.clip(ug, 1e-12, 1 - 1e-12), clip=True)
    cum = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2 * np.diff(ug))])
    cum /= cum[-1]

    def fhat_cdf(v):
        return np.interp(fit.start.cdf(v), ug, cum)

    def ks(v):
        v = np.sort(v)
        c = fhat_cdf(v)
        i = np.arange(1, v.size + 1)
        return float(max(np.max(i / v.size - c), np.max(c - (i - 1) / v.size)))

    def draw():
        got = []
        need = n
        while need > 0:
            batch = max(2 * need, 64)
            u = rng.uniform(size=int(batch * bound) + 1)
            acc = rng.uniform(size=u.size) * bound <= fit.dhat(u, clip=True)
            got.append(u[acc][:need])
            need -= got[-1].size
        return fit.start.ppf(np.concatenate(got))

    observed = ks(x)
    simulated = np.array([ks(draw()) for _ in range(n_sim)])
    return {
        "ks_observed": observed,
        "ks_simulated": simulated,
        "exceedance": float(np.mean(simulated >= observed)),
        "envelope_bound": bound,
    }


# ---------------------------------------------------------------------------
# binary response


class InfiniteOddsWarning(RuntimeWarning):
    pass


def bayes_odds(p_u, u=None) -> float:
    """odds = p / (1 - p) of a probability or of ``p_u(u)`` for a callable.

    p = 1 gives ``inf`` and p = 0 gives 0, each with an
    :class:`InfiniteOddsWarning` (the log odds is unbounded).
    """
    p = float(p_u(u) if callable(p_u) else p_u)
    if not 0.0 <= p <= 1.0:
        raise DomainError("probability must lie in [0, 1]")
    if p == 1.0:
        warnings.warn("p(u) = 1: infinite odds", InfiniteOddsWarning, stacklevel=2)
        return math.inf
    if p == 0.0:
        warnings.warn("p(u) = 0: zero odds, log odds is -inf", InfiniteOddsWarning, stacklevel=2)
        return 0.0
    return p / (1.0 - p)


@dataclass(frozen=True, eq=False)
class LogisticComparisonFit:
    """log odds P[Y=1 | X = Q(u; X)] = beta_0 + sum_j beta_j S_j(u; X)."""

    beta: np.ndarray
    prior: float
    basis: object
    classes: tuple
    iterations: int
    gradient_norm: float

    def log_odds(self, u: npt.ArrayLike):
        s = self.basis.S(u)
        return self.beta[0] + s @ self.beta[1:]

    def p(self, u: npt.ArrayLike):
        out = 1.0 / (1.0 + np.exp(-np.asarray(self.log_odds(u))))
        return float(out) if out.ndim == 0 else out

    def dhat(self, u: npt.ArrayLike):
        """Comparison density of X given Y=1 against X: p(u) / P[Y = 1]."""
        return self.p(u) / self.prior


def logistic_comparison_fit(p: PairedSample, m: int = DEFAULT_M, *, tol: float = 1e-8, max_iter: int = 100) -> LogisticComparisonFit:
    """Logistic regression of binary Y on the score functions of X, by IRLS.

    The larger of Y's two values is coded 1.
    """
    ys = p.y.support
    if ys.size != 2:
        raise LPError("response must take exactly two values")
    y = (p.y.index == 1).astype(float)
    basis = build_score_basis(p.x, m)
    X = np.column_stack([np.ones(p.n), basis.data_scores()])
    n = p.n
    beta = np.zeros(X.shape[1])
    prior = float(y.mean())
    beta[0] = math.log(prior / (1 - prior))
    gnorm = np.inf
    for it in range(1, max_iter + 1):
        eta = X @ beta
        mu = 1.0 / (1.0 + np.exp(-eta))
        grad = X.T @ (y - mu) / n
        gnorm = float(np.linalg.norm(grad))
        if gnorm < tol:
            return LogisticComparisonFit(beta, prior, basis, (ys[0], ys[1]), it - 1, gnorm)
        fitted = (mu > 0.5) == (y > 0.5)
        if np.all(fitted) and np.max(np.abs(eta)) > 30:
            raise SeparationError(
                "perfect separation: classes are split by a function of the scores "
                f"(max |log odds| {np.max(np.abs(eta)):.1f})",
                residual=gnorm,
                iterations=it,
            )
        w = np.maximum(mu * (1 - mu), 1e-12)
        hess = (X * w[:, None]).T @ X / n
        beta = beta + np.linalg.solve(hess, grad)
    raise ConvergenceError(f"IRLS did not converge in {max_iter} iterations (gradient norm {gnorm:.3e})",
                           residual=gnorm, iterations=max_iter)


# ---------------------------------------------------------------------------
# discrete comparison probabilities


def _support_pos(s: Sample, value, name):
    pos = np.searchsorted(s.support, value)
    if pos >= s.support.size or s.support[pos] != value:
        raise LPError(f"zero-mass cell: {name}={value!r} not observed")
    return int(pos)


def comparison_probability(p: PairedSample, x, y) -> float:
    """P[Y = y | X = x] / P[Y = y], the dep(x, y) of a discrete pair."""
    a = _support_pos(p.x, x, "X")
    b = _support_pos(p.y, y, "Y")
    joint = p.joint_probs()
    return float(joint[a, b] / p.x.probs[a] / p.y.probs[b])


def conditional_comparison_density(p: PairedSample, u: float, v: float, given: str = "x") -> float:
    """Comparison density of one discrete variable given the other.

    ``given="x"`` returns d(v; Y, Y | X = Q(u; X)) = P[Y = Q(v) | X = Q(u)] / P[Y = Q(v)];
    ``given="y"`` returns d(u; X, X | Y = Q(v; Y)).
    """
    a = int(quantile_index(p.x, u))
    b = int(quantile_index(p.y, v))
    counts = p.joint_probs() * p.n
    if given == "x":
        return float((counts[a, b] / counts[a].sum()) / (counts[:, b].sum() / p.n))
    if given == "y":
        return float((counts[a, b] / counts[:, b].sum()) / (counts[a].sum() / p.n))
    raise ValueError("given must be 'x' or 'y'")
