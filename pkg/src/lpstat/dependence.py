"""
Dependence measures built on the LP comoment matrix.

LPINFOR is the sum of squared comoments LP(j, k) over the product score
functions kept by AIC. The same selected coefficients give an L2 series
estimate of the copula density,

    cop(u, v) = 1 + sum LP(j, k) S_j(u; X) S_k(v; Y),

and serve as moment targets for an exponential-family (maximum entropy)
copula estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence
import warnings

import numpy as np
import numpy.typing as npt
from scipy import stats

from ._errors import ConvergenceError, DegenerateError, InfeasibleMomentsError
from .empirical import PairedSample, Sample, _check_prob
from .lpmoments import LPMatrix, lp_comoment_matrix
from .scores import DEFAULT_M, LegendreBasis, ScoreBasis

__all__ = [
    "SelectedModel",
    "CopulaEstimate",
    "ConditionalProfile",
    "LPInforTest",
    "ScreenResult",
    "dep_table",
    "aic_select",
    "full_model",
    "lpinfor_test",
    "copula_l2",
    "copula_maxent",
    "conditional_profile",
    "screen_pairs",
]


def dep_table(p: PairedSample) -> np.ndarray:
    """Normed joint pmf p(x, y) / (p(x) p(y)) over the two supports."""
    return p.joint_probs() / np.outer(p.x.probs, p.y.probs)


@dataclass(frozen=True, eq=False)
class SelectedModel:
    """Product score functions kept for a pair of variables.

    ``aic_path[s]`` is the criterion value after keeping the ``s`` largest
    squared comoments, with ``aic_path[0] = 0`` for the empty model.
    """

    pairs: list
    coefficients: np.ndarray
    lpinfor: float
    aic_path: np.ndarray
    n: int
    lp: LPMatrix | None = None

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def x_basis(self):
        return None if self.lp is None else self.lp.x_basis

    @property
    def y_basis(self):
        return None if self.lp is None else self.lp.y_basis

    def coefficient_matrix(self, m_x: int, m_y: int) -> np.ndarray:
        """Selected LP(j, k) scattered into an ``(m_x, m_y)`` array, zeros elsewhere."""
        out = np.zeros((m_x, m_y))
        for (j, k), c in zip(self.pairs, self.coefficients):
            out[j - 1, k - 1] = c
        return out


def _ranked(block):
    mx, my = block.shape
    cand = [(j + 1, k + 1) for j in range(mx) for k in range(my)]
    sq = np.array([block[j - 1, k - 1] ** 2 for j, k in cand])
    # stable sort keeps (j, k) lexicographic order among equal squares
    order = np.argsort(-sq, kind="stable")
    return [cand[i] for i in order], sq[order]


def aic_select(lp: LPMatrix | np.ndarray, n: int | None = None, *, max_pairs: int | None = None) -> SelectedModel:
    """Keep the product scores that maximize sum of top-s LP^2 minus 2s/n.

    Candidates are all (j, k) with j, k >= 1, ranked by squared comoment.
    Ties in the criterion go to the smaller model; an empty model (LPINFOR
    zero) is returned when no single term beats its penalty.
    """
    mat = lp if isinstance(lp, LPMatrix) else None
    block = lp.block if mat is not None else np.asarray(lp, dtype=float)
    if n is None:
        if mat is None:
            raise ValueError("sample size n is required for a bare coefficient array")
        n = mat.n
    if n < 2:
        raise ValueError("n must be at least 2")
    pairs, sq = _ranked(block)
    if max_pairs is not None:
        pairs, sq = pairs[:max_pairs], sq[:max_pairs]
    sizes = np.arange(sq.size + 1)
    path = np.concatenate([[0.0], np.cumsum(sq)]) - 2.0 * sizes / n
    best = int(np.argmax(path))  # first maximum -> smallest model on ties
    sel = pairs[:best]
    coefs = np.array([block[j - 1, k - 1] for j, k in sel])
    return SelectedModel(sel, coefs, float(np.sum(coefs**2)), path, int(n), mat)


def full_model(lp: LPMatrix | np.ndarray, n: int | None = None) -> SelectedModel:
    """All j, k >= 1 comoments with no selection; LPINFOR over the full basis."""
    mat = lp if isinstance(lp, LPMatrix) else None
    block = lp.block if mat is not None else np.asarray(lp, dtype=float)
    n = mat.n if n is None else n
    pairs, sq = _ranked(block)
    coefs = np.array([block[j - 1, k - 1] for j, k in pairs])
    path = np.concatenate([[0.0], np.cumsum(sq)]) - 2.0 * np.arange(sq.size + 1) / n
    return SelectedModel(pairs, coefs, float(np.sum(coefs**2)), path, int(n), mat)


class LPInforTest(NamedTuple):
    statistic: float
    dof: int
    p_value: float


def lpinfor_test(model: SelectedModel) -> LPInforTest:
    """n * LPINFOR against chi-square with one dof per selected product score.

    The dof count is data driven (post-selection); no correction is made.
    """
    stat = model.n * model.lpinfor
    dof = model.size
    pval = 1.0 if dof == 0 else float(stats.chi2.sf(stat, dof))
    return LPInforTest(float(stat), dof, pval)


# ---------------------------------------------------------------------------
# copula density estimates


def _quadrature(basis, nodes: int):
    """Nodes in u, weights and score values for integrating against a basis.

    Step-function scores are integrated exactly, one node per support cell.
    """
    if isinstance(basis, ScoreBasis):
        return basis.sample.cdf - 0.5 * basis.probs, basis.probs, basis.table
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = (x + 1.0) / 2.0
    return u, w / 2.0, basis.S(u)


def _eval(basis, u):
    if isinstance(basis, ScoreBasis):
        return basis.S(u)
    return basis.S(_check_prob(u))


@dataclass(frozen=True, eq=False)
class CopulaEstimate:
    """Copula density estimate on (0, 1)^2.

    For ``kind == "l2"`` the coefficients are the selected comoments; for
    ``kind == "maxent"`` they are the exponential-family parameters and
    ``theta0`` is the log normalizer.
    """

    kind: str
    x_basis: object
    y_basis: object
    pairs: list
    coefficients: np.ndarray
    theta0: float = 0.0
    nodes: int = 64
    info: dict = field(default_factory=dict)

    def _series(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if not self.pairs:
            return np.zeros(np.broadcast(u, v).shape)
        su = _eval(self.x_basis, u)
        sv = _eval(self.y_basis, v)
        out = 0.0
        for (j, k), c in zip(self.pairs, self.coefficients):
            out = out + c * su[..., j - 1] * sv[..., k - 1]
        return np.asarray(out)

    def density(self, u: npt.ArrayLike, v: npt.ArrayLike):
        """cop(u, v), broadcasting ``u`` against ``v``."""
        s = self._series(u, v)
        out = 1.0 + s if self.kind == "l2" else np.exp(self.theta0 + s)
        return float(out) if out.ndim == 0 else out

    def grid(self, u: npt.ArrayLike, v: npt.ArrayLike, clip: bool = False) -> np.ndarray:
        """Density on the tensor grid ``u x v`` (rows follow u).

        With ``clip`` the surface is floored at zero and rescaled so its
        grid average is one.
        """
        out = self.density(np.asarray(u)[:, None], np.asarray(v)[None, :])
        if clip:
            out = np.maximum(out, 0.0)
            out = out / out.mean()
        return out

    def integral(self) -> float:
        """Integral of the density over the unit square."""
        _, wu, su = _quadrature(self.x_basis, self.nodes)
        _, wv, sv = _quadrature(self.y_basis, self.nodes)
        feats = _features(su, sv, self.pairs)
        lin = feats @ self.coefficients if self.pairs else np.zeros(wu.size * wv.size)
        dens = 1.0 + lin if self.kind == "l2" else np.exp(self.theta0 + lin)
        return float(np.outer(wu, wv).ravel() @ dens)

    def moments(self) -> np.ndarray:
        """E[S_j(U) S_k(V)] under the fitted density for each modeled pair."""
        _, wu, su = _quadrature(self.x_basis, self.nodes)
        _, wv, sv = _quadrature(self.y_basis, self.nodes)
        feats = _features(su, sv, self.pairs)
        if not self.pairs:
            return np.zeros(0)
        lin = feats @ self.coefficients
        dens = 1.0 + lin if self.kind == "l2" else np.exp(self.theta0 + lin)
        return (np.outer(wu, wv).ravel() * dens) @ feats


def _features(su, sv, pairs):
    """Rows: (a, b) node pairs flattened row-major; columns: modeled pairs."""
    if not pairs:
        return np.zeros((su.shape[0] * sv.shape[0], 0))
    cols = [np.outer(su[:, j - 1], sv[:, k - 1]).ravel() for j, k in pairs]
    return np.column_stack(cols)


def _resolve_bases(model, bases):
    if bases is None:
        if model.lp is None:
            raise ValueError("bases are required when the model carries no LP matrix")
        return model.x_basis, model.y_basis
    bx, by = bases
    if model.pairs:
        mx = max(j for j, _ in model.pairs)
        my = max(k for _, k in model.pairs)
        if mx > bx.effective_m or my > by.effective_m:
            raise IndexError("selected pair index exceeds the basis degree")
    return bx, by


def copula_l2(model: SelectedModel, bases=None) -> CopulaEstimate:
    """Orthogonal-series copula density from the selected comoments.

    The estimate integrates to one and has uniform margins by construction
    but is not guaranteed nonnegative; see :meth:`CopulaEstimate.grid`.
    """
    bx, by = _resolve_bases(model, bases)
    return CopulaEstimate("l2", bx, by, list(model.pairs), np.array(model.coefficients, dtype=float))


def _logsumexp(a, w):
    mx = a.max()
    return mx + np.log(np.dot(w, np.exp(a - mx)))


def copula_maxent(
    model: SelectedModel,
    bases=None,
    *,
    nodes: int = 64,
    tol: float = 1e-8,
    max_iter: int = 200,
    targets: npt.ArrayLike | None = None,
) -> CopulaEstimate:
    """Exponential-family copula matching the selected comoments.

    Solves E_theta[S_j(U) S_k(V)] = LP(j, k) for every selected pair by
    damped Newton on the convex dual  log Z(theta) - theta . target.
    Step-function score bases are integrated exactly cell by cell; Legendre
    bases use a tensor Gauss-Legendre rule with ``nodes`` points per axis.

    Raises
    ------
    InfeasibleMomentsError
        If the targets sit on (or beyond) the boundary of the attainable
        moment set, which shows up as parameters running off to infinity.
    ConvergenceError
        If the moment residual is still above ``tol`` after ``max_iter``
        Newton steps.
    """
    bx, by = _resolve_bases(model, bases)
    pairs = list(model.pairs)
    target = np.array(model.coefficients if targets is None else targets, dtype=float)
    if not pairs:
        return CopulaEstimate("maxent", bx, by, [], np.zeros(0), 0.0, nodes, {"iterations": 0, "residual": 0.0})

    _, wu, su = _quadrature(bx, nodes)
    _, wv, sv = _quadrature(by, nodes)
    feats = _features(su, sv, pairs)
    w = np.outer(wu, wv).ravel()
    keep = w > 0
    feats, w = feats[keep], w[keep]

    lo, hi = feats.min(axis=0), feats.max(axis=0)
    if np.any(target <= lo) or np.any(target >= hi):
        raise InfeasibleMomentsError("moment matching infeasible", residual=np.inf)

    def dual(theta):
        lin = feats @ theta
        logz = _logsumexp(lin, w)
        prob = w * np.exp(lin - logz)
        mean = prob @ feats
        return logz - theta @ target, logz, prob, mean

    theta = np.zeros(len(pairs))
    obj, logz, prob, mean = dual(theta)
    resid = np.max(np.abs(mean - target))
    it = 0
    while resid >= tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"maxent Newton did not converge in {max_iter} iterations (residual {resid:.3e})",
                residual=resid,
                iterations=it,
            )
        grad = mean - target
        centred = feats - mean
        hess = (centred * prob[:, None]).T @ centred
        try:
            step = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(hess, grad, rcond=None)[0]
        t = 1.0
        while True:
            cand = theta + t * step
            c_obj, c_logz, c_prob, c_mean = dual(cand)
            if c_obj <= obj + 1e-4 * t * (grad @ step):
                break
            t *= 0.5
            if t < 1e-12:
                raise InfeasibleMomentsError("moment matching infeasible", residual=resid, iterations=it)
        theta, obj, logz, prob, mean = cand, c_obj, c_logz, c_prob, c_mean
        resid = np.max(np.abs(mean - target))
        it += 1
        if np.max(np.abs(theta)) > 1e3:
            raise InfeasibleMomentsError("moment matching infeasible", residual=resid, iterations=it)

    info = {"iterations": it, "residual": float(resid)}
    if not (isinstance(bx, ScoreBasis) and isinstance(by, ScoreBasis)):
        fine = CopulaEstimate("maxent", bx, by, pairs, theta, -logz, 2 * nodes)
        info["refinement_change"] = float(np.max(np.abs(fine.moments() - target)))
        if info["refinement_change"] > 1e-7:
            warnings.warn("maxent quadrature not resolved: doubling nodes moved moments by "
                          f"{info['refinement_change']:.2e}", stacklevel=2)
    return CopulaEstimate("maxent", bx, by, pairs, theta, -logz, nodes, info)


# ---------------------------------------------------------------------------
# conditional decomposition


@dataclass(frozen=True, eq=False)
class ConditionalProfile:
    """Conditional LP moments of Y given X = Q(u; X) along a grid of u.

    ``moments[i, k - 1]`` is LP(k; Y | X = Q(u_i; X)).
    """

    u: np.ndarray
    moments: np.ndarray
    lpinfor: np.ndarray
    total: float

    @property
    def integral(self) -> float:
        """Exact integral over (0, 1) of the conditional LPINFOR step function."""
        return self.total


def conditional_profile(model: SelectedModel, bases=None, u_grid: npt.ArrayLike | None = None) -> ConditionalProfile:
    """Conditional LP moments and conditional LPINFOR as functions of u.

    Only the selected LP(j, k) enter. Without ``u_grid`` the profile is
    reported at the mid-distribution of each support point of X.
    """
    bx, by = _resolve_bases(model, bases)
    m_y = by.effective_m
    m_x = bx.effective_m
    coef = model.coefficient_matrix(m_x, m_y)
    cells_u, cells_w, cells_s = _quadrature(bx, 64)
    if u_grid is None:
        u = cells_u
        s = cells_s
    else:
        u = np.asarray(u_grid, dtype=float)
        s = _eval(bx, u)
    moments = s @ coef
    info = np.sum(moments**2, axis=-1)
    total = float(cells_w @ np.sum((cells_s @ coef) ** 2, axis=-1))
    return ConditionalProfile(u, moments, info, total)


# ---------------------------------------------------------------------------
# screening


class ScreenResult(NamedTuple):
    i: int
    j: int
    lpinfor: float
    p_value: float
    dof: int


def screen_pairs(columns: Sequence, m: int = DEFAULT_M) -> list[ScreenResult]:
    """AIC-selected LPINFOR for every pair of columns, most dependent first.

    Columns may be :class:`Sample` objects or array-likes of common length.
    Pairs involving a constant column are skipped with a warning. Ties in
    LPINFOR keep column-index order.
    """
    cols = [c if isinstance(c, Sample) else Sample.from_values(c) for c in columns]
    if len(cols) < 2:
        raise ValueError("screening needs at least two columns")
    n = cols[0].n
    if any(c.n != n for c in cols):
        raise ValueError("columns must share a common length")
    out = []
    for a in range(len(cols)):
        for b in range(a + 1, len(cols)):
            try:
                lp = lp_comoment_matrix(PairedSample(cols[a], cols[b]), m, m)
            except DegenerateError as exc:
                warnings.warn(f"pair ({a}, {b}) skipped: {exc}", stacklevel=2)
                continue
            model = aic_select(lp)
            test = lpinfor_test(model)
            out.append(ScreenResult(a, b, model.lpinfor, test.p_value, test.dof))
    out.sort(key=lambda r: -r.lpinfor)
    return out
