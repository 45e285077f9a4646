"""The analysis behind each subcommand.

Every command takes a :class:`Dataset` and a :class:`RunConfig` and returns a
:class:`Report`: a JSON-ready ``results`` dict, named tables for CSV output,
and plots whose exact numbers are also kept as tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
import warnings

import numpy as np

from .. import compdensity, dependence, empirical, lpmoments, regression, scores
from .._errors import DegenerateError
from .dataset import DataError, Dataset

SLICE_U = (0.1, 0.25, 0.5, 0.75, 0.9)
GRID = 64
CURVE = 512


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    x: str | None = None
    y: str | None = None
    m: int = scores.DEFAULT_M
    selection: str = "aic"
    start: str = "normal"
    estimator: str = "l2"
    format: str = "json"
    seed: int = 0
    out: str | None = None

    def validate(self):
        if self.m < 1:
            raise ValueError("--m must be a positive integer")
        if self.command not in {"screen"} and not self.x:
            raise ValueError(f"{self.command} requires --x")
        if self.command in {"comoments", "copula", "regress"} and not self.y:
            raise ValueError(f"{self.command} requires --y")

    def to_dict(self):
        return asdict(self)


@dataclass
class Plot:
    name: str
    kind: str  # "line", "step" or "heatmap"
    title: str
    xlabel: str
    ylabel: str
    table: str  # name of the table holding the plotted numbers
    series: list = field(default_factory=list)  # (label, x, y) for line/step
    grid: tuple | None = None  # (u, v, z) for heatmap


@dataclass
class Report:
    results: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    plots: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def _table(header, *cols):
    return list(header), [list(r) for r in zip(*[np.asarray(c, dtype=float).tolist() for c in cols])]


def _columns(ds: Dataset, cfg: RunConfig, names, report: Report):
    cols, dropped = ds.select(names)
    if dropped:
        report.warnings.append(f"dropped {dropped} rows with missing values in {', '.join(names)}")
    if cols[0].size == 0:
        raise DataError(f"no complete rows for {', '.join(names)}")
    return cols


def _split(names):
    return [c.strip() for c in names.split(",") if c.strip()]


def _pair(ds, cfg, report):
    x, y = _columns(ds, cfg, [cfg.x, cfg.y], report)
    return empirical.PairedSample.from_values(x, y)


def cmd_summarize(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    names = _split(cfg.x) + (_split(cfg.y) if cfg.y else [])
    u = np.arange(1, 100) / 100.0
    for name in names:
        (vals,) = _columns(ds, cfg, [name], report)
        s = empirical.Sample.from_values(vals)
        md = empirical.mid_distribution(s)
        entry = {
            "n": s.n,
            "n_distinct": int(s.support.size),
            "knots_u": md.fmid,
            "knots_x": s.support,
            "sigma_mid": md.sigma_mid,
            "quantiles": {"u": u, "q": empirical.quantile(s, u), "qmid": empirical.mid_quantile(s, u)},
        }
        report.tables[f"quantile_{name}"] = _table(["u", "x"], md.fmid, s.support)
        report.plots.append(Plot(f"quantile_{name}", "line", f"Mid-quantile of {name}", "u", name,
                                 f"quantile_{name}", [(name, md.fmid, s.support)]))
        try:
            qiq = empirical.informative_quantile(s, u)
        except DegenerateError as exc:
            report.warnings.append(f"{name}: informative quantile: {exc}")
            entry["qiq"] = None
        else:
            entry["qiq"] = {"u": u, "qiq": qiq}
            report.tables[f"qiq_{name}"] = _table(["u", "qiq"], u, qiq)
            report.plots.append(Plot(f"qiq_{name}", "line", f"Informative quantile of {name}", "u", "QIQ",
                                     f"qiq_{name}", [(name, u, qiq)]))
        report.results[name] = entry
    return report


def _step_table(basis):
    edges = np.concatenate([[0.0], basis.breakpoints(), [1.0]])
    return edges[:-1], edges[1:], basis.table


def cmd_scores(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    names = _split(cfg.x) + (_split(cfg.y) if cfg.y else [])
    for name in names:
        (vals,) = _columns(ds, cfg, [name], report)
        basis = scores.build_score_basis(empirical.Sample.from_values(vals), cfg.m)
        if basis.effective_m < cfg.m:
            report.warnings.append(
                f"{name}: only {basis.effective_m} score functions available (requested {cfg.m})")
        left, right, table = _step_table(basis)
        m = basis.effective_m
        header = ["u_left", "u_right"] + [f"S{j}" for j in range(1, m + 1)]
        report.tables[f"scores_{name}"] = _table(header, left, right, *table.T)
        report.results[name] = {
            "effective_m": m,
            "support": basis.support,
            "u_left": left,
            "u_right": right,
            "S": {f"S{j}": table[:, j - 1] for j in range(1, m + 1)},
        }
        # a step plot needs the right end of the last cell as an extra point
        xs = np.append(left, 1.0)
        series = [(f"S{j}", xs, np.append(table[:, j - 1], table[-1, j - 1])) for j in range(1, m + 1)]
        report.plots.append(Plot(f"scores_{name}", "step", f"Score functions of {name}", "u", "S_j(u)",
                                 f"scores_{name}", series))
    return report


def _model(p, cfg):
    lp = lpmoments.lp_comoment_matrix(p, cfg.m, cfg.m)
    model = dependence.aic_select(lp) if cfg.selection == "aic" else dependence.full_model(lp)
    return lp, model


def cmd_comoments(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    p = _pair(ds, cfg, report)
    lp, model = _model(p, cfg)
    test = dependence.lpinfor_test(model)
    pear = lpmoments.pearson_representation(p, cfg.m)
    full = dependence.full_model(lp)
    ranked_sq = np.cumsum(full.coefficients**2)
    sizes = np.arange(len(model.aic_path))
    report.results = {
        "n": p.n,
        "m_x": lp.m_x,
        "m_y": lp.m_y,
        "lp_matrix": lp.values,
        "selection": cfg.selection,
        "selected_pairs": [list(pq) for pq in model.pairs],
        "selected_coefficients": model.coefficients,
        "lpinfor": model.lpinfor,
        "aic_path": model.aic_path,
        "chi_square": {"statistic": test.statistic, "dof": test.dof, "p_value": test.p_value},
        "pearson_r": pear.r,
    }
    header = ["j"] + [f"k{k}" for k in range(lp.m_y + 1)]
    report.tables["lp_matrix"] = _table(header, np.arange(lp.m_x + 1), *lp.values.T)
    report.tables["aic_path"] = _table(["size", "aic", "lpinfor"], sizes, model.aic_path,
                                       np.concatenate([[0.0], ranked_sq]))
    report.plots.append(Plot("aic_path", "line", "AIC over ranked comoments", "number of product scores",
                             "AIC", "aic_path", [("AIC", sizes, model.aic_path)]))
    report.plots.append(Plot("lpinfor_path", "line", "LPINFOR over ranked comoments",
                             "number of product scores", "LPINFOR", "aic_path",
                             [("LPINFOR", sizes, np.concatenate([[0.0], ranked_sq]))]))
    return report


def cmd_copula(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    p = _pair(ds, cfg, report)
    lp, model = _model(p, cfg)
    if cfg.estimator == "maxent":
        est = dependence.copula_maxent(model)
    else:
        est = dependence.copula_l2(model)
    g = (np.arange(GRID) + 0.5) / GRID
    z = est.grid(g, g)
    slices = est.grid(np.array(SLICE_U), g)
    report.results = {
        "estimator": est.kind,
        "selected_pairs": [list(pq) for pq in model.pairs],
        "coefficients": est.coefficients,
        "theta0": est.theta0,
        "integral": est.integral(),
        "min_density": float(z.min()),
        "grid_u": g,
        "grid_v": g,
        "density": z,
        "slices": {str(u): row for u, row in zip(SLICE_U, slices)},
    }
    if est.info:
        report.results["solver"] = est.info
    uu, vv = np.meshgrid(g, g, indexing="ij")
    report.tables["copula_grid"] = _table(["u", "v", "density"], uu.ravel(), vv.ravel(), z.ravel())
    report.tables["copula_slices"] = _table(["v"] + [f"u={u}" for u in SLICE_U], g, *slices)
    report.plots.append(Plot("copula_grid", "heatmap", f"Copula density ({est.kind})", "u", "v",
                             "copula_grid", grid=(g, g, z)))
    report.plots.append(Plot("copula_slices", "line", "Copula density slices", "v", "cop(u, v)",
                             "copula_slices", [(f"u={u}", g, row) for u, row in zip(SLICE_U, slices)]))
    return report


def _local_maxima(v):
    v = np.asarray(v)
    return int(np.sum((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])))


def cmd_density(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    (vals,) = _columns(ds, cfg, [cfg.x], report)
    g = compdensity.fit_start(cfg.start, vals)
    fit = compdensity.neyman_fit(empirical.Sample.from_values(vals), g, cfg.m)
    u = (np.arange(CURVE) + 0.5) / CURVE
    d = fit.dhat(u)
    lo, hi = float(vals.min()), float(vals.max())
    pad = 0.1 * (hi - lo)
    x = np.linspace(lo - pad, hi + pad, CURVE)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        f = fit.density(x)
        gx = np.asarray(g.pdf(x), dtype=float)
    report.warnings.extend(sorted({str(w.message) for w in caught}))
    if np.any(d < 0):
        report.warnings.append("comparison density estimate is negative somewhere (raw series reported)")
    gof = compdensity.accept_reject_gof(fit, vals, n_sim=200, seed=cfg.seed)
    report.results = {
        "start": {"family": g.family, **g.params},
        "theta": fit.theta,
        "selected": fit.selected,
        "aic_path": fit.aic_path,
        "integrated_squared_deviation": fit.integrated_squared_deviation(),
        "dhat_local_maxima": _local_maxima(d),
        "fhat_local_maxima": _local_maxima(f),
        "u": u,
        "dhat": d,
        "x": x,
        "fhat": f,
        "start_pdf": gx,
        "gof": {"ks_observed": gof["ks_observed"], "exceedance": gof["exceedance"],
                "n_sim": int(gof["ks_simulated"].size), "seed": cfg.seed},
    }
    report.tables["dhat"] = _table(["u", "dhat"], u, d)
    report.tables["fhat"] = _table(["x", "fhat", "start_pdf"], x, f, gx)
    report.plots.append(Plot("dhat", "line", f"Comparison density of {cfg.x}", "u", "d(u)", "dhat",
                             [("dhat", u, d)]))
    report.plots.append(Plot("fhat", "line", f"Density of {cfg.x}", cfg.x, "density", "fhat",
                             [("fhat", x, f), (f"{g.family} start", x, gx)]))
    return report


def cmd_regress(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    p = _pair(ds, cfg, report)
    fit = regression.fit_regression(p, cfg.m, cfg.selection)
    try:
        pear = lpmoments.pearson_representation(p, cfg.m)
        pearson = {"r": pear.r, "terms": pear.terms, "partial_sums": pear.partial_sums}
    except DegenerateError as exc:
        report.warnings.append(f"Pearson representation: {exc}")
        pearson = None
    try:
        gini = {"y|x": lpmoments.gini_correlation(p, "y|x"), "x|y": lpmoments.gini_correlation(p, "x|y")}
    except DegenerateError as exc:
        report.warnings.append(f"Gini correlation: {exc}")
        gini = None
    support = fit.basis.support
    fitted = fit.fitted_support()
    report.results = {
        "intercept": fit.intercept,
        "coefficients": fit.coefficients,
        "selected": fit.selected,
        "r_lp": fit.r_lp(),
        "r_gini": gini,
        "pearson": pearson,
        "x": support,
        "u": fit.u_knots(),
        "fitted": fitted,
    }
    report.tables["regression"] = _table(["x", "u", "fitted"], support, fit.u_knots(), fitted)
    report.tables["scatter"] = _table(["x", "y"], p.x.values, p.y.values)
    report.plots.append(Plot("regression", "step", f"E[{cfg.y} | {cfg.x}]", cfg.x, cfg.y, "regression",
                             [("fit", support, fitted)]))
    return report


def cmd_screen(ds: Dataset, cfg: RunConfig) -> Report:
    report = Report()
    names = _split(cfg.x) if cfg.x else list(ds.names)
    if cfg.y:
        names += _split(cfg.y)
    cols = _columns(ds, cfg, names, report)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ranked = dependence.screen_pairs(cols, cfg.m)
    report.warnings.extend(str(w.message) for w in caught)
    rows = [{"x": names[r.i], "y": names[r.j], "lpinfor": r.lpinfor, "p_value": r.p_value, "dof": r.dof}
            for r in ranked]
    report.results = {"columns": names, "ranking": rows}
    report.tables["screen"] = (["x", "y", "lpinfor", "p_value", "dof"],
                               [[r["x"], r["y"], r["lpinfor"], r["p_value"], r["dof"]] for r in rows])
    return report


COMMANDS = {
    "summarize": cmd_summarize,
    "scores": cmd_scores,
    "comoments": cmd_comoments,
    "copula": cmd_copula,
    "density": cmd_density,
    "regress": cmd_regress,
    "screen": cmd_screen,
}
