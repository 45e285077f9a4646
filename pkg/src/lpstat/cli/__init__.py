"""``lpstat`` command line.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .._errors import LPError, NumericalError
from . import svg
from .commands import COMMANDS, Report, RunConfig
from .dataset import DataError, read_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpstat", description="LP score statistics on CSV data.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--input", required=True, help="CSV file with a header row")
    ap.add_argument("--x", help="column name (comma-separated list for summarize/scores/screen)")
    ap.add_argument("--y", help="second column")
    ap.add_argument("--m", type=int, default=4, help="number of score functions per variable (default 4)")
    ap.add_argument("--selection", choices=["aic", "all"], default="aic")
    ap.add_argument("--start", choices=["normal", "uniform", "exponential"], default="normal")
    ap.add_argument("--estimator", choices=["l2", "maxent"], default="l2")
    ap.add_argument("--format", choices=["csv", "json", "svg"], default="json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="output directory (stdout when omitted, except for svg)")
    return ap


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return _plain(obj.item())
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def render_json(cfg: RunConfig, report: Report) -> str:
    doc = {
        "command": cfg.command,
        "config": cfg.to_dict(),
        "results": report.results,
        "warnings": report.warnings,
    }
    return json.dumps(_plain(doc), indent=2, allow_nan=False) + "\n"


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def render_svg(plot) -> str:
    if plot.kind == "heatmap":
        return svg.heatmap(*plot.grid, title=plot.title, xlabel=plot.xlabel, ylabel=plot.ylabel)
    return svg.line_plot(plot.series, plot.title, plot.xlabel, plot.ylabel, step=plot.kind == "step")


def write_outputs(cfg: RunConfig, report: Report, stdout) -> list[Path]:
    written = []
    out = Path(cfg.out) if cfg.out else None
    if cfg.format == "svg" and out is None:
        out = Path(".")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    def emit(name, text):
        if out is None:
            stdout.write(text)
        else:
            path = out / name
            path.write_text(text)
            written.append(path)

    if cfg.format == "json":
        emit(f"{cfg.command}.json", render_json(cfg, report))
    elif cfg.format == "csv":
        for name, (header, rows) in report.tables.items():
            if out is None:
                stdout.write(f"# {name}\n")
            emit(f"{cfg.command}_{name}.csv", render_csv(header, rows))
    else:
        for plot in report.plots:
            emit(f"{plot.name}.svg", render_svg(plot))
            header, rows = report.tables[plot.table]
            emit(f"{plot.name}.csv", render_csv(header, rows))
    return written


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(**vars(args))
    try:
        cfg.validate()
    except ValueError as exc:
        stderr.write(f"lpstat: usage error: {exc}\n")
        return EXIT_USAGE
    try:
        ds = read_csv(cfg.input)
        report = COMMANDS[cfg.command](ds, cfg)
    except NumericalError as exc:
        stderr.write(f"lpstat: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (DataError, LPError) as exc:
        stderr.write(f"lpstat: data error: {exc}\n")
        return EXIT_DATA
    for w in report.warnings:
        stderr.write(f"lpstat: warning: {w}\n")
    write_outputs(cfg, report, stdout)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))
