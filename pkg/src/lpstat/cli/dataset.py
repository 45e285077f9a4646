"""CSV ingestion for the command line."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .._errors import LPError

NA_TOKENS = frozenset({"", "na", "nan", "null", "none", "."})


class DataError(LPError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    names: list
    columns: dict
    path: str
    bad_cells: list = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise DataError(f"unknown column {name!r}; available: {', '.join(self.names)}")
        return self.columns[name]

    def select(self, names):
        """Selected columns with rows dropped where any of them is missing.

        Returns the arrays and the number of dropped rows.
        """
        cols = [self.column(c) for c in names]
        ok = np.all([~np.isnan(c) for c in cols], axis=0)
        return [c[ok] for c in cols], int(np.sum(~ok))


def read_csv(path) -> Dataset:
    """Read a header-first, decimal-point CSV of numeric columns.

    Missing cells (empty, NA, NaN, null) become NaN. Any other cell that does
    not parse as a number raises :class:`DataError` listing every offending
    row (1-based, header is row 1) and column.
    """
    p = Path(path)
    try:
        fh = p.open(newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file, header row required") from None
        if len(set(header)) != len(header) or any(not h for h in header):
            raise DataError(f"{path}: header names must be unique and nonempty")
        data = [[] for _ in header]
        bad = []
        for rownum, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: row {rownum} has {len(row)} fields, expected {len(header)}")
            for j, cell in enumerate(row):
                text = cell.strip()
                if text.lower() in NA_TOKENS:
                    data[j].append(np.nan)
                    continue
                try:
                    data[j].append(float(text))
                except ValueError:
                    bad.append((rownum, header[j], text))
                    data[j].append(np.nan)
    if bad:
        shown = "; ".join(f"row {r} column {c!r}: {t!r}" for r, c, t in bad[:10])
        more = f" (and {len(bad) - 10} more)" if len(bad) > 10 else ""
        raise DataError(f"{path}: non-numeric cells: {shown}{more}")
    cols = {h: np.array(v, dtype=float) for h, v in zip(header, data)}
    return Dataset(header, cols, str(path), bad)
