"""Bundled data."""

from __future__ import annotations

import csv
import hashlib
from importlib import resources

import numpy as np

GEYSER_SHA256 = "35755e109446ec911891b1eae5cb33bc2f18367ce712145e4f9d27d19f575bad"


def geyser_path():
    """Path to the Old Faithful CSV (272 rows; eruptions, waiting)."""
    return resources.files("lpstat") / "data" / "geyser.csv"


def verify_geyser() -> str:
    """Return the file digest, raising if it differs from the recorded one."""
    digest = hashlib.sha256(geyser_path().read_bytes()).hexdigest()
    if digest != GEYSER_SHA256:
        raise RuntimeError(f"bundled geyser.csv was modified (sha256 {digest})")
    return digest


def load_geyser() -> dict[str, np.ndarray]:
    verify_geyser()
    with geyser_path().open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in ("eruptions", "waiting")}
