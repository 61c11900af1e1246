"""CSV schema shared with the pxpfsa CLI output, plus a checked loader.

Kept in lockstep with the producer's documented headers; renderers fail with
the offending column named rather than plotting garbage.
"""

from __future__ import annotations

import csv
from pathlib import Path


class FigureDataError(Exception):
    """Base class for CSV problems."""


class MissingColumnError(FigureDataError):
    def __init__(self, path, column):
        self.column = column
        super().__init__(f"{path}: missing required column {column!r}")


class EmptyTableError(FigureDataError):
    def __init__(self, path):
        super().__init__(f"{path}: no data rows")


# categorical columns stay strings; everything else parses as float
_TEXT_COLUMNS = {"variant", "method"}

TARGET_SCHEMAS = {
    "z2-beta-compare": {
        "lanczos.csv": ("n", "alpha", "beta"),
        "fsa.csv": ("n", "beta", "delta", "epsilon"),
    },
    "z2-complexity": {
        "z2-complexity.csv": ("lambda", "t", "return_probability", "c_fsa",
                              "leakage_fsa", "c_lanczos", "leakage_lanczos"),
    },
    "z3-summary": {
        "z3-betas.csv": ("variant", "method", "n", "beta"),
        "z3-dynamics.csv": ("variant", "t", "return_probability", "c_fsa",
                            "c_lanczos"),
    },
    "z3-exact": {
        "z3-exact-betas.csv": ("n", "beta", "su2"),
        "z3-exact-dynamics.csv": ("t", "return_probability", "c_fsa",
                                  "leakage_fsa"),
    },
    "vacuum-complexity": {
        "vacuum-dynamics.csv": ("variant", "t", "return_probability", "c_fsa",
                                "leakage_fsa", "up_density"),
    },
    "fsa-errors-z2": {
        "fsa-errors-z2.csv": ("L", "step", "delta", "epsilon"),
    },
    "fsa-errors-vacuum": {
        "fsa-errors-vacuum.csv": ("L", "step", "delta", "epsilon"),
    },
    "error3-scan": {
        "error3-scan.csv": ("h", "error3", "ln_error3"),
    },
    "q-scan": {
        "q-fits.csv": ("lambda", "q", "alpha", "residual", "delta_av"),
        "q-betas.csv": ("lambda", "n", "beta"),
    },
}


def load_table(path, required) -> dict:
    """Read a CSV into named columns, checking the header first."""
    path = Path(path)
    with open(path, newline="") as stream:
        reader = csv.DictReader(stream)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MissingColumnError(path, column)
        rows = list(reader)
    if not rows:
        raise EmptyTableError(path)
    table = {}
    for column in required:
        raw = [row[column] for row in rows]
        if column in _TEXT_COLUMNS:
            table[column] = raw
        else:
            try:
                table[column] = [float(x) for x in raw]
            except (TypeError, ValueError) as exc:
                raise FigureDataError(
                    f"{path}: column {column!r} is not numeric: {exc}") from exc
    return table
