"""One renderer per reproduction target plus a dispatcher.

Renderers are pure CSV-to-image transforms: no physics is recomputed here.
Each panel is written as PNG and SVG with fixed size and no embedded
timestamps, so identical inputs give identical images.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "pxpfsa-figures"  # reproducible element ids

import matplotlib.pyplot as plt
import numpy as np

from .schema import TARGET_SCHEMAS, FigureDataError, load_table

_FIGSIZE = (8.0, 5.0)
_DPI = 120
FORMATS = ("png", "svg")


@dataclass
class PanelSpec:
    """What to render: a known target, its data directory, an output stem.

    Axis labels and the log flag, when set, override every axes of the panel;
    renderers otherwise pick their own.
    """

    target: str
    data_dir: Path
    out_stem: Path
    formats: tuple = FORMATS
    xlabel: str | None = None
    ylabel: str | None = None
    log_y: bool = False

    def __post_init__(self):
        if self.target not in TARGET_SCHEMAS:
            raise FigureDataError(
                f"unknown panel target {self.target!r}; expected one of "
                f"{', '.join(sorted(TARGET_SCHEMAS))}")
        self.data_dir = Path(self.data_dir)
        self.out_stem = Path(self.out_stem)

    def tables(self) -> dict:
        out = {}
        for filename, columns in TARGET_SCHEMAS[self.target].items():
            out[filename] = load_table(self.data_dir / filename, columns)
        return out


def _groups(keys):
    """Stable unique values in first-seen order."""
    seen = []
    for key in keys:
        if key not in seen:
            seen.append(key)
    return seen


def _select(table, key, key_column):
    """Rows of the table whose key column equals `key`, minus that column."""
    mask = [k == key for k in table[key_column]]
    return {c: [v for v, m in zip(vals, mask) if m]
            for c, vals in table.items() if c != key_column}


def _save(fig, spec: PanelSpec):
    spec.out_stem.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in spec.formats:
        path = spec.out_stem.with_suffix(f".{fmt}")
        metadata = {"Date": None} if fmt == "svg" else None
        fig.savefig(path, format=fmt, dpi=_DPI, metadata=metadata)
        written.append(path)
    plt.close(fig)
    return written


def _render_z2_beta_compare(tables):
    lan, fsa = tables["lanczos.csv"], tables["fsa.csv"]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(lan["n"][1:], lan["beta"][1:], "o-", label="three-term recursion")
    ax.plot(fsa["n"], fsa["beta"], "s--", label="forward scattering")
    ax.set_xlabel("n")
    ax.set_ylabel("beta_n")
    ax.set_title("chain coefficients: recursion vs forward scattering")
    ax.legend()
    return fig


def _render_z2_complexity(tables):
    table = tables["z2-complexity.csv"]
    fig, axes = plt.subplots(3, 1, figsize=(_FIGSIZE[0], 9.0), sharex=True)
    for lam in _groups(table["lambda"]):
        sub = _select(table, lam, "lambda")
        label = f"strength {lam:g}"
        axes[0].plot(sub["t"], sub["return_probability"], label=label)
        axes[1].plot(sub["t"], sub["c_fsa"], label=label)
        axes[2].plot(sub["t"], sub["c_lanczos"], label=label)
    axes[0].set_ylabel("return probability")
    axes[1].set_ylabel("chain complexity (closed)")
    axes[2].set_ylabel("chain complexity (recursion)")
    axes[2].set_xlabel("t")
    axes[0].legend(fontsize=8)
    return fig


def _render_z3_summary(tables):
    betas, dyn = tables["z3-betas.csv"], tables["z3-dynamics.csv"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(2 * _FIGSIZE[0] / 1.6, 4.0))
    for variant in _groups(betas["variant"]):
        for method in ("lanczos", "fsa"):
            mask = [v == variant and m == method
                    for v, m in zip(betas["variant"], betas["method"])]
            ns = [n for n, keep in zip(betas["n"], mask) if keep]
            bs = [b for b, keep in zip(betas["beta"], mask) if keep]
            style = "o-" if method == "fsa" else ".--"
            ax1.plot(ns, bs, style, label=f"{variant} {method}")
    ax1.set_xlabel("n")
    ax1.set_ylabel("beta_n")
    ax1.legend(fontsize=7)
    for variant in _groups(dyn["variant"]):
        sub = _select(dyn, variant, "variant")
        ax2.plot(sub["t"], sub["return_probability"], label=f"R(t) {variant}")
        ax2.plot(sub["t"], np.asarray(sub["c_fsa"]) / max(max(sub["c_fsa"]), 1e-12),
                 "--", label=f"scaled C {variant}")
    ax2.set_xlabel("t")
    ax2.legend(fontsize=7)
    fig.suptitle("period-3 initial state: coefficients and dynamics")
    return fig


def _render_z3_exact(tables):
    betas, dyn = tables["z3-exact-betas.csv"], tables["z3-exact-dynamics.csv"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(2 * _FIGSIZE[0] / 1.6, 4.0))
    ax1.plot(betas["n"], betas["beta"], "o-", label="chain")
    ax1.plot(betas["n"], betas["su2"], "k--", label="exact ladder")
    ax1.set_xlabel("n")
    ax1.set_ylabel("beta_n")
    ax1.legend()
    ax2.plot(dyn["t"], dyn["return_probability"], label="return probability")
    ax2.plot(dyn["t"], dyn["c_fsa"], label="complexity")
    ax2.plot(dyn["t"], dyn["leakage_fsa"], label="leakage")
    ax2.set_xlabel("t")
    ax2.legend(fontsize=8)
    fig.suptitle("strong deformation: exact ladder chain")
    return fig


def _render_vacuum_complexity(tables):
    table = tables["vacuum-dynamics.csv"]
    fig, axes = plt.subplots(3, 1, figsize=(_FIGSIZE[0], 9.0), sharex=True)
    for variant in _groups(table["variant"]):
        sub = _select(table, variant, "variant")
        axes[0].plot(sub["t"], sub["return_probability"], label=variant)
        axes[1].plot(sub["t"], sub["c_fsa"], label=variant)
        axes[2].plot(sub["t"], sub["up_density"], label=variant)
    axes[0].set_ylabel("return probability")
    axes[1].set_ylabel("chain complexity")
    axes[2].set_ylabel("up density")
    axes[2].set_xlabel("t")
    axes[0].legend(fontsize=8)
    return fig


def _render_fsa_errors(tables, filename):
    table = tables[filename]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for size in _groups(table["L"]):
        sub = _select(table, size, "L")
        steps = sub["step"]
        eps = np.asarray(sub["epsilon"], dtype=float)
        keep = eps > 0
        ax.plot(np.asarray(steps)[keep], np.log(eps[keep]), "o-",
                label=f"L={size:g}")
    ax.set_xlabel("step n")
    ax.set_ylabel("ln epsilon_n")
    ax.legend(fontsize=8)
    ax.set_title("backward-step errors by chain step")
    return fig


def _render_error3_scan(tables):
    table = tables["error3-scan.csv"]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(table["h"], table["ln_error3"], "-")
    ax.set_xlabel("h")
    ax.set_ylabel("ln error3")
    ax.set_title("third-step error vs window-term strength")
    return fig


def _render_q_scan(tables):
    fits, betas = tables["q-fits.csv"], tables["q-betas.csv"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(2 * _FIGSIZE[0] / 1.6, 4.0))
    for lam in _groups(betas["lambda"]):
        sub = _select(betas, lam, "lambda")
        ax1.plot(sub["n"], sub["beta"], "o-", label=f"strength {lam:g}")
    ax1.set_xlabel("n")
    ax1.set_ylabel("beta_n")
    ax1.legend(fontsize=8)
    ax2.plot(fits["lambda"], fits["q"], "s-")
    ax2.set_xlabel("strength")
    ax2.set_ylabel("fitted q")
    fig.suptitle("deformation fits across coupling strengths")
    return fig


_RENDERERS = {
    "z2-beta-compare": _render_z2_beta_compare,
    "z2-complexity": _render_z2_complexity,
    "z3-summary": _render_z3_summary,
    "z3-exact": _render_z3_exact,
    "vacuum-complexity": _render_vacuum_complexity,
    "error3-scan": _render_error3_scan,
    "q-scan": _render_q_scan,
}


def render(spec: PanelSpec) -> list:
    """Validate the target's CSVs and write its panel; returns written paths."""
    tables = spec.tables()  # all schema errors surface before any file is written
    if spec.target in ("fsa-errors-z2", "fsa-errors-vacuum"):
        fig = _render_fsa_errors(tables, f"{spec.target}.csv")
    else:
        fig = _RENDERERS[spec.target](tables)
    for ax in fig.axes:
        if spec.xlabel is not None:
            ax.set_xlabel(spec.xlabel)
        if spec.ylabel is not None:
            ax.set_ylabel(spec.ylabel)
        if spec.log_y:
            ax.set_yscale("log")
    return _save(fig, spec)
