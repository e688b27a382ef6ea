"""
Render the four comparison figures from a results directory.

Input is the simulator's on-disk layout

    <results>/<scenario>/<mode>/seed<k>.csv

with the standard episode schema (``slot`` plus per-slot metric
columns).  Each figure plots one metric against the time slot, one line
per (scenario, mode) pair.  When several seeds are present the line is
the per-slot mean across seeds, and by default it is smoothed with a
50-slot rolling mean (``min_periods=1``, so early slots average what
exists so far).  Pass ``smooth_window=1`` for the raw per-slot series.

Rendering is read-only over its inputs and idempotent: the same inputs
produce byte-identical PNG/SVG files (the SVG hash salt and date
metadata are pinned).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib as mpl
import matplotlib.pyplot as plt
import pandas as pd

DEFAULT_SMOOTH = 50

# values at or below zero cannot be drawn on a log axis; show them at a
# display floor instead of leaving gaps in the line
LOG_FLOOR = 1e-18

_SVG_HASH_SALT = "vlcfigs"

_MODE_STYLES = ("-", "--", ":", "-.")


class RenderError(RuntimeError):
    """Unusable results directory (missing or holding no episode CSVs)."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: which CSV column to plot and how to scale/label it."""

    column: str
    filename: str
    title: str
    ylabel: str
    yscale: str = "linear"


FIGURES = (
    FigureSpec(
        column="C_s_bits",
        filename="secrecy_capacity",
        title="Secrecy capacity",
        ylabel="secrecy capacity (bits/s/Hz)",
    ),
    FigureSpec(
        column="ber_bob",
        filename="ber_bob",
        title="Bob's bit error rate",
        ylabel="bit error probability",
        yscale="log",
    ),
    FigureSpec(
        column="ber_eve",
        filename="ber_eve",
        title="Eve's bit error rate",
        ylabel="bit error probability",
        yscale="log",
    ),
    FigureSpec(
        column="utility",
        filename="utility",
        title="Utility",
        ylabel="utility",
    ),
)


def discover_runs(results_dir: Path | str) -> dict[tuple[str, str], list[Path]]:
    """Map (scenario, mode) to the sorted seed CSVs found under it.

    Raises RenderError when the directory is missing or holds no episode
    CSVs at all; warns about (scenario, mode) cells that exist for some
    scenarios but not others, so a partially written sweep is visible.
    """
    root = Path(results_dir)
    if not root.is_dir():
        raise RenderError(f"results directory not found: {root}")
    runs: dict[tuple[str, str], list[Path]] = {}
    for csv_path in sorted(root.glob("*/*/seed*.csv")):
        key = (csv_path.parent.parent.name, csv_path.parent.name)
        runs.setdefault(key, []).append(csv_path)
    if not runs:
        raise RenderError(
            f"no episode CSVs under {root} "
            "(expected <scenario>/<mode>/seed<k>.csv)"
        )
    scenarios = sorted({s for s, _ in runs})
    modes = sorted({m for _, m in runs})
    for scenario in scenarios:
        for mode in modes:
            if (scenario, mode) not in runs:
                warnings.warn(
                    f"no runs for {scenario}/{mode}; its line will be missing",
                    stacklevel=2,
                )
    return runs


def load_frames(
    runs: dict[tuple[str, str], list[Path]],
) -> dict[tuple[str, str], list[tuple[Path, pd.DataFrame]]]:
    """Read every episode CSV once, keyed like `runs`."""
    return {
        key: [(p, pd.read_csv(p)) for p in paths] for key, paths in runs.items()
    }


def column_curves(
    frames: dict[tuple[str, str], list[tuple[Path, pd.DataFrame]]],
    column: str,
) -> dict[tuple[str, str], pd.Series]:
    """Per-slot cross-seed mean of one metric column for every run cell.

    Episodes that lack the column are skipped with a warning; a cell
    where no episode carries the column is dropped entirely (again with
    the per-file warnings), so one malformed series cannot take the
    whole figure down.
    """
    curves: dict[tuple[str, str], pd.Series] = {}
    for key, pairs in frames.items():
        per_seed = []
        for path, df in pairs:
            if column not in df.columns:
                warnings.warn(f"{path}: no column {column!r}; skipped", stacklevel=2)
                continue
            per_seed.append(df.set_index("slot")[column])
        if per_seed:
            curves[key] = pd.concat(per_seed, axis=1).mean(axis=1)
    return curves


def smooth(series: pd.Series, window: int) -> pd.Series:
    """Rolling mean over `window` slots; window 1 is the identity."""
    if window < 1:
        raise ValueError(f"smoothing window must be >= 1, got {window}")
    if window == 1:
        return series
    return series.rolling(window, min_periods=1).mean()


def build_figure(
    spec: FigureSpec, curves: dict[tuple[str, str], pd.Series]
) -> plt.Figure:
    """One metric figure: a line per (scenario, mode), labelled legend.

    Colors follow the scenario and line styles the mode, so the same
    scenario is visually linked across modes.  On log axes, values at
    or below zero are drawn at LOG_FLOOR rather than dropped.
    """
    scenarios = sorted({s for s, _ in curves})
    modes = sorted({m for _, m in curves})
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for scenario, mode in sorted(curves):
        series = curves[(scenario, mode)]
        if spec.yscale == "log":
            series = series.clip(lower=LOG_FLOOR)
        ax.plot(
            series.index,
            series.to_numpy(),
            label=f"{scenario} {mode}",
            color=colors[scenarios.index(scenario) % len(colors)],
            linestyle=_MODE_STYLES[modes.index(mode) % len(_MODE_STYLES)],
            linewidth=1.2,
        )
    ax.set_xlabel("time slot")
    ax.set_ylabel(spec.ylabel)
    ax.set_yscale(spec.yscale)
    ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    if curves:
        ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def build_figures(
    results_dir: Path | str, smooth_window: int = DEFAULT_SMOOTH
) -> dict[str, plt.Figure]:
    """All four figures for a results directory, keyed by file stem."""
    runs = discover_runs(results_dir)
    frames = load_frames(runs)
    figures: dict[str, plt.Figure] = {}
    for spec in FIGURES:
        curves = column_curves(frames, spec.column)
        smoothed = {key: smooth(series, smooth_window) for key, series in curves.items()}
        figures[spec.filename] = build_figure(spec, smoothed)
    return figures


def render_all(
    results_dir: Path | str,
    out_dir: Path | str,
    smooth_window: int = DEFAULT_SMOOTH,
) -> list[Path]:
    """Write every figure as PNG and SVG; return the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    figures = build_figures(results_dir, smooth_window)
    written: list[Path] = []
    for stem, fig in figures.items():
        png = out / f"{stem}.png"
        fig.savefig(png, dpi=150)
        svg = out / f"{stem}.svg"
        with mpl.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
            fig.savefig(svg, metadata={"Date": None})
        plt.close(fig)
        written.extend([png, svg])
    return written
