"""Acceptance gate for the figure package.

Runs the simulator CLI (the only coupling point — files on disk) to
produce a default-configuration 20-seed sweep, then checks the rendered
output: exactly four figures, log-scaled BER axes, every setup present,
and Eve's plotted BER never at or below 0.2.
"""

import shutil
import subprocess
import warnings

import matplotlib.pyplot as plt
import pytest

from vlcfigs import build_figures, render_all

SEEDS = ",".join(str(s) for s in range(1, 21))
STEMS = ("secrecy_capacity", "ber_bob", "ber_eve", "utility")


@pytest.fixture(scope="module")
def default_sweep(tmp_path_factory):
    """Default-config sweep over 20 seeds, produced by the installed CLI."""
    exe = shutil.which("vlcsec")
    assert exe is not None, "simulator CLI is not installed"
    results = tmp_path_factory.mktemp("results")
    proc = subprocess.run(
        [exe, "sweep", "--out", str(results), "--seeds", SEEDS],
        capture_output=True, text=True, timeout=1740,
    )
    assert proc.returncode == 0, proc.stderr
    return results


@pytest.fixture(scope="module")
def figures(default_sweep):
    figs = build_figures(default_sweep)
    yield figs
    plt.close("all")


def test_emits_exactly_four_figures_without_error(default_sweep, tmp_path):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        written = render_all(default_sweep, tmp_path / "figs")
    assert sorted(p.name for p in written) == sorted(
        f"{stem}.{ext}" for stem in STEMS for ext in ("png", "svg")
    )
    assert all(p.stat().st_size > 0 for p in written)


def test_ber_axes_are_log_scaled(figures):
    assert figures["ber_bob"].axes[0].get_yscale() == "log"
    assert figures["ber_eve"].axes[0].get_yscale() == "log"


def test_all_three_setups_are_present(figures):
    for fig in figures.values():
        labels = [line.get_label() for line in fig.axes[0].lines]
        setups = {label.split()[0] for label in labels}
        assert setups == {"setup1", "setup2", "setup3"}
        assert len(labels) == 6  # three setups x two modes


def test_eve_ber_never_plots_at_or_below_threshold(figures):
    lines = figures["ber_eve"].axes[0].lines
    floor = min(line.get_ydata().min() for line in lines)
    assert floor > 0.2, f"Eve BER figure dips to {floor}"
