"""Acceptance gate.

One test per headline requirement, each at its stated tolerance and
time budget.  The 20-seed sweep is expensive, so it runs once in a
module-scoped fixture and feeds every trend assertion; everything else
recomputes from scratch inside its own budget.
"""

import math
import time

import numpy as np
import pytest

from vlcsec import cli
from vlcsec.config import load_config
from vlcsec.metrics import (
    GaussianMixture,
    mixture_entropy,
    mutual_information,
    pam_ber,
    secrecy_capacity,
)
from vlcsec.oracles import mc_ber_oracle
from vlcsec.pam import DriveParams, build_constellation
from vlcsec.validate import _BER_TARGET_X0, _gain_for_x0, bandit_trial

# unit-amplitude drive: alpha * I_DC = 1, so gains are easy to reason about
UNIT_DRIVE = DriveParams(dc_bias=10.0, modulation_index=0.1)

SWEEP_SEEDS = list(range(1, 21))
SETUPS = ("setup1", "setup2", "setup3")
MODES = ("adaptive", "fixed64")


def test_entropy_matches_gaussian_closed_form():
    """Single-component entropy within 1e-6 bits of 0.5*log2(2*pi*e*s^2)."""
    start = time.perf_counter()
    for sigma in (1e-6, 1.0, 1e3):
        got = mixture_entropy(GaussianMixture(means=(0.0,), sigma=sigma))
        want = 0.5 * math.log2(2.0 * math.pi * math.e * sigma * sigma)
        assert abs(got - want) < 1e-6
    assert time.perf_counter() - start < 1.0


def test_mutual_information_saturates_at_both_snr_extremes():
    """8-PAM: I -> 0 as the gain vanishes and I -> 3 bits as it explodes."""
    start = time.perf_counter()
    c = build_constellation(8, UNIT_DRIVE)
    assert mutual_information(c, 1e-3, 1.0) < 0.01
    assert abs(mutual_information(c, 1e6, 1.0) - 3.0) < 0.01
    assert time.perf_counter() - start < 1.0


def test_ber_closed_form_agrees_with_monte_carlo():
    """pam_ber within 3 binomial standard errors of a 1e6-symbol
    Gray-coded transmission for M in {2,4,8,16} at error rates spanning
    roughly 1e-1 down to 1e-3."""
    start = time.perf_counter()
    sigma = 1.0
    for M, x0_targets in sorted(_BER_TARGET_X0.items()):
        es = build_constellation(M, UNIT_DRIVE).avg_symbol_energy
        for x0 in x0_targets:
            g = _gain_for_x0(M, x0, sigma, es)
            analytic = pam_ber(M, g, sigma, es)
            estimate, se = mc_ber_oracle(
                M, g, sigma, es, n_symbols=1_000_000, seed=2_000 + M
            )
            assert abs(analytic - estimate) <= 3.0 * se, (
                f"M={M} x0={x0}: |{analytic} - {estimate}| > 3*{se}"
            )
    assert time.perf_counter() - start < 120.0


def test_secrecy_capacity_is_zero_and_antisymmetric():
    """Identical channels give |C_s| < 1e-9; swapping the receivers
    flips the sign exactly."""
    c = build_constellation(16, DriveParams(dc_bias=5.0 / 0.44))
    sigma = 3.622429984166988e-07
    g_bob = 0.2376 * 9.04e-06
    g_eve = 0.2376 * 5.06e-06
    assert abs(secrecy_capacity(c, g_bob, sigma, g_bob, sigma)) < 1e-9
    forward = secrecy_capacity(c, g_bob, sigma, g_eve, sigma)
    reverse = secrecy_capacity(c, g_eve, sigma, g_bob, sigma)
    assert forward == -reverse
    assert forward > 0.0


def test_bandit_converges_to_the_best_action():
    """Ten fixed-utility arms, the production schedule (lambda = beta =
    0.5, epsilon 1.0 -> 0.1 over 600 slots), 2000 slots: the greedy
    choice is the optimal arm in at least 95% of the final 200 slots,
    for at least 18 of 20 seeds."""
    start = time.perf_counter()
    hits = sum(1 for seed in range(1, 21) if bandit_trial(seed) >= 0.95)
    assert hits >= 18, f"only {hits}/20 seeds converged"
    assert time.perf_counter() - start < 10.0


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    """20-seed sweep of the bundled configuration, both modes, all
    scenarios.  Returns (results[scenario][mode][seed] -> final-window
    summary, elapsed seconds)."""
    cfg = load_config(None)
    out = tmp_path_factory.mktemp("sweep")
    start = time.perf_counter()
    results, failures = cli._execute(
        cfg, list(MODES), SWEEP_SEEDS, out, quiet=True
    )
    elapsed = time.perf_counter() - start
    assert not failures, f"sweep cells failed: {failures}"
    return results, elapsed


def test_sweep_completes_within_budget(sweep):
    results, elapsed = sweep
    assert elapsed < 1800.0
    for setup in SETUPS:
        for mode in MODES:
            assert sorted(results[setup][mode]) == SWEEP_SEEDS


def test_adaptive_beats_the_fixed_baseline_on_secrecy(sweep):
    """Scenario setup1: the learned policy's final-window mean secrecy
    capacity exceeds the fixed-order baseline's by at least 0.05 bits
    in at least 15 of 20 seeds."""
    results, _ = sweep
    wins = 0
    for seed in SWEEP_SEEDS:
        adaptive = results["setup1"]["adaptive"][seed]["secrecy_capacity"]["mean"]
        baseline = results["setup1"]["fixed64"][seed]["secrecy_capacity"]["mean"]
        if adaptive - baseline >= 0.05:
            wins += 1
    assert wins >= 15, f"secrecy advantage >= 0.05 bits in only {wins}/20 seeds"


def test_eavesdropper_ber_stays_high_everywhere(sweep):
    """Across-seed mean of Eve's final-window BER exceeds 0.2 for every
    (scenario, mode) cell."""
    results, _ = sweep
    for setup in SETUPS:
        for mode in MODES:
            vals = [
                results[setup][mode][seed]["ber_eve"]["mean"]
                for seed in SWEEP_SEEDS
            ]
            mean = float(np.mean(vals))
            assert mean > 0.2, f"{setup}/{mode}: mean Eve BER {mean} <= 0.2"


def test_adaptive_utility_tracks_or_beats_the_baseline(sweep):
    """Mean final-window utility: adaptive >= baseline in setup1 and
    setup2; in setup3 adaptive may trail, but by no more than 5%."""
    results, _ = sweep

    def mean_utility(setup, mode):
        vals = [
            results[setup][mode][seed]["utility"]["mean"] for seed in SWEEP_SEEDS
        ]
        return float(np.mean(vals))

    for setup in ("setup1", "setup2"):
        adaptive, baseline = mean_utility(setup, "adaptive"), mean_utility(setup, "fixed64")
        assert adaptive >= baseline, (
            f"{setup}: adaptive utility {adaptive} < baseline {baseline}"
        )
    adaptive, baseline = mean_utility("setup3", "adaptive"), mean_utility("setup3", "fixed64")
    assert adaptive >= baseline or abs(adaptive - baseline) <= 0.05 * abs(baseline), (
        f"setup3: adaptive utility {adaptive} trails baseline {baseline} by more than 5%"
    )


def test_episode_artifacts_are_reproducible(tmp_path):
    """Same configuration and seed twice -> byte-identical CSVs."""
    trees = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert cli.main(["run", "--out", str(out), "--seed", "5"]) == 0
        trees.append(
            {
                str(p.relative_to(out)): p.read_bytes()
                for p in sorted(out.rglob("*.csv"))
            }
        )
    assert trees[0] and trees[0] == trees[1]
