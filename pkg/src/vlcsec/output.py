"""
On-disk artifacts: per-episode CSV logs, Q-table checkpoints, summaries.

Layout under an output root:

    <scenario>/<mode>/seed<k>.csv          per-slot log (schema below)
    <scenario>/<mode>/seed<k>.qtable.json  learned Q-table checkpoint
    <scenario>/<mode>/summary.json         final-window stats per seed
    sweep_summary.json                     across-seed aggregates (sweeps)

CSV schema (N = number of luminaires):

    slot,M,w_1..w_N,C_s_bits,ber_bob,ber_eve,utility,epsilon,greedy

Reals are rendered with 17 significant digits (lossless for doubles),
greedy as 0/1, lines end with a bare newline.  Identical (config, seed)
runs therefore produce byte-identical files.

The Q-table checkpoint is versioned ("qtable-v1"): a flat list of
records, one per visited (state, action) entry with a nonzero value,
sorted by state key then action index.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .experiment import TimeSlotLog
from .qlearn import QTable

QTABLE_FORMAT = "qtable-v1"
SUMMARY_FORMAT = "summary-v1"
SWEEP_FORMAT = "sweep-summary-v1"


def csv_header(num_leds: int) -> str:
    ws = ",".join(f"w_{n}" for n in range(1, num_leds + 1))
    return f"slot,M,{ws},C_s_bits,ber_bob,ber_eve,utility,epsilon,greedy"


def _real(x: float) -> str:
    return format(x, ".17g")


def write_episode_csv(path: Path, logs: Sequence[TimeSlotLog]) -> None:
    if not logs:
        raise ValueError("refusing to write an empty episode log")
    n = len(logs[0].weights)
    rows = [csv_header(n)]
    for log in logs:
        rows.append(
            ",".join(
                [
                    str(log.slot),
                    str(log.order),
                    *(_real(w) for w in log.weights),
                    _real(log.secrecy_capacity),
                    _real(log.ber_bob),
                    _real(log.ber_eve),
                    _real(log.utility),
                    _real(log.epsilon),
                    "1" if log.greedy else "0",
                ]
            )
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(rows) + "\n", encoding="ascii", newline="")


def write_qtable(path: Path, table: QTable) -> None:
    entries = []
    for state, row in table.items():
        for idx in row.nonzero()[0]:
            entries.append(
                {
                    "ber_bob_bin": state.ber_bob_bin,
                    "ber_eve_bin": state.ber_eve_bin,
                    "cs_bin": state.cs_bin,
                    "scenario_id": state.scenario_id,
                    "action": int(idx),
                    "q": float(row[idx]),
                }
            )
    entries.sort(
        key=lambda e: (
            e["ber_bob_bin"],
            e["ber_eve_bin"],
            e["cs_bin"],
            e["scenario_id"],
            e["action"],
        )
    )
    doc = {
        "format": QTABLE_FORMAT,
        "n_actions": table.space.total,
        "n_states": len(table),
        "entries": entries,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="ascii")


def write_summary(path: Path, scenario: str, mode: str, window: int,
                  per_seed: dict[int, dict]) -> None:
    doc = {
        "format": SUMMARY_FORMAT,
        "scenario": scenario,
        "mode": mode,
        "window": window,
        "seeds": {str(seed): rec for seed, rec in sorted(per_seed.items())},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="ascii")


def _mean_std(values: list[float]) -> dict:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n  # population variance
    return {"mean": mean, "std": var**0.5}


def sweep_aggregate(per_seed: dict[int, dict]) -> dict:
    """Across-seed mean/std of each final-window mean metric."""
    agg = {}
    for metric in ("secrecy_capacity", "ber_bob", "ber_eve", "utility"):
        agg[metric] = _mean_std([rec[metric]["mean"] for rec in per_seed.values()])
    agg["greedy_fraction"] = _mean_std(
        [rec["greedy_fraction"] for rec in per_seed.values()]
    )
    return agg


def write_sweep_summary(
    path: Path,
    seeds: Sequence[int],
    window: int,
    cells: dict[str, dict[str, dict[int, dict]]],
) -> None:
    """cells: scenario -> mode -> seed -> episode summary record."""
    doc = {
        "format": SWEEP_FORMAT,
        "seeds": list(seeds),
        "window": window,
        "scenarios": {
            scenario: {
                mode: {
                    "aggregate": sweep_aggregate(per_seed),
                    "per_seed": {str(s): rec for s, rec in sorted(per_seed.items())},
                }
                for mode, per_seed in sorted(modes.items())
            }
            for scenario, modes in sorted(cells.items())
        },
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="ascii")
