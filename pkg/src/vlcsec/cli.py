"""
Command-line entry point.

    vlcsec run      --config c.toml --out results [--seed 7] [--mode all]
    vlcsec sweep    --config c.toml --out results --seeds 1,2,3 [--mode all]
    vlcsec validate [--config c.toml] [--validate-level fast|full]

Exit codes: 0 success; 1 configuration or usage error; 2 runtime
failure; 3 validation (oracle) failure.

`run` executes one seed for every (scenario, mode) cell and writes the
CSV/Q-table/summary artifacts; `sweep` does the same over a seed list
and adds an across-seed sweep_summary.json; `validate` runs the oracle
suite and prints a pass/fail table.  Without --config the bundled
default configuration is used.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import (
    ConfigError,
    SimConfig,
    build_scenario,
    load_config,
    run_config,
)
from .experiment import MetricsEngine, build_action_space, run_episode, summarize
from .output import write_episode_csv, write_qtable, write_summary, write_sweep_summary
from .qlearn import QTable
from .validate import run_validation

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    """argparse that treats bad usage as exit code 1, not 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _build_parser() -> _Parser:
    parser = _Parser(prog="vlcsec", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--config", type=Path, default=None,
                       help="TOML configuration (default: bundled)")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory (default: ./out)")
        p.add_argument("--mode", choices=("adaptive", "fixed64", "all"),
                       default="all", help="which modes to run")

    p_run = sub.add_parser("run", help="run one seed per (scenario, mode)")
    common(p_run)
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the config seed")

    p_sweep = sub.add_parser("sweep", help="run a list of seeds and aggregate")
    common(p_sweep)
    p_sweep.add_argument("--seeds", type=str, required=True,
                         help="comma-separated seed list, e.g. 1,2,3")

    p_val = sub.add_parser("validate", help="run the oracle self-check suite")
    p_val.add_argument("--config", type=Path, default=None,
                       help="TOML configuration (parsed for validity)")
    p_val.add_argument("--validate-level", choices=("fast", "full"),
                       default="fast", help="oracle suite depth")
    return parser


def _selected_modes(cfg: SimConfig, flag: str) -> list[str]:
    if flag == "all":
        return list(cfg.modes)
    return [flag]


@dataclass
class _Cell:
    scenario_name: str
    mode: str
    seed: int


def _run_cell(cfg: SimConfig, scenario, engine: MetricsEngine, cell: _Cell,
              out_dir: Path) -> dict:
    rc = run_config(cfg, cell.mode, seed=cell.seed)
    space = build_action_space(scenario, rc)
    table = QTable(space)
    logs = run_episode(scenario, rc, engine=engine, qtable=table)
    mode_dir = out_dir / cell.scenario_name / cell.mode
    write_episode_csv(mode_dir / f"seed{cell.seed}.csv", logs)
    write_qtable(mode_dir / f"seed{cell.seed}.qtable.json", table)
    return summarize(logs, rc.summary_window)


def _execute(cfg: SimConfig, modes: list[str], seeds: list[int], out_dir: Path,
              quiet: bool = False) -> tuple[dict, list[tuple[_Cell, Exception]]]:
    """Run every (scenario, mode, seed) cell; one shared engine per scenario.

    Episodes are independent, so they fan out over a small thread pool;
    results and artifacts are deterministic regardless of scheduling.
    """
    scenarios = {sdef.name: build_scenario(cfg, sdef) for sdef in cfg.scenarios}
    # engine parameters (utility weights, quadrature, clamping) do not
    # depend on the mode, so one engine per scenario serves every cell
    engines = {
        name: MetricsEngine(sc, run_config(cfg, modes[0]))
        for name, sc in scenarios.items()
    }
    cells = [
        _Cell(name, mode, seed)
        for name in scenarios
        for mode in modes
        for seed in seeds
    ]
    results: dict[str, dict[str, dict[int, dict]]] = {}
    failures: list[tuple[_Cell, Exception]] = []

    def work(cell: _Cell) -> dict | Exception:
        try:
            return _run_cell(
                cfg, scenarios[cell.scenario_name], engines[cell.scenario_name],
                cell, out_dir,
            )
        except Exception as exc:
            return exc

    with ThreadPoolExecutor(max_workers=4) as pool:
        outcomes = list(pool.map(work, cells))
    for cell, outcome in zip(cells, outcomes):
        if isinstance(outcome, Exception):
            failures.append((cell, outcome))
            continue
        record = outcome
        results.setdefault(cell.scenario_name, {}).setdefault(cell.mode, {})[
            cell.seed
        ] = record
        if not quiet:
            u = record["utility"]["mean"]
            cs = record["secrecy_capacity"]["mean"]
            print(
                f"{cell.scenario_name}/{cell.mode} seed {cell.seed}: "
                f"mean C_s {cs:.4f} bits, mean utility {u:.4f} "
                f"(final {record['window']} slots)"
            )

    for scenario_name, by_mode in results.items():
        for mode, per_seed in by_mode.items():
            write_summary(
                out_dir / scenario_name / mode / "summary.json",
                scenario_name, mode, cfg.summary_window, per_seed,
            )
    return results, failures


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    modes = _selected_modes(cfg, args.mode)
    seed = cfg.seed if args.seed is None else args.seed
    _, failures = _execute(cfg, modes, [seed], args.out)
    return _report_failures(failures)


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    modes = _selected_modes(cfg, args.mode)
    try:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip() != ""]
    except ValueError:
        print(f"vlcsec: error: malformed --seeds list: {args.seeds!r}", file=sys.stderr)
        return EXIT_CONFIG
    if not seeds:
        print("vlcsec: error: --seeds list is empty", file=sys.stderr)
        return EXIT_CONFIG
    if len(set(seeds)) != len(seeds):
        print("vlcsec: error: --seeds contains duplicates", file=sys.stderr)
        return EXIT_CONFIG
    results, failures = _execute(cfg, modes, seeds, args.out)
    write_sweep_summary(args.out / "sweep_summary.json", seeds, cfg.summary_window,
                        results)
    return _report_failures(failures)


def _report_failures(failures) -> int:
    if not failures:
        return EXIT_OK
    for cell, exc in failures:
        print(
            f"vlcsec: {cell.scenario_name}/{cell.mode} seed {cell.seed} "
            f"failed: {exc}",
            file=sys.stderr,
        )
    return EXIT_RUNTIME


def cmd_validate(args) -> int:
    if args.config is not None:
        load_config(args.config)  # config problems are exit 1, not 3
    results = run_validation(args.validate_level)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.seconds:7.2f}s  {r.detail}")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"vlcsec: validation failed: {failed[0].name}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_validate(args)
    except ConfigError as exc:
        print(f"vlcsec: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 — the CLI boundary maps to exit 2
        print(f"vlcsec: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
