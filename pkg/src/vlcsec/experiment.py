"""
Episode orchestration: the per-slot adapt/measure/learn loop.

Each time slot the controller forms a state from the previous slot's
metrics, picks a (modulation order, precoder) action epsilon-greedily,
evaluates the resulting secrecy capacity, both BERs and the utility
through the closed-form metrics, and applies one Bellman update.  Slot 0
is a priming evaluation of a uniformly drawn initial action — it is
logged but performs no update, since no prior state exists for it.

Channels here are static per scenario, so metric evaluation is memoized
by (order, effective gains): a 2000-slot episode typically triggers only
a few hundred distinct quadrature runs.

Modes:
  Adaptive     — full action space (all orders x all quantized precoders)
  FixedOrder   — one pinned order, precoder still learned (the
                 non-adaptive comparison baseline, typically M=64)
  FixedBoth    — order and precoder both pinned (static-link ablation)
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Protocol, Sequence

import numpy as np

from .geometry import Luminaire, Receiver, channel_vector
from .metrics import (
    DEFAULT_QUADRATURE,
    MetricRecord,
    QuadratureConfig,
    UtilityWeights,
    mutual_information,
    pam_ber,
    utility,
)
from .pam import ALLOWED_ORDERS, DriveParams, build_constellation, effective_gain
from .qlearn import (
    ActionSpace,
    BinsConfig,
    LearnerConfig,
    QTable,
    bellman_update,
    discretize_state,
    enumerate_actions,
    epsilon_at,
    select_action,
)


@dataclass(frozen=True)
class Scenario:
    """One geometry: luminaires plus Bob's and Eve's receivers and noise."""

    name: str
    luminaires: tuple[Luminaire, ...]
    drive: DriveParams
    bob: Receiver
    eve: Receiver
    sigma_bob: float
    sigma_eve: float
    h_bob: tuple[float, ...] = field(init=False)
    h_eve: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.sigma_bob <= 0.0 or self.sigma_eve <= 0.0:
            raise ValueError("noise sigmas must be positive")
        object.__setattr__(self, "h_bob", channel_vector(list(self.luminaires), self.bob))
        object.__setattr__(self, "h_eve", channel_vector(list(self.luminaires), self.eve))


@dataclass(frozen=True)
class Adaptive:
    pass


@dataclass(frozen=True)
class FixedOrder:
    order: int = 64


@dataclass(frozen=True)
class FixedBoth:
    order: int
    weights: tuple[float, ...]


Mode = Adaptive | FixedOrder | FixedBoth


@dataclass(frozen=True)
class RunConfig:
    seed: int = 1
    num_slots: int = 2000
    summary_window: int = 500
    mode: Mode = Adaptive()
    orders: tuple[int, ...] = ALLOWED_ORDERS
    quant_levels: int = 2
    weights: UtilityWeights = UtilityWeights()
    learner: LearnerConfig = LearnerConfig()
    bins: BinsConfig = BinsConfig()
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE
    clamp_secrecy: bool = False

    def __post_init__(self) -> None:
        if self.num_slots < 1:
            raise ValueError("num_slots must be >= 1")
        if not 1 <= self.summary_window:
            raise ValueError("summary_window must be >= 1")
        for m in self.orders:
            if m not in ALLOWED_ORDERS:
                raise ValueError(f"unsupported order {m}")
        fixed = getattr(self.mode, "order", None)
        if fixed is not None and fixed not in ALLOWED_ORDERS:
            raise ValueError(f"unsupported fixed order {fixed}")


@dataclass(frozen=True)
class TimeSlotLog:
    slot: int
    order: int
    weights: tuple[float, ...]
    secrecy_capacity: float
    ber_bob: float
    ber_eve: float
    utility: float
    epsilon: float
    greedy: bool


class Engine(Protocol):
    def evaluate(self, order: int, weights: tuple[float, ...]) -> MetricRecord: ...


class MetricsEngine:
    """Closed-form link metrics for one scenario, memoized.

    Static channels make the metrics a pure function of the action, so
    both the per-record cache and the mutual-information cache (keyed on
    the scalar |gain| actually entering the integral) stay valid for the
    scenario's whole lifetime — share one engine across seeds and modes.
    """

    def __init__(self, scenario: Scenario, cfg: RunConfig):
        self.scenario = scenario
        self.weights = cfg.weights
        self.quadrature = cfg.quadrature
        self.clamp_secrecy = cfg.clamp_secrecy
        self._constellations = {
            m: build_constellation(m, scenario.drive) for m in ALLOWED_ORDERS
        }
        self._record_cache: dict[tuple[int, float, float], MetricRecord] = {}
        self._mi_cache: dict[tuple[int, float, float], float] = {}

    def _mi(self, order: int, g: float, sigma: float) -> float:
        key = (order, abs(g), sigma)
        v = self._mi_cache.get(key)
        if v is None:
            v = mutual_information(
                self._constellations[order], g, sigma, self.quadrature
            )
            self._mi_cache[key] = v
        return v

    def evaluate(self, order: int, weights: tuple[float, ...]) -> MetricRecord:
        sc = self.scenario
        g_bob = effective_gain(sc.h_bob, weights, sc.drive)
        g_eve = effective_gain(sc.h_eve, weights, sc.drive)
        key = (order, g_bob, g_eve)
        rec = self._record_cache.get(key)
        if rec is None:
            cs = self._mi(order, g_bob, sc.sigma_bob) - self._mi(
                order, g_eve, sc.sigma_eve
            )
            if self.clamp_secrecy and cs < 0.0:
                cs = 0.0
            es = self._constellations[order].avg_symbol_energy
            bb = pam_ber(order, g_bob, sc.sigma_bob, es)
            be = pam_ber(order, g_eve, sc.sigma_eve, es)
            rec = MetricRecord(
                secrecy_capacity=cs,
                ber_bob=bb,
                ber_eve=be,
                utility=utility(cs, bb, be, self.weights),
            )
            self._record_cache[key] = rec
        return rec


def build_action_space(scenario: Scenario, cfg: RunConfig) -> ActionSpace:
    """The action set the configured mode exposes to the learner."""
    n = len(scenario.luminaires)
    mode = cfg.mode
    if isinstance(mode, Adaptive):
        return enumerate_actions(cfg.orders, n, cfg.quant_levels)
    if isinstance(mode, FixedOrder):
        return enumerate_actions((mode.order,), n, cfg.quant_levels)
    full = enumerate_actions((mode.order,), n, cfg.quant_levels)
    return full.pinned(mode.order, mode.weights)


class EpisodeError(RuntimeError):
    """Metric evaluation failed mid-episode; carries the slot index."""


def run_episode(
    scenario: Scenario,
    cfg: RunConfig,
    engine: Engine | None = None,
    qtable: QTable | None = None,
) -> list[TimeSlotLog]:
    """One full episode; deterministic given cfg.seed.

    Slot 0 logs the priming action a(0) (uniform over the action space,
    epsilon = epsilon_at(0), greedy False) with no table update. Slots
    k >= 1 run: state from slot k-1 metrics -> epsilon-greedy selection
    -> metric evaluation -> Bellman update toward the state formed from
    slot k's own metrics.

    Pass `qtable` to observe (or checkpoint) the learned table; a fresh
    one is created otherwise.  Pass `engine` to share a metrics cache
    across episodes or to substitute a stub in tests.
    """
    if engine is None:
        engine = MetricsEngine(scenario, cfg)
    space = build_action_space(scenario, cfg)
    if qtable is None:
        qtable = QTable(space)
    elif qtable.space.total != space.total:
        raise ValueError("supplied QTable does not match the mode's action space")

    rng = np.random.default_rng(cfg.seed)
    bins = cfg.bins
    h_bob, h_eve = scenario.h_bob, scenario.h_eve
    logs: list[TimeSlotLog] = []

    def measure(slot: int, order: int, weights: tuple[float, ...]) -> MetricRecord:
        try:
            return engine.evaluate(order, weights)
        except Exception as exc:
            raise EpisodeError(f"metric evaluation failed at slot {slot}: {exc}") from exc

    action = space.decode(int(rng.integers(space.total)))
    rec = measure(0, space.order_of(action), space.weights_of(action))
    logs.append(
        TimeSlotLog(
            slot=0,
            order=space.order_of(action),
            weights=space.weights_of(action),
            secrecy_capacity=rec.secrecy_capacity,
            ber_bob=rec.ber_bob,
            ber_eve=rec.ber_eve,
            utility=rec.utility,
            epsilon=epsilon_at(0, cfg.learner),
            greedy=False,
        )
    )
    prev = rec

    for k in range(1, cfg.num_slots):
        state = discretize_state(
            prev.ber_bob, prev.ber_eve, prev.secrecy_capacity, h_bob, h_eve, bins
        )
        eps = epsilon_at(k, cfg.learner)
        choice = select_action(qtable, state, eps, rng)
        order = space.order_of(choice.action)
        weights = space.weights_of(choice.action)
        rec = measure(k, order, weights)
        state_next = discretize_state(
            rec.ber_bob, rec.ber_eve, rec.secrecy_capacity, h_bob, h_eve, bins
        )
        bellman_update(qtable, state, choice.action, rec.utility, state_next, cfg.learner)
        logs.append(
            TimeSlotLog(
                slot=k,
                order=order,
                weights=weights,
                secrecy_capacity=rec.secrecy_capacity,
                ber_bob=rec.ber_bob,
                ber_eve=rec.ber_eve,
                utility=rec.utility,
                epsilon=eps,
                greedy=choice.greedy,
            )
        )
        prev = rec
    return logs


def run_baseline(
    scenario: Scenario,
    cfg: RunConfig,
    engine: Engine | None = None,
    qtable: QTable | None = None,
) -> list[TimeSlotLog]:
    """The non-adaptive comparison: order pinned to 64, precoder learned."""
    if not (isinstance(cfg.mode, FixedOrder) and cfg.mode.order == 64):
        cfg = replace(cfg, mode=FixedOrder(64))
    return run_episode(scenario, cfg, engine=engine, qtable=qtable)


def summarize(logs: Sequence[TimeSlotLog], window: int) -> dict:
    """Final-window statistics of one episode, JSON-ready."""
    if not logs:
        raise ValueError("cannot summarize an empty log")
    if not 1 <= window <= len(logs):
        raise ValueError(f"window must lie in [1, {len(logs)}], got {window}")
    tail = logs[-window:]

    def stats(values: list[float]) -> dict:
        return {
            "mean": statistics.fmean(values),
            "min": min(values),
            "max": max(values),
        }

    counts = Counter((log.order, log.weights) for log in tail)
    modal, modal_count = sorted(
        counts.items(), key=lambda kv: (-kv[1], kv[0])
    )[0]
    return {
        "slots": len(logs),
        "window": window,
        "secrecy_capacity": stats([log.secrecy_capacity for log in tail]),
        "ber_bob": stats([log.ber_bob for log in tail]),
        "ber_eve": stats([log.ber_eve for log in tail]),
        "utility": stats([log.utility for log in tail]),
        "modal_action": {
            "order": modal[0],
            "weights": list(modal[1]),
            "count": modal_count,
        },
        "greedy_fraction": sum(1 for log in tail if log.greedy) / window,
    }
