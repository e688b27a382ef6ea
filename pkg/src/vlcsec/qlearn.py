"""
Tabular Q-learning over the joint (modulation order, precoder) action set.

The action space is the cross product of the allowed PAM orders with
every precoder whose weights are quantized to {t / T_s : -T_s <= t <= T_s}.
Actions are addressed by a flat index:

    index = order_index * P + precoder_index,       P = (2 T_s + 1)^N

and the precoder index is a base-(2T_s+1) integer whose digits are the
per-LED level indices, last LED least significant.  encode/decode form
a bijection (tested), so the Q-table can store one dense row per state.

States discretize the previous slot's metrics: log-spaced BER bins with
a dedicated underflow bin below `ber_underflow`, linear secrecy-capacity
bins, and a hash of the (rounded) channel vector pair so distinct
geometries never share table rows.  All intervals are half-open with the
boundary belonging to the lower bin.

Unvisited entries read as 0.  Argmax ties break uniformly at random from
the caller's generator, which keeps episodes deterministic given a seed
and avoids systematic index bias at the all-zero start.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, NamedTuple

import numpy as np

MAX_ACTIONS = 200_000


class Action(NamedTuple):
    order_index: int
    precoder_index: int


class StateKey(NamedTuple):
    ber_bob_bin: int
    ber_eve_bin: int
    cs_bin: int
    scenario_id: int


class ActionChoice(NamedTuple):
    """select_action's result: the action plus whether it was the greedy pick."""

    action: Action
    greedy: bool


@dataclass(frozen=True)
class LearnerConfig:
    learning_rate: float = 0.5  # lambda
    discount: float = 0.5  # beta
    epsilon_start: float = 1.0
    epsilon_end: float = 0.1
    epsilon_decay_slots: int = 600

    def __post_init__(self) -> None:
        if not 0.0 <= self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must lie in [0,1], got {self.learning_rate}")
        if not 0.0 <= self.discount <= 1.0:
            raise ValueError(f"discount must lie in [0,1], got {self.discount}")
        for name in ("epsilon_start", "epsilon_end"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0,1], got {v}")
        if self.epsilon_decay_slots < 1:
            raise ValueError("epsilon_decay_slots must be >= 1")


@dataclass(frozen=True)
class BinsConfig:
    """State-discretization grid."""

    ber_bins: int = 8
    ber_underflow: float = 1e-6
    cs_bins: int = 8
    cs_range: tuple[float, float] = (-1.0, 7.0)

    def __post_init__(self) -> None:
        if self.ber_bins < 1 or self.cs_bins < 1:
            raise ValueError("bin counts must be positive")
        if not 0.0 < self.ber_underflow < 1.0:
            raise ValueError("ber_underflow must lie in (0, 1)")
        if self.cs_range[0] >= self.cs_range[1]:
            raise ValueError("cs_range must be increasing")


@dataclass(frozen=True)
class ActionSpace:
    """Finite joint action set with a flat-index bijection.

    `precoders` is a (P, N) matrix of weight rows.  The quantized-grid
    constructor is enumerate_actions(); `pinned()` builds the degenerate
    single-precoder space used by the fully static ablation mode.
    """

    orders: tuple[int, ...]
    quant_levels: int
    num_leds: int
    precoders: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.orders) == 0:
            raise ValueError("need at least one modulation order")
        if self.precoders.ndim != 2 or self.precoders.shape[1] != self.num_leds:
            raise ValueError("precoder matrix must be (P, num_leds)")

    @property
    def num_precoders(self) -> int:
        return self.precoders.shape[0]

    @property
    def total(self) -> int:
        return len(self.orders) * self.num_precoders

    def encode(self, action: Action) -> int:
        if not 0 <= action.order_index < len(self.orders):
            raise IndexError(f"order_index {action.order_index} out of range")
        if not 0 <= action.precoder_index < self.num_precoders:
            raise IndexError(f"precoder_index {action.precoder_index} out of range")
        return action.order_index * self.num_precoders + action.precoder_index

    def decode(self, index: int) -> Action:
        if not 0 <= index < self.total:
            raise IndexError(f"action index {index} out of range [0, {self.total})")
        return Action(*divmod(index, self.num_precoders))

    def order_of(self, action: Action) -> int:
        return self.orders[action.order_index]

    def weights_of(self, action: Action) -> tuple[float, ...]:
        return tuple(self.precoders[action.precoder_index])

    def pinned(self, order: int, weights: tuple[float, ...]) -> "ActionSpace":
        """Single-action space: one order, one fixed precoder."""
        w = np.asarray(weights, dtype=float).reshape(1, -1)
        return ActionSpace(
            orders=(order,),
            quant_levels=self.quant_levels,
            num_leds=w.shape[1],
            precoders=w,
        )


def enumerate_actions(
    orders: tuple[int, ...], num_leds: int, quant_levels: int
) -> ActionSpace:
    """Full grid of |orders| * (2*T_s+1)^N actions.

    Raises if the grid would exceed MAX_ACTIONS (a T_s/N blowup guard).
    """
    if quant_levels < 1:
        raise ValueError("quant_levels (T_s) must be >= 1")
    if num_leds < 1:
        raise ValueError("num_leds must be >= 1")
    n_levels = 2 * quant_levels + 1
    total = len(orders) * n_levels**num_leds
    if total > MAX_ACTIONS:
        raise ValueError(
            f"action space of {total} exceeds the {MAX_ACTIONS} guard; "
            f"reduce quant_levels or the number of LEDs"
        )
    levels = [t / quant_levels for t in range(-quant_levels, quant_levels + 1)]
    precoders = np.array(list(product(levels, repeat=num_leds)), dtype=float)
    return ActionSpace(
        orders=tuple(orders),
        quant_levels=quant_levels,
        num_leds=num_leds,
        precoders=precoders,
    )


class QTable:
    """Dense per-state rows over a fixed action space; absent rows read as 0."""

    def __init__(self, space: ActionSpace):
        self.space = space
        self._rows: dict[StateKey, np.ndarray] = {}

    def row(self, s: StateKey) -> np.ndarray | None:
        return self._rows.get(s)

    def _row_or_create(self, s: StateKey) -> np.ndarray:
        r = self._rows.get(s)
        if r is None:
            r = self._rows[s] = np.zeros(self.space.total)
        return r

    def value(self, s: StateKey, a: Action) -> float:
        r = self._rows.get(s)
        return 0.0 if r is None else float(r[self.space.encode(a)])

    def max_value(self, s: StateKey) -> float:
        r = self._rows.get(s)
        return 0.0 if r is None else float(r.max())

    def items(self) -> Iterator[tuple[StateKey, np.ndarray]]:
        return iter(self._rows.items())

    def __len__(self) -> int:
        return len(self._rows)


def epsilon_at(k: int, cfg: LearnerConfig) -> float:
    """Exploration rate at slot k: linear decay, then constant epsilon_end."""
    if k < 0:
        raise ValueError(f"slot index must be >= 0, got {k}")
    if k >= cfg.epsilon_decay_slots:
        return cfg.epsilon_end
    frac = k / cfg.epsilon_decay_slots
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac


def select_action(
    q: QTable, s: StateKey, epsilon: float, rng: np.random.Generator
) -> ActionChoice:
    """Epsilon-greedy draw from the table's action space.

    Generator consumption is fixed and documented, because episode
    reproducibility depends on it:
      1. one rng.random() for the explore/exploit branch,
      2. explore: one rng.integers(total);
         exploit: one rng.integers(#maximizers) only when ties exist.
    On a never-visited state every action ties at 0, so the greedy
    branch degenerates to a uniform draw — no special casing.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0,1], got {epsilon}")
    total = q.space.total
    if total == 0:
        raise ValueError("empty action space")
    if rng.random() < epsilon:
        return ActionChoice(q.space.decode(int(rng.integers(total))), greedy=False)
    row = q.row(s)
    if row is None:
        return ActionChoice(q.space.decode(int(rng.integers(total))), greedy=True)
    ties = np.flatnonzero(row == row.max())
    if ties.size == 1:
        idx = int(ties[0])
    else:
        idx = int(ties[rng.integers(ties.size)])
    return ActionChoice(q.space.decode(idx), greedy=True)


def bellman_update(
    q: QTable,
    s: StateKey,
    a: Action,
    u: float,
    s_next: StateKey,
    cfg: LearnerConfig,
) -> float:
    """Q(s,a) <- (1-lr) Q(s,a) + lr (u + discount * max_a' Q(s_next, a')).

    The max over the successor state is taken before the write, so a
    self-transition (s_next == s) bootstraps from the pre-update row.
    Returns the new value; no other entry is touched.
    """
    if not math.isfinite(u):
        raise ValueError(f"utility must be finite, got {u}")
    future = q.max_value(s_next)
    row = q._row_or_create(s)
    idx = q.space.encode(a)
    lr = cfg.learning_rate
    new = (1.0 - lr) * row[idx] + lr * (u + cfg.discount * future)
    row[idx] = new
    return float(new)


def _ber_bin(ber: float, bins: BinsConfig) -> int:
    """0 = underflow bin (ber <= ber_underflow); 1..ber_bins log-spaced to 1."""
    if ber <= bins.ber_underflow:
        return 0
    # interior edges of ber_bins log-spaced bins spanning [underflow, 1]
    lg0 = math.log10(bins.ber_underflow)
    pos = (math.log10(ber) - lg0) / (0.0 - lg0) * bins.ber_bins
    # boundary values sit exactly on an integer edge and belong below
    b = math.ceil(pos)
    return min(max(b, 1), bins.ber_bins)


def _cs_bin(cs: float, bins: BinsConfig) -> int:
    lo, hi = bins.cs_range
    v = min(max(cs, lo), hi)
    pos = (v - lo) / (hi - lo) * bins.cs_bins
    b = math.ceil(pos)
    return min(max(b - 1, 0), bins.cs_bins - 1)


def _scenario_id(h_bob: tuple[float, ...], h_eve: tuple[float, ...]) -> int:
    """Channel pair -> stable id: crc32 of the 3-significant-digit rendering."""
    text = ",".join(f"{g:.3g}" for g in h_bob) + ";" + ",".join(
        f"{g:.3g}" for g in h_eve
    )
    return zlib.crc32(text.encode("ascii"))


def discretize_state(
    ber_bob: float,
    ber_eve: float,
    cs: float,
    h_bob: tuple[float, ...],
    h_eve: tuple[float, ...],
    bins: BinsConfig,
) -> StateKey:
    """Deterministic state key from the previous slot's metrics."""
    if not 0.0 <= ber_bob <= 1.0 or not 0.0 <= ber_eve <= 1.0:
        raise ValueError("BERs must lie in [0, 1]")
    return StateKey(
        ber_bob_bin=_ber_bin(ber_bob, bins),
        ber_eve_bin=_ber_bin(ber_eve, bins),
        cs_bin=_cs_bin(cs, bins),
        scenario_id=_scenario_id(tuple(h_bob), tuple(h_eve)),
    )
