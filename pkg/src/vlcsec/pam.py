"""
Amplitude-constrained M-PAM signalling over the precoded LED array.

Each luminaire n transmits x_n = w_n * d + I_DC where d is the PAM
symbol, w the precoder (|w_n| <= 1) and I_DC the illumination bias.
Keeping |d| <= alpha * I_DC guarantees every drive current stays in
the linear range [I_DC(1-alpha), I_DC(1+alpha)].  After DC removal
the receiver sees the scalar channel

    y = gamma * eta * (h . w) * d + n

so everything downstream only needs the effective gain gamma*eta*h.w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALLOWED_ORDERS = (2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class DriveParams:
    """LED drive and conversion constants.

    dc_bias          I_DC, amperes (illumination operating point)
    modulation_index alpha in [0, 1]; symbols live in [-alpha*I_DC, alpha*I_DC]
    led_conversion   eta, W/A (electrical current -> optical power)
    pd_responsivity  gamma, A/W (optical power -> photocurrent)
    """

    dc_bias: float
    modulation_index: float = 0.1
    led_conversion: float = 0.44
    pd_responsivity: float = 0.54

    def __post_init__(self) -> None:
        if self.dc_bias <= 0.0:
            raise ValueError(f"dc_bias must be positive, got {self.dc_bias}")
        if not 0.0 <= self.modulation_index <= 1.0:
            raise ValueError(
                f"modulation_index must lie in [0, 1], got {self.modulation_index}"
            )
        if self.led_conversion <= 0.0 or self.pd_responsivity <= 0.0:
            raise ValueError("conversion factors must be positive")

    @property
    def amplitude(self) -> float:
        """Peak symbol amplitude A = alpha * I_DC, amperes."""
        return self.modulation_index * self.dc_bias


@dataclass(frozen=True)
class PamConstellation:
    """Symmetric equally spaced M-PAM levels with peak amplitude A.

    points[i] = A * (2i - M + 1) / (M - 1), i = 0..M-1
    avg_symbol_energy = A^2 (M + 1) / (3 (M - 1))
    """

    order: int
    amplitude: float
    points: tuple[float, ...]
    avg_symbol_energy: float


def build_constellation(M: int, params: DriveParams) -> PamConstellation:
    """Construct the M-PAM constellation for the given drive parameters."""
    if M not in ALLOWED_ORDERS:
        raise ValueError(f"unsupported order {M}; allowed: {ALLOWED_ORDERS}")
    A = params.amplitude
    if A <= 0.0:
        raise ValueError("amplitude alpha * I_DC must be positive")
    pts = tuple(A * (2 * i - M + 1) / (M - 1) for i in range(M))
    es = A * A * (M + 1) / (3.0 * (M - 1))
    return PamConstellation(order=M, amplitude=A, points=pts, avg_symbol_energy=es)


def validate_precoder(weights: tuple[float, ...] | np.ndarray) -> np.ndarray:
    """Check the infinity-norm constraint ||w||_inf <= 1 and return an array."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1:
        raise ValueError("precoder must be a flat weight vector")
    if not np.all(np.isfinite(w)):
        raise ValueError("precoder weights must be finite")
    if np.max(np.abs(w)) > 1.0 + 1e-12:
        raise ValueError(f"precoder violates ||w||_inf <= 1: {w}")
    return w


def effective_gain(
    h: tuple[float, ...] | np.ndarray,
    w: tuple[float, ...] | np.ndarray,
    params: DriveParams,
) -> float:
    """Scalar end-to-end gain gamma * eta * h.w (may be negative or zero)."""
    hv = np.asarray(h, dtype=float)
    wv = validate_precoder(w)
    if hv.shape != wv.shape:
        raise ValueError(f"dimension mismatch: h has {hv.shape}, w has {wv.shape}")
    return params.pd_responsivity * params.led_conversion * float(hv @ wv)


def drive_currents(
    w: tuple[float, ...] | np.ndarray, symbol: float, params: DriveParams
) -> np.ndarray:
    """Per-LED drive currents x_n = w_n * symbol + I_DC.

    Raises if the (w, symbol) pair could leave the linear range.
    """
    wv = validate_precoder(w)
    if abs(symbol) > params.amplitude + 1e-12:
        raise ValueError(
            f"symbol {symbol} exceeds the amplitude constraint {params.amplitude}"
        )
    x = wv * symbol + params.dc_bias
    lo = params.dc_bias * (1.0 - params.modulation_index)
    hi = params.dc_bias * (1.0 + params.modulation_index)
    if np.any(x < lo - 1e-9) or np.any(x > hi + 1e-9):
        raise ValueError("drive currents left the linear range")
    return x
