"""
Information-theoretic and error-rate metrics for the PAM wiretap link.

Three quantities drive the controller, all functions of the scalar
effective gain g = gamma*eta*h.w and the receiver noise sigma:

mutual information
    I(d; y) = h(y) - h(n), where y = g*d + n and d is uniform M-PAM.
    h(y) is the differential entropy of a uniform Gaussian mixture with
    means g*d_i, computed by adaptive quadrature; h(n) is the closed
    form (1/2)log2(2*pi*e*sigma^2) of a real Gaussian.

secrecy capacity
    C_s = I(d; y_B) - I(d; y_E), reported unclamped so the utility
    feels a negative gap when the eavesdropper's channel is stronger.

bit error rate
    Exact Gray-mapped M-PAM BER over AWGN,

        BER = 2 / (M log2 M) * sum_k sum_i c_{k,i} Q((2i+1) * x0),
        x0  = sqrt(3 g^2 E_s / (sigma^2 (M^2 - 1))),

    with the usual alternating-sign coefficients c_{k,i}.  Q(x) is the
    Gaussian tail, evaluated as erfc(x / sqrt(2)) / 2.  The sqrt(2)
    inside erfc matters: dropping it (a common transcription slip
    between erfc- and Q-function conventions) inflates the argument by
    3 dB.  The form here is pinned by two independent oracles — an
    exact enumeration over decision regions and a symbol-level
    Monte-Carlo transmitter (see vlcsec.oracles).

The utility u = C_s - delta * ber_bob + zeta * ber_eve folds all three
into the scalar reward the learner maximizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from .pam import ALLOWED_ORDERS, PamConstellation

_LN2 = math.log(2.0)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge within the configured budget."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Tuning knobs for the mixture-entropy integral.

    half_width_sigmas: integration support extends this many sigmas
        beyond the extreme mixture means (>= 6; truncation error of a
        Gaussian tail at 10 sigma is ~1e-24, far below rel_tol).
    """

    half_width_sigmas: float = 10.0
    rel_tol: float = 1e-7
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if self.half_width_sigmas < 6.0:
            raise ValueError("half_width_sigmas must be >= 6")
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class GaussianMixture:
    """Equal-weight Gaussian mixture: components N(means[i], sigma^2)."""

    means: tuple[float, ...]
    sigma: float

    def __post_init__(self) -> None:
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if len(self.means) == 0:
            raise ValueError("mixture needs at least one component")


@dataclass(frozen=True)
class UtilityWeights:
    """Reward shaping: delta penalizes Bob's BER, zeta rewards Eve's."""

    delta: float = 10.0
    zeta: float = 5.0

    def __post_init__(self) -> None:
        if self.delta < 0.0 or self.zeta < 0.0:
            raise ValueError("utility weights must be nonnegative")


@dataclass(frozen=True)
class MetricRecord:
    """One action's worth of link metrics."""

    secrecy_capacity: float
    ber_bob: float
    ber_eve: float
    utility: float

    def __post_init__(self) -> None:
        for name in ("secrecy_capacity", "ber_bob", "ber_eve", "utility"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")
        if not 0.0 <= self.ber_bob <= 1.0 or not 0.0 <= self.ber_eve <= 1.0:
            raise ValueError("BERs must lie in [0, 1]")


def noise_entropy(sigma: float) -> float:
    """Differential entropy of a real Gaussian, (1/2) log2(2 pi e sigma^2), bits."""
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return 0.5 * math.log2(2.0 * math.pi * math.e * sigma * sigma)


def _merged_support(means: np.ndarray, half_width: float) -> list[tuple[float, float]]:
    """Union of the per-component windows [mu - hw, mu + hw], as disjoint segments.

    Integrating each occupied segment separately keeps the adaptive
    subdivision off the dead space between well-separated components,
    which is where a single global interval starves of subdivisions.
    """
    lo = means - half_width
    hi = means + half_width
    segments: list[tuple[float, float]] = []
    a, b = lo[0], hi[0]
    for i in range(1, means.size):
        if lo[i] <= b:
            b = max(b, hi[i])
        else:
            segments.append((a, b))
            a, b = lo[i], hi[i]
    segments.append((a, b))
    return segments


def mixture_entropy(mix: GaussianMixture, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Differential entropy -integral(p log2 p) of the mixture, in bits.

    Adaptive quadrature over the union of per-component windows
    [mu_i - k*sigma, mu_i + k*sigma], k = q.half_width_sigmas.
    Raises QuadratureError if any segment fails to converge within
    q.max_subdivisions subdivisions.
    """
    means = np.sort(np.asarray(mix.means, dtype=float))
    sigma = mix.sigma
    inv_two_var = 1.0 / (2.0 * sigma * sigma)
    log_norm = math.log(means.size * sigma * math.sqrt(2.0 * math.pi))

    def neg_p_log_p(y: float) -> float:
        # log p(y) via logsumexp over components, in nats
        z = -((y - means) ** 2) * inv_two_var
        zmax = z.max()
        log_p = zmax + math.log(np.exp(z - zmax).sum()) - log_norm
        return -log_p * math.exp(log_p)

    total_nats = 0.0
    for a, b in _merged_support(means, q.half_width_sigmas * sigma):
        result = quad(
            neg_p_log_p,
            a,
            b,
            epsabs=1e-12,
            epsrel=q.rel_tol,
            limit=q.max_subdivisions,
            full_output=1,
        )
        if len(result) > 3:  # scipy appends an explanation on trouble
            raise QuadratureError(
                f"entropy quadrature did not converge on [{a:g}, {b:g}]: {result[3]}"
            )
        total_nats += result[0]
    return total_nats / _LN2


def mutual_information(
    c: PamConstellation,
    g: float,
    sigma: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    clamp_tol: float = 1e-6,
) -> float:
    """I(d; y) in bits for y = g*d + n, d uniform over the constellation.

    The raw quadrature value is clamped to [0, log2 M]; a violation
    beyond clamp_tol is treated as a quadrature failure rather than
    silently hidden.
    """
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    mix = GaussianMixture(
        means=tuple(g * d for d in c.points),
        sigma=sigma,
    )
    raw = mixture_entropy(mix, q) - noise_entropy(sigma)
    upper = math.log2(c.order)
    if raw < -clamp_tol or raw > upper + clamp_tol:
        raise QuadratureError(
            f"mutual information {raw} outside [0, {upper}] beyond tolerance "
            f"{clamp_tol}; quadrature is untrustworthy here"
        )
    return min(max(raw, 0.0), upper)


def secrecy_capacity(
    c: PamConstellation,
    g_bob: float,
    sigma_bob: float,
    g_eve: float,
    sigma_eve: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """C_s = I(d; y_B) - I(d; y_E), bits. Unclamped; negative when Eve wins."""
    return mutual_information(c, g_bob, sigma_bob, q) - mutual_information(
        c, g_eve, sigma_eve, q
    )


# Per-order coefficient tables for the exact Gray-PAM BER sum; built once.
_BER_TERMS: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _ber_terms(M: int) -> tuple[np.ndarray, np.ndarray]:
    terms = _BER_TERMS.get(M)
    if terms is None:
        n_bits = int(math.log2(M))
        odd: list[float] = []
        coef: list[float] = []
        for k in range(1, n_bits + 1):
            for i in range(int(M * (1.0 - 2.0**-k))):
                j = i * 2 ** (k - 1) // M
                odd.append(2.0 * i + 1.0)
                coef.append((-1.0) ** j * (2 ** (k - 1) - math.floor(i * 2 ** (k - 1) / M + 0.5)))
        terms = (np.array(odd), np.array(coef) * 2.0 / (M * n_bits))
        _BER_TERMS[M] = terms
    return terms


def pam_ber(M: int, g: float, sigma: float, avg_symbol_energy: float) -> float:
    """Exact BER of Gray-mapped M-PAM with ML detection over AWGN.

    Depends on the effective gain only through g^2 (a sign flip is a
    polarity inversion the detector absorbs).  Result clamped to [0, 1].
    """
    if M not in ALLOWED_ORDERS:
        raise ValueError(f"unsupported order {M}; allowed: {ALLOWED_ORDERS}")
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if avg_symbol_energy < 0.0:
        raise ValueError("average symbol energy must be nonnegative")
    x0 = math.sqrt(3.0 * g * g * avg_symbol_energy / (sigma * sigma * (M * M - 1.0)))
    odd, coef = _ber_terms(M)
    # Q(x) = erfc(x / sqrt(2)) / 2; the 1/2 is folded into coef's 2/(M log2 M)
    ber = 0.5 * float(np.dot(coef, erfc(odd * x0 / math.sqrt(2.0))))
    return min(max(ber, 0.0), 1.0)


def utility(
    cs: float, ber_bob: float, ber_eve: float, wts: UtilityWeights
) -> float:
    """Scalar reward u = C_s - delta * ber_bob + zeta * ber_eve."""
    if not 0.0 <= ber_bob <= 1.0 or not 0.0 <= ber_eve <= 1.0:
        raise ValueError("BERs must lie in [0, 1]")
    return cs - wts.delta * ber_bob + wts.zeta * ber_eve
