"""
Independent validation oracles for the closed-form metrics.

These deliberately share no code path with vlcsec.metrics: the BER
oracles build an explicit Gray bit map and either simulate transmission
or integrate Gaussian densities over decision regions; the entropy/MI
oracles estimate expectations by sampling.  Agreement between the two
routes is what the validation suite (and the acceptance tests) check.

Every oracle takes an explicit seed and owns its generator, so results
are reproducible and safe to evaluate concurrently.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import norm

from .metrics import GaussianMixture, noise_entropy


def _gray_codes(M: int) -> np.ndarray:
    """Gray code of each level index: adjacent levels differ in one bit."""
    idx = np.arange(M)
    return idx ^ (idx >> 1)


def _hamming_table(M: int) -> np.ndarray:
    """(M, M) matrix of bit distances between the Gray labels."""
    g = _gray_codes(M)
    x = g[:, None] ^ g[None, :]
    dist = np.zeros_like(x)
    while np.any(x):
        dist += x & 1
        x >>= 1
    return dist


def mc_ber_oracle(
    M: int,
    g: float,
    sigma: float,
    avg_symbol_energy: float,
    n_symbols: int = 1_000_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Empirical BER of Gray-mapped M-PAM with ML detection over AWGN.

    Transmits n_symbols uniform symbols through y = g*d + n, detects by
    nearest level, counts Gray-label bit errors.  Returns (estimate,
    standard error); the standard error is the sample std of per-symbol
    bit-error fractions over sqrt(n), which stays honest when the
    log2(M) bits within one symbol err together.
    """
    if n_symbols < 100_000:
        raise ValueError("need at least 1e5 symbols for a meaningful estimate")
    n_bits = int(math.log2(M))
    amplitude = math.sqrt(3.0 * avg_symbol_energy * (M - 1) / (M + 1))
    levels = amplitude * (2 * np.arange(M) - M + 1) / (M - 1)

    rng = np.random.default_rng(seed)
    tx = rng.integers(M, size=n_symbols)
    y = g * levels[tx] + rng.normal(0.0, sigma, size=n_symbols)
    if g == 0.0:
        # all levels are equidistant; ML degenerates to a uniform guess
        rx = rng.integers(M, size=n_symbols)
    else:
        scaled = (y / g + amplitude) * (M - 1) / (2.0 * amplitude)
        rx = np.clip(np.rint(scaled), 0, M - 1).astype(np.int64)

    per_symbol = _hamming_table(M)[tx, rx] / n_bits
    est = float(per_symbol.mean())
    se = float(per_symbol.std(ddof=1) / math.sqrt(n_symbols))
    return est, se


def enumeration_ber_oracle(M: int, g: float, sigma: float, avg_symbol_energy: float) -> float:
    """Exact Gray-PAM BER by integrating over ML decision regions.

    BER = (1 / (M log2 M)) sum_i sum_j P(decide j | sent i) * d_H(i, j)
    with thresholds midway between adjacent received means.  Pure
    Gaussian-CDF arithmetic — no error-function series, no sampling.
    """
    if g == 0.0:
        raise ValueError("enumeration oracle needs a nonzero gain")
    n_bits = int(math.log2(M))
    amplitude = math.sqrt(3.0 * avg_symbol_energy * (M - 1) / (M + 1))
    means = abs(g) * amplitude * (2 * np.arange(M) - M + 1) / (M - 1)
    thresholds = (means[1:] + means[:-1]) / 2.0
    edges = np.concatenate(([-np.inf], thresholds, [np.inf]))

    # region_probs[i, j] = P(y lands in region j | sent i)
    cdf = norm.cdf((edges[None, :] - means[:, None]) / sigma)
    region_probs = np.diff(cdf, axis=1)
    return float(np.sum(region_probs * _hamming_table(M)) / (M * n_bits))


def _mixture_logpdf_bits(samples: np.ndarray, mix: GaussianMixture) -> np.ndarray:
    """log2 p(y) for each sample, chunked logsumexp over components."""
    means = np.asarray(mix.means)
    inv_two_var = 1.0 / (2.0 * mix.sigma**2)
    log_norm = math.log(means.size * mix.sigma * math.sqrt(2.0 * math.pi))
    out = np.empty(samples.size)
    chunk = max(1, 4_000_000 // means.size)
    for start in range(0, samples.size, chunk):
        block = samples[start : start + chunk, None]
        z = -((block - means[None, :]) ** 2) * inv_two_var
        zmax = z.max(axis=1, keepdims=True)
        out[start : start + chunk] = (
            zmax[:, 0] + np.log(np.exp(z - zmax).sum(axis=1)) - log_norm
        )
    return out / math.log(2.0)


def mc_entropy_oracle(
    mix: GaussianMixture, n_samples: int = 1_000_000, seed: int = 0
) -> tuple[float, float]:
    """Monte-Carlo differential entropy -E[log2 p(Y)] of the mixture, bits.

    Returns (estimate, standard error).
    """
    rng = np.random.default_rng(seed)
    means = np.asarray(mix.means)
    comp = rng.integers(means.size, size=n_samples)
    samples = means[comp] + rng.normal(0.0, mix.sigma, size=n_samples)
    neg_log_p = -_mixture_logpdf_bits(samples, mix)
    return float(neg_log_p.mean()), float(neg_log_p.std(ddof=1) / math.sqrt(n_samples))


def mc_mi_oracle(
    points: tuple[float, ...],
    g: float,
    sigma: float,
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Monte-Carlo I(d; y) for y = g*d + n, d uniform over `points`, bits.

    Estimates h(Y) by sampling and subtracts the closed-form noise
    entropy; the standard error is that of the h(Y) estimate.
    """
    mix = GaussianMixture(means=tuple(g * d for d in points), sigma=sigma)
    h_y, se = mc_entropy_oracle(mix, n_samples=n_samples, seed=seed)
    return h_y - noise_entropy(sigma), se
