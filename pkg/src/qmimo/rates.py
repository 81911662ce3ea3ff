"""Achievable-rate evaluation for quantized SVD subchannel transmission.

All rates are in bits per (complex) channel use aggregated over the real
subchannels, with unit noise variance per real dimension, so a subchannel
with gain sigma_k and power P_k sees SNR sigma_k^2 * P_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .allocation import Allocation, waterfill
from .receiver import (
    midpoint_thresholds,
    pam_constellation,
    transition_matrix_awgn,
    transition_matrix_mc,
)

# peak spectral efficiency of 8 bit/s/Hz means 256-QAM, i.e. 16-PAM per
# real dimension, so no constellation exceeds 4 bits however many ADCs a
# subchannel accumulates
MAX_CONSTELLATION_BITS = 4


def pam_bits(bits: int, cap: int = MAX_CONSTELLATION_BITS) -> int:
    """Usable constellation bits given an ADC budget."""
    return int(min(bits, cap))


def mutual_information(trans: np.ndarray, prior: np.ndarray | None = None) -> float:
    """I(X; Y) in bits for a row-stochastic transition matrix.

    Uniform input prior unless given. Zero-probability cells contribute 0.
    """
    t = np.asarray(trans, dtype=float)
    n = t.shape[0]
    p = np.full(n, 1.0 / n) if prior is None else np.asarray(prior, dtype=float)
    if p.size != n or abs(p.sum() - 1.0) > 1e-9 or np.any(p < 0):
        raise ValueError("prior must be a distribution over the input points")
    py = p @ t
    mask = (t > 0) & (py[None, :] > 0)
    ratio = np.ones_like(t)
    ratio[mask] = t[mask] / np.broadcast_to(py, t.shape)[mask]
    return float(np.sum(p[:, None] * t * np.log2(ratio, where=mask) * mask))


def shannon_capacity(sigma: np.ndarray, power: np.ndarray) -> float:
    """Gaussian-input capacity sum over real subchannels, bits per use."""
    sigma = np.asarray(sigma, dtype=float)
    power = np.asarray(power, dtype=float)
    return float(np.sum(0.5 * np.log2(1.0 + sigma**2 * power)))


def benchmark_ptp(sigma: np.ndarray, n_adc: int, total_power: float) -> float:
    """Unquantized waterfilled capacity truncated at the ADC bit budget."""
    p = waterfill(np.asarray(sigma, dtype=float) ** 2, total_power)
    return min(shannon_capacity(sigma, p), float(n_adc))


def subchannel_rate_awgn(sigma_k: float, p_k: float, bits_k: int) -> float:
    """Closed-form PAM rate of one real subchannel with matched thresholds."""
    if bits_k <= 0 or p_k <= 0 or sigma_k <= 0:
        return 0.0
    levels = 2 ** pam_bits(bits_k)
    x = pam_constellation(levels, p_k)
    thr = midpoint_thresholds(sigma_k * x)
    t = transition_matrix_awgn(x, thr, sigma_k)
    # clip at the constellation entropy so float noise cannot push the sum
    # past the ADC budget
    return min(mutual_information(t), float(pam_bits(bits_k)))


def ptp_rate_perfect(sigma: np.ndarray, alloc: Allocation) -> np.ndarray:
    """Per-subchannel rates under perfect CSI (diagonalized channel)."""
    sigma = np.asarray(sigma, dtype=float)
    return np.array(
        [
            subchannel_rate_awgn(sigma[k], alloc.power[k], int(alloc.bits[k]))
            for k in range(sigma.size)
        ]
    )


def subchannel_rate_mc(
    g_eff: np.ndarray,
    k: int,
    sigma_hat_k: float,
    alloc: Allocation,
    rng: np.random.Generator,
    n_samples: int = 100_000,
) -> float:
    """Monte Carlo rate of subchannel k under residual interference.

    g_eff is the post-combining real channel from estimated CSI. The
    receiver places thresholds by the estimated gain sigma_hat_k, while the
    symbols actually arrive through g_eff[k, k] plus cross terms from the
    other active subchannels.
    """
    bits_k = int(alloc.bits[k])
    p_k = float(alloc.power[k])
    if bits_k <= 0 or p_k <= 0 or sigma_hat_k <= 0:
        return 0.0
    levels = 2 ** pam_bits(bits_k)
    x = pam_constellation(levels, p_k)
    thr = midpoint_thresholds(sigma_hat_k * x)
    interferers = []
    for j in alloc.active:
        if j == k or j >= g_eff.shape[1]:
            continue
        pts = pam_constellation(2 ** pam_bits(int(alloc.bits[j])), float(alloc.power[j]))
        interferers.append((float(g_eff[k, j]), pts))
    gain = float(g_eff[k, k]) if k < g_eff.shape[1] else 0.0
    t = transition_matrix_mc(x, thr, gain, interferers, rng, n_samples)
    return min(mutual_information(t), float(pam_bits(bits_k)))


def ptp_rate_mismatched(
    g_eff: np.ndarray,
    sigma_hat: np.ndarray,
    alloc: Allocation,
    rng: np.random.Generator,
    n_samples: int = 100_000,
) -> np.ndarray:
    """Per-subchannel Monte Carlo rates when combining uses estimated CSI."""
    sigma_hat = np.asarray(sigma_hat, dtype=float)
    out = np.zeros(sigma_hat.size)
    for k in alloc.active:
        if k >= g_eff.shape[0]:
            continue
        out[k] = subchannel_rate_mc(g_eff, int(k), sigma_hat[k], alloc, rng, n_samples)
    return out


def dl_user_rate(
    sigma: np.ndarray,
    alloc: Allocation,
    n_users: int,
    pooled: bool = True,
) -> float:
    """Round-robin downlink rate of one user, bits per use.

    The user transmits a 1/n_users time share. With pooled=True its
    comparators keep running through other users' slots, so each buffered
    sample accumulates n_users times the SAR stages and the constellation
    grows to 2^min(n_users * bits, cap). pooled=False is the plain scheme
    where idle slots are wasted.
    """
    if n_users < 1:
        raise ValueError("need at least one user")
    sigma = np.asarray(sigma, dtype=float)
    total = 0.0
    for k in range(sigma.size):
        bits_k = int(alloc.bits[k])
        if bits_k <= 0:
            continue
        eff = n_users * bits_k if pooled else bits_k
        total += subchannel_rate_awgn(sigma[k], float(alloc.power[k]), eff)
    return total / n_users


def benchmark_dl(
    sigma: np.ndarray, n_adc: int, total_power: float, n_users: int
) -> float:
    """Equal-time-share capacity truncated at the full ADC budget.

    The bit cap stays n_adc because the comparators can stay busy every
    use even though the user's own symbols occupy a 1/n_users share.
    """
    p = waterfill(np.asarray(sigma, dtype=float) ** 2, total_power)
    return min(shannon_capacity(sigma, p) / n_users, float(n_adc))


def overhead_scale(rate: float, n_coherence: int, n_pilot: int) -> float:
    """Down-scale a rate by the data fraction of the coherence block."""
    if not 0 <= n_pilot <= n_coherence:
        raise ValueError("pilot count must fit in the coherence block")
    # form the data fraction first so scaling is exactly rate * fraction
    return rate * ((n_coherence - n_pilot) / n_coherence)


@dataclass
class RateReport:
    """One evaluated (user, scheme) pair."""

    scheme: str
    csi: str
    rate: float
    benchmark: float
    per_sub: np.ndarray = field(default_factory=lambda: np.zeros(0))
