"""Power and one-bit-ADC allocation across SVD subchannels.

Bit counts are ADC counts: a subchannel assigned m one-bit ADCs gets an
m-bit SAR quantizer. Heuristics assume `sigma` sorted descending, which is
what the SVD produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Allocation:
    """Per-subchannel transmit power and ADC (bit) counts."""

    power: np.ndarray
    bits: np.ndarray

    @property
    def active(self) -> np.ndarray:
        """Indices that both carry power and get quantized."""
        return np.flatnonzero((self.power > 0) & (self.bits > 0))


def waterfill(gains_sq: np.ndarray, total_power: float) -> np.ndarray:
    """Waterfilling powers max(0, mu - 1/g) with sum equal to total_power.

    Bisection on the water level to locate the active set, then a closed
    form polish so the power constraint and KKT conditions hold to float
    precision. Zero-gain channels never activate.
    """
    g = np.asarray(gains_sq, dtype=float)
    if np.any(g < 0):
        raise ValueError("gains_sq must be nonnegative")
    if total_power < 0:
        raise ValueError("total_power must be nonnegative")
    p = np.zeros(g.size)
    pos = g > 0
    if total_power == 0 or not np.any(pos):
        return p
    inv = 1.0 / g[pos]
    lo = float(np.min(inv))
    hi = float(np.max(inv) + total_power)
    for _ in range(200):
        mu = 0.5 * (lo + hi)
        if np.sum(np.maximum(0.0, mu - inv)) > total_power:
            hi = mu
        else:
            lo = mu
        if hi - lo <= 1e-10 * max(hi, 1.0):
            break
    mu = 0.5 * (lo + hi)
    active = mu - inv > 0
    if not np.any(active):  # all power to the single strongest channel
        active = inv == np.min(inv)
    mu = (total_power + np.sum(inv[active])) / np.count_nonzero(active)
    fill = np.zeros(inv.size)
    fill[active] = mu - inv[active]
    p[pos] = np.maximum(fill, 0.0)
    return p


def uniform_power(n: int, total_power: float) -> np.ndarray:
    if n <= 0:
        raise ValueError("need at least one channel")
    return np.full(n, total_power / n)


def split_adcs_uniform(n_adc: int, n_active: int) -> np.ndarray:
    """Spread n_adc one-bit ADCs over n_active subchannels.

    Evenly, with the remainder going one each to the strongest (earliest)
    subchannels.
    """
    if n_active <= 0:
        raise ValueError("need at least one active subchannel")
    base, extra = divmod(n_adc, n_active)
    bits = np.full(n_active, base, dtype=int)
    bits[:extra] += 1
    return bits


def _uniform_bits(n_sub: int, n_adc: int) -> np.ndarray:
    """ADC counts per subchannel when spreading over min(n_sub, n_adc)."""
    n_active = min(n_sub, n_adc)
    bits = np.zeros(n_sub, dtype=int)
    bits[:n_active] = split_adcs_uniform(n_adc, n_active)
    return bits


def wp_ua(sigma: np.ndarray, n_adc: int, total_power: float) -> Allocation:
    """Waterfilled power over all subchannels, ADCs spread uniformly.

    Waterfilling concentrates on the strong subchannels by itself; with
    fewer ADCs than subchannels, power landing on an unquantized dimension
    is forfeited, which is the heuristic's cost for staying simple.
    """
    sigma = np.asarray(sigma, dtype=float)
    bits = _uniform_bits(sigma.size, n_adc)
    return Allocation(power=waterfill(sigma**2, total_power), bits=bits)


def up_ua(sigma: np.ndarray, n_adc: int, total_power: float) -> Allocation:
    """Uniform power over all subchannels, ADCs spread uniformly."""
    sigma = np.asarray(sigma, dtype=float)
    bits = _uniform_bits(sigma.size, n_adc)
    return Allocation(
        power=uniform_power(sigma.size, total_power), bits=bits
    )


def sp_sa(
    sigma: np.ndarray,
    n_adc: int,
    total_power: float,
    pair: bool = False,
) -> Allocation:
    """Everything to the strongest subchannel.

    With pair=True the budget splits evenly across the two real dimensions
    of the strongest complex mode instead.
    """
    sigma = np.asarray(sigma, dtype=float)
    power = np.zeros(sigma.size)
    bits = np.zeros(sigma.size, dtype=int)
    if pair and sigma.size >= 2:
        power[:2] = total_power / 2.0
        bits[:2] = split_adcs_uniform(n_adc, 2)
    else:
        power[0] = total_power
        bits[0] = n_adc
    return Allocation(power=power, bits=bits)


SCHEMES = {"wp-ua": wp_ua, "up-ua": up_ua, "sp-sa": sp_sa}
