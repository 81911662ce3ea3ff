"""Low-resolution receiver front end built from one-bit comparators.

The receiver owns a short analog buffer and a bank of one-bit comparators
whose thresholds move from use to use as a linear function of recent
comparator outputs:

    out(i) = sign(B @ buf + t_adapt(i) + t_fixed),
    t_adapt_k(i) = (u_left @ hist)[k] . u_right(i, k),

where hist is a right-aligned window of the last `buf_len` output vectors.
Choosing the temporal weights u_right as scaled powers of two turns each
comparator into a successive-approximation (SAR) stage machine, so n uses
of a one-bit comparator quantize one buffered sample to n bits. All
multi-bit quantizers in this package resolve to that primitive;
`quantize_batch` is the vectorized shortcut proven equivalent in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtr


# ---------------------------------------------------------------------------
# constellations and static quantizers

def pam_constellation(n_levels: int, power: float = 1.0) -> np.ndarray:
    """Zero-mean equally spaced PAM points with average power `power`."""
    if n_levels < 2:
        raise ValueError("need at least 2 levels")
    d = np.sqrt(12.0 * power / (n_levels**2 - 1))
    return d * (np.arange(n_levels) - (n_levels - 1) / 2.0)


def midpoint_thresholds(points: np.ndarray) -> np.ndarray:
    """Decision thresholds halfway between neighboring points."""
    points = np.asarray(points, dtype=float)
    return 0.5 * (points[:-1] + points[1:])


@dataclass(frozen=True)
class QuantizerSpec:
    """Reconstruction points plus the thresholds separating them."""

    points: np.ndarray
    thresholds: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        t = np.asarray(self.thresholds, dtype=float)
        if p.size < 2 or t.size != p.size - 1:
            raise ValueError("need n points and n-1 thresholds, n >= 2")
        if np.any(np.diff(p) <= 0) or (t.size > 1 and np.any(np.diff(t) <= 0)):
            raise ValueError("points and thresholds must be strictly increasing")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "thresholds", t)

    @property
    def n_levels(self) -> int:
        return self.points.size

    @property
    def n_bits(self) -> int:
        b = int(round(np.log2(self.n_levels)))
        if 2**b != self.n_levels:
            raise ValueError("level count is not a power of two")
        return b

    @classmethod
    def pam(cls, n_levels: int, power: float = 1.0) -> "QuantizerSpec":
        p = pam_constellation(n_levels, power)
        return cls(points=p, thresholds=midpoint_thresholds(p))

    @classmethod
    def uniform(cls, n_bits: int, vmax: float) -> "QuantizerSpec":
        """Midrise uniform quantizer over [-vmax, vmax]."""
        n = 2**n_bits
        step = 2.0 * vmax / n
        edges = -vmax + step * np.arange(1, n)
        centers = -vmax + step * (np.arange(n) + 0.5)
        return cls(points=centers, thresholds=edges)


def sar_quantize(sample: float, thresholds: np.ndarray) -> int:
    """Quantize one sample by successive binary search over 2^n - 1 thresholds.

    Ties go to the upper bin. Returns the bin index in [0, 2^n).
    """
    t = np.asarray(thresholds, dtype=float)
    n_levels = t.size + 1
    n_bits = int(round(np.log2(n_levels)))
    if 2**n_bits != n_levels:
        raise ValueError("threshold count must be 2^n - 1")
    lo, hi = 0, n_levels
    for _ in range(n_bits):
        mid = (lo + hi) // 2
        if sample >= t[mid - 1]:
            lo = mid
        else:
            hi = mid
    return lo


def quantize_batch(samples: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Vectorized bin indices, same tie rule as sar_quantize."""
    return np.searchsorted(
        np.asarray(thresholds, dtype=float), np.asarray(samples), side="right"
    )


# ---------------------------------------------------------------------------
# adaptive-threshold comparator engine

@dataclass
class ReceiverConfig:
    """Static wiring of the comparator bank.

    b_select maps the analog buffer to comparator inputs. u_right_fn(i, k)
    returns the temporal weights (length buf_len) applied to comparator k's
    row of the right-aligned output history at use i (1-based). u_left
    mixes history rows before the temporal weighting; identity when None.
    """

    buf_len: int
    t_fixed: np.ndarray
    b_select: np.ndarray
    u_right_fn: Callable[[int, int], np.ndarray]
    u_left: np.ndarray | None = None

    @property
    def n_comp(self) -> int:
        return self.b_select.shape[0]


@dataclass
class ReceiverState:
    buf: np.ndarray
    hist: np.ndarray
    use: int = 1

    @classmethod
    def fresh(cls, cfg: ReceiverConfig) -> "ReceiverState":
        return cls(
            buf=np.zeros(cfg.buf_len),
            hist=np.zeros((cfg.n_comp, cfg.buf_len)),
            use=1,
        )


def receiver_step(
    cfg: ReceiverConfig, state: ReceiverState, sample: float | None
) -> tuple[np.ndarray, np.ndarray]:
    """Advance one use: latch `sample` (if any), compare, update history.

    Returns (outputs in {-1,+1}, effective thresholds) for this use. A
    comparator fires +1 when its input is >= the effective threshold.
    """
    i = state.use
    if sample is not None:
        state.buf[(i - 1) % cfg.buf_len] = sample
    w = cfg.b_select @ state.buf
    hist = state.hist if cfg.u_left is None else cfg.u_left @ state.hist
    t_adapt = np.array(
        [hist[k] @ cfg.u_right_fn(i, k) for k in range(cfg.n_comp)]
    )
    tau_eff = -(t_adapt + cfg.t_fixed)
    out = np.where(w >= tau_eff, 1.0, -1.0)
    state.hist = np.roll(state.hist, -1, axis=1)
    state.hist[:, -1] = out
    state.use = i + 1
    return out, tau_eff


def run_receiver(
    cfg: ReceiverConfig, samples: Sequence[float | None]
) -> tuple[np.ndarray, np.ndarray]:
    """Run the engine over a sample stream; rows are uses."""
    state = ReceiverState.fresh(cfg)
    outs, taus = [], []
    for s in samples:
        o, t = receiver_step(cfg, state, s)
        outs.append(o)
        taus.append(t)
    return np.array(outs), np.array(taus)


def _uniform_spacing(thresholds: np.ndarray) -> float:
    t = np.asarray(thresholds, dtype=float)
    if t.size == 1:
        return 0.0
    d = np.diff(t)
    if np.any(np.abs(d - d[0]) > 1e-9 * max(abs(d[0]), 1.0)):
        raise ValueError("SAR schedule needs equally spaced thresholds")
    return float(d[0])


def sar_receiver_config(thresholds: np.ndarray) -> ReceiverConfig:
    """Pipelined SAR bank: n comparators resolve n bits per sample.

    A new sample is latched every use into rotating buffer slots; comparator
    k always reads slot k, so the sample latched at use i is resolved by
    comparator (i-1) % n over uses i .. i+n-1. Stage 1 compares against the
    center threshold (via t_fixed); stage m shifts by earlier decisions with
    weights delta * 2^(n-1-l), which walks the binary threshold tree.
    """
    t = np.asarray(thresholds, dtype=float)
    n_levels = t.size + 1
    n_bits = int(round(np.log2(n_levels)))
    if 2**n_bits != n_levels:
        raise ValueError("threshold count must be 2^n - 1")
    delta = _uniform_spacing(t)
    center = t[n_levels // 2 - 1]
    n = n_bits

    def u_right(i: int, k: int) -> np.ndarray:
        m = (i - 1 - k) % n + 1  # this comparator's SAR stage at use i
        w = np.zeros(n)
        for l in range(1, m):
            w[n - m + l] = -delta * 2.0 ** (n - 1 - l)
        return w

    return ReceiverConfig(
        buf_len=n,
        t_fixed=np.full(n, -center),
        b_select=np.eye(n),
        u_right_fn=u_right,
    )


def sar_decode(bits: np.ndarray) -> int:
    """Bin index from a comparator's +/-1 decisions, MSB first."""
    b = np.asarray(bits)
    n = b.size
    return int(sum((b[l] > 0) * 2 ** (n - 1 - l) for l in range(n)))


def run_sar_pipeline(
    samples: Sequence[float], thresholds: np.ndarray
) -> np.ndarray:
    """Quantize a stream through the comparator engine, one bin per sample.

    Feeds len(samples) + n_bits - 1 uses so the tail of the pipeline
    drains (late uses latch nothing new).
    """
    t = np.asarray(thresholds, dtype=float)
    n = int(round(np.log2(t.size + 1)))
    cfg = sar_receiver_config(t)
    stream = list(samples) + [None] * (n - 1)
    outs, _ = run_receiver(cfg, stream)
    bins = np.empty(len(samples), dtype=int)
    for j in range(len(samples)):
        k = j % n  # comparator that owns this sample
        bins[j] = sar_decode(outs[j : j + n, k])
    return bins


def example_two_bit_config() -> tuple[ReceiverConfig, np.ndarray]:
    """Two comparators resolving 2-bit samples over [-1, 1].

    Thresholds {-1/2, 0, 1/2}; stage 1 compares against 0, stage 2 shifts
    by half a step in the direction of the first decision.
    """
    thresholds = np.array([-0.5, 0.0, 0.5])
    return sar_receiver_config(thresholds), thresholds


# ---------------------------------------------------------------------------
# transition probabilities

def transition_matrix_awgn(
    points: np.ndarray,
    thresholds: np.ndarray,
    gain: float,
    noise_std: float = 1.0,
) -> np.ndarray:
    """P(bin j | point i) for y = gain * x + N(0, noise_std^2), closed form."""
    x = np.asarray(points, dtype=float)
    t = np.asarray(thresholds, dtype=float)
    z = (t[None, :] - gain * x[:, None]) / noise_std
    cdf = np.concatenate(
        [np.zeros((x.size, 1)), ndtr(z), np.ones((x.size, 1))], axis=1
    )
    return np.diff(cdf, axis=1)


def transition_matrix_mc(
    points: np.ndarray,
    thresholds: np.ndarray,
    gain: float,
    interferers: Sequence[tuple[float, np.ndarray]],
    rng: np.random.Generator,
    n_samples: int = 100_000,
    noise_std: float = 1.0,
) -> np.ndarray:
    """Monte Carlo transition matrix with uniform discrete interferers.

    interferers: (gain_j, points_j) pairs, symbols drawn uniformly. One
    shared aggregate interference-plus-noise draw serves every input point;
    bin counts come from searchsorted on the sorted aggregate, which keeps
    the tie rule identical to quantize_batch.
    """
    x = np.asarray(points, dtype=float)
    t = np.asarray(thresholds, dtype=float)
    s = noise_std * rng.standard_normal(n_samples)
    floor = 1e-12 * max(noise_std**2, 1e-300)
    for g_j, pts_j in interferers:
        pts_j = np.asarray(pts_j, dtype=float)
        if (g_j * np.max(np.abs(pts_j))) ** 2 <= floor:
            continue  # provably negligible next to the noise
        s += g_j * pts_j[rng.integers(0, pts_j.size, n_samples)]
    s.sort(kind="stable")
    rows = np.empty((x.size, t.size + 1))
    for i in range(x.size):
        below = np.searchsorted(s, t - gain * x[i], side="left")
        edges = np.concatenate([[0], below, [n_samples]])
        rows[i] = np.diff(edges) / n_samples
    return rows
