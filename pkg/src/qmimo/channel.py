"""Clustered mmWave channel generation for uniform planar arrays.

Geometry conventions: a UPA with `rows` x `cols` elements at half-wavelength
spacing is flattened row-major, so element (p, q) sits at index p * cols + q.
Steering entries have unit magnitude; the element phase is
2*pi*spacing*(p*sin(el) + q*sin(az)*cos(el)).

Scaling conventions: the per-ray gains have total variance 1, so a channel
synthesized with amplitude `beta` satisfies E[||H||_F^2] = beta^2 * n_r * n_t.
Downstream processing works on the real expansion of the complex system with
unit noise variance per real dimension (complex noise variance 2), so
`beta_from_snr_db` includes a sqrt(2) factor to make the per-entry complex
SNR equal the link budget SNR.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# free-space-like LOS and blocked NLOS slope/intercept fits for 28 GHz,
# shadowing std devs in dB
PL_LOS_INTERCEPT = 61.4
PL_LOS_SLOPE = 20.0
PL_LOS_SHADOW_STD = 5.8
PL_NLOS_INTERCEPT = 72.0
PL_NLOS_SLOPE = 29.2
PL_NLOS_SHADOW_STD = 8.7
LOS_DECAY_PER_M = 0.0149

# 30 dBm transmit power; -174 dBm/Hz thermal density + 90 dB for 1 GHz + 6 dB
# noise figure gives a -78 dBm noise floor
DEFAULT_TX_POWER_DBM = 30.0
DEFAULT_NOISE_FLOOR_DBM = -78.0


@dataclass(frozen=True)
class Upa:
    """Uniform planar array, `spacing` in wavelengths."""

    rows: int
    cols: int
    spacing: float = 0.5

    @property
    def n(self) -> int:
        return self.rows * self.cols


def upa_response(geom: Upa, az, el) -> np.ndarray:
    """Array response for azimuth/elevation angles in radians.

    az, el broadcast; returns (..., geom.n) complex with unit-magnitude
    entries, element order row-major.
    """
    az = np.asarray(az, dtype=float)
    el = np.asarray(el, dtype=float)
    idx = np.arange(geom.n)
    p = idx // geom.cols
    q = idx % geom.cols
    phase = 2.0 * np.pi * geom.spacing * (
        p * np.sin(el)[..., None]
        + q * (np.sin(az) * np.cos(el))[..., None]
    )
    return np.exp(1j * phase)


def wrap_angle(x):
    """Wrap to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x), 2.0 * np.pi)


@dataclass
class PathSet:
    """Per-ray angles (radians) and complex gains for one channel drop."""

    az_aoa: np.ndarray
    el_aoa: np.ndarray
    az_aod: np.ndarray
    el_aod: np.ndarray
    gains: np.ndarray

    def to_dict(self) -> dict:
        return {
            "az_aoa": self.az_aoa.tolist(),
            "el_aoa": self.el_aoa.tolist(),
            "az_aod": self.az_aod.tolist(),
            "el_aod": self.el_aod.tolist(),
            "gains_re": self.gains.real.tolist(),
            "gains_im": self.gains.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PathSet":
        gains = np.asarray(d["gains_re"], dtype=float) + 1j * np.asarray(
            d["gains_im"], dtype=float
        )
        return cls(
            az_aoa=np.asarray(d["az_aoa"], dtype=float),
            el_aoa=np.asarray(d["el_aoa"], dtype=float),
            az_aod=np.asarray(d["az_aod"], dtype=float),
            el_aod=np.asarray(d["el_aod"], dtype=float),
            gains=gains,
        )


def draw_cluster_count(rng: np.random.Generator, lam: float = 1.8) -> int:
    """Poisson(lam) clipped below at one cluster."""
    return max(1, int(rng.poisson(lam)))


def draw_paths(
    rng: np.random.Generator,
    lam: float = 1.8,
    n_rays: int = 20,
    az_spread: float = np.deg2rad(10.0),
    el_spread: float = np.deg2rad(6.0),
) -> PathSet:
    """Draw clustered rays: per-cluster central angles, Gaussian ray offsets.

    Azimuth offsets wrap; elevation offsets clip to the central-angle domain
    (AoA in [-pi/2, pi/2], AoD in [-pi/4, 0] for a downtilted transmitter).
    Gains are i.i.d. CN(0, 1/L) with L the total ray count.
    """
    n_cl = draw_cluster_count(rng, lam)
    c_az_aoa = rng.uniform(-np.pi, np.pi, n_cl)
    c_el_aoa = rng.uniform(-np.pi / 2, np.pi / 2, n_cl)
    c_az_aod = rng.uniform(-np.pi, np.pi, n_cl)
    c_el_aod = rng.uniform(-np.pi / 4, 0.0, n_cl)

    sz = (n_cl, n_rays)
    az_aoa = wrap_angle(c_az_aoa[:, None] + rng.normal(0.0, az_spread, sz))
    az_aod = wrap_angle(c_az_aod[:, None] + rng.normal(0.0, az_spread, sz))
    el_aoa = np.clip(
        c_el_aoa[:, None] + rng.normal(0.0, el_spread, sz), -np.pi / 2, np.pi / 2
    )
    el_aod = np.clip(
        c_el_aod[:, None] + rng.normal(0.0, el_spread, sz), -np.pi / 4, 0.0
    )

    total = n_cl * n_rays
    g = (rng.standard_normal(total) + 1j * rng.standard_normal(total)) * np.sqrt(
        1.0 / (2.0 * total)
    )
    return PathSet(
        az_aoa=az_aoa.ravel(),
        el_aoa=el_aoa.ravel(),
        az_aod=az_aod.ravel(),
        el_aod=el_aod.ravel(),
        gains=g,
    )


def channel_matrix(
    paths: PathSet, rx: Upa, tx: Upa, beta: float = 1.0
) -> np.ndarray:
    """Synthesize H = beta * sum_l g_l a_r(l) a_t(l)^H, shape (rx.n, tx.n)."""
    a_r = upa_response(rx, paths.az_aoa, paths.el_aoa)
    a_t = upa_response(tx, paths.az_aod, paths.el_aod)
    return beta * (a_r * paths.gains[:, None]).T @ np.conj(a_t)


def los_probability(d: float) -> float:
    return float(np.exp(-LOS_DECAY_PER_M * d))


def path_loss_db(d: float, los: bool, shadow_db: float = 0.0) -> float:
    """Distance-dependent path loss in dB with explicit shadowing term."""
    if d <= 0:
        raise ValueError("distance must be positive")
    if los:
        return PL_LOS_INTERCEPT + PL_LOS_SLOPE * np.log10(d) + shadow_db
    return PL_NLOS_INTERCEPT + PL_NLOS_SLOPE * np.log10(d) + shadow_db


def drop_user(
    rng: np.random.Generator, r_in: float = 10.0, r_out: float = 50.0
) -> float:
    """Distance of a user dropped uniformly over the ring r_in <= r <= r_out."""
    u = rng.uniform()
    return float(np.sqrt(u * (r_out**2 - r_in**2) + r_in**2))


def link_snr_db(
    pl_db: float,
    tx_power_dbm: float = DEFAULT_TX_POWER_DBM,
    noise_floor_dbm: float = DEFAULT_NOISE_FLOOR_DBM,
) -> float:
    return tx_power_dbm - pl_db - noise_floor_dbm

def beta_from_snr_db(snr_db: float) -> float:
    # sqrt(2): real-dimension noise is unit variance, so complex noise
    # variance is 2 and per-entry complex SNR beta^2/2 must equal 10^(snr/10)
    return float(np.sqrt(2.0) * 10.0 ** (snr_db / 20.0))


@dataclass
class ChannelDrop:
    """Everything needed to reproduce one user's channel bit-exactly."""

    distance: float
    los: bool
    shadow_db: float
    pl_db: float
    snr_db: float
    beta: float
    paths: PathSet
    rx: Upa = field(default_factory=lambda: Upa(4, 4))
    tx: Upa = field(default_factory=lambda: Upa(8, 8))

    def channel(self) -> np.ndarray:
        return channel_matrix(self.paths, self.rx, self.tx, self.beta)

    def to_json(self) -> str:
        d = {
            "distance": self.distance,
            "los": self.los,
            "shadow_db": self.shadow_db,
            "pl_db": self.pl_db,
            "snr_db": self.snr_db,
            "beta": self.beta,
            "paths": self.paths.to_dict(),
            "rx": [self.rx.rows, self.rx.cols, self.rx.spacing],
            "tx": [self.tx.rows, self.tx.cols, self.tx.spacing],
        }
        return json.dumps(d)

    @classmethod
    def from_json(cls, s: str) -> "ChannelDrop":
        d = json.loads(s)
        return cls(
            distance=d["distance"],
            los=bool(d["los"]),
            shadow_db=d["shadow_db"],
            pl_db=d["pl_db"],
            snr_db=d["snr_db"],
            beta=d["beta"],
            paths=PathSet.from_dict(d["paths"]),
            rx=Upa(int(d["rx"][0]), int(d["rx"][1]), d["rx"][2]),
            tx=Upa(int(d["tx"][0]), int(d["tx"][1]), d["tx"][2]),
        )


def draw_channel_drop(
    rng: np.random.Generator,
    rx: Upa = Upa(4, 4),
    tx: Upa = Upa(8, 8),
    r_in: float = 10.0,
    r_out: float = 50.0,
    tx_power_dbm: float = DEFAULT_TX_POWER_DBM,
    noise_floor_dbm: float = DEFAULT_NOISE_FLOOR_DBM,
    lam: float = 1.8,
    n_rays: int = 20,
) -> ChannelDrop:
    """Drop a user, roll LOS/shadowing, and draw the clustered channel."""
    d = drop_user(rng, r_in, r_out)
    los = bool(rng.uniform() < los_probability(d))
    shadow = float(
        rng.normal(0.0, PL_LOS_SHADOW_STD if los else PL_NLOS_SHADOW_STD)
    )
    pl = float(path_loss_db(d, los, shadow))
    snr = float(link_snr_db(pl, tx_power_dbm, noise_floor_dbm))
    paths = draw_paths(rng, lam=lam, n_rays=n_rays)
    return ChannelDrop(
        distance=d,
        los=los,
        shadow_db=shadow,
        pl_db=pl,
        snr_db=snr,
        beta=beta_from_snr_db(snr),
        paths=paths,
        rx=rx,
        tx=tx,
    )
