"""Monte Carlo campaign driver with deterministic seeding and CSV output.

Every drop gets an independent child of one master SeedSequence, so
records are reproducible bit-for-bit for a given (config, seed, drops)
regardless of worker count or completion order. Output files carry no
timestamps; meta.json identifies a run by the hash of its canonical
config.
"""

from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .allocation import SCHEMES, wp_ua
from .channel import Upa, draw_channel_drop
from .estimation import estimate_channel
from .rates import (
    RateReport,
    benchmark_dl,
    benchmark_ptp,
    dl_user_rate,
    overhead_scale,
    ptp_rate_mismatched,
    ptp_rate_perfect,
)
from .subchannels import effective_channel, real_expand, svd_subchannels

MODES = ("ptp-perfect", "ptp-estimated", "dl", "estimation-sweep")

DEFAULT_SCHEMES = {
    "ptp-perfect": ["wp-ua", "up-ua", "sp-sa"],
    "ptp-estimated": ["wp-ua"],
    "dl": ["tdma-pooled", "tdma-naive"],
    "estimation-sweep": ["lmmse"],
}

# estimation-sweep grid: pilot counts and bits per real dimension
SWEEP_PILOTS = (128, 256, 512)
SWEEP_BITS = (1, 2, 3)


@dataclass
class CampaignConfig:
    """System parameters; defaults describe the reference deployment."""

    carrier_ghz: float = 28.0
    bandwidth_ghz: float = 1.0
    bs_rows: int = 8
    bs_cols: int = 8
    ue_rows: int = 4
    ue_cols: int = 4
    tx_power_dbm: float = 30.0
    noise_floor_dbm: float = -78.0
    cell_inner_m: float = 10.0
    cell_outer_m: float = 50.0
    cluster_rate: float = 1.8
    rays_per_cluster: int = 20
    n_adc: int = 8
    n_users: int = 10
    n_coherence: int = 10240
    n_pilot: int = 512
    n_adc_est: int = 96
    mc_samples: int = 100_000
    total_power: float = 1.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        known = {f.name for f in fields(cls)}
        bad = set(d) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        return cls(**d)

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    @property
    def bs(self) -> Upa:
        return Upa(self.bs_rows, self.bs_cols)

    @property
    def ue(self) -> Upa:
        return Upa(self.ue_rows, self.ue_cols)


@dataclass
class DropRecord:
    drop_id: int
    user_id: int
    scheme: str
    csi: str
    rate: float
    benchmark: float
    distance: float
    los: bool
    path_loss_db: float
    snr_db: float
    nmse_db: float = float("nan")
    error: str = ""


FIELDS = [f.name for f in fields(DropRecord)]


def _draw(cfg: CampaignConfig, rng: np.random.Generator):
    return draw_channel_drop(
        rng,
        rx=cfg.ue,
        tx=cfg.bs,
        r_in=cfg.cell_inner_m,
        r_out=cfg.cell_outer_m,
        tx_power_dbm=cfg.tx_power_dbm,
        noise_floor_dbm=cfg.noise_floor_dbm,
        lam=cfg.cluster_rate,
        n_rays=cfg.rays_per_cluster,
    )


def run_drop(
    cfg: CampaignConfig,
    mode: str,
    schemes: list[str],
    drop_id: int,
    seed: np.random.SeedSequence,
) -> list[DropRecord]:
    """Evaluate one channel drop; failures are recorded, not raised."""
    rng = np.random.default_rng(seed)
    records: list[DropRecord] = []
    if mode == "dl":
        drops = [_draw(cfg, rng) for _ in range(cfg.n_users)]
        for uid, drop in enumerate(drops):
            base = dict(
                drop_id=drop_id,
                user_id=uid,
                distance=drop.distance,
                los=drop.los,
                path_loss_db=drop.pl_db,
                snr_db=drop.snr_db,
            )
            try:
                dec = svd_subchannels(real_expand(drop.channel()))
                alloc = wp_ua(dec.sigma, cfg.n_adc, cfg.total_power)
                bench = benchmark_dl(
                    dec.sigma, cfg.n_adc, cfg.total_power, cfg.n_users
                )
                for scheme in schemes:
                    pooled = scheme == "tdma-pooled"
                    rate = dl_user_rate(dec.sigma, alloc, cfg.n_users, pooled=pooled)
                    records.append(
                        DropRecord(
                            scheme=scheme, csi="perfect", rate=rate,
                            benchmark=bench, **base,
                        )
                    )
            except Exception as exc:  # keep the campaign going
                for scheme in schemes:
                    records.append(
                        DropRecord(
                            scheme=scheme, csi="perfect", rate=float("nan"),
                            benchmark=float("nan"), error=repr(exc), **base,
                        )
                    )
        return records

    drop = _draw(cfg, rng)
    base = dict(
        drop_id=drop_id,
        user_id=0,
        distance=drop.distance,
        los=drop.los,
        path_loss_db=drop.pl_db,
        snr_db=drop.snr_db,
    )

    if mode == "estimation-sweep":
        for method in schemes:
            for n_pilot in SWEEP_PILOTS:
                for bits in SWEEP_BITS:
                    label = f"{method}-p{n_pilot}-b{bits}"
                    try:
                        _, nm = estimate_channel(
                            rng, drop, n_pilot=n_pilot,
                            n_adc=bits * 2 * cfg.ue.n, method=method,
                        )
                        records.append(
                            DropRecord(
                                scheme=label, csi="estimated",
                                rate=float("nan"), benchmark=float("nan"),
                                nmse_db=nm, **base,
                            )
                        )
                    except Exception as exc:
                        records.append(
                            DropRecord(
                                scheme=label, csi="estimated",
                                rate=float("nan"), benchmark=float("nan"),
                                error=repr(exc), **base,
                            )
                        )
        return records

    h_real = real_expand(drop.channel())
    dec = svd_subchannels(h_real)
    bench = benchmark_ptp(dec.sigma, cfg.n_adc, cfg.total_power)

    if mode == "ptp-perfect":
        for scheme in schemes:
            try:
                alloc = SCHEMES[scheme](dec.sigma, cfg.n_adc, cfg.total_power)
                rate = float(np.sum(ptp_rate_perfect(dec.sigma, alloc)))
                records.append(
                    DropRecord(
                        scheme=scheme, csi="perfect", rate=rate,
                        benchmark=bench, **base,
                    )
                )
            except Exception as exc:
                records.append(
                    DropRecord(
                        scheme=scheme, csi="perfect", rate=float("nan"),
                        benchmark=float("nan"), error=repr(exc), **base,
                    )
                )
        return records

    if mode == "ptp-estimated":
        try:
            h_hat, nm = estimate_channel(
                rng, drop, n_pilot=cfg.n_pilot, n_adc=cfg.n_adc_est
            )
            dec_hat = svd_subchannels(real_expand(h_hat))
            g_eff = effective_channel(h_real, dec_hat.u, dec_hat.v)
        except Exception as exc:
            return [
                DropRecord(
                    scheme=s, csi="estimated", rate=float("nan"),
                    benchmark=float("nan"), error=repr(exc), **base,
                )
                for s in schemes
            ]
        bench_est = overhead_scale(bench, cfg.n_coherence, cfg.n_pilot)
        for scheme in schemes:
            try:
                alloc = SCHEMES[scheme](dec_hat.sigma, cfg.n_adc, cfg.total_power)
                per_sub = ptp_rate_mismatched(
                    g_eff, dec_hat.sigma, alloc, rng, cfg.mc_samples
                )
                rate = overhead_scale(
                    float(np.sum(per_sub)), cfg.n_coherence, cfg.n_pilot
                )
                records.append(
                    DropRecord(
                        scheme=scheme, csi="estimated", rate=rate,
                        benchmark=bench_est, nmse_db=nm, **base,
                    )
                )
                # matched perfect-CSI companion for gap analysis
                alloc_p = SCHEMES[scheme](dec.sigma, cfg.n_adc, cfg.total_power)
                rate_p = float(np.sum(ptp_rate_perfect(dec.sigma, alloc_p)))
                records.append(
                    DropRecord(
                        scheme=f"{scheme}-perfect", csi="perfect",
                        rate=rate_p, benchmark=bench, **base,
                    )
                )
            except Exception as exc:
                records.append(
                    DropRecord(
                        scheme=scheme, csi="estimated", rate=float("nan"),
                        benchmark=float("nan"), nmse_db=nm, error=repr(exc),
                        **base,
                    )
                )
        return records

    raise ValueError(f"unknown mode: {mode}")


def _task(args) -> list[DropRecord]:
    cfg_dict, mode, schemes, drop_id, seed = args
    return run_drop(CampaignConfig.from_dict(cfg_dict), mode, schemes, drop_id, seed)


def run_campaign(
    cfg: CampaignConfig,
    mode: str,
    schemes: list[str] | None = None,
    n_drops: int = 500,
    master_seed: int = 0,
    workers: int = 1,
) -> list[DropRecord]:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    schemes = list(DEFAULT_SCHEMES[mode]) if schemes is None else list(schemes)
    seeds = np.random.SeedSequence(master_seed).spawn(n_drops)
    tasks = [
        (cfg.to_dict(), mode, schemes, i, seeds[i]) for i in range(n_drops)
    ]
    if workers <= 1:
        chunks = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_task, tasks, chunksize=8))
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.drop_id, r.user_id, r.scheme, r.csi))
    return records


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_results(
    records: list[DropRecord],
    out_dir: str | Path,
    cfg: CampaignConfig,
    mode: str,
    schemes: list[str],
    n_drops: int,
    master_seed: int,
) -> None:
    """Write records.csv, per-scheme CDFs, and meta.json under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "records.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS)
        for r in records:
            w.writerow([_fmt(getattr(r, f)) for f in FIELDS])

    sweep = mode == "estimation-sweep"
    labels = sorted({r.scheme for r in records})
    for label in labels:
        vals = [
            (r.nmse_db if sweep else r.rate)
            for r in records
            if r.scheme == label and not r.error
        ]
        _write_cdf(out / f"cdf_{label}.csv", vals)
    if not sweep:
        seen = set()
        bench = []
        for r in records:
            key = (r.drop_id, r.user_id)
            if key not in seen and not r.error:
                seen.add(key)
                bench.append(r.benchmark)
        _write_cdf(out / "cdf_benchmark.csv", bench)

    meta = {
        "mode": mode,
        "schemes": schemes,
        "n_drops": n_drops,
        "master_seed": master_seed,
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "n_records": len(records),
        "n_errors": sum(1 for r in records if r.error),
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _write_cdf(path: Path, values: list[float]) -> None:
    vals = sorted(v for v in values if not np.isnan(v))
    lines = ["value,cdf"]
    n = len(vals)
    for i, v in enumerate(vals):
        lines.append(f"{_fmt(float(v))},{_fmt((i + 1) / n)}")
    path.write_text("\n".join(lines) + "\n")


def load_records_csv(path: str | Path) -> list[DropRecord]:
    """Inverse of the records.csv writer."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != FIELDS:
        raise ValueError("unexpected records.csv header")
    out = []
    for parts in rows[1:]:
        d = dict(zip(FIELDS, parts))
        out.append(
            DropRecord(
                drop_id=int(d["drop_id"]),
                user_id=int(d["user_id"]),
                scheme=d["scheme"],
                csi=d["csi"],
                rate=float(d["rate"]),
                benchmark=float(d["benchmark"]),
                distance=float(d["distance"]),
                los=d["los"] == "1",
                path_loss_db=float(d["path_loss_db"]),
                snr_db=float(d["snr_db"]),
                nmse_db=float(d["nmse_db"]),
                error=d["error"],
            )
        )
    return out
