"""Command line front end for running simulation campaigns."""

from __future__ import annotations

import argparse
import json
import sys

from .campaign import (
    DEFAULT_SCHEMES,
    MODES,
    CampaignConfig,
    emit_results,
    run_campaign,
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmimo",
        description="Link-level Monte Carlo campaigns for low-resolution "
        "MIMO receivers",
    )
    sub = p.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode, help=f"run a {mode} campaign")
        sp.add_argument("--config", help="JSON file overriding config defaults")
        sp.add_argument("--seed", type=int, default=0, help="master seed")
        sp.add_argument("--drops", type=int, default=500, help="channel drops")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument(
            "--schemes",
            help="comma-separated scheme list "
            f"(default: {','.join(DEFAULT_SCHEMES[mode])})",
        )
        sp.add_argument("--workers", type=int, default=1, help="process count")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CampaignConfig()
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
        cfg = CampaignConfig.from_dict({**cfg.to_dict(), **overrides})
    schemes = args.schemes.split(",") if args.schemes else None
    records = run_campaign(
        cfg,
        args.mode,
        schemes=schemes,
        n_drops=args.drops,
        master_seed=args.seed,
        workers=args.workers,
    )
    used = schemes if schemes is not None else DEFAULT_SCHEMES[args.mode]
    emit_results(records, args.out, cfg, args.mode, used, args.drops, args.seed)
    n_err = sum(1 for r in records if r.error)
    print(
        f"{args.mode}: {args.drops} drops, {len(records)} records, "
        f"{n_err} errors -> {args.out}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
