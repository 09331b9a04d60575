"""``heatbench`` command line entry point."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import bench
from .report import FORMATS, emit_report

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="heatbench",
        description="Time the heat-equation solvers and check that they agree bit for bit.",
    )
    p.add_argument("--h", type=int, required=True, help="grid height H")
    p.add_argument("--w", type=int, default=None, help="grid width (default 2*H)")
    p.add_argument("--t", type=int, default=None, help="time steps T (default 2*H)")
    p.add_argument("--variant", choices=(*bench.VARIANTS, "all"), default="all")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--runs", type=int, default=19)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--verify", action="store_true",
                   help="compare final fields of all variants before timing")
    p.add_argument("--no-warmup", dest="warmup", action="store_false",
                   help="skip the untimed warm-up solve")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    variants = bench.VARIANTS if args.variant == "all" else (args.variant,)
    try:
        cfg = bench.BenchConfig(h=args.h, w=args.w, t_max=args.t, workers=args.workers,
                                runs=args.runs, seed=args.seed, variants=variants,
                                verify=args.verify, warmup=args.warmup)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"heatbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.verify:
        vcfg = cfg if len(cfg.variants) >= 2 else dataclasses.replace(cfg, variants=bench.VARIANTS)
        report = bench.verify_all(vcfg)
        for line in report.lines():
            print(line, file=sys.stderr)
        if not report.ok:
            return EXIT_VERIFY_FAILED

    stats = [bench.time_variant(cfg, v) for v in cfg.variants]
    metadata = {
        "config": dataclasses.asdict(cfg),
        "warmup": cfg.warmup,
        "hardware_threads": os.cpu_count(),
        "prng": bench.PRNG_NAME,
    }
    sys.stdout.write(emit_report(stats, args.format, metadata))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
