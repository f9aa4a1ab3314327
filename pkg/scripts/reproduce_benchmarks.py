#!/usr/bin/env python3
"""Reproduce all three benchmark verification studies in one go.

Writes per-benchmark CSVs (engine front vs grid-oracle front, or query trace
vs objective curve for the 1-D study) plus a metrics.json under out/verify_*,
then prints a summary table. Exit code 0 only if every study passes its
thresholds.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from moboga.cli import main as cli_main

BENCHMARKS = ("binh-korn", "constr-ex", "sinusoid-1d")


def run(out_root: Path) -> int:
    failures = 0
    rows = []
    for name in BENCHMARKS:
        out_dir = out_root / f"verify_{name.replace('-', '_')}"
        code = cli_main(["verify", name, "--out-dir", str(out_dir)])
        metrics = json.loads((out_dir / "metrics.json").read_text())
        rows.append((name, code, metrics))
        if code != 0:
            failures += 1

    print()
    print(f"{'benchmark':<14} {'status':<8} {'evals':>5}  detail")
    for name, code, m in rows:
        status = "ok" if code == 0 else f"exit {code}"
        if "generational_distance" in m:
            detail = (
                f"GD {m['generational_distance']:.4f} / {m['gd_threshold']:.4f}, "
                f"{m['hard_violations']} hard violations, {m['elapsed_seconds']:.1f}s"
            )
        else:
            detail = (
                f"best q {m['best_feasible_q']:.4f} vs oracle "
                f"{m['oracle_feasible_min']:.4f}, {m['soft_tail_queries']} soft-tail"
            )
        print(f"{name:<14} {status:<8} {m['evaluations']:>5}  {detail}")
    return 1 if failures else 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output root directory")
    args = parser.parse_args()
    sys.exit(run(Path(args.out)))
