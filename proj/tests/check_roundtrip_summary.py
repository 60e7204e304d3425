#!/usr/bin/env python3
"""Run a small roundtrip batch and recompute its summary from the per-row table."""

import csv
import statistics
import subprocess
import sys
import tempfile
from pathlib import Path


def main() -> int:
    cli = sys.argv[1]
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)
        subprocess.run(
            [cli, "roundtrip", "--scenes", "7", "--scene-size", "48", "--seed", "3",
             "--threads", "4", "--out-dir", str(out)],
            check=True,
        )
        with open(out / "roundtrip.tsv", newline="") as f:
            rows = list(csv.DictReader(f, delimiter="\t"))
        summary = dict(
            line.split("=", 1) for line in (out / "roundtrip_summary.txt").read_text().splitlines()
        )

    expected = {
        "images": len(rows),
        "median_psnr_hazy": statistics.median(float(r["psnr_hazy"]) for r in rows),
        "median_psnr_dehazed": statistics.median(float(r["psnr_dehazed"]) for r in rows),
        "median_psnr_gain": statistics.median(float(r["psnr_gain"]) for r in rows),
        "mean_t_mae": statistics.fmean(float(r["t_mae"]) for r in rows),
    }
    ok = len(rows) == 7 and summary.get("seed") == "3"
    for key, want in expected.items():
        got = float(summary[key])
        match = abs(got - want) <= 1e-12 * max(1.0, abs(want))
        print(f"{key}: summary={got!r} recomputed={want!r} {'ok' if match else 'MISMATCH'}")
        ok = ok and match
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
