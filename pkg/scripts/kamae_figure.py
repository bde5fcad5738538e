"""Sample the Kamae potential on [0, 1) and report how the prefix errors shrink with length."""

import argparse
import csv
import sys
from dataclasses import dataclass

from matprodlab import kamae


@dataclass
class Config:
    count: int = 1024
    depth: int = 12
    lengths: tuple[int, ...] = (10, 20, 40, 80)
    out: str = "kamae_potential.csv"


def main(cfg: Config) -> int:
    pts = kamae.figure_samples(cfg.count, cfg.depth)
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y", "phi"])
        w.writerows((f"{y:.17g}", f"{v:.17g}") for y, v in pts)
    print(f"wrote {len(pts)} samples to {cfg.out}")
    print("length  " + "  ".join(f"{k:>10}" for k in kamae.potential_convergence(n=cfg.lengths[0]).errors))
    for n in cfg.lengths:
        errs = kamae.potential_convergence(n=n).errors
        print(f"{n:6d}  " + "  ".join(f"{e:10.3e}" for e in errs.values()))
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--depth", type=int, default=Config.depth)
    ap.add_argument("--lengths", type=int, nargs="+", default=list(Config.lengths))
    ap.add_argument("--out", default=Config.out)
    a = ap.parse_args()
    sys.exit(main(Config(a.count, a.depth, tuple(a.lengths), a.out)))
