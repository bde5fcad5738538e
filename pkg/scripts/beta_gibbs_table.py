"""Per-level log-ratio table for the Bernoulli convolution at the cubic Pisot parameter."""

import argparse
import sys
from dataclasses import dataclass

from matprodlab import betaconv


@dataclass
class Config:
    n: int = 14
    depth: int = 10


def main(cfg: Config) -> int:
    rep = betaconv.psi_and_weak_gibbs(cfg.n, cfg.depth)
    print(f"{'n':>3}  {'max log ratio':>14}  {'per n':>10}  {'nu/mu root':>10}")
    for row in zip(rep.levels, rep.max_log_ratio, rep.per_n, rep.root_ratio):
        print("{:3d}  {:14.6f}  {:10.6f}  {:10.6f}".format(*row))
    print(f"decreasing={rep.decreasing} final={rep.final:.4f}")
    return 0 if rep.ok(0.2) else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--depth", type=int, default=Config.depth)
    sys.exit(main(Config(**vars(ap.parse_args()))))
