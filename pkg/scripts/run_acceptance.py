"""Run the acceptance criteria and write a JSON report."""

import argparse
import json
import sys
from dataclasses import dataclass

from matprodlab import verify


@dataclass
class Config:
    profile: str = "full"
    only: tuple[int, ...] = ()
    out: str = "acceptance.json"


def main(cfg: Config) -> int:
    results = verify.verify_all(cfg.profile, list(cfg.only) or None)
    for r in results:
        print(r.line(), flush=True)
    with open(cfg.out, "w") as fh:
        json.dump([r.to_json() for r in results], fh, indent=2, default=str)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--profile", choices=sorted(verify.PROFILES), default=Config.profile)
    ap.add_argument("--only", type=int, nargs="*", default=[])
    ap.add_argument("--out", default=Config.out)
    a = ap.parse_args()
    sys.exit(main(Config(a.profile, tuple(a.only), a.out)))
