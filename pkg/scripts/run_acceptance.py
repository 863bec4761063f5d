"""Run the acceptance checks and print one line per criterion.

    python scripts/run_acceptance.py --only 1,2,10
"""

import argparse
import sys
from dataclasses import dataclass

from vortexpair.harness.acceptance import run_checks


@dataclass
class Config:
    only: tuple = ()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", default="")
    a = ap.parse_args(argv)
    cfg = Config(tuple(int(x) for x in a.only.split(",") if x))
    results = run_checks(list(cfg.only) or None, stream=sys.stdout)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
