"""Anti-diagonal coincidence P_{1,-1} + P_{-1,1} of the H preset against trap width.

Each point evaluates a full coincidence matrix (about 20 s on one core).

    python scripts/pair_curve.py --num 12
"""

import argparse
from dataclasses import dataclass

import numpy as np

from vortexpair.harness.acceptance import pair_curve


@dataclass
class Config:
    sigma_b_min_nm: float = 10.0
    sigma_b_max_nm: float = 190.0
    num: int = 12
    m_gamma: int = -1


def main(argv=None):
    cfg = Config()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--range", type=float, nargs=2, default=[cfg.sigma_b_min_nm, cfg.sigma_b_max_nm])
    ap.add_argument("--num", type=int, default=cfg.num)
    ap.add_argument("--m-gamma", type=int, default=cfg.m_gamma)
    a = ap.parse_args(argv)
    cfg = Config(a.range[0], a.range[1], a.num, a.m_gamma)
    grid = np.linspace(cfg.sigma_b_min_nm, cfg.sigma_b_max_nm, cfg.num)
    sb, vals = pair_curve(grid, m_gamma=cfg.m_gamma)
    print("sigma_b_nm,P_anti")
    for x, v in zip(sb, vals):
        print(f"{x:.2f},{v:.6f}")


if __name__ == "__main__":
    main()
