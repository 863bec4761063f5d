"""TAM spread of the Na pair against the packet OAM m_gamma, for both helicities.

    python scripts/tam_vs_mgamma.py --m-range -4 8
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from vortexpair.harness import ResultCache, RunConfig, run_sweep


@dataclass
class Config:
    preset: str = "Na-3p3s"
    m_min: int = -4
    m_max: int = 8
    t: float = 10.0
    sigma_b_nm: float = 100.0


def run(cfg: Config):
    rc = RunConfig(
        preset=cfg.preset, observable="tam", axis="m_gamma",
        values=tuple(float(m) for m in range(cfg.m_min, cfg.m_max + 1)),
        series_axis="lam", series_values=(1.0, -1.0), t=cfg.t,
        trap={"sigma_b_nm": cfg.sigma_b_nm},
    )
    return run_sweep(rc, cache=ResultCache())


def main(argv=None):
    cfg = Config()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-range", type=int, nargs=2, default=[cfg.m_min, cfg.m_max])
    ap.add_argument("--t", type=float, default=cfg.t)
    ap.add_argument("--sigma-b-nm", type=float, default=cfg.sigma_b_nm)
    a = ap.parse_args(argv)
    cfg = Config(m_min=a.m_range[0], m_max=a.m_range[1], t=a.t, sigma_b_nm=a.sigma_b_nm)
    res = run(cfg)
    print(f"{'m_gamma':>8} {'lam':>4} {'dJ_z':>12} {'ln dJ_z':>9}")
    for rec in res.records:
        m, lam = rec["inputs"]["m_gamma"], rec["inputs"]["lam"]
        s = rec["outputs"]["std"]
        print(f"{m:8.0f} {lam:4.0f} {s:12.4e} {np.log(s) if s > 0 else float('nan'):9.3f}")
    print(f"config {res.config_hash[:12]}", file=sys.stderr)


if __name__ == "__main__":
    main()
