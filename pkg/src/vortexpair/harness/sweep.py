"""Sweep execution with an ordered worker pool and a content-addressed cache."""

import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import __version__
from ..errors import DomainError
from ..observables import GridSpec, entanglement_witness, pair_probability, tam_stats
from ..photon import PhotonPacket, TrapSpec
from ..presets import get_preset
from ..units import nm_to_inv_ev
from .config import RunConfig

TAM_COLUMNS = ("j_z_mean", "mismatch", "variance", "std", "I_1", "I_0", "I_m1")


@dataclass
class SweepResult:
    """Ordered records of a sweep plus provenance.

    ``wall_times`` and ``from_cache`` are run metadata kept out of emitted
    files so that outputs stay byte-identical between runs.
    """

    config_hash: str
    preset: str
    version: str
    config: dict
    input_columns: list
    output_columns: list
    records: list
    wall_times: list = field(default_factory=list, compare=False)
    from_cache: bool = field(default=False, compare=False)
    evaluations: int = field(default=0, compare=False)


def default_window(cfg, atom_me):
    """OAM window covering every m_gamma in the sweep and m_e, padded by 2."""
    if cfg.window is not None:
        return tuple(cfg.window)
    ms = []
    for sv, v in cfg.points():
        ms.append(_point_value(cfg, sv, v, "m_gamma"))
    ms = [m for m in ms if m is not None] or [None]
    base = get_preset(cfg.preset).packet.m_gamma
    ms = [base if m is None else int(m) for m in ms]
    me = atom_me
    return (min(ms + [me]) - 2, max(ms + [me]) + 2)


def _point_value(cfg, sv, v, name):
    if cfg.axis == name:
        return v
    if cfg.series_axis == name:
        return sv
    return cfg.packet.get(name)


def build_inputs(cfg, series_value, value):
    """Atom, packet, trap and time for one grid point."""
    params = {"t": cfg.t, **cfg.packet, **cfg.trap}
    if cfg.series_axis:
        params[cfg.series_axis] = series_value
    params[cfg.axis] = value

    cg = cfg.atom.get("cg_convention", "printed")
    try:
        preset = get_preset(cfg.preset, cg)
    except KeyError as exc:
        raise DomainError(str(exc)) from None
    atom = preset.atom
    extra = {k: v for k, v in cfg.atom.items() if k != "cg_convention"}
    if extra:
        atom = replace(atom, **extra)

    base = preset.packet
    kappa_ratio = params.get("kappa_ratio", base.kappa_c / base.omega_c)
    omega_c = atom.omega_a + params.get("detuning", 0.0)
    packet = PhotonPacket.from_frequency(
        omega_c,
        m_gamma=int(params.get("m_gamma", base.m_gamma)),
        lam=int(params.get("lam", base.lam)),
        kappa_ratio=kappa_ratio,
        sigma_ratio=0.1 * params.get("sigma_mult", 1.0),
        b=nm_to_inv_ev(params.get("b_nm", 0.0)),
        phi_b=params.get("phi_b", 0.0),
    )
    trap = TrapSpec.from_nm(params["sigma_b_nm"]) if "sigma_b_nm" in params else preset.trap
    return atom, packet, trap, float(params["t"])


def evaluate_point(cfg, index):
    """Evaluate one grid point; returns (record, wall_time)."""
    start = time.perf_counter()
    sv, v = cfg.points()[index]
    inputs = {}
    if cfg.series_axis:
        inputs[cfg.series_axis] = sv
    inputs[cfg.axis] = v
    record = {"index": index, "inputs": inputs, "outputs": {}, "errors": {},
              "status": "ok", "warnings": []}
    try:
        atom, packet, trap, t = build_inputs(cfg, sv, v)
        if cfg.observable == "tam":
            st = tam_stats(atom, packet, trap, t, rtol=cfg.rtol)
            record["outputs"] = {
                "j_z_mean": st.j_z_mean, "mismatch": st.mismatch,
                "variance": st.variance, "std": st.std,
                "I_1": st.channels[1], "I_0": st.channels[0], "I_m1": st.channels[-1],
            }
            record["warnings"] = list(st.warnings)
        else:
            window = default_window(cfg, atom.m_e)
            grid = GridSpec(**cfg.grid)
            pm = pair_probability(atom, packet, trap, window, grid)
            out = {
                "captured_mass": pm.captured_mass,
                "off_line_mass": pm.off_line_mass,
                "witness": entanglement_witness(pm),
                "tau_change": pm.tau_change,
            }
            for l1 in pm.labels:
                for l2 in pm.labels:
                    out[_p_name(l1, l2)] = pm.get(l1, l2)
            record["outputs"] = out
            record["errors"] = {"fidelity_emission": pm.fidelity["emission"],
                                "fidelity_packet": pm.fidelity["packet"]}
    except DomainError as exc:
        record["status"] = "regime"
        record["warnings"] = [str(exc)]
    return record, time.perf_counter() - start


def _p_name(l1, l2):
    def tag(x):
        return f"m{-x}" if x < 0 else str(x)

    return f"P_{tag(l1)}_{tag(l2)}"


def output_columns(cfg):
    if cfg.observable == "tam":
        return list(TAM_COLUMNS)
    me = cfg.atom.get("m_e", get_preset(cfg.preset).atom.m_e)
    lo, hi = default_window(cfg, me)
    cols = ["captured_mass", "off_line_mass", "witness", "tau_change"]
    cols += [_p_name(a, b) for a in range(lo, hi + 1) for b in range(lo, hi + 1)]
    return cols


def _fill(record, columns):
    nan = math.nan
    record["outputs"] = {c: record["outputs"].get(c, nan) for c in columns}
    return record


def run_sweep(cfg: RunConfig, workers=1, cache=None, use_cache=True, log=sys.stderr):
    """Evaluate every grid point of ``cfg``; identical configs hit the cache."""
    key = cfg.content_hash()
    if cache is not None and use_cache:
        hit = cache.get(key)
        if hit is not None:
            if log:
                print(f"cache hit {key[:12]}", file=log)
            hit.from_cache = True
            return hit

    n = len(cfg.points())
    if workers <= 1 or n == 1:
        results = [evaluate_point(cfg, i) for i in range(n)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate_point, [cfg] * n, range(n)))
    columns = output_columns(cfg)
    records = [_fill(r, columns) for r, _ in results]
    inputs = ([cfg.series_axis] if cfg.series_axis else []) + [cfg.axis]
    result = SweepResult(
        config_hash=key,
        preset=cfg.preset,
        version=__version__,
        config=json.loads(cfg.canonical()),
        input_columns=inputs,
        output_columns=columns,
        records=records,
        wall_times=[w for _, w in results],
        evaluations=n,
    )
    if log:
        print(f"evaluated {n} points in {sum(result.wall_times):.2f} s", file=log)
    if cache is not None:
        cache.put(key, result)
    return result


# ---------------------------------------------------------------------------
# figure presets

FIGURES = ("fig2a", "fig2b", "fig2c", "fig3", "pairprob")


def figure_config(name):
    """Default RunConfig for a named figure."""
    t_axis = tuple(float(x) for x in (0.5, 1, 1.5, 2, 3, 4, 5, 6, 7, 8, 9, 10))
    if name in ("fig2a", "fig2b"):
        return RunConfig(preset="Na-3p3s", observable="tam", axis="t", values=t_axis,
                         series_axis="sigma_mult", series_values=(1.0, 1.5, 2.0))
    if name == "fig2c":
        return RunConfig(preset="Na-3p3s", observable="tam", axis="t", values=t_axis,
                         series_axis="m_gamma", series_values=(0.0, 1.0, 2.0, 3.0))
    if name == "fig3":
        return RunConfig(preset="Na-3p3s", observable="tam", axis="m_gamma",
                         values=tuple(float(m) for m in range(-4, 9)), t=10.0)
    if name == "pairprob":
        sb = tuple(float(x) for x in np.linspace(10.0, 190.0, 12))
        return RunConfig(preset="H-2p1s", observable="pair", axis="sigma_b_nm", values=sb,
                         series_axis="m_gamma", series_values=(-1.0, 0.0, 2.0))
    raise KeyError(f"unknown figure {name!r}; known: {FIGURES}")


def run_figure(name, overrides=None, **kw):
    """Run a figure's sweep; ``overrides`` is INI text merged onto its defaults."""
    from .config import parse_config

    cfg = figure_config(name)
    if overrides:
        cfg = parse_config(overrides, f"<{name} overrides>", base=cfg)
    return run_sweep(cfg, **kw)
