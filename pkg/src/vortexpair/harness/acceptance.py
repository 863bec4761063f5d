"""Acceptance checks shared by ``vortexpair check`` and the test suite.

Each check returns a :class:`CheckResult` with the measured and expected
values, pass flag and wall time. Tolerances are fixed here, not passed in.
"""

import math
import tempfile
import time
import warnings
from dataclasses import dataclass, replace

import numpy as np

from ..dynamics import pw_double_integral, reduced_weight, scattering_integral
from ..errors import RegimeWarning
from ..observables import pair_probability, tam_stats
from ..oracles import pw_double_integral_quad, reduced_weight_mc, scattering_integral_quad
from ..photon import TrapSpec, bessel_argument
from ..presets import h_preset, na_preset
from ..specfun import bessel_j, clebsch_gordan, faddeeva, spherical_bessel, wigner_d1_matrix
from ..units import coherence_length_um
from .cache import ResultCache
from .config import RunConfig
from .emit import to_csv, to_json
from .sweep import run_sweep

ORACLE_REL = 1e-7
MC_SIGMAS = 3.0
N_NODES = 20


@dataclass
class CheckResult:
    number: int
    name: str
    measured: str
    expected: str
    passed: bool
    wall: float = 0.0

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.number:2d} {self.name}: measured {self.measured}; "
                f"expected {self.expected} ({self.wall:.1f} s)")


def _std(preset, t=10.0, **packet):
    p = preset.with_packet(**packet) if packet else preset
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        return tam_stats(p.atom, p.packet, p.trap, t)


def _with_sigma(preset, mult):
    pk = preset.packet
    return preset.with_packet(sigma=0.1 * mult * pk.kappa_c)


def check_unit_anchor(preset=None):
    p = preset or na_preset()
    x = bessel_argument(p.packet.kappa_c, p.trap.sigma_b)
    return CheckResult(1, "kappa_c sigma_b / 2", f"{x:.5f}", "0.053 +- 0.001", abs(x - 0.053) <= 0.001)


def check_coherence_length(preset=None):
    p = preset or na_preset()
    ell = coherence_length_um(p.packet.sigma)
    return CheckResult(2, "coherence length 1/sigma_0 [um]", f"{ell:.4f}", "9.38 +- 0.02",
                       abs(ell - 9.38) <= 0.02)


def check_magnitude(preset=None):
    p = preset or na_preset()
    d = _std(p).std
    return CheckResult(3, "dJ_z magnitude (Na, t=10)", f"{d:.3e}", "in [1e-8, 1e-7]", 1e-8 <= d <= 1e-7)


def _interior_maxima(ms, vals):
    return [ms[i] for i in range(1, len(ms) - 1) if vals[i] > vals[i - 1] and vals[i] > vals[i + 1]]


def check_two_maxima(preset=None):
    p = preset or na_preset()
    ms = list(range(-4, 5))
    found = {}
    for lam, want in ((1, [0, 2]), (-1, [-2, 0])):
        vals = [_std(p, m_gamma=m, lam=lam).std for m in ms]
        found[lam] = (_interior_maxima(ms, vals), want)
    ok = all(f == w for f, w in found.values())
    meas = "; ".join(f"lam={lam:+d}: peaks {f}" for lam, (f, _) in found.items())
    return CheckResult(4, "two maxima of dJ_z over m_gamma", meas,
                       "lam=+1: [0, 2]; lam=-1: [-2, 0]", ok)


def check_sigma_orderings(preset=None):
    p = preset or na_preset()
    stats = [_std(_with_sigma(p, k)) for k in (1.0, 1.5, 2.0)]
    dj = [s.std for s in stats]
    mis = [s.mismatch for s in stats]
    ok = dj[0] > dj[1] > dj[2] and mis[0] < mis[1] < mis[2]
    meas = "dJ " + ", ".join(f"{v:.3e}" for v in dj) + "; DJ " + ", ".join(f"{v:.3e}" for v in mis)
    return CheckResult(5, "sigma orderings at t=10", meas,
                       "dJ strictly decreasing, DJ strictly increasing", ok)


def check_log_tail(preset=None):
    p = preset or na_preset()
    ms = np.array([4, 5, 6])
    logs = np.log([_std(p, m_gamma=int(m)).std for m in ms])
    slope = float(np.polyfit(ms, logs, 1)[0])
    ref = math.log(bessel_argument(p.packet.kappa_c, p.trap.sigma_b))
    ok = abs(slope - ref) <= 0.15 * abs(ref)
    return CheckResult(6, "ln dJ_z slope over m_gamma 4..6", f"{slope:.4f}",
                       f"{ref:.4f} within 15%", ok)


def _random_nodes(seed, n=N_NODES):
    rng = np.random.default_rng(seed)
    return [
        dict(d1=rng.uniform(-10, 10), d2=rng.uniform(-10, 10), dc=rng.uniform(-5, 5),
             s=float(np.exp(rng.uniform(np.log(0.5), np.log(20.0)))), tau=rng.uniform(0.5, 10.0))
        for _ in range(n)
    ]


def oracle_errors(seed=2024, n=N_NODES):
    """Worst relative deviations of closed forms from quadrature, and MC z-scores."""
    nodes = _random_nodes(seed, n)
    pw = max(
        abs(complex(pw_double_integral(q["d1"], q["d2"], q["tau"])) - o) / abs(o)
        for q in nodes
        for o in [pw_double_integral_quad(q["d1"], q["d2"], q["tau"])]
    )
    sc = max(
        abs(complex(scattering_integral(q["d1"], q["d2"], q["s"], q["dc"], q["tau"])) - o) / abs(o)
        for q in nodes
        for o in [scattering_integral_quad(q["d1"], q["d2"], q["s"], q["dc"], q["tau"])]
    )
    na = na_preset()
    s0 = na.packet.sigma / na.atom.gamma
    dc0 = (na.packet.omega_c - na.atom.omega_a) / na.atom.gamma
    mc_nodes = [(s0, dc0, 10.0)] + [(q["s"], q["dc"], q["tau"]) for q in nodes]
    z = []
    for i, (s, dc, tau) in enumerate(mc_nodes):
        k = reduced_weight(s, dc, tau)[0]
        mean, se = reduced_weight_mc(s, dc, tau, seed=seed + i)
        z.append(abs(k - mean) / se)
    return pw, sc, max(z)


def check_oracles():
    pw, sc, z = oracle_errors()
    ok = pw <= ORACLE_REL and sc <= ORACLE_REL and z <= MC_SIGMAS
    return CheckResult(7, f"closed forms vs oracles ({N_NODES} nodes)",
                       f"pw {pw:.1e}, F {sc:.1e}, I max |z| {z:.2f}",
                       f"rel <= {ORACLE_REL:g}, |z| <= {MC_SIGMAS:g}", ok)


def check_conservation_limit(na=None, h=None):
    na = na or na_preset()
    h = h or h_preset()
    narrow = _std(replace(na, trap=TrapSpec.from_nm(1.0)))
    wide = _std(na)
    ratio = narrow.std / wide.std
    pm = pair_probability(h.atom, h.packet, TrapSpec.from_nm(1.0))
    ok = abs(narrow.mismatch) < 1e-12 and ratio < 1e-6 and pm.off_line_mass < 1e-4
    meas = f"|DJ| {abs(narrow.mismatch):.1e}, dJ ratio {ratio:.1e}, off-line {pm.off_line_mass:.1e}"
    return CheckResult(8, "sigma_b -> 1 nm conservation limit", meas,
                       "|DJ| < 1e-12, ratio < 1e-6, off-line < 1e-4", ok)


def pair_curve(sigma_b_nm=None, m_gamma=-1, preset=None):
    """P_{1,-1} + P_{-1,1} of the H preset over a trap-width grid (nm)."""
    p = preset or h_preset()
    grid = np.linspace(10.0, 190.0, 12) if sigma_b_nm is None else np.asarray(sigma_b_nm)
    packet = p.with_packet(m_gamma=m_gamma).packet
    vals = []
    for sb in grid:
        pm = pair_probability(p.atom, packet, TrapSpec.from_nm(float(sb)))
        vals.append(pm.get(1, -1) + pm.get(-1, 1))
    return grid, np.array(vals)


def check_non_monotonic(preset=None):
    grid, vals = pair_curve(preset=preset)
    i = int(np.argmax(vals))
    ok = 0 < i < len(vals) - 1
    meas = f"argmax at sigma_b={grid[i]:.1f} nm (index {i}); ends {vals[0]:.3e} -> {vals[-1]:.3e}"
    return CheckResult(9, "H preset P_{1,-1}+P_{-1,1} interior maximum", meas,
                       "interior maximum on 12-point grid", ok)


SPECFUN_TOL = {
    "d1 unitarity": 1e-12,
    "CG orthogonality": 1e-12,
    "Bessel recurrence": 1e-10,
    "spherical Wronskian": 1e-10,
    "Faddeeva symmetry": 1e-10,
}


def spherical_bessel_derivative(L, x):
    if L == 0:
        return -spherical_bessel(1, x)
    return spherical_bessel(L - 1, x) - (L + 1) / x * spherical_bessel(L, x)


def specfun_residuals():
    """Largest residual of each special-function identity."""
    from scipy.special import spherical_yn

    out = {}
    thetas = np.linspace(0.0, np.pi, 13)
    out["d1 unitarity"] = max(
        float(np.abs(wigner_d1_matrix(t) @ wigner_d1_matrix(t).T - np.eye(3)).max()) for t in thetas
    )
    worst = 0.0
    for j2 in range(0, 4):
        for M in range(-(1 + j2), 2 + j2):
            Js = [J for J in range(abs(1 - j2), j2 + 2) if abs(M) <= J]
            pairs = [(m1, M - m1) for m1 in (-1, 0, 1) if abs(M - m1) <= j2]
            C = np.array([[clebsch_gordan(1, m1, j2, m2, J, M) for J in Js] for m1, m2 in pairs])
            worst = max(worst, float(np.abs(C.T @ C - np.eye(len(Js))).max()))
    out["CG orthogonality"] = worst
    x = np.linspace(0.1, 20.0, 200)
    out["Bessel recurrence"] = max(
        float(np.abs(bessel_j(m - 1, x) + bessel_j(m + 1, x) - 2 * m / x * bessel_j(m, x)).max())
        for m in range(-8, 9)
    )
    xs = np.linspace(0.5, 20.0, 40)
    wr = 0.0
    for L in range(0, 6):
        j, jd = spherical_bessel(L, xs), spherical_bessel_derivative(L, xs)
        y, yd = spherical_yn(L, xs), spherical_yn(L, xs, derivative=True)
        wr = max(wr, float(np.abs((j * yd - jd * y) * xs**2 - 1.0).max()))
    out["spherical Wronskian"] = wr
    z = np.array([1 + 2j, 0.3 + 0.2j, -1.0 + 0.5j, 2.0 - 0.3j, 4.0 + 3.0j])
    out["Faddeeva symmetry"] = float(np.max(np.abs(faddeeva(-np.conj(z)) - np.conj(faddeeva(z)))
                                            / np.abs(faddeeva(z))))
    return out


def check_specfun():
    res = specfun_residuals()
    bad = [k for k, v in res.items() if v > SPECFUN_TOL[k]]
    worst = max(res, key=lambda k: res[k] / SPECFUN_TOL[k])
    return CheckResult(10, "special-function identities",
                       f"worst {worst} residual {res[worst]:.1e}",
                       "unitarity/orthogonality <= 1e-12, recurrence/Wronskian/symmetry <= 1e-10",
                       not bad)


def random_configs(n=10, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        out.append(RunConfig(
            preset="Na-3p3s", observable="tam", axis="t",
            values=tuple(float(v) for v in np.round(rng.uniform(0.5, 10.0, 2), 3)),
            packet={"m_gamma": int(rng.integers(-3, 6)), "sigma_mult": float(np.round(rng.uniform(1, 2), 2))},
            trap={"sigma_b_nm": float(np.round(rng.uniform(20, 150), 1))},
        ))
    return out


def check_determinism():
    cfgs = random_configs()
    identical = True
    with tempfile.TemporaryDirectory() as tmp:
        cache = ResultCache(tmp, log=None)
        for cfg in cfgs:
            a = run_sweep(cfg, workers=1, log=None)
            b = run_sweep(cfg, workers=2, log=None)
            run_sweep(cfg, cache=cache, log=None)
            c = run_sweep(cfg, cache=cache, log=None)
            identical &= to_csv(a) == to_csv(b) == to_csv(c) and to_json(a) == to_json(c)
            identical &= c.from_cache and c.evaluations == 0
    return CheckResult(11, "determinism and cache", f"{len(cfgs)} configs identical={identical}",
                       "byte-identical across workers and cache", bool(identical))


CHECKS = {
    1: check_unit_anchor,
    2: check_coherence_length,
    3: check_magnitude,
    4: check_two_maxima,
    5: check_sigma_orderings,
    6: check_log_tail,
    7: check_oracles,
    8: check_conservation_limit,
    9: check_non_monotonic,
    10: check_specfun,
    11: check_determinism,
}


def run_check(number):
    start = time.perf_counter()
    res = CHECKS[number]()
    res.wall = time.perf_counter() - start
    return res


def run_checks(numbers=None, stream=None):
    """Run the selected checks in order, printing one line each to ``stream``."""
    out = []
    for k in numbers or sorted(CHECKS):
        res = run_check(k)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
        out.append(res)
    return out

