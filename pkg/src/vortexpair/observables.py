"""TAM statistics of the emitted photon pair and OAM coincidence matrices.

TAM statistics use the trap-averaged Bessel weights w_n and the channel
weights I_n:

    J_z = m_gamma + m_e + sum_n (n - m_gamma) w_n I_n / D
    (dJ_z)^2 = sum_n (n - m_gamma)^2 w_n I_n / D,     D = 1 + sum_n w_n I_n

The coincidence matrix P_{l1,l2} is built from the pair amplitude at late
time. For a fixed impact parameter every term of the amplitude is a product
of an azimuthal phase exp(i l1 phi1 + i l2 phi2) and a function of the
remaining photon labels, so the azimuthal projection is exact and only the
(omega, theta, helicity) integrals are done on a grid.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .atom import HELICITIES, SUBLEVELS, coupling_amplitude
from .dynamics import channel_weights, emission_kernel_f, scattering_integral, vortex_prefactor
from .errors import DomainError, RegimeWarning, ResolutionError
from .photon import (
    bessel_argument,
    bessel_weight,
    gaussian_profile,
    longitudinal_moment,
    normalize,
    trap_density,
)
from .quadrature import composite_gauss_legendre
from .specfun import bessel_j


@dataclass(frozen=True)
class TamStats:
    """Mean TAM, mismatch and spread of the photon pair (hbar units)."""

    j_z_mean: float
    mismatch: float
    variance: float
    t: float
    weights: dict = field(default_factory=dict)
    channels: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def std(self):
        return float(np.sqrt(self.variance))


def _weights(packet, trap):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegimeWarning)
        w = {
            n: bessel_weight(packet.m_gamma, n, packet.kappa_c, trap.sigma_b)
            for n in SUBLEVELS
        }
    return w, tuple(str(c.message) for c in caught)


def tam_stats(atom, packet, trap, t, rtol=1e-7, norm=None):
    """Trap-averaged J_z, mismatch and variance at time ``t`` (1/Gamma)."""
    trap.check_regime(packet)
    norm = normalize(packet) if norm is None else norm
    ch = channel_weights(atom, packet, norm, t, rtol)
    w, warns = _weights(packet, trap)
    m = packet.m_gamma
    denom = 1.0 + sum(w[n] * ch[n] for n in SUBLEVELS)
    shift = sum((n - m) * w[n] * ch[n] for n in SUBLEVELS) / denom
    var = sum((n - m) ** 2 * w[n] * ch[n] for n in SUBLEVELS) / denom
    return TamStats(
        j_z_mean=m + atom.m_e + shift,
        mismatch=shift,
        variance=var,
        t=float(t),
        weights=w,
        channels=dict(ch.values),
        warnings=warns,
    )


def tam_mean(atom, packet, trap, t, **kw):
    """Mean TAM J_z of the pair."""
    return tam_stats(atom, packet, trap, t, **kw).j_z_mean


def tam_variance(atom, packet, trap, t, **kw):
    """TAM variance (dJ_z)^2 of the pair."""
    return tam_stats(atom, packet, trap, t, **kw).variance


def tam_variance_asymptotic(atom, packet, trap, t, m_gamma=None, rtol=1e-7, norm=None):
    """Large-m_gamma form of dJ_z: x^m sqrt(m^2 / m! sum_n I_n), x = kappa_c sigma_b / 2.

    Note this returns the spread dJ_z, not its square.
    """
    m = packet.m_gamma if m_gamma is None else int(m_gamma)
    if m < 3:
        raise DomainError(f"asymptotic form needs m_gamma >= 3, got {m}")
    norm = normalize(packet) if norm is None else norm
    ch = channel_weights(atom, packet, norm, t, rtol)
    x = bessel_argument(packet.kappa_c, trap.sigma_b)
    from math import factorial

    return float(x**m * np.sqrt(m * m / factorial(m) * ch.total()))


# ---------------------------------------------------------------------------
# coincidence matrix


@dataclass(frozen=True)
class GridSpec:
    """Discretisation of the pair-probability integrals.

    Frequencies use geometric Gauss-Legendre panels around the resonance,
    starting at ``gamma_start`` Gamma and growing by ``growth`` until they
    reach max(``sigma_span`` sigma, ``gamma_span`` Gamma). Polar angles use
    ``theta_dense_panels`` panels within ``theta_span`` sigma/omega of the
    packet axis and ``theta_coarse_panels`` on each remaining side.
    """

    nodes: int = 8
    gamma_start: float = 0.5
    growth: float = 2.0
    sigma_span: float = 8.0
    gamma_span: float = 40.0
    theta_span: float = 6.0
    theta_dense_panels: int = 12
    theta_coarse_panels: int = 6
    b_span: float = 5.5
    b_nodes: int = 8
    p_max: int = None
    tau: float = 20.0
    tau_check: float = 10.0
    min_fidelity: float = 0.98

    def omega_nodes(self, atom, packet):
        g = atom.gamma
        reach = max(self.sigma_span * packet.sigma + abs(packet.omega_c - atom.omega_a),
                    self.gamma_span * g)
        edges = [0.0]
        step = self.gamma_start * g
        while edges[-1] < reach:
            edges.append(min(edges[-1] + step, reach))
            step *= self.growth
        edges = np.asarray(edges)
        full = np.concatenate([-edges[::-1], edges[1:]])
        x, w = composite_gauss_legendre(full, self.nodes)
        return atom.omega_a + x, w

    def theta_nodes(self, packet):
        half = self.theta_span * packet.sigma / packet.omega_c
        lo = max(packet.theta_c - half, 0.0)
        hi = min(packet.theta_c + half, np.pi)
        edges = np.concatenate([
            np.linspace(0.0, lo, self.theta_coarse_panels + 1)[:-1] if lo > 0 else [],
            np.linspace(lo, hi, self.theta_dense_panels + 1),
            np.linspace(hi, np.pi, self.theta_coarse_panels + 1)[1:] if hi < np.pi else [],
        ])
        return composite_gauss_legendre(edges, self.nodes)

    def b_nodes_weights(self, packet, trap):
        top = self.b_span * trap.sigma_b
        width = min(0.5 * trap.sigma_b, 2.0 / packet.kappa_c)
        npan = max(1, int(np.ceil(top / width)))
        b, w = composite_gauss_legendre(np.linspace(0.0, top, npan + 1), self.b_nodes)
        return b, w * 2.0 * np.pi * b * trap_density(trap, b)


@dataclass(frozen=True)
class PairProbabilityMatrix:
    """Trap-averaged coincidence probabilities on an OAM window.

    ``values[i, j]`` holds P_{l1,l2} with l1 = window[0] + i and
    l2 = window[0] + j, normalised by the all-l total.
    """

    window: tuple
    values: np.ndarray
    captured_mass: float
    off_line_mass: float
    conserved: int
    fidelity: dict
    tau: float
    tau_change: float
    p_max: int
    grid: GridSpec

    def get(self, l1, l2):
        lo, hi = self.window
        if not (lo <= l1 <= hi and lo <= l2 <= hi):
            raise KeyError((l1, l2))
        return float(self.values[l1 - lo, l2 - lo])

    @property
    def labels(self):
        return list(range(self.window[0], self.window[1] + 1))


def _auto_p_max(zmax, floor):
    p = floor
    while p < 200 and bessel_j(p, zmax) ** 2 > 1e-18:
        p += 1
    return p + 2


class _PairGrid:
    """Per-photon grids and b-independent arrays for the pair integrals."""

    def __init__(self, atom, packet, grid):
        self.atom, self.packet, self.grid = atom, packet, grid
        self.norm = normalize(packet)
        om, wom = grid.omega_nodes(atom, packet)
        th, wth = grid.theta_nodes(packet)
        self.omega, self.theta = om, th
        # measure omega^2 sin(theta) d omega d theta / (2 pi)^2, per helicity
        self.mu = (om**2 * wom)[:, None] * (np.sin(th) * wth)[None, :] / (2.0 * np.pi) ** 2
        self.hel = {s: i for i, s in enumerate(HELICITIES)}
        self.G = {
            n: np.stack([coupling_amplitude(atom, n, s, om[:, None], th[None, :]) for s in HELICITIES])
            for n in SUBLEVELS
        }
        self.k_perp = om[:, None] * np.sin(th)[None, :]
        gauss = self.norm.n_tilde * gaussian_profile(
            packet, self.k_perp, om[:, None] * np.cos(th)[None, :]
        )
        keep = gauss > 1e-30 * gauss.max()
        self.packet_mask = keep
        self.gauss_sel = gauss[keep]
        self.mu_sel = self.mu[keep]
        self.kp_sel = self.k_perp[keep]
        self.gauss = gauss
        # transverse marginal of |packet|^2 for the pure packet terms
        lo = max(packet.kappa_c - 9.0 * packet.sigma, 0.0)
        hi = packet.kappa_c + 9.0 * packet.sigma
        k, wk = composite_gauss_legendre(np.linspace(lo, hi, 13), 16)
        self.k_marg = k
        self.w_marg = (
            wk * self.norm.n2v * k * np.exp(-((k - packet.kappa_c) / packet.sigma) ** 2)
            * longitudinal_moment(packet.k_c, packet.sigma) / (2.0 * np.pi) ** 2
        )

    def emission(self, tau):
        f = emission_kernel_f(self.atom.gamma, self.omega - self.atom.omega_a, tau)
        return self.G[self.atom.m_e] * f[None, :, None]

    def scattering_matrix(self, tau):
        s = self.packet.sigma / self.atom.gamma
        dc = (self.packet.omega_c - self.atom.omega_a) / self.atom.gamma
        d = (self.omega - self.atom.omega_a) / self.atom.gamma
        return scattering_integral(d[:, None], d[None, :], s, dc, tau) / self.atom.gamma**3

    def packet_wave(self, p, b):
        """Helicity-resolved array of the p-th partial wave of the packet."""
        out = np.zeros((2,) + self.mu.shape, dtype=complex)
        sub = out[self.hel[self.packet.lam]]
        sub[self.packet_mask] = self.gauss_sel * (1j**p) * bessel_j(p, self.kp_sel * b)
        return out

    def gram(self, a, c):
        """sum over theta and helicity of mu a conj(c), per omega node."""
        return np.einsum("sij,ij,sij->i", a, self.mu, np.conj(c))


def _term_products(pg, terms):
    """Squared norm of a sum of separable pair terms.

    Each term is (coef, alpha, beta, K) meaning coef alpha(q1) beta(q2)
    K[omega1, omega2], with K = None for a constant kernel.
    """
    total = 0j
    for i, (ci, ai, bi, ki) in enumerate(terms):
        for j, (cj, aj, bj, kj) in enumerate(terms):
            if j < i:
                continue
            ga = pg.gram(ai, aj)
            gb = pg.gram(bi, bj)
            if ki is None and kj is None:
                val = ga.sum() * gb.sum()
            else:
                mat = (ki if ki is not None else 1.0) * np.conj(kj if kj is not None else 1.0)
                val = ga @ mat @ gb
            val *= ci * np.conj(cj)
            total += val if i == j else 2.0 * val.real
    return total.real


def _row_at_b(pg, b, tau, u, su, tmat, p_range):
    """Row l1 = m_e of the coincidence matrix at impact parameter b."""
    atom, packet = pg.atom, pg.packet
    m, me = packet.m_gamma, atom.m_e
    bp = replace(packet, b=b, phi_b=0.0)
    pref = {n: vortex_prefactor(atom, bp, pg.norm, n) for n in SUBLEVELS}
    jp = bessel_j(np.asarray(p_range)[:, None], pg.k_marg[None, :] * b)
    sv = jp**2 @ pg.w_marg
    row = dict(zip((m + p for p in p_range), su * sv))
    special_l2 = set(SUBLEVELS) | {me}
    for l2 in special_l2:
        p = l2 - m
        terms = []
        if p in p_range:
            terms.append((1.0, u, pg.packet_wave(p, b), None))
        terms.append((-pref[l2], pg.G[me], pg.G[l2], tmat.T))
        if l2 == me:
            if p in p_range:
                terms.append((1.0, pg.packet_wave(p, b), u, None))
            terms.append((-pref[me], pg.G[me], pg.G[me], tmat))
        row[l2] = _term_products(pg, terms)
    return row


def _pair_rows(pg, trap, tau, p_range):
    u = pg.emission(tau)
    su = float(np.einsum("sij,ij->", np.abs(u) ** 2, pg.mu))
    tmat = pg.scattering_matrix(tau)
    b_nodes, b_w = pg.grid.b_nodes_weights(pg.packet, trap)
    acc = {}
    for b, wb in zip(b_nodes, b_w):
        for l2, v in _row_at_b(pg, b, tau, u, su, tmat, p_range).items():
            acc[l2] = acc.get(l2, 0.0) + wb * v
    # the trap average is normalised analytically; renormalise the quadrature
    acc = {k: v / b_w.sum() for k, v in acc.items()}
    return acc, su


def _assemble(row, me):
    labels = sorted(set(row) | {me})
    lo, hi = labels[0], labels[-1]
    full = np.zeros((hi - lo + 1, hi - lo + 1))
    for l2, v in row.items():
        full[me - lo, l2 - lo] = v
        full[l2 - lo, me - lo] = v
    return full, lo


def pair_probability(atom, packet, trap, window=None, grid=None):
    """Trap-averaged OAM coincidence matrix P_{l1,l2} at late time.

    Late time means ``grid.tau`` (20 / Gamma by default); the result at
    ``grid.tau_check`` is also computed and the largest relative change of
    the windowed entries is reported as ``tau_change``.
    """
    grid = GridSpec() if grid is None else grid
    trap.check_regime(packet)
    m, me = packet.m_gamma, atom.m_e
    need = (min(m, me) - 2, max(m, me) + 2)
    window = need if window is None else tuple(window)
    if window[0] > need[0] or window[1] < need[1]:
        raise DomainError(f"window {window} must cover {need}")

    pg = _PairGrid(atom, packet, grid)
    b_top = grid.b_span * trap.sigma_b
    zmax = float(pg.kp_sel.max()) * b_top
    floor = max(abs(window[0] - m), abs(window[1] - m), 2)
    p_max = _auto_p_max(zmax, floor) if grid.p_max is None else grid.p_max
    p_range = list(range(-p_max, p_max + 1))

    results = {}
    for tau in (grid.tau, grid.tau_check):
        row, su = _pair_rows(pg, trap, tau, p_range)
        results[tau] = (row, su)

    row, su = results[grid.tau]
    full, lo = _assemble(row, me)
    total = full.sum()
    if not total > 0:
        raise ResolutionError("pair probability grid captured no weight", [])
    full = full / total

    # fidelity: emitted-photon and packet-photon masses against their exact values
    emitted = su / (-np.expm1(-grid.tau))
    packet_mass = float(np.sum(pg.mu_sel * pg.gauss_sel**2))
    fidelity = {"emission": float(emitted), "packet": packet_mass}
    if min(emitted, packet_mass) < grid.min_fidelity:
        raise ResolutionError(
            f"grid misses probability mass: emission {emitted:.4f}, packet {packet_mass:.4f}",
            [fidelity],
        )

    a, b = window
    idx = np.arange(a, b + 1)
    win = np.zeros((b - a + 1, b - a + 1))
    for i, l1 in enumerate(idx):
        for j, l2 in enumerate(idx):
            if 0 <= l1 - lo < full.shape[0] and 0 <= l2 - lo < full.shape[0]:
                win[i, j] = full[l1 - lo, l2 - lo]

    conserved = m + me
    ll = np.arange(lo, lo + full.shape[0])
    off = float(full[(ll[:, None] + ll[None, :]) != conserved].sum())

    row_c, _ = results[grid.tau_check]
    full_c, _ = _assemble(row_c, me)
    full_c = full_c / full_c.sum()
    mask = full > 1e-12
    change = float(np.max(np.abs(full_c[mask] - full[mask]) / full[mask])) if mask.any() else 0.0

    return PairProbabilityMatrix(
        window=(a, b),
        values=win,
        captured_mass=float(win.sum()),
        off_line_mass=off,
        conserved=conserved,
        fidelity=fidelity,
        tau=grid.tau,
        tau_change=change,
        p_max=p_max,
        grid=grid,
    )


def entanglement_witness(matrix):
    """1 - s_max^2 / ||P||_F^2; zero exactly for a rank-one pattern.

    Accepts a :class:`PairProbabilityMatrix` or a plain 2D array.
    """
    vals = matrix.values if isinstance(matrix, PairProbabilityMatrix) else np.asarray(matrix, float)
    fro2 = float(np.sum(vals**2))
    if fro2 == 0.0:
        raise DomainError("witness undefined for an all-zero matrix")
    smax = np.linalg.svd(vals, compute_uv=False)[0]
    return max(0.0, 1.0 - smax**2 / fro2)
