"""Time-domain amplitudes and channel weights.

All time integrals are evaluated in the dimensionless variables
tau = Gamma t, s = sigma / Gamma and delta = Delta / Gamma, where Delta is a
photon frequency minus the atomic resonance. Public ``t`` arguments are in
units of 1/Gamma.

Two primitive integrals carry everything:

``exp_integral(z, x)``
    int_0^x exp(z v) dv, with a Taylor branch for small |z x|.
``gauss_integral(beta, s, x)``
    int_0^x exp(beta v - s^2 v^2 / 2) dv, by completing the square into a
    difference of Faddeeva functions.

Amplitudes carry the volume convention of :mod:`vortexpair.atom`: a single
photon amplitude is returned multiplied by sqrt(V), a two-photon amplitude
multiplied by V.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .atom import SUBLEVELS, coupling_amplitude
from .errors import DomainError, NumericalError
from .photon import overlap_plane_wave
from .quadrature import adaptive_gk15, composite_gauss_legendre
from .specfun import bessel_j, faddeeva_checked

T_MAX = 50.0
_TAYLOR_SX = 1e-6
_SQRT2 = np.sqrt(2.0)
_SQRT_HALF_PI = np.sqrt(0.5 * np.pi)


@dataclass(frozen=True)
class TimeGrid:
    """Increasing times in units of 1/Gamma."""

    points: tuple

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("time grid must be a non-empty 1D sequence")
        if pts[0] < 0 or np.any(np.diff(pts) <= 0):
            raise DomainError("time grid must be non-negative and strictly increasing")
        if pts[-1] > T_MAX:
            raise DomainError(f"times beyond {T_MAX} / Gamma are not supported")
        object.__setattr__(self, "points", tuple(float(p) for p in pts))

    @property
    def t_max(self):
        return self.points[-1]

    @classmethod
    def linspace(cls, t0, t1, num):
        return cls(tuple(np.linspace(t0, t1, num)))


@dataclass(frozen=True)
class AmplitudeSet:
    """Amplitudes at one time; scaled by sqrt(V) (single) or V (pair)."""

    t: float
    e_pw: complex
    e_v: complex
    g_v: complex


@dataclass(frozen=True)
class ChannelWeights:
    """Channel weights I_n at time ``t`` with a relative error estimate."""

    t: float
    values: dict
    rel_error: float = 0.0
    trace: list = field(default_factory=list, compare=False)

    def __getitem__(self, n):
        return self.values[n]

    def total(self):
        return sum(self.values.values())


def _check_time(t):
    t = float(t)
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    if t > T_MAX:
        raise DomainError(f"times beyond {T_MAX} / Gamma are not supported")
    return t


# ---------------------------------------------------------------------------
# primitive integrals


def exp_integral(z, x):
    """int_0^x exp(z v) dv for complex z, broadcasting over z and x."""
    z = np.asarray(z, dtype=complex)
    x = np.asarray(x, dtype=float)
    zx = z * x
    small = np.abs(zx) < 1e-3
    safe_z = np.where(small, 1.0, z)
    direct = np.expm1(np.where(small, 0.0, zx)) / safe_z
    # expm1(zx)/z = x (1 + zx/2 + (zx)^2/6 + ...)
    series = x * (1 + zx / 2 * (1 + zx / 3 * (1 + zx / 4 * (1 + zx / 5 * (1 + zx / 6)))))
    return np.where(small, series, direct)


def _gauss_numeric(beta, s, x, nodes=16):
    """Composite Gauss-Legendre evaluation of the Gaussian integral.

    Used where the Faddeeva form would need w(z) deep in the lower half
    plane. Panels are sized to the oscillation and decay scales.
    """
    beta, s, x = np.broadcast_arrays(
        np.asarray(beta, dtype=complex), np.asarray(s, dtype=float), np.asarray(x, dtype=float)
    )
    out = np.empty(beta.shape, dtype=complex)
    flat_b, flat_s, flat_x = beta.ravel(), s.ravel(), x.ravel()
    res = out.reshape(-1)
    for i in range(flat_b.size):
        b, ss, xx = flat_b[i], flat_s[i], flat_x[i]
        if xx == 0:
            res[i] = 0.0
            continue
        scale = abs(b) + ss * ss * xx + 1.0
        npan = int(min(4000, np.ceil(xx * scale / 2.0) + 1))
        v, w = composite_gauss_legendre(np.linspace(0.0, xx, npan + 1), nodes)
        res[i] = np.sum(w * np.exp(b * v - 0.5 * ss * ss * v * v))
    return out


def gauss_integral(beta, s, x):
    """int_0^x exp(beta v - s^2 v^2 / 2) dv, vectorised.

    Three branches: Taylor (pure exponential) when s x < 1e-6, numerical
    quadrature when s < |Re beta| / 2, and the Faddeeva difference
    sqrt(pi/2)/s [w(i y0) - exp(beta x - s^2 x^2/2) w(i y1)] otherwise,
    with y0 = -beta / (s sqrt 2) and y1 = y0 + s x / sqrt 2.
    """
    beta, s, x = np.broadcast_arrays(
        np.asarray(beta, dtype=complex), np.asarray(s, dtype=float), np.asarray(x, dtype=float)
    )
    if np.any(s < 0) or np.any(x < 0):
        raise DomainError("gauss_integral needs s >= 0 and x >= 0")
    taylor = s * x < _TAYLOR_SX
    numeric = ~taylor & (s < 0.5 * np.abs(beta.real))
    closed = ~taylor & ~numeric
    out = np.empty(beta.shape, dtype=complex)
    if np.any(taylor):
        out[taylor] = exp_integral(beta[taylor], x[taylor])
    if np.any(numeric):
        out[numeric] = _gauss_numeric(beta[numeric], s[numeric], x[numeric])
    if np.any(closed):
        b, ss, xx = beta[closed], s[closed], x[closed]
        y0 = -b / (ss * _SQRT2)
        y1 = y0 + ss * xx / _SQRT2
        w0, sat0 = faddeeva_checked(1j * y0)
        w1, sat1 = faddeeva_checked(1j * y1)
        expo = b * xx - 0.5 * ss * ss * xx * xx
        tail = np.where(expo.real < -745.0, 0.0, np.exp(np.minimum(expo.real, 700.0)) * np.exp(1j * expo.imag)) * w1
        bad = sat0 | (sat1 & (expo.real > -745.0)) | ~np.isfinite(tail)
        if np.any(bad):
            idx = np.flatnonzero(bad)[:5]
            raise NumericalError(
                "Faddeeva evaluation saturated",
                [(complex(b[i]), float(ss[i]), float(xx[i])) for i in idx],
            )
        out[closed] = _SQRT_HALF_PI / ss * (w0 - tail)
    return out


# ---------------------------------------------------------------------------
# kernels


def emission_kernel_f(gamma, delta, t):
    """f = (1 - exp(-(Gamma/2 + i Delta) t)) / (Gamma/2 + i Delta).

    ``delta`` is in eV and ``t`` in 1/Gamma; the result is in eV^-1.
    """
    t = _check_time(t)
    a = 0.5 + 1j * np.asarray(delta, dtype=float) / gamma
    out = -np.expm1(-a * t) / a / gamma
    return out if np.ndim(out) else complex(out)


def pw_double_integral(delta, delta0, tau):
    """Dimensionless int_0^tau dv2 int_0^v2 exp(b v2 - a v1) dv1.

    a = 1/2 + i delta, b = 1/2 + i delta0 (detunings in units of Gamma).
    The closed form (E(b) - E(b - a)) / a is continuous at delta = delta0.
    """
    a = 0.5 + 1j * np.asarray(delta, dtype=float)
    b = 0.5 + 1j * np.asarray(delta0, dtype=float)
    return (exp_integral(b, tau) - exp_integral(b - a, tau)) / a


def _g_mode(atom, mode, n, volume=None):
    """g_{nu,n} = exp(i n phi) G_n(omega, theta) for a plane-wave mode."""
    g = coupling_amplitude(atom, n, mode.s, mode.omega, mode.theta, volume=volume)
    return np.exp(1j * n * mode.phi) * g


def amplitude_e_pw(atom, mode, mode0, n, t, volume=1.0):
    """Excited amplitude C^pw_{e,nu,n}(t) after absorption of mode ``mode0``.

    ``t`` in 1/Gamma. ``volume`` (eV^-3) sets the size of g; the delta term
    is one when ``mode == mode0`` and ``n == atom.m_e``.
    """
    tau = _check_time(t)
    decay = np.exp(-0.5 * tau)
    first = decay if (mode == mode0 and n == atom.m_e) else 0.0
    g = _g_mode(atom, mode, atom.m_e, volume)
    g0 = _g_mode(atom, mode0, n, volume)
    d = (mode.omega - atom.omega_a) / atom.gamma
    d0 = (mode0.omega - atom.omega_a) / atom.gamma
    dd = pw_double_integral(d, d0, tau)
    return complex(first - g * np.conj(g0) * decay * dd / atom.gamma**2)


def vortex_prefactor(atom, packet, norm, n, m=None):
    """Packet-integrated coupling of sublevel n, volume-free.

    N V i^(m-n) sigma^2 kappa_c conj(G_n(omega_c, theta_c))
    exp(i (m-n) phi_b) J_{m-n}(kappa_c b); m defaults to m_gamma.
    """
    m = packet.m_gamma if m is None else m
    dm = m - n
    g = coupling_amplitude(atom, n, packet.lam, packet.omega_c, packet.theta_c)
    return (
        norm.n_tilde * (1j**dm) * packet.sigma**2 * packet.kappa_c * np.conj(g)
        * np.exp(1j * dm * packet.phi_b) * bessel_j(dm, packet.kappa_c * packet.b)
    )


def excitation_integral(delta, s, delta_c, tau):
    """int_0^tau dv exp(h v - s^2 v^2/2) int_0^v exp(-a u) du.

    h = 1/2 + i delta_c, a = 1/2 + i delta.
    """
    a = 0.5 + 1j * np.asarray(delta, dtype=float)
    h = 0.5 + 1j * delta_c
    return (gauss_integral(h, s, tau) - gauss_integral(h - a, s, tau)) / a


def scattering_integral(delta1, delta2, s, delta_c, tau):
    """Dimensionless triple integral of the scattering kernel.

    int_0^tau dv3 int_0^v3 dv2 int_0^v2 dv1 exp(-a v3 + h v2 - c v1 - s^2 v2^2/2)
    with a = 1/2 + i delta1, c = 1/2 + i delta2, h = 1/2 + i delta_c.
    The outer and inner integrals are exponential; the middle one Gaussian.
    """
    a = 0.5 + 1j * np.asarray(delta1, dtype=float)
    c = 0.5 + 1j * np.asarray(delta2, dtype=float)
    h = 0.5 + 1j * delta_c
    ea = np.exp(-a * tau)
    return (
        gauss_integral(h - a, s, tau)
        - ea * gauss_integral(h, s, tau)
        - gauss_integral(h - a - c, s, tau)
        + ea * gauss_integral(h - c, s, tau)
    ) / (a * c)


def _dimensionless(atom, packet):
    s = packet.sigma / atom.gamma
    dc = (packet.omega_c - atom.omega_a) / atom.gamma
    return s, dc


def scattering_kernel_F(atom, packet, norm, n, omega1, omega2, t, m=None):
    """Scattering kernel F_{m,n}(omega1, omega2, t), volume-free, eV^-3."""
    tau = _check_time(t)
    s, dc = _dimensionless(atom, packet)
    d1 = (np.asarray(omega1, dtype=float) - atom.omega_a) / atom.gamma
    d2 = (np.asarray(omega2, dtype=float) - atom.omega_a) / atom.gamma
    pref = vortex_prefactor(atom, packet, norm, n, m)
    out = pref * scattering_integral(d1, d2, s, dc, tau) / atom.gamma**3
    return out if np.ndim(out) else complex(out)


def amplitude_e_vortex(atom, packet, norm, mode, n, t):
    """sqrt(V) C^v_{e,nu,n}(t) for the Bessel-Gaussian packet."""
    tau = _check_time(t)
    s, dc = _dimensionless(atom, packet)
    decay = np.exp(-0.5 * tau)
    first = overlap_plane_wave(packet, norm, mode) * decay if n == atom.m_e else 0.0
    g = _g_mode(atom, mode, atom.m_e)
    d = (mode.omega - atom.omega_a) / atom.gamma
    pref = vortex_prefactor(atom, packet, norm, n)
    second = pref * g * decay * excitation_integral(d, s, dc, tau) / atom.gamma**2
    return complex(first - second)


def _g_vortex_half(atom, packet, norm, mode1, mode2, tau):
    """Unsymmetrised pair amplitude (times V)."""
    f = emission_kernel_f(atom.gamma, mode1.omega - atom.omega_a, tau)
    first = _g_mode(atom, mode1, atom.m_e) * f * overlap_plane_wave(packet, norm, mode2)
    g2 = _g_mode(atom, mode2, atom.m_e)
    second = 0j
    for n in SUBLEVELS:
        F = scattering_kernel_F(atom, packet, norm, n, mode1.omega, mode2.omega, tau)
        second += _g_mode(atom, mode1, n) * g2 * F
    return complex(first - second)


def amplitude_g_vortex(atom, packet, norm, mode1, mode2, t):
    """V C^v_{g,nu1,nu2}(t); exactly symmetric under exchanging the modes."""
    tau = _check_time(t)
    return _g_vortex_half(atom, packet, norm, mode1, mode2, tau) + _g_vortex_half(
        atom, packet, norm, mode2, mode1, tau
    )


def amplitudes(atom, packet, norm, mode, mode2, n, t):
    """Bundle of the three amplitudes at one time."""
    mode0 = type(mode)(packet.kappa_c, packet.k_c, 0.0, packet.lam)
    return AmplitudeSet(
        float(t),
        amplitude_e_pw(atom, mode, mode0, n, t),
        amplitude_e_vortex(atom, packet, norm, mode, n, t),
        amplitude_g_vortex(atom, packet, norm, mode, mode2, t),
    )


# ---------------------------------------------------------------------------
# channel weights


def _phi(s, dc, x):
    return gauss_integral(0.5 + 1j * dc, s, x)


@lru_cache(maxsize=256)
def _reduced_weight_cached(s, dc, tau, rtol):
    return reduced_weight(s, dc, tau, rtol, _cache=False)


def reduced_weight(s, dc, tau, rtol=1e-7, _cache=True):
    """Dimensionless channel-weight integral and its error estimate.

    K = int_{0 <= v1 <= v3 <= tau} exp(-(v1 + v3)) |Phi(v3) - Phi(v1)|^2
    with Phi(x) = int_0^x exp((1/2 + i dc) v - s^2 v^2 / 2) dv. The inner
    range is cut at 12 / s, beyond which Phi is constant to e^-72.

    Returns ``(K, rel_error, trace)``.
    """
    if _cache:
        return _reduced_weight_cached(float(s), float(dc), float(tau), float(rtol))
    if tau == 0:
        return 0.0, 0.0, []
    cut = 12.0 / s
    inner_rtol = min(1e-10, 1e-3 * rtol)

    def outer(v3):
        top = np.minimum(v3, min(cut, tau))
        phi3 = _phi(s, dc, v3)

        def inner(u):
            v1 = top[:, None] * u[None, :]
            diff = phi3[:, None] - _phi(s, dc, v1)
            return np.exp(-v1 - v3[:, None]) * np.abs(diff) ** 2 * top[:, None]

        val, _, _ = adaptive_gk15(inner, 0.0, 1.0, rtol=inner_rtol, atol=1e-300)
        return val

    brk = [c / s for c in (0.5, 1.0, 2.0, 4.0, 12.0)] + [1.0, 4.0]
    val, err, trace = adaptive_gk15(outer, 0.0, tau, rtol=0.1 * rtol, atol=1e-300, breakpoints=brk)
    rel = float(err / val) if val > 0 else 0.0
    if rel > rtol:
        raise NumericalError(f"channel weight integral missed rtol={rtol}", trace)
    return float(val), rel, trace


def channel_weights(atom, packet, norm, t, rtol=1e-7):
    """Channel weights I_{n,lambda}(t) for all three sublevels.

    I_n = [1 + delta_{n,m_e}] 4 N^2 V^2 sigma^4 kappa_c^2 |G_n(omega_c,
    theta_c)|^2 Gamma^2 K / Gamma^4, with K from :func:`reduced_weight`.
    """
    tau = _check_time(t)
    s, dc = _dimensionless(atom, packet)
    k_red, rel, trace = reduced_weight(s, dc, tau, rtol)
    values = {}
    for n in SUBLEVELS:
        g = coupling_amplitude(atom, n, packet.lam, packet.omega_c, packet.theta_c)
        mult = 2.0 if n == atom.m_e else 1.0
        values[n] = float(
            mult * 4.0 * norm.n2v * packet.sigma**4 * packet.kappa_c**2 * abs(g) ** 2
            * k_red / atom.gamma**2
        )
    return ChannelWeights(tau, values, rel, trace)


def channel_weight(atom, packet, norm, n, t, rtol=1e-7):
    """Single channel weight I_{n,lambda}(t)."""
    return channel_weights(atom, packet, norm, t, rtol)[n]
