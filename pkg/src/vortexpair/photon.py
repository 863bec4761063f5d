"""Bessel-Gaussian incident photon, plane-wave overlaps and the atom trap.

The packet's momentum-space wave function is a Gaussian of width ``sigma``
in both the transverse (k_perp - kappa_c) and longitudinal (k_z - k_c)
directions, carrying the vortex phase exp(i m_gamma phi) and the
impact-parameter phase exp(i k_perp b cos(phi - phi_b)).

Volume convention: ``Normalization.n2v`` stores N^2 V, which is finite and
volume-free. ``overlap_plane_wave`` returns sqrt(V) <nu|gamma> unless a
volume is given.
"""

import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericalError, RegimeWarning
from .specfun import bessel_j
from .units import nm_to_inv_ev

_SQRT_PI = np.sqrt(np.pi)


@dataclass(frozen=True)
class PhotonPacket:
    """Bessel-Gaussian packet; momenta in eV, lengths in eV^-1."""

    m_gamma: int
    lam: int
    kappa_c: float
    k_c: float
    sigma: float
    b: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        if self.lam not in (1, -1):
            raise DomainError(f"helicity must be +1 or -1, got {self.lam}")
        if int(self.m_gamma) != self.m_gamma:
            raise DomainError(f"m_gamma must be an integer, got {self.m_gamma}")
        if not (self.kappa_c > 0 and self.k_c > 0):
            raise DomainError("kappa_c and k_c must be positive")
        if not 0 < self.sigma < self.kappa_c:
            raise DomainError(
                f"need 0 < sigma < kappa_c, got sigma={self.sigma}, kappa_c={self.kappa_c}"
            )
        if self.b < 0:
            raise DomainError("impact parameter must be non-negative")

    @classmethod
    def from_frequency(cls, omega_c, m_gamma=1, lam=1, kappa_ratio=0.1,
                       sigma_ratio=0.1, b=0.0, phi_b=0.0):
        """Packet with kappa_c = kappa_ratio omega_c and sigma = sigma_ratio kappa_c."""
        kappa = kappa_ratio * omega_c
        k_c = float(np.sqrt(omega_c**2 - kappa**2))
        return cls(int(m_gamma), lam, float(kappa), k_c, float(sigma_ratio * kappa), b, phi_b)

    @property
    def omega_c(self):
        return float(np.hypot(self.kappa_c, self.k_c))

    @property
    def theta_c(self):
        return float(np.arctan2(self.kappa_c, self.k_c))

    def detuning(self, omega_a):
        """Central detuning omega_c - omega_a in eV."""
        return self.omega_c - omega_a


@dataclass(frozen=True)
class TrapSpec:
    """Gaussian transverse distribution of the atom, width in eV^-1."""

    sigma_b: float

    def __post_init__(self):
        if not self.sigma_b > 0:
            raise DomainError(f"sigma_b must be positive, got {self.sigma_b}")

    @classmethod
    def from_nm(cls, sigma_b_nm):
        return cls(nm_to_inv_ev(sigma_b_nm))

    def check_regime(self, packet):
        """Raise unless sigma_b sigma < 0.1 (impact parameters << 1/sigma)."""
        if self.sigma_b * packet.sigma >= 0.1:
            raise DomainError(
                f"trap too wide for the packet: sigma_b*sigma = "
                f"{self.sigma_b * packet.sigma:.3g} (need < 0.1)"
            )


@dataclass(frozen=True)
class PlaneWaveMode:
    """Plane-wave mode labels: momenta in eV, azimuth in radians, helicity s."""

    k_perp: float
    k_z: float
    phi: float
    s: int

    @property
    def omega(self):
        return np.hypot(self.k_perp, self.k_z)

    @property
    def theta(self):
        return np.arctan2(self.k_perp, self.k_z)


@dataclass(frozen=True)
class Normalization:
    """Packet normalisation; ``n2v`` is N^2 V, ``volume`` the box volume."""

    n2v: float
    volume: float = 1.0

    @property
    def n_packet(self):
        return float(np.sqrt(self.n2v / self.volume))

    @property
    def n_tilde(self):
        """N sqrt(V), the volume-free amplitude scale."""
        return float(np.sqrt(self.n2v))


def transverse_moment(kappa_c, sigma):
    """Integral of k exp(-(k - kappa_c)^2 / sigma^2) over k > 0."""
    a = kappa_c / sigma
    return 0.5 * sigma**2 * np.exp(-a * a) + 0.5 * _SQRT_PI * kappa_c * sigma * (1.0 + special.erf(a))


def longitudinal_moment(k_c, sigma):
    """Integral of exp(-(k - k_c)^2 / sigma^2) over k > 0."""
    return 0.5 * _SQRT_PI * sigma * (1.0 + special.erf(k_c / sigma))


def normalize(packet, volume=1.0):
    """Normalisation so that the continuum mode sum of |<nu|gamma>|^2 is 1.

    The mode sum is V / (2 pi)^3 times a momentum integral; both Gaussian
    factors are integrated in closed form over the positive half-lines.
    """
    if not volume > 0:
        raise DomainError("volume must be positive")
    mass = (
        2.0 * np.pi
        * transverse_moment(packet.kappa_c, packet.sigma)
        * longitudinal_moment(packet.k_c, packet.sigma)
        / (2.0 * np.pi) ** 3
    )
    if not np.isfinite(mass) or mass <= 0:
        raise NumericalError("packet normalisation integral is not finite", [mass])
    return Normalization(1.0 / mass, volume)


def packet_norm_quadrature(packet, norm, epsrel=1e-11):
    """<gamma|gamma> from 2D adaptive quadrature of the b = 0 profile."""
    s = packet.sigma

    def f(kz, kp):
        return kp * np.exp(-((kp - packet.kappa_c) ** 2 + (kz - packet.k_c) ** 2) / s**2)

    val, _ = integrate.dblquad(
        f,
        max(0.0, packet.kappa_c - 12 * s), packet.kappa_c + 12 * s,
        max(0.0, packet.k_c - 12 * s), packet.k_c + 12 * s,
        epsabs=0.0, epsrel=epsrel,
    )
    return norm.n2v * 2.0 * np.pi * val / (2.0 * np.pi) ** 3


def gaussian_profile(packet, k_perp, k_z):
    """Real Gaussian envelope of the packet at (k_perp, k_z)."""
    s2 = packet.sigma**2
    return np.exp(-0.5 * ((k_perp - packet.kappa_c) ** 2 + (k_z - packet.k_c) ** 2) / s2)


def overlap_plane_wave(packet, norm, mode, volume=None):
    """Overlap <nu|gamma> of a plane-wave mode with the packet.

    Returns sqrt(V) <nu|gamma> when ``volume`` is None.
    """
    if mode.s != packet.lam:
        return 0j
    k_perp = np.asarray(mode.k_perp, dtype=float)
    phase = packet.m_gamma * mode.phi + k_perp * packet.b * np.cos(mode.phi - packet.phi_b)
    out = norm.n_tilde * gaussian_profile(packet, k_perp, mode.k_z) * np.exp(1j * phase)
    if volume is not None:
        out = out / np.sqrt(volume)
    return out if np.ndim(out) else complex(out)


def overlap_partial_waves(packet, norm, mode, p_max=30):
    """Same overlap rebuilt from the Jacobi-Anger expansion in exp(i p phi)."""
    if mode.s != packet.lam:
        return 0j
    base = norm.n_tilde * gaussian_profile(packet, mode.k_perp, mode.k_z)
    x = mode.k_perp * packet.b
    acc = 0j
    for p in range(-p_max, p_max + 1):
        acc += (1j**p) * bessel_j(p, x) * np.exp(1j * p * (mode.phi - packet.phi_b))
    return base * np.exp(1j * packet.m_gamma * mode.phi) * acc


def trap_density(trap, b):
    """Transverse probability density of the atom position at distance b."""
    b = np.asarray(b, dtype=float)
    if np.any(b < 0):
        raise DomainError("b must be non-negative")
    s2 = trap.sigma_b**2
    out = np.exp(-b * b / s2) / (np.pi * s2)
    return out if out.ndim else float(out)


def bessel_argument(kappa_c, sigma_b):
    """The small parameter kappa_c sigma_b / 2."""
    return 0.5 * kappa_c * sigma_b


def bessel_weight(m_gamma, n, kappa_c, sigma_b):
    """Leading series term of the trap average of J^2_{m_gamma - n}(kappa_c b).

    Warns with :class:`RegimeWarning` outside kappa_c sigma_b / 2 < 0.5.
    """
    x = bessel_argument(kappa_c, sigma_b)
    if x >= 0.5:
        warnings.warn(
            f"kappa_c sigma_b / 2 = {x:.3g} outside the power-series regime",
            RegimeWarning,
            stacklevel=2,
        )
    k = abs(int(m_gamma) - int(n))
    return x ** (2 * k) / factorial(k)


def bessel_weight_exact(m_gamma, n, kappa_c, sigma_b):
    """Trap average of J^2_{m_gamma - n}(kappa_c b) in closed form.

    The Gaussian-weighted integral of J_k^2 equals exp(-y) I_k(y) with
    y = kappa_c^2 sigma_b^2 / 2.
    """
    k = abs(int(m_gamma) - int(n))
    y = 0.5 * (kappa_c * sigma_b) ** 2
    return float(special.ive(k, y))
