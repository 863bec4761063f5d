"""Hydrogenlike bound states and the non-dipolar atom-photon coupling.

Inside this module lengths are in Bohr radii and momenta in atomic units
(hbar / a0); energies cross the module boundary in eV. Coupling amplitudes
are returned with the quantisation-volume factor sqrt(V) divided out, i.e.
``coupling_amplitude`` returns sqrt(V) * G_n.
"""

from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import factorial

import numpy as np
from scipy import optimize, special

from .errors import DomainError, NumericalError
from .quadrature import gauss_legendre
from .specfun import clebsch_gordan, spherical_bessel, wigner_d1
from .units import ALPHA, AU_MOMENTUM_EV, ELECTRON_MASS_EV

SUBLEVELS = (1, 0, -1)
HELICITIES = (1, -1)

#: ``printed``: <1,lam; L,0 | 1,n>, which forces n = lam.
#: ``sublevel``: <1,lam; L,n-lam | 1,n>, which lets L = 2 feed n != lam.
CG_CONVENTIONS = ("printed", "sublevel")

_L_MAX = 40
_L_RTOL = 1e-10
_N_LAGUERRE = 96


@dataclass(frozen=True)
class AtomSpec:
    """Two-level hydrogenlike atom: ground ns, excited n'p manifold.

    Parameters
    ----------
    n_g, n_e : int
        Principal quantum numbers of the ground s-state and excited p-state.
    z_eff : float
        Effective nuclear charge seen by the active electron.
    omega_a : float
        Resonance energy in eV.
    gamma : float
        Decay rate in eV.
    coupling_scale : float
        Multiplier on the multipole element (1 = unmodified).
    m_e : int
        Initially populated excited sublevel.
    cg_convention : str
        Index convention of the second Clebsch-Gordan factor, see
        ``CG_CONVENTIONS``.
    """

    n_g: int = 1
    n_e: int = 2
    z_eff: float = 1.0
    omega_a: float = 10.2
    gamma: float = 4.1e-7
    coupling_scale: float = 1.0
    m_e: int = 1
    cg_convention: str = "printed"
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if self.n_g < 1:
            raise DomainError(f"n_g must be >= 1, got {self.n_g}")
        if self.n_e < 2:
            raise DomainError(f"n_e must be >= 2, got {self.n_e}")
        if not self.omega_a > 0:
            raise DomainError(f"omega_a must be positive, got {self.omega_a}")
        if not 0 < self.gamma < 1e-3 * self.omega_a:
            raise DomainError(
                f"gamma must satisfy 0 < gamma < 1e-3 omega_a, got {self.gamma}"
            )
        if not self.z_eff > 0:
            raise DomainError(f"z_eff must be positive, got {self.z_eff}")
        if self.m_e not in SUBLEVELS:
            raise DomainError(f"m_e must be in {{-1, 0, 1}}, got {self.m_e}")
        if self.cg_convention not in CG_CONVENTIONS:
            raise DomainError(f"unknown cg_convention {self.cg_convention!r}")

    def with_derived_gamma(self):
        """Copy whose decay rate is the Markov rate of its own coupling."""
        return replace(self, gamma=markov_decay_rate(self))


def _check_sublevel(n, lam):
    if n not in SUBLEVELS:
        raise DomainError(f"sublevel n must be in {{-1, 0, 1}}, got {n}")
    if lam not in HELICITIES:
        raise DomainError(f"helicity must be +1 or -1, got {lam}")


def _radial_norm(n, l, z):
    return np.sqrt((2.0 * z / n) ** 3 * factorial(n - l - 1) / (2.0 * n * factorial(n + l)))


def radial_wavefunction(n, l, z_eff, r):
    """Normalised hydrogenlike R_{n,l}(r), r in Bohr radii."""
    if not 0 <= l < n:
        raise DomainError(f"need 0 <= l < n, got n={n}, l={l}")
    r = np.asarray(r, dtype=float)
    rho = 2.0 * z_eff * r / n
    lag = special.eval_genlaguerre(n - l - 1, 2 * l + 1, rho)
    out = _radial_norm(n, l, z_eff) * np.exp(-rho / 2.0) * rho**l * lag
    return out if out.ndim else float(out)


def radial_derivative(n, l, z_eff, r):
    """dR_{n,l}/dr from the analytic Laguerre derivative."""
    if not 0 <= l < n:
        raise DomainError(f"need 0 <= l < n, got n={n}, l={l}")
    r = np.asarray(r, dtype=float)
    rho = 2.0 * z_eff * r / n
    k = n - l - 1
    lag = special.eval_genlaguerre(k, 2 * l + 1, rho)
    dlag = -special.eval_genlaguerre(k - 1, 2 * l + 2, rho) if k > 0 else 0.0
    pw = rho**l
    dpw = l * rho ** (l - 1) if l > 0 else 0.0
    d_rho = np.exp(-rho / 2.0) * (dpw * lag - 0.5 * pw * lag + pw * dlag)
    out = _radial_norm(n, l, z_eff) * (2.0 * z_eff / n) * d_rho
    return out if np.ndim(out) else float(out)


@lru_cache(maxsize=None)
def _laguerre_nodes(n):
    return special.roots_laguerre(n)


def radial_overlap(n_e, n_g, z_eff, L, k):
    """Radial integral of R_{n_e,1} j_L(k r) dR_{n_g,0}/dr r^2 over r.

    ``k`` is in atomic units and may be an array. Gauss-Laguerre quadrature
    is applied after scaling out the combined exponential decay.
    """
    if L < 0:
        raise DomainError("L must be non-negative")
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise DomainError("k must be non-negative")
    decay = z_eff / n_e + z_eff / n_g
    x, w = _laguerre_nodes(_N_LAGUERRE)
    r = x / decay
    # strip the exponential that the Laguerre weight already carries
    smooth = radial_wavefunction(n_e, 1, z_eff, r) * radial_derivative(n_g, 0, z_eff, r)
    smooth = smooth * np.exp(x) * r**2 / decay
    kr = np.multiply.outer(k, r)
    out = spherical_bessel(L, kr) @ (w * smooth)
    return out if np.ndim(out) else float(out)


def _cg_pair(L, n, lam, convention):
    first = clebsch_gordan(1, 0, L, 0, 1, 0)
    if convention == "printed":
        second = clebsch_gordan(1, lam, L, 0, 1, n)
    else:
        second = clebsch_gordan(1, lam, L, n - lam, 1, n)
    return first * second


def multipole_terms(atom, n, lam, k):
    """Partial-wave terms of the multipole element as a dict L -> value.

    ``k`` is in atomic units. Terms are in eV (the radial integral is in
    units of hbar / a0).
    """
    _check_sublevel(n, lam)
    k = np.asarray(k, dtype=float)
    terms = {}
    total = np.zeros(k.shape, dtype=complex)
    for L in range(_L_MAX + 1):
        cg = _cg_pair(L, n, lam, atom.cg_convention)
        if cg == 0.0:
            # triangle rule: nothing beyond L = 2 can couple p to s
            if L > 2:
                return terms
            continue
        radial = radial_overlap(atom.n_e, atom.n_g, atom.z_eff, L, k)
        term = (
            -1j * (1j**L) * np.sqrt((2 * L + 1) ** 3 / 3.0) * cg * radial
            * AU_MOMENTUM_EV * atom.coupling_scale
        )
        terms[L] = term
        total = total + term
        if L > 2 and np.all(np.abs(term) <= _L_RTOL * np.abs(total)):
            return terms
    raise NumericalError(
        f"multipole sum not converged by L = {_L_MAX}",
        [(L, float(np.max(np.abs(t)))) for L, t in terms.items()],
    )


def multipole_element(atom, n, lam, k):
    """Multipole matrix element for s -> p_n excitation by helicity ``lam``.

    ``k`` is the photon momentum in atomic units. Returns eV.
    """
    terms = multipole_terms(atom, n, lam, k)
    k = np.asarray(k, dtype=float)
    out = sum(terms.values(), np.zeros(k.shape, dtype=complex))
    return out if out.ndim else complex(out)


def _prefactor(omega):
    return -np.sqrt(ALPHA) / ELECTRON_MASS_EV * np.sqrt(2.0 * np.pi / omega)


def coupling_amplitude(atom, n, lam, omega, theta, volume=None):
    """Coupling amplitude G_n(omega, theta) for helicity ``lam``.

    ``omega`` (eV) and ``theta`` broadcast against each other. With
    ``volume=None`` the volume-free product sqrt(V) G_n (eV^(1/2)) is
    returned; otherwise G_n itself for a quantisation volume in eV^-3.
    """
    _check_sublevel(n, lam)
    omega = np.asarray(omega, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("omega must be positive")
    k = omega / AU_MOMENTUM_EV
    acc = 0.0
    for n2 in SUBLEVELS:
        m = multipole_element(atom, n2, lam, k)
        if np.all(m == 0):
            continue
        acc = acc + wigner_d1(n, n2, theta) * m
    out = _prefactor(omega) * acc * np.ones(np.broadcast(omega, theta).shape)
    if volume is not None:
        out = out / np.sqrt(volume)
    return out if out.ndim else complex(out)


def coupling_matrix(atom, lam, omega, theta):
    """Stack of coupling amplitudes, axis 0 ordered as ``SUBLEVELS``."""
    return np.stack([coupling_amplitude(atom, n, lam, omega, theta) for n in SUBLEVELS])


@dataclass(frozen=True)
class CouplingTable:
    """Coupling amplitudes tabulated on an (omega, theta) tensor grid."""

    omega: np.ndarray
    theta: np.ndarray
    values: dict

    @classmethod
    def build(cls, atom, omega, theta):
        omega = np.asarray(omega, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if np.any(np.diff(omega) <= 0) or np.any(np.diff(theta) <= 0):
            raise DomainError("table nodes must be strictly increasing")
        values = {}
        for lam in HELICITIES:
            for n in SUBLEVELS:
                g = coupling_amplitude(atom, n, lam, omega[:, None], theta[None, :])
                g.setflags(write=False)
                values[(n, lam)] = g
        omega.setflags(write=False)
        theta.setflags(write=False)
        return cls(omega, theta, values)

    def __getitem__(self, key):
        return self.values[key]


def markov_decay_rate(atom, n=None, n_theta=64):
    """Decay rate implied by the coupling through the Markov closure.

    Gamma_n = omega_a^2 / (4 pi^2) sum_lam int dOmega |sqrt(V) G_n|^2, the
    mode sum on the energy shell. ``n`` defaults to ``atom.m_e``.
    """
    n = atom.m_e if n is None else n
    theta, w = gauss_legendre(n_theta, 0.0, np.pi)
    total = 0.0
    for lam in HELICITIES:
        g = coupling_amplitude(atom, n, lam, atom.omega_a, theta)
        total += 2.0 * np.pi * np.sum(w * np.sin(theta) * np.abs(g) ** 2)
    return atom.omega_a**2 / (4.0 * np.pi**2) * total


def fit_z_eff(atom, gamma=None, bracket=(0.05, 20.0)):
    """Effective charge for which the Markov rate equals ``gamma``."""
    target = atom.gamma if gamma is None else gamma

    def resid(z):
        return np.log(markov_decay_rate(replace(atom, z_eff=z, gamma=1e-12)) / target)

    z = optimize.brentq(resid, *bracket, xtol=1e-14, rtol=1e-14)
    return replace(atom, z_eff=z, gamma=target)
