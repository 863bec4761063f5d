"""Named parameter sets.

``Na-3p3s``
    Sodium resonance line at 2.1 eV with Gamma = 4e-8 eV (16.4 ns). The
    valence electron is modelled hydrogenically; because a single-Z 3s-3p
    pair is degenerate and has a vanishing radial integral, the 1s-2p
    radial shape is used and z_eff is fitted so the Markov rate of the
    coupling equals the configured Gamma.
``H-2p1s``
    Hydrogen Lyman-alpha at 10.2 eV with Gamma derived from the coupling.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

from .atom import AtomSpec, fit_z_eff
from .photon import PhotonPacket, TrapSpec

NA_OMEGA = 2.1
NA_GAMMA = 4e-8
NA_SIGMA_B_NM = 100.0
H_OMEGA = 10.2


@dataclass(frozen=True)
class Preset:
    name: str
    atom: AtomSpec
    packet: PhotonPacket
    trap: TrapSpec

    def with_packet(self, **kw):
        return replace(self, packet=replace(self.packet, **kw))

    def with_atom(self, **kw):
        return replace(self, atom=replace(self.atom, **kw))


@lru_cache(maxsize=None)
def _na_atom(cg_convention="printed"):
    base = AtomSpec(n_g=1, n_e=2, omega_a=NA_OMEGA, gamma=NA_GAMMA, m_e=1,
                    cg_convention=cg_convention, name="Na-3p3s")
    return fit_z_eff(base)


@lru_cache(maxsize=None)
def _h_atom(cg_convention="printed"):
    base = AtomSpec(n_g=1, n_e=2, z_eff=1.0, omega_a=H_OMEGA, gamma=1e-7, m_e=1,
                    cg_convention=cg_convention, name="H-2p1s")
    return base.with_derived_gamma()


def na_preset(cg_convention="printed"):
    """Sodium figure set: kappa_c = 0.1 omega_c, sigma = 0.1 kappa_c, m_gamma = 3."""
    atom = _na_atom(cg_convention)
    packet = PhotonPacket.from_frequency(NA_OMEGA, m_gamma=3, lam=1)
    return Preset("Na-3p3s", atom, packet, TrapSpec.from_nm(NA_SIGMA_B_NM))


def h_preset(cg_convention="printed"):
    """Hydrogen set: omega_c = 10.2 eV, kappa_c = 1.02 eV, sigma = 0.102 eV, m_gamma = -1."""
    atom = _h_atom(cg_convention)
    packet = PhotonPacket.from_frequency(H_OMEGA, m_gamma=-1, lam=1)
    return Preset("H-2p1s", atom, packet, TrapSpec.from_nm(100.0))


PRESETS = {"Na-3p3s": na_preset, "H-2p1s": h_preset}


def get_preset(name, cg_convention="printed"):
    try:
        return PRESETS[name](cg_convention)
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
