"""Physical constants and unit conversions.

Natural units (hbar = c = 1) with energies in eV are used internally;
lengths are carried as eV^-1. Lengths enter and leave the package in nm.
"""

HBARC_EV_NM = 197.3269804
BOHR_NM = 0.0529177
HBAR_EV_S = 6.582119569e-16
ALPHA = 1.0 / 137.035999084
ELECTRON_MASS_EV = 510998.95

#: one atomic unit of momentum (hbar / a0) expressed in eV
AU_MOMENTUM_EV = HBARC_EV_NM / BOHR_NM


def nm_to_inv_ev(length_nm):
    return length_nm / HBARC_EV_NM


def inv_ev_to_nm(length):
    return length * HBARC_EV_NM


def coherence_length_um(sigma_ev):
    """Packet coherence length sigma^-1 in micrometres."""
    return HBARC_EV_NM / sigma_ev * 1e-3


def lifetime_to_rate(lifetime_s):
    """Decay rate in eV for an excited-state lifetime in seconds."""
    return HBAR_EV_S / lifetime_s


def ev_to_au_momentum(k_ev):
    return k_ev / AU_MOMENTUM_EV
