import warnings
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from vortexpair.errors import DomainError, RegimeWarning
from vortexpair.photon import (
    PhotonPacket,
    PlaneWaveMode,
    TrapSpec,
    bessel_argument,
    bessel_weight,
    bessel_weight_exact,
    normalize,
    overlap_partial_waves,
    overlap_plane_wave,
    packet_norm_quadrature,
    trap_density,
)
from vortexpair.specfun import bessel_j
from vortexpair.units import coherence_length_um, nm_to_inv_ev


def test_packet_derived_quantities(na):
    pk = na.packet
    assert pk.omega_c == pytest.approx(2.1, rel=1e-14)
    assert pk.kappa_c == pytest.approx(0.21, rel=1e-14)
    assert pk.sigma == pytest.approx(0.021, rel=1e-14)
    assert np.tan(pk.theta_c) == pytest.approx(pk.kappa_c / pk.k_c, rel=1e-14)
    assert pk.detuning(2.1) == pytest.approx(0.0, abs=1e-14)


def test_h_packet(h):
    assert h.packet.omega_c == pytest.approx(10.2, rel=1e-14)
    assert h.packet.kappa_c == pytest.approx(1.02, rel=1e-14)
    assert h.packet.sigma == pytest.approx(0.102, rel=1e-14)


@pytest.mark.parametrize(
    "kw",
    [dict(lam=0), dict(m_gamma=1.5), dict(kappa_c=-1.0), dict(sigma=0.5), dict(sigma=0.0), dict(b=-1.0)],
)
def test_packet_validation(na, kw):
    with pytest.raises(DomainError):
        replace(na.packet, **kw)


def test_coherence_length(na):
    assert coherence_length_um(na.packet.sigma) == pytest.approx(9.38, abs=0.02)


# -- overlaps ---------------------------------------------------------------


def test_overlap_helicity_selection(na):
    norm = normalize(na.packet)
    mode = PlaneWaveMode(na.packet.kappa_c, na.packet.k_c, 0.0, -1)
    assert overlap_plane_wave(na.packet, norm, mode) == 0


def test_overlap_peak_at_centre(na):
    pk, norm = na.packet, normalize(na.packet)
    centre = abs(overlap_plane_wave(pk, norm, PlaneWaveMode(pk.kappa_c, pk.k_c, 0.0, 1)))
    kp = pk.kappa_c + pk.sigma * np.linspace(-3, 3, 13)
    kz = pk.k_c + pk.sigma * np.linspace(-3, 3, 13)
    grid = np.abs(overlap_plane_wave(pk, norm, PlaneWaveMode(kp[:, None], kz[None, :], 0.0, 1)))
    assert grid.max() == pytest.approx(centre, rel=1e-15)
    assert centre == pytest.approx(norm.n_tilde)


@given(st.floats(0, 2 * np.pi))
def test_overlap_modulus_phi_independent_at_b0(phi):
    pk = PhotonPacket.from_frequency(2.1, m_gamma=3)
    norm = normalize(pk)
    a = overlap_plane_wave(pk, norm, PlaneWaveMode(0.2, 2.08, phi, 1))
    b = overlap_plane_wave(pk, norm, PlaneWaveMode(0.2, 2.08, 0.0, 1))
    assert abs(a) == pytest.approx(abs(b), rel=1e-14)


@given(st.floats(0, 1.0), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi), st.integers(-4, 4))
def test_partial_wave_resummation(kb, phi, phi_b, m):
    base = PhotonPacket.from_frequency(2.1, m_gamma=m)
    pk = replace(base, b=kb / base.kappa_c, phi_b=phi_b)
    norm = normalize(pk)
    mode = PlaneWaveMode(pk.kappa_c * 1.02, pk.k_c, phi, 1)
    direct = overlap_plane_wave(pk, norm, mode)
    summed = overlap_partial_waves(pk, norm, mode)
    assert abs(direct - summed) <= 1e-9 * abs(direct)


def test_overlap_volume_convention(na):
    norm = normalize(na.packet)
    mode = PlaneWaveMode(0.2, 2.09, 0.3, 1)
    assert overlap_plane_wave(na.packet, norm, mode, volume=9.0) == pytest.approx(
        overlap_plane_wave(na.packet, norm, mode) / 3.0)


# -- normalisation ----------------------------------------------------------


@pytest.mark.parametrize("name", ["na", "h"])
def test_packet_normalised(name, request):
    pk = request.getfixturevalue(name).packet
    assert packet_norm_quadrature(pk, normalize(pk)) == pytest.approx(1.0, abs=1e-8)


def test_normalisation_sigma_scaling_against_quadrature(na):
    pk = na.packet
    wide = replace(pk, sigma=2 * pk.sigma)
    ratio = normalize(wide).n2v / normalize(pk).n2v

    def mass(p):
        s = p.sigma
        val, _ = integrate.dblquad(
            lambda kz, kp: kp * np.exp(-((kp - p.kappa_c) ** 2 + (kz - p.k_c) ** 2) / s**2),
            0, p.kappa_c + 12 * s, 0, p.k_c + 12 * s, epsabs=0, epsrel=1e-11)
        return val

    assert ratio == pytest.approx(mass(pk) / mass(wide), rel=1e-8)


def test_volume_invariance(na):
    n1 = normalize(na.packet, volume=1.0)
    n2 = normalize(na.packet, volume=2.0)
    assert n1.n2v == n2.n2v
    assert n2.n_packet == pytest.approx(n1.n_packet / np.sqrt(2))
    assert n1.n_tilde == n2.n_tilde


def test_normalize_domain(na):
    with pytest.raises(DomainError):
        normalize(na.packet, volume=0.0)


# -- trap -------------------------------------------------------------------


def test_trap_density_normalised():
    trap = TrapSpec.from_nm(100.0)
    s = trap.sigma_b
    assert trap_density(trap, 0.0) == pytest.approx(1 / (np.pi * s * s))
    total, _ = integrate.quad(lambda b: 2 * np.pi * b * trap_density(trap, b), 0, 20 * s, epsrel=1e-12)
    mean_b2, _ = integrate.quad(lambda b: 2 * np.pi * b**3 * trap_density(trap, b), 0, 20 * s,
                                epsrel=1e-12)
    assert total == pytest.approx(1.0, rel=1e-10)
    assert mean_b2 == pytest.approx(s * s, rel=1e-10)


def test_trap_validation():
    with pytest.raises(DomainError):
        TrapSpec(0.0)
    with pytest.raises(DomainError):
        trap_density(TrapSpec(1.0), -1.0)


def test_trap_regime(na):
    na.trap.check_regime(na.packet)
    with pytest.raises(DomainError):
        TrapSpec(0.2 / na.packet.sigma).check_regime(na.packet)


# -- Bessel weights ---------------------------------------------------------


def test_bessel_argument_anchor():
    assert bessel_argument(0.21, nm_to_inv_ev(100.0)) == pytest.approx(0.053, abs=0.001)


def test_bessel_weight_examples():
    sb = nm_to_inv_ev(100.0)
    assert bessel_weight(3, 3, 0.21, sb) == 1.0
    x = bessel_argument(0.21, sb)
    assert bessel_weight(2, 1, 0.21, sb) == pytest.approx(x**2)
    assert bessel_weight(2, 1, 0.21, sb) == pytest.approx(2.81e-3, rel=0.01)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_bessel_weight_series_vs_exact_average(k):
    kc, sb = 0.21, nm_to_inv_ev(100.0)
    trap = TrapSpec(sb)
    val, _ = integrate.quad(lambda b: 2 * np.pi * b * trap_density(trap, b) * bessel_j(k, kc * b) ** 2,
                            0, 15 * sb, epsabs=0, epsrel=1e-12)
    assert bessel_weight_exact(k, 0, kc, sb) == pytest.approx(val, rel=1e-9)
    assert bessel_weight(k, 0, kc, sb) == pytest.approx(val, rel=0.01)


@given(st.floats(0.01, 0.49), st.integers(-3, 5))
def test_bessel_weight_monotone(x, m):
    sb = 2 * x / 0.21
    w = [bessel_weight(m, n, 0.21, sb) for n in range(m, m - 6, -1)]
    assert all(a > b for a, b in zip(w, w[1:]))


def test_bessel_weight_regime_warning():
    with pytest.warns(RegimeWarning):
        bessel_weight(2, 1, 1.0, 2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bessel_weight(2, 1, 0.21, 1.0)
