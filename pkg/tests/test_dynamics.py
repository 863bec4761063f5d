import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexpair.dynamics import (
    TimeGrid,
    amplitude_e_pw,
    amplitude_e_vortex,
    amplitude_g_vortex,
    amplitudes,
    channel_weights,
    emission_kernel_f,
    exp_integral,
    excitation_integral,
    gauss_integral,
    pw_double_integral,
    reduced_weight,
    scattering_integral,
    vortex_prefactor,
)
from vortexpair.errors import DomainError
from vortexpair.oracles import (
    excitation_integral_quad,
    pw_double_integral_quad,
    reduced_weight_mc,
    scattering_integral_quad,
)
from vortexpair.photon import PlaneWaveMode, normalize


def _mode(pk, dk=0.0, phi=0.0, s=None):
    return PlaneWaveMode(pk.kappa_c, pk.k_c + dk, phi, pk.lam if s is None else s)


# -- primitives -------------------------------------------------------------


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 20))
def test_exp_integral_branches(re, im, x):
    z = complex(re, im)
    ref = x if z == 0 else np.expm1(z * x) / z
    assert abs(exp_integral(z, x) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("beta,s,x", [
    (0.5 + 0.3j, 0.7, 6.0),     # Faddeeva
    (-3.0 + 1.0j, 0.2, 10.0),   # numeric
    (0.5 - 2j, 1e-9, 5.0),      # Taylor
    (0.5, 5e4, 20.0),           # sharp Gaussian
])
def test_gauss_integral_against_quad(beta, s, x):
    from scipy import integrate

    def f(v):
        return np.exp(beta * v - 0.5 * s * s * v * v)

    top = min(x, 40.0 / s) if s > 0 else x
    ref, _ = integrate.quad(f, 0, top, complex_func=True, epsabs=0, epsrel=1e-12, limit=400)
    assert abs(complex(gauss_integral(beta, s, x)) - ref) <= 1e-10 * abs(ref)


def test_gauss_integral_domain():
    with pytest.raises(DomainError):
        gauss_integral(0.5, -1.0, 1.0)


def test_time_grid():
    g = TimeGrid.linspace(0, 10, 11)
    assert g.t_max == 10.0
    for bad in [(), (1.0, 0.5), (-1.0, 1.0), (0.0, 60.0)]:
        with pytest.raises(DomainError):
            TimeGrid(bad)


# -- kernels ----------------------------------------------------------------


def test_emission_kernel_limits():
    gamma = 4e-8
    assert emission_kernel_f(gamma, 0.0, 0.0) == 0
    assert emission_kernel_f(gamma, 0.0, 50.0) == pytest.approx(2 / gamma, rel=1e-10)
    assert abs(emission_kernel_f(gamma, 0.0, 50.0)) == pytest.approx(5e7, rel=1e-10)
    with pytest.raises(DomainError):
        emission_kernel_f(gamma, 0.0, -1.0)


def test_pw_continuous_at_equal_detuning():
    on = complex(pw_double_integral(0.7, 0.7, 6.0))
    eps = 1e-9
    mid = 0.5 * complex(pw_double_integral(0.7, 0.7 + eps, 6.0) + pw_double_integral(0.7, 0.7 - eps, 6.0))
    assert abs(on - mid) < 1e-10 * abs(on)


def test_oracles_seeded_nodes():
    rng = np.random.default_rng(11)
    for _ in range(20):
        d1, d2 = rng.uniform(-4, 4, 2)
        tau = rng.uniform(0.5, 12)
        s = 10 ** rng.uniform(-1, 0.7)
        dc = rng.uniform(-2, 2)
        ref = pw_double_integral_quad(d1, d2, tau)
        assert abs(complex(pw_double_integral(d1, d2, tau)) - ref) <= 1e-8 * abs(ref)
        ref = excitation_integral_quad(d1, s, dc, tau)
        assert abs(complex(excitation_integral(d1, s, dc, tau)) - ref) <= 1e-8 * abs(ref)
        ref = scattering_integral_quad(d1, d2, s, dc, tau)
        assert abs(complex(scattering_integral(d1, d2, s, dc, tau)) - ref) <= 1e-8 * abs(ref)


# -- amplitudes -------------------------------------------------------------


def test_initial_conditions(na):
    atom, pk = na.atom, na.packet
    norm = normalize(pk)
    mode = _mode(pk)
    assert amplitude_e_pw(atom, mode, mode, atom.m_e, 0.0) == 1.0
    assert amplitude_e_pw(atom, mode, mode, 0, 0.0) == 0.0
    assert amplitude_e_vortex(atom, pk, norm, mode, 0, 0.0) == 0.0
    assert amplitude_g_vortex(atom, pk, norm, mode, _mode(pk, 1e-8), 0.0) == 0.0


def test_pw_free_decay(na):
    atom = na.atom
    mode = _mode(na.packet)
    # huge volume switches the coupling off
    c = amplitude_e_pw(atom, mode, mode, atom.m_e, 3.0, volume=1e60)
    assert c == pytest.approx(np.exp(-1.5), rel=1e-12)


def test_vortex_excited_amplitude_decays(na):
    atom, pk = na.atom, na.packet
    norm = normalize(pk)
    mode = _mode(pk, 0.3 * pk.sigma)
    a4 = amplitude_e_vortex(atom, pk, norm, mode, atom.m_e, 4.0)
    a6 = amplitude_e_vortex(atom, pk, norm, mode, atom.m_e, 6.0)
    assert a6 / a4 == pytest.approx(np.exp(-1.0), rel=1e-9)


def test_pair_amplitude_exchange_symmetry(na):
    atom, pk = na.atom, na.packet
    norm = normalize(pk)
    m1 = PlaneWaveMode(pk.kappa_c, pk.k_c + 2 * atom.gamma, 0.4, 1)
    m2 = PlaneWaveMode(0.9 * pk.kappa_c, pk.k_c - atom.gamma, 2.1, -1)
    assert amplitude_g_vortex(atom, pk, norm, m1, m2, 5.0) == amplitude_g_vortex(atom, pk, norm, m2, m1, 5.0)


def test_amplitude_bundle(na):
    atom, pk = na.atom, na.packet
    a = amplitudes(atom, pk, normalize(pk), _mode(pk), _mode(pk, atom.gamma), atom.m_e, 2.0)
    assert a.t == 2.0 and np.isfinite([a.e_pw, a.e_v, a.g_v]).all()


def test_prefactor_on_axis_selects_matching_channel(na):
    pk = na.with_packet(m_gamma=1, b=0.0).packet
    norm = normalize(pk)
    vals = {n: vortex_prefactor(na.atom, pk, norm, n) for n in (-1, 0, 1)}
    assert vals[1] != 0
    assert vals[0] == 0 and vals[-1] == 0


# -- channel weights --------------------------------------------------------


def _dimless(na):
    return na.packet.sigma / na.atom.gamma, (na.packet.omega_c - na.atom.omega_a) / na.atom.gamma


def test_reduced_weight_monte_carlo(na):
    s, dc = _dimless(na)
    k = reduced_weight(s, dc, 10.0)[0]
    mean, se = reduced_weight_mc(s, dc, 10.0, seed=3)
    assert abs(k - mean) <= 3 * se


@pytest.mark.parametrize("s,dc", [(0.5, 0.0), (2.0, 1.0), (0.3, -1.5)])
def test_reduced_weight_monte_carlo_moderate(s, dc):
    k = reduced_weight(s, dc, 6.0)[0]
    mean, se = reduced_weight_mc(s, dc, 6.0, seed=5)
    assert abs(k - mean) <= 3 * se


def test_channel_weights_growth_and_plateau(na):
    norm = normalize(na.packet)
    totals = [channel_weights(na.atom, na.packet, norm, t).total() for t in (0.5, 2.0, 5.0, 8.0, 10.0)]
    assert all(b > a for a, b in zip(totals, totals[1:]))
    assert totals[-1] / totals[-2] - 1 < 1e-3
    assert channel_weights(na.atom, na.packet, norm, 0.0).total() == 0.0


def test_channel_weights_diagonal_doubling(na):
    cw = channel_weights(na.atom, na.packet, normalize(na.packet), 10.0)
    assert set(cw.values) == {-1, 0, 1}
    assert cw.rel_error <= 1e-7
    assert all(v >= 0 for v in cw.values.values())
