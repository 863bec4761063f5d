"""Brute-force reference evaluations of the time-domain kernels.

These integrate the original multiple time integrals directly, without the
closed forms of :mod:`vortexpair.dynamics`, and serve as independent
oracles in the test suite and the acceptance check. All arguments are
dimensionless (detunings in Gamma, times in 1/Gamma, s = sigma / Gamma).
"""

import warnings

import numpy as np
from scipy import integrate, special


def _quad(f, a, b, epsrel):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, a, b, complex_func=True, epsabs=0.0, epsrel=epsrel, limit=200)
    return val


def pw_double_integral_quad(delta, delta0, tau, epsrel=1e-11):
    """int_0^tau dv2 int_0^v2 exp(b v2 - a v1) dv1 by nested adaptive quadrature."""
    a = 0.5 + 1j * delta
    b = 0.5 + 1j * delta0
    return _quad(lambda v2: np.exp(b * v2) * _quad(lambda v1: np.exp(-a * v1), 0.0, v2, epsrel),
                 0.0, tau, epsrel)


def excitation_integral_quad(delta, s, delta_c, tau, epsrel=1e-11):
    """int_0^tau dv exp(h v - s^2 v^2 / 2) int_0^v exp(-a u) du by nested quadrature."""
    a = 0.5 + 1j * delta
    h = 0.5 + 1j * delta_c
    return _quad(
        lambda v: np.exp(h * v - 0.5 * s * s * v * v) * _quad(lambda u: np.exp(-a * u), 0.0, v, epsrel),
        0.0, tau, epsrel,
    )


def scattering_integral_quad(delta1, delta2, s, delta_c, tau, epsrel=1e-10):
    """Triple time integral of the scattering kernel by iterated quadrature."""
    a = 0.5 + 1j * delta1
    c = 0.5 + 1j * delta2
    h = 0.5 + 1j * delta_c

    def middle(v3):
        return _quad(
            lambda v2: np.exp(h * v2 - 0.5 * s * s * v2 * v2)
            * _quad(lambda v1: np.exp(-c * v1), 0.0, v2, epsrel),
            0.0, v3, epsrel,
        )

    return _quad(lambda v3: np.exp(-a * v3) * middle(v3), 0.0, tau, epsrel)


def _truncated_halfnormal(rng, s, tau, n):
    z = special.erf(s * tau / np.sqrt(2.0))
    w = np.sqrt(2.0) / s * special.erfinv(rng.uniform(0.0, 1.0, n) * z)
    dens = np.sqrt(2.0 / np.pi) * s * np.exp(-0.5 * (s * w) ** 2) / z
    return w, dens


def reduced_weight_mc(s, delta_c, tau, n=200_000, seed=0):
    """Monte Carlo estimate of the channel-weight integral before reduction.

    Integrates exp(-(v1 + v3)) g(w) conj(g(w')) over the four-dimensional
    region 0 <= v1 <= w, w' <= v3 <= tau, where g(w) = exp((1/2 + i dc) w
    - s^2 w^2 / 2). The Gaussian times w, w' are importance sampled from a
    truncated half-normal; v1 is uniform below min(w, w') and v3
    exponential above max(w, w').

    Returns ``(mean, standard_error)``.
    """
    rng = np.random.default_rng(seed)
    h = 0.5 + 1j * delta_c
    w1, p1 = _truncated_halfnormal(rng, s, tau, n)
    w2, p2 = _truncated_halfnormal(rng, s, tau, n)
    lo = np.minimum(w1, w2)
    hi = np.maximum(w1, w2)
    v1 = rng.uniform(0.0, 1.0, n) * lo
    tail = -np.expm1(-(tau - hi))
    v3 = hi - np.log1p(-rng.uniform(0.0, 1.0, n) * tail)
    g1 = np.exp(h * w1 - 0.5 * (s * w1) ** 2)
    g2 = np.exp(h * w2 - 0.5 * (s * w2) ** 2)
    # weight = integrand / sampling density
    sample = (np.exp(-v1 - v3) * lo * tail * np.exp(v3 - hi)
              * (g1 * np.conj(g2)).real / (p1 * p2))
    return float(sample.mean()), float(sample.std(ddof=1) / np.sqrt(n))
