"""Special functions used by the matrix elements and packet overlaps.

Phase conventions: Condon-Shortley for Clebsch-Gordan coefficients, and
d^j_{m,m'}(theta) = <j m| exp(-i theta J_y) |j m'> for the Wigner small-d
matrix. Only the j = 1 block of the d-matrix is provided.
"""

from fractions import Fraction
from math import factorial, sqrt

import numpy as np
from scipy import special

from .errors import DomainError

_SQRT_HALF = sqrt(0.5)


def wigner_d1(n, np_, theta):
    """Wigner small-d element d^1_{n,np}(theta).

    ``theta`` may be an array. Indices must lie in {-1, 0, 1}.
    """
    if n not in (-1, 0, 1) or np_ not in (-1, 0, 1):
        raise DomainError(f"d^1 indices must be in {{-1, 0, 1}}, got ({n}, {np_})")
    c = np.cos(theta)
    s = np.sin(theta)
    if n == np_:
        return c if n == 0 else (1.0 + c) / 2.0
    if n == -np_:
        return (1.0 - c) / 2.0
    # one index is zero
    sign = -1.0 if (n - np_) > 0 else 1.0
    return sign * s * _SQRT_HALF


def wigner_d1_matrix(theta):
    """Full 3x3 matrix, rows/columns ordered (1, 0, -1)."""
    order = (1, 0, -1)
    return np.array([[wigner_d1(a, b, theta) for b in order] for a in order])


def _half_int(x, name):
    f = Fraction(x).limit_denominator(2)
    if f.denominator not in (1, 2) or f != Fraction(x):
        raise DomainError(f"{name}={x} is not an integer or half-integer")
    return f


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """<j1 m1; j2 m2 | J M> from the Racah closed form."""
    j1, m1, j2, m2, J, M = (
        _half_int(v, name)
        for v, name in zip((j1, m1, j2, m2, J, M), ("j1", "m1", "j2", "m2", "J", "M"))
    )
    if j1 < 0 or j2 < 0 or J < 0:
        raise DomainError("angular momenta must be non-negative")
    if m1 + m2 != M:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return 0.0
    if not (abs(j1 - j2) <= J <= j1 + j2):
        return 0.0
    for jj, mm in ((j1, m1), (j2, m2), (J, M)):
        if (jj - mm).denominator != 1:
            return 0.0
    if (j1 + j2 + J).denominator != 1:
        return 0.0

    def fac(x):
        return factorial(int(x))

    pref = Fraction(
        (2 * J + 1) * fac(j1 + j2 - J) * fac(j1 - j2 + J) * fac(-j1 + j2 + J),
        fac(j1 + j2 + J + 1),
    )
    pref *= (
        fac(j1 + m1) * fac(j1 - m1) * fac(j2 + m2) * fac(j2 - m2) * fac(J + M) * fac(J - M)
    )
    kmin = int(max(0, j2 - J - m1, j1 + m2 - J))
    kmax = int(min(j1 + j2 - J, j1 - m1, j2 + m2))
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (
            fac(k)
            * fac(j1 + j2 - J - k)
            * fac(j1 - m1 - k)
            * fac(j2 + m2 - k)
            * fac(J - j2 + m1 + k)
            * fac(J - j1 - m2 + k)
        )
        total += Fraction((-1) ** k, den)
    return float(total) * sqrt(pref)


def bessel_j(m, x):
    """Cylindrical Bessel function J_m(x) for integer order, any real x.

    ``m`` and ``x`` broadcast; negative x follows J_m(-x) = (-1)^m J_m(x).
    """
    m = np.asarray(m)
    if np.any(m != np.round(m)):
        raise DomainError("Bessel order must be an integer")
    out = special.jv(m.astype(int), x)
    return out if np.ndim(out) else float(out)


def spherical_bessel(L, x):
    """Spherical Bessel function j_L(x), L >= 0, x >= 0."""
    if L < 0:
        raise DomainError("spherical Bessel order must be non-negative")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("spherical Bessel argument must be non-negative")
    out = special.spherical_jn(int(L), x)
    return out if out.ndim else float(out)


def faddeeva(z):
    """Faddeeva function w(z) = exp(-z^2) erfc(-i z)."""
    return special.wofz(z)


def faddeeva_checked(z):
    """Return ``(w, saturated)``; ``saturated`` flags non-finite results.

    Saturated entries are replaced by 0 so downstream arithmetic stays finite;
    callers decide whether that is acceptable.
    """
    w = np.asarray(special.wofz(z))
    saturated = ~np.isfinite(w)
    if np.any(saturated):
        w = np.where(saturated, 0.0, w)
    return w, saturated
