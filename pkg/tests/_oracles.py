"""Independent reference computations used only by the tests."""
import math

import numpy as np
from numpy.polynomial import polynomial as P


def norpar(beta, gamma):
    """Closed-form (a, b, delta, homega/2J) typed in separately from the package."""
    s = math.sqrt(1 + gamma**2)
    a = 1 / (4 * beta**2 * s)
    return (a, gamma * a / 2, 2 * math.sqrt(2 * (1 + gamma**2) / (gamma * beta**2) + s / (2 * gamma * beta**4)),
            2 + 1 / (2 * beta**2 * s))


def quartic_roots(K, a, b, delta):
    """Attractive-branch roots from squaring the eigenvalue equation.

    ``((delta-e)^2 - c^2)(e+C)^2 = (a(e+C) - b^2)^2`` is a quartic in ``e``;
    spurious roots are dropped by the sign and continuum conditions.
    """
    C, c = math.cos(K), math.cos(K / 2)
    lhs = P.polymul(P.polysub(P.polypow([delta, -1], 2), [c * c]), P.polypow([C, 1], 2))
    rhs = P.polypow([a * C - b * b, a], 2)
    r = np.roots(P.polysub(lhs, rhs)[::-1])
    r = r[abs(r.imag) < 1e-7].real
    return sorted(e for e in r if e < delta - abs(c) and a - b * b / (e + C) > 0)


def edge_quadratic(a, b, delta):
    """Roots of ``(delta - a - e)(e - 1) + b^2 = 0`` (Band 2, Band 1)."""
    return sorted(np.roots([-1.0, 1.0 + delta - a, -(delta - a) + b * b]).real)


def brute_bound_states(H, photon, lo):
    """Scan a dense spectrum for levels outside the continuum, no thresholds."""
    w = np.linalg.eigvalsh(H)
    return [e for e in w if e < photon - 1e-9], [e for e in w if photon + 1e-9 < e < lo - 1e-9]
