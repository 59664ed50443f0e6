"""Jacobi elliptic functions and the complete elliptic integral K(k).

Modulus convention: k (not the parameter m = k^2).  The core works on
0 <= k < 1; moduli above 1 are handled by the curve generators through the
reciprocal-modulus reduction.
"""

import numpy as np

__all__ = ["ModulusOutOfRange", "ellint_K", "sncndn"]

_EPS = 1e-15
_MAX_ITER = 40


class ModulusOutOfRange(Exception):
    pass


def ellint_K(k):
    """Complete elliptic integral of the first kind via the AGM."""
    if not 0.0 <= k < 1.0:
        raise ModulusOutOfRange(f"K(k) requires 0 <= k < 1, got k={k}")
    a, b = 1.0, np.sqrt(1.0 - k * k)
    for _ in range(_MAX_ITER):
        if abs(a - b) < _EPS * a:
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return np.pi / (2.0 * a)


def sncndn(u, k):
    """sn, cn, dn at real argument u, 0 <= k < 1, by the descending AGM.

    Accepts scalars or arrays and returns the three values jointly.
    """
    if not 0.0 <= k < 1.0:
        raise ModulusOutOfRange(f"sncndn requires 0 <= k < 1, got k={k}")
    u = np.asarray(u, dtype=float)
    if k < 1e-12:
        return np.sin(u), np.cos(u), np.ones_like(u)

    a = [1.0]
    c = [k]
    an, bn = 1.0, np.sqrt(1.0 - k * k)
    n = 0
    while abs(c[-1]) > _EPS and n < _MAX_ITER:
        an, bn, cn_ = 0.5 * (an + bn), np.sqrt(an * bn), 0.5 * (an - bn)
        a.append(an)
        c.append(cn_)
        n += 1

    # backward recurrence on the amplitude
    phi = (2.0 ** n) * a[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c[i] / a[i] * np.sin(phi),
                                             -1.0, 1.0)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(np.maximum(1.0 - (k * sn) ** 2, 0.0))
    if u.ndim == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn
