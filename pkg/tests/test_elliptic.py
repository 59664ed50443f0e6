import numpy as np
import pytest
from scipy.integrate import quad

from liftfold.elliptic import ModulusOutOfRange, ellint_K, sncndn


def K_quadrature(k):
    val, _ = quad(lambda t: 1.0 / np.sqrt(1.0 - (k * np.sin(t)) ** 2),
                  0.0, np.pi / 2, epsabs=1e-14, epsrel=1e-14)
    return val


def test_K_special_values():
    assert abs(ellint_K(0.0) - np.pi / 2) < 1e-15
    with pytest.raises(ModulusOutOfRange):
        ellint_K(1.0)
    with pytest.raises(ModulusOutOfRange):
        ellint_K(-0.2)


def test_K_monotone_and_finite_near_one():
    ks = [0.9, 0.99, 0.999, 0.999999]
    vals = [ellint_K(k) for k in ks]
    assert all(np.isfinite(vals))
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_K_against_quadrature():
    for k in [0.1, 0.25, 0.5, 0.75, 0.9, 0.99]:
        assert abs(ellint_K(k) - K_quadrature(k)) < 1e-12 * ellint_K(k)


def test_sncndn_origin_and_quarter_period():
    sn, cn, dn = sncndn(0.0, 0.6)
    assert (sn, cn, dn) == (0.0, 1.0, 1.0)
    sn, _, _ = sncndn(ellint_K(0.5), 0.5)
    assert abs(sn - 1.0) < 1e-13


def test_sncndn_identities():
    rng = np.random.default_rng(0)
    for k in np.arange(0.1, 0.95, 0.1):
        u = rng.uniform(-20, 20, 400)
        sn, cn, dn = sncndn(u, k)
        assert np.abs(sn ** 2 + cn ** 2 - 1).max() < 1e-12
        assert np.abs(dn ** 2 + (k * sn) ** 2 - 1).max() < 1e-12


def test_periodicity_and_parity():
    rng = np.random.default_rng(1)
    for k in (0.3, 0.8):
        K = ellint_K(k)
        u = rng.uniform(-10, 10, 100)
        sn, cn, dn = sncndn(u, k)
        sn4, cn4, dn4 = sncndn(u + 4 * K, k)
        assert np.abs(sn4 - sn).max() < 1e-11
        assert np.abs(cn4 - cn).max() < 1e-11
        _, _, dn2 = sncndn(u + 2 * K, k)
        assert np.abs(dn2 - dn).max() < 1e-11
        snm, cnm, dnm = sncndn(-u, k)
        assert np.abs(snm + sn).max() < 1e-12
        assert np.abs(cnm - cn).max() < 1e-12
        assert np.abs(dnm - dn).max() < 1e-12


def test_sncndn_against_scipy():
    from scipy.special import ellipj
    rng = np.random.default_rng(2)
    u = rng.uniform(-15, 15, 300)
    for k in (0.2, 0.5, 0.9):
        sn, cn, dn = sncndn(u, k)
        s2, c2, d2, _ = ellipj(u, k * k)
        assert np.abs(sn - s2).max() < 5e-13
        assert np.abs(cn - c2).max() < 5e-13
        assert np.abs(dn - d2).max() < 5e-13
