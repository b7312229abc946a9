import math

import mpmath as mp
import numpy as np
import pytest

from mazersim.extrange import RangeFlag, XReal, xadd, xmul
from mazersim.specfun import (
    BesselKind,
    ORDER_THIRD,
    ORDER_TWO_THIRDS,
    cyl_bessel,
    log_gamma_complex,
)

mp.mp.dps = 50

J, Y, I, K = BesselKind.J, BesselKind.Y, BesselKind.I, BesselKind.K


def val(kind, order, y, scaled=False) -> float:
    out = cyl_bessel(kind, order, y, scaled=scaled).to_float_checked()
    assert not isinstance(out, RangeFlag)
    return out


# derivative building blocks from the two supported orders only
def besselj_deriv_third(y: float) -> float:
    j13 = val(J, ORDER_THIRD, y)
    j23 = val(J, ORDER_TWO_THIRDS, y)
    y23 = val(Y, ORDER_TWO_THIRDS, y)
    j_m23 = -0.5 * j23 - 0.5 * math.sqrt(3.0) * y23
    return j_m23 - j13 / (3.0 * y)


def bessely_deriv_third(y: float) -> float:
    y13 = val(Y, ORDER_THIRD, y)
    j23 = val(J, ORDER_TWO_THIRDS, y)
    y23 = val(Y, ORDER_TWO_THIRDS, y)
    y_m23 = 0.5 * math.sqrt(3.0) * j23 - 0.5 * y23
    return y_m23 - y13 / (3.0 * y)


def test_wronskian_modified_pair():
    # K(y) I'(y) - K'(y) I(y) = 1/y, derivatives through order-2/3 values
    for y in (1.0, 10.0, 100.0):
        i13 = cyl_bessel(I, ORDER_THIRD, y, scaled=True)
        k13 = cyl_bessel(K, ORDER_THIRD, y, scaled=True)
        i23 = cyl_bessel(I, ORDER_TWO_THIRDS, y, scaled=True)
        k23 = cyl_bessel(K, ORDER_TWO_THIRDS, y, scaled=True)
        third = XReal.from_float(1.0 / (3.0 * y))
        root3_over_pi = XReal.from_float(math.sqrt(3.0) / math.pi)
        i_m23 = xadd(i23, xmul(root3_over_pi, k23))
        i_prime = xadd(i_m23, -xmul(third, i13))
        k_prime = xadd(-k23, -xmul(third, k13))
        w = xadd(xmul(k13, i_prime), -xmul(k_prime, i13))
        got = w.to_float_checked()
        assert abs(got - 1.0 / y) <= 1e-12 / y


def test_wronskian_oscillatory_pair():
    for y in (0.5, 5.0, 50.0):
        j13 = val(J, ORDER_THIRD, y)
        y13 = val(Y, ORDER_THIRD, y)
        w = j13 * bessely_deriv_third(y) - besselj_deriv_third(y) * y13
        want = 2.0 / (math.pi * y)
        assert abs(w - want) <= 1e-12 * max(1.0, want)


def test_small_argument_leading_term():
    y = 1e-6
    got = val(J, ORDER_THIRD, y)
    want = (y / 2.0) ** (1.0 / 3.0) / math.gamma(4.0 / 3.0)
    assert abs(got - want) <= 1e-6 * want


def mp_besselj_series(nu, y):
    # plain power series in 50-digit arithmetic, independent of scipy
    yh = mp.mpf(y) / 2
    term = yh ** nu / mp.gamma(nu + 1)
    total = term
    for m in range(1, 200):
        term *= -(yh ** 2) / (m * (nu + m))
        total += term
        if abs(term) < abs(total) * mp.mpf(10) ** -45:
            break
    return total


def test_recurrence_against_independent_series():
    rng = np.random.default_rng(314)
    nu = mp.mpf(1) / 3
    for _ in range(20):
        y = float(rng.uniform(0.05, 50.0))
        j13 = val(J, ORDER_THIRD, y)
        j23 = val(J, ORDER_TWO_THIRDS, y)
        y23 = val(Y, ORDER_TWO_THIRDS, y)
        j_m23 = -0.5 * j23 - 0.5 * math.sqrt(3.0) * y23
        # J_{4/3} = (2 nu / y) J_{1/3} - J_{-2/3}
        got = (2.0 / (3.0 * y)) * j13 - j_m23
        want = float(mp_besselj_series(nu + 1, y))
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_matches_mpmath_across_range():
    pts = np.logspace(-6, 4, 41)
    for y in pts:
        y = float(y)
        pairs = [
            (val(J, ORDER_THIRD, y), mp.besselj(mp.mpf(1) / 3, y)),
            (val(Y, ORDER_THIRD, y), mp.bessely(mp.mpf(1) / 3, y)),
            (val(J, ORDER_TWO_THIRDS, y), mp.besselj(mp.mpf(2) / 3, y)),
            (val(Y, ORDER_TWO_THIRDS, y), mp.bessely(mp.mpf(2) / 3, y)),
        ]
        scale = max(abs(float(w)) for _, w in pairs) + 1e-300
        for got, want in pairs:
            assert abs(got - float(want)) <= 5e-12 * scale
        if y <= 500.0:
            for kind, fn in ((I, mp.besseli), (K, mp.besselk)):
                got = val(kind, ORDER_THIRD, y, scaled=True)
                want = float(fn(mp.mpf(1) / 3, y))
                assert abs(got - want) <= 5e-12 * abs(want)


def test_scaled_unscaled_consistency():
    for y in np.logspace(-3, math.log10(500.0), 25):
        y = float(y)
        for kind in (I, K):
            for order in (ORDER_THIRD, ORDER_TWO_THIRDS):
                a = val(kind, order, y, scaled=True)
                b = val(kind, order, y, scaled=False)
                assert abs(a - b) <= 1e-13 * abs(b)


def test_scaled_survives_huge_argument():
    x = cyl_bessel(I, ORDER_THIRD, 1e6, scaled=True)
    # e**1e6 ~ 10**434294; mantissa from asymptotics ~ 1/sqrt(2 pi y)
    assert x.e > 400_000
    assert abs(x.log10_abs() - (1e6 * math.log10(math.e) + math.log10(1.0 / math.sqrt(2 * math.pi * 1e6)))) < 1e-6
    k = cyl_bessel(K, ORDER_THIRD, 1e6, scaled=True)
    assert k.e < -400_000


def test_monotonicity_modified():
    ys = np.logspace(-3, 3, 60)
    ivals = [cyl_bessel(I, ORDER_THIRD, float(y), scaled=True) for y in ys]
    kvals = [cyl_bessel(K, ORDER_THIRD, float(y), scaled=True) for y in ys]
    for a, b in zip(ivals, ivals[1:]):
        assert a < b
    for a, b in zip(kvals, kvals[1:]):
        assert a > b


def test_domain_errors():
    with pytest.raises(ValueError):
        cyl_bessel(J, ORDER_THIRD, 0.0)
    with pytest.raises(ValueError):
        cyl_bessel(K, ORDER_THIRD, -1.0)
    with pytest.raises(ValueError):
        cyl_bessel(J, 0.5, 1.0)
    with pytest.raises(ValueError):
        cyl_bessel(I, ORDER_THIRD, 1e12, scaled=True)


def test_log_gamma_special_values():
    assert abs(math.e ** log_gamma_complex(1.0 + 0j) - 1.0) < 1e-14
    got = complex(np.exp(log_gamma_complex(0.5 + 0j)))
    assert abs(got - math.sqrt(math.pi)) < 1e-14
    for y in (0.1, 1.0, 10.0):
        lg = log_gamma_complex(complex(1.0, y))
        mod2 = abs(np.exp(lg)) ** 2
        want = math.pi * y / math.sinh(math.pi * y)
        assert abs(mod2 - want) <= 1e-12 * want


def test_log_gamma_large_imaginary():
    for z in (complex(0.5, 1e4), complex(0.5, -1e6), complex(2.0, 3e5)):
        got = log_gamma_complex(z)
        want = mp.loggamma(mp.mpc(z.real, z.imag))
        assert abs(got.real - float(want.real)) <= 1e-10 * abs(float(want.real))
        assert abs(got.imag - float(want.imag)) <= 1e-10 * abs(float(want.imag))


def test_log_gamma_poles_raise():
    for z in (0.0 + 0j, -1.0 + 0j, -7.0 + 0j):
        with pytest.raises(ValueError):
            log_gamma_complex(z)
