import math
from decimal import Decimal, getcontext

import numpy as np
import pytest

from mazersim.extrange import (
    EXP_LIMIT,
    ExponentRangeError,
    RangeFlag,
    XComplex,
    XReal,
    exp_as_xreal,
    format_xreal,
    to_float_checked,
    xadd,
    xmul,
)

getcontext().prec = 50
getcontext().Emax = 999_999_999_999_999_999
getcontext().Emin = -999_999_999_999_999_999


def as_decimal(x: XReal) -> Decimal:
    return Decimal(x.m) * Decimal(10) ** x.e


def test_add_same_exponent():
    one = XReal.from_float(1.0)
    s = xadd(one, one)
    assert s.m == 2.0 and s.e == 0


def test_mul_adds_exponents():
    a = XReal(2.0, 100)
    b = XReal(3.0, 200)
    p = xmul(a, b)
    assert p.m == 6.0 and p.e == 300


def test_add_against_decimal_oracle():
    # mantissas differing by one exponent step at a 1e10 exponent
    a = XReal(5.0, 10_000_000_000)
    b = XReal(5.0, 9_999_999_999)
    s = xadd(a, b)
    want = as_decimal(a) + as_decimal(b)
    got = as_decimal(s)
    assert abs(got - want) / abs(want) < Decimal("1e-15")
    assert s.m == 5.5 and s.e == 10_000_000_000


def test_add_far_apart_exponents_returns_larger():
    a = XReal(3.0, 50)
    b = XReal(9.0, 20)
    s = xadd(a, b)
    assert s.m == 3.0 and s.e == 50
    s2 = xadd(b, a)
    assert s2.m == 3.0 and s2.e == 50


def test_add_cancellation_keeps_normalization():
    a = XReal(1.0000000000001, 7)
    b = XReal(-1.0, 7)
    s = xadd(a, b)
    assert 1.0 <= abs(s.m) < 10.0
    want = as_decimal(a) + as_decimal(b)
    got = as_decimal(s)
    assert abs(got - want) <= abs(want) * Decimal("1e-2") + Decimal("1e-10")


def test_commutativity_exact():
    rng = np.random.default_rng(1234)
    for _ in range(10_000):
        m1, m2 = rng.uniform(1.0, 10.0, 2)
        e1, e2 = rng.integers(-1_000_000, 1_000_000, 2)
        a, b = XReal(m1, int(e1)), XReal(m2, int(e2))
        ab, ba = xadd(a, b), xadd(b, a)
        assert ab.m == ba.m and ab.e == ba.e
        pq, qp = xmul(a, b), xmul(b, a)
        assert pq.m == qp.m and pq.e == qp.e


def test_associativity_same_sign_within_2ulp():
    # positive operands only: cancellation voids any relative bound
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        ms = rng.uniform(1.0, 10.0, 3)
        es = rng.integers(-1_000_000, 1_000_000, 3)
        x, y, z = (XReal(m, int(e)) for m, e in zip(ms, es))
        left = xadd(xadd(x, y), z)
        right = xadd(x, xadd(y, z))
        assert left.e == right.e
        assert abs(left.m - right.m) <= 2e-15 * abs(left.m)
        lm = xmul(xmul(x, y), z)
        rm = xmul(x, xmul(y, z))
        assert lm.e == rm.e
        assert abs(lm.m - rm.m) <= 2e-15 * abs(lm.m)


def test_reciprocal_roundtrip_extreme_exponents():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        m = rng.uniform(1.0, 10.0)
        e = int(rng.integers(-900_000_000_000_000_000, 900_000_000_000_000_000))
        x = XReal(float(m), e)
        p = xmul(x, x.reciprocal())
        # product may normalize to 9.99...e-1
        assert p.e in (0, -1)
        assert abs(p.m * 10.0 ** p.e - 1.0) <= 5e-16


def test_to_float_checked_flags():
    assert to_float_checked(XReal(1.0, 400)) is RangeFlag.OVERFLOW
    assert to_float_checked(XReal(1.0, -400)) is RangeFlag.UNDERFLOW
    assert to_float_checked(XReal(9.0, 308)) is RangeFlag.OVERFLOW
    assert to_float_checked(XReal.zero()) == 0.0


def test_roundtrip_within_1e15():
    rng = np.random.default_rng(42)
    for _ in range(5000):
        v = float(rng.uniform(1.0, 10.0) * 10.0 ** rng.integers(-300, 300))
        back = to_float_checked(XReal.from_float(v))
        assert isinstance(back, float)
        assert abs(back - v) <= 1e-15 * abs(v)


def test_total_order_matches_floats_in_range():
    rng = np.random.default_rng(5)
    vals = rng.uniform(-1e5, 1e5, 200)
    xs = [XReal.from_float(float(v)) for v in vals]
    for i in range(len(vals)):
        for j in range(len(vals)):
            assert (xs[i] < xs[j]) == (vals[i] < vals[j])


def test_total_order_lexicographic_out_of_range():
    big = XReal(1.0, 10 ** 12)
    bigger = XReal(9.0, 10 ** 12)
    huge = XReal(1.0, 10 ** 12 + 1)
    assert big < bigger < huge
    # negatives reverse on exponent
    assert XReal(-1.0, 10 ** 12 + 1) < XReal(-9.0, 10 ** 12)
    assert XReal(-1.0, -5) > XReal(-1.0, 5)
    assert XReal(-1.0, 100) < XReal.zero() < XReal(1.0, -100)


def test_exponent_limit_is_hard_error():
    with pytest.raises(ExponentRangeError):
        xmul(XReal(2.0, EXP_LIMIT), XReal(2.0, EXP_LIMIT))
    with pytest.raises(ExponentRangeError):
        XReal.from_parts(1.5, EXP_LIMIT + 1)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        XReal.from_float(1.0) / XReal.zero()


def test_exp_as_xreal_matches_math_exp():
    for y in [-50.0, -1.0, 0.0, 1e-3, 1.0, 42.7, 700.0]:
        x = exp_as_xreal(y)
        v = to_float_checked(x)
        assert isinstance(v, float)
        assert abs(v - math.exp(y)) <= 4e-15 * math.exp(y)


def test_exp_as_xreal_large_argument_against_decimal():
    # ln(10) to 50 digits; exponent arithmetic done in Decimal
    ln10 = Decimal("2.3025850929940456840179914546843642076011014886288")
    for y in [1e4, 12345.678, 3.2e7, 4.1e9, 1.7e12]:
        x = exp_as_xreal(y)
        t = Decimal(y) / ln10
        n = int(t)
        frac = t - n
        want_m = (frac * ln10).exp()  # in [1, 10) up to rounding
        got = Decimal(x.m) * Decimal(10) ** (x.e - n)
        assert abs(got - want_m) / want_m < Decimal("5e-13")


def test_exp_as_xreal_reciprocal_pair():
    for y in [3.0, 400.0, 1e6, 8.3e9]:
        p = xmul(exp_as_xreal(y), exp_as_xreal(-y))
        assert p.e in (0, -1)
        assert abs(p.m * 10.0 ** p.e - 1.0) <= 1e-12


def test_format_rendering():
    assert format_xreal(XReal(5.0, 10 ** 10)) == "+5.00000000000000E+10000000000"
    assert format_xreal(XReal(-1.25, -3)) == "-1.25000000000000E-3"
    assert format_xreal(XReal.zero()) == "+0.00000000000000E+0"
    # mantissa that rounds up to the next decade
    s = format_xreal(XReal(9.999999999999999, 2))
    assert s == "+1.00000000000000E+3"


def test_sqrt():
    rng = np.random.default_rng(11)
    for _ in range(2000):
        m = float(rng.uniform(1.0, 10.0))
        e = int(rng.integers(-10 ** 9, 10 ** 9))
        x = XReal(m, e)
        r = x.sqrt()
        sq = xmul(r, r)
        assert sq.e == x.e
        assert abs(sq.m - x.m) <= 4e-15 * x.m


def test_xcomplex_matches_builtin_complex():
    rng = np.random.default_rng(21)
    for _ in range(2000):
        zw = rng.uniform(-5, 5, 4)
        z = complex(zw[0], zw[1])
        w = complex(zw[2], zw[3])
        if abs(w) < 1e-3:
            continue
        Z, W = XComplex.from_complex(z), XComplex.from_complex(w)
        for got, want in [
            ((Z * W).to_complex_checked(), z * w),
            ((Z + W).to_complex_checked(), z + w),
            ((Z - W).to_complex_checked(), z - w),
            ((Z / W).to_complex_checked(), z / w),
        ]:
            assert abs(got - want) <= 1e-13 * max(1.0, abs(want))
        a2 = Z.abs2().to_float_checked()
        assert abs(a2 - abs(z) ** 2) <= 1e-13 * max(1.0, abs(z) ** 2)


def test_xcomplex_huge_exponent_ratio():
    # ratio of two giants lands back in double range
    a = XComplex(XReal(3.0, 40_000), XReal(1.0, 40_000))
    b = XComplex(XReal(1.5, 40_000), XReal(-2.0, 39_999))
    q = (a / b).to_complex_checked()
    want = complex(3.0, 1.0) / complex(1.5, -0.2)
    assert abs(q - want) <= 1e-13 * abs(want)
