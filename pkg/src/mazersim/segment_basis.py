"""Fundamental-solution pairs for one linear-potential segment.

On a segment where the coefficient of the wave equation varies linearly,
``phi'' + (a + b*x) phi = 0``, the solution space is spanned by a pair of
real functions that depends only on the sign of ``z = a + b*x`` and on
whether the segment actually slopes.  Five regimes cover every case:

* flat, z == 0:   {1, x - x_ref}
* flat, z > 0:    {cos k(x - x_ref), sin k(x - x_ref)},  k = sqrt(z)
* flat, z < 0:    {exp(-rho (x - x_ref)), exp(+rho (x - x_ref))},  rho = sqrt(-z)
* sloped, z > 0:  {sqrt(z) J_{1/3}(w), sqrt(z) Y_{1/3}(w)}
* sloped, z < 0:  {sqrt(-z) I_{1/3}(w), sqrt(-z) K_{1/3}(w)}

with w = (2 / (3|b|)) |z|^{3/2}.  Values and x-derivatives are returned as
extended-range reals so the growing exponential branches survive arbitrarily
wide classically forbidden stretches.

Near a turning point (w below a fixed switch) the cylinder functions are
replaced by short power series in z that remain exact at z = 0; the two
representations agree to ~1e-13 at the switch, so joins never see a jump.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .extrange import XReal, exp_as_xreal, xadd, xmul
from .specfun import (
    ORDER_THIRD,
    ORDER_TWO_THIRDS,
    BesselKind,
    cyl_bessel,
)

__all__ = [
    "Regime",
    "Segment",
    "BasisEval",
    "SegmentRegimeError",
    "classify_regime",
    "make_segment",
    "basis_eval",
    "analytic_wronskian",
    "W_SERIES_SWITCH",
    "W_FLAT_COLLAPSE",
]

# Below this Bessel argument the power-series representation is used.
W_SERIES_SWITCH = 1.0e-2

# Above this Bessel argument at either endpoint a sloped segment must be
# demoted to a flat one by the grid builder: the cylinder routines lose the
# oscillation phase (J, Y) or overflow their scaled forms (I, K) long before
# the linear tilt of the potential matters physically.
W_FLAT_COLLAPSE = 1.0e8

_SQRT3 = math.sqrt(3.0)

# Relative slack for the sign check in basis_eval: a turning endpoint may
# land a few ulps on the wrong side of z = 0 and is then clamped to zero.
_SIGN_SLACK = 1.0e-9


class SegmentRegimeError(ValueError):
    """Segment regime tag contradicts the local value of a + b*x."""


class Regime(enum.Enum):
    FLAT_FREE = "flat_free"
    FLAT_ALLOWED = "flat_allowed"
    FLAT_FORBIDDEN = "flat_forbidden"
    SLOPE_ALLOWED = "slope_allowed"
    SLOPE_FORBIDDEN = "slope_forbidden"


_FLAT_REGIMES = (Regime.FLAT_FREE, Regime.FLAT_ALLOWED, Regime.FLAT_FORBIDDEN)


@dataclass(frozen=True)
class Segment:
    """One piece of the piecewise-linear coefficient z(x) = a + b*x.

    ``x_ref`` anchors the basis functions; keeping it inside the segment
    keeps every evaluation numerically local even when x itself is ~1e5.
    ``z_ref`` is z at the anchor, stored separately because recomputing it
    as a + b*x_ref would shred the tiny z values near turning points.
    """

    x_lo: float
    x_hi: float
    a: float
    b: float
    regime: Regime
    x_ref: float = 0.0
    z_ref: float | None = None
    z_flat: float = field(init=False)
    z_scale: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.x_lo < self.x_hi:
            raise ValueError(f"empty segment [{self.x_lo}, {self.x_hi}]")
        if self.z_ref is None:
            object.__setattr__(self, "z_ref", self.a + self.b * self.x_ref)
        if self.regime in _FLAT_REGIMES:
            zf = self._flat_coefficient()
        else:
            if self.b == 0.0:
                raise ValueError("sloped regime tag on a segment with b = 0")
            zf = math.nan
        object.__setattr__(self, "z_flat", zf)
        scale = max(abs(self.z(self.x_lo)) if math.isfinite(self.x_lo) else 0.0,
                    abs(self.z(self.x_hi)) if math.isfinite(self.x_hi) else 0.0,
                    abs(self.z_ref))
        object.__setattr__(self, "z_scale", scale)
        self._check_tag()

    def _flat_coefficient(self) -> float:
        # A genuinely flat segment uses z at the anchor.  A demoted sloped
        # segment (b != 0 but tagged flat) uses the midpoint value, the
        # best single constant for the stretch.
        if self.b == 0.0:
            return self.z_ref
        if math.isfinite(self.x_lo) and math.isfinite(self.x_hi):
            return self.z(0.5 * (self.x_lo + self.x_hi))
        return self.z_ref

    def _check_tag(self) -> None:
        r, zf = self.regime, self.z_flat
        if r is Regime.FLAT_FREE and zf != 0.0:
            raise SegmentRegimeError(f"FLAT_FREE with z = {zf}")
        if r is Regime.FLAT_ALLOWED and not zf > 0.0:
            raise SegmentRegimeError(f"FLAT_ALLOWED with z = {zf}")
        if r is Regime.FLAT_FORBIDDEN and not zf < 0.0:
            raise SegmentRegimeError(f"FLAT_FORBIDDEN with z = {zf}")

    def z(self, x: float) -> float:
        """Coefficient a + b*x, evaluated relative to the anchor."""
        return self.z_ref + self.b * (x - self.x_ref)

    def w(self, x: float) -> float:
        """Cylinder-function argument (2 / 3|b|) |z|^{3/2}; sloped only."""
        z = self.z(x)
        return 2.0 * abs(z) * math.sqrt(abs(z)) / (3.0 * abs(self.b))

    def contains(self, x: float) -> bool:
        return self.x_lo <= x <= self.x_hi


@dataclass(frozen=True)
class BasisEval:
    """Values and x-derivatives of the two fundamental solutions at one x."""

    f_plus: XReal
    f_minus: XReal
    g_plus: XReal
    g_minus: XReal


def classify_regime(z_lo: float, z_hi: float, b: float) -> Regime:
    """Regime for a segment whose coefficient runs from z_lo to z_hi.

    The endpoints may sit exactly on zero (turning points); a genuine sign
    change in the interior is a grid-construction bug and raises.
    """
    if b == 0.0:
        if z_lo != z_hi:
            raise ValueError("b = 0 but z_lo != z_hi")
        if z_lo > 0.0:
            return Regime.FLAT_ALLOWED
        if z_lo < 0.0:
            return Regime.FLAT_FORBIDDEN
        return Regime.FLAT_FREE
    if z_lo * z_hi < 0.0:
        raise ValueError(
            f"coefficient changes sign inside a segment (z: {z_lo} .. {z_hi}); "
            "a turning point must be a segment endpoint"
        )
    z_mid = 0.5 * (z_lo + z_hi)
    if z_mid > 0.0:
        return Regime.SLOPE_ALLOWED
    if z_mid < 0.0:
        return Regime.SLOPE_FORBIDDEN
    # z_lo == z_hi == 0 with b != 0 cannot happen for a straight line.
    raise ValueError("degenerate segment: z vanishes identically but b != 0")


def make_segment(
    x_lo: float,
    x_hi: float,
    z_lo: float,
    z_hi: float,
    *,
    regime: Regime | None = None,
) -> Segment:
    """Build a segment from endpoint coefficients, anchored at x_lo.

    The slope is taken from the endpoint values.  For infinite outer
    segments pass z_lo == z_hi; the anchor then moves to the finite end.
    """
    lo_fin = math.isfinite(x_lo)
    hi_fin = math.isfinite(x_hi)
    if lo_fin and hi_fin:
        b = (z_hi - z_lo) / (x_hi - x_lo)
        x_ref, z_ref = x_lo, z_lo
    else:
        if z_lo != z_hi:
            raise ValueError("infinite segment must have constant z")
        b = 0.0
        x_ref = x_lo if lo_fin else (x_hi if hi_fin else 0.0)
        z_ref = z_lo
    if regime is None:
        regime = classify_regime(z_lo, z_hi, b)
    a = z_ref - b * x_ref
    return Segment(x_lo=x_lo, x_hi=x_hi, a=a, b=b, regime=regime,
                   x_ref=x_ref, z_ref=z_ref)


def analytic_wronskian(seg: Segment) -> float:
    """Exact Wronskian f+ g- - f- g+ of the segment's basis pair.

    Constant across the segment; transfer matrices divide by it instead of
    differencing two nearly equal extended-range products.
    """
    r = seg.regime
    if r is Regime.FLAT_FREE:
        return 1.0
    if r is Regime.FLAT_ALLOWED:
        return math.sqrt(seg.z_flat)
    if r is Regime.FLAT_FORBIDDEN:
        return 2.0 * math.sqrt(-seg.z_flat)
    if r is Regime.SLOPE_ALLOWED:
        return 3.0 * seg.b / math.pi
    return 1.5 * seg.b


# --- power series around a turning point --------------------------------
#
# With u = (w/2)^2 = z^3 / (9 b^2) the two building blocks on the allowed
# side (z >= 0) are
#
#   P(z)  = (3|b|)^{-1/3} z  * sum_m (-u)^m / (m! Gamma(4/3 + m))
#   Q(z)  = (3|b|)^{+1/3}    * sum_m (-u)^m / (m! Gamma(2/3 + m))
#
# in terms of which f+ = P, f- = (2/sqrt3)(P/2 - Q).  On the forbidden side
# the same sums without the alternating sign give Pt, Qt of zeta = -z, and
# f+ = Pt, f- = (pi/sqrt3)(Qt - Pt).  Derivatives follow term by term.
# Using u instead of z^3 avoids underflow; u <= (W_SERIES_SWITCH/2)^2 so a
# handful of terms reaches full precision.

_SERIES_TERMS = 10
_INV_G43 = [0.0] * _SERIES_TERMS   # 1 / (m! Gamma(4/3 + m))
_INV_G23 = [0.0] * _SERIES_TERMS   # 1 / (m! Gamma(2/3 + m))
_INV_G43[0] = 1.0 / math.gamma(4.0 / 3.0)
_INV_G23[0] = 1.0 / math.gamma(2.0 / 3.0)
for _m in range(1, _SERIES_TERMS):
    _INV_G43[_m] = _INV_G43[_m - 1] / (_m * (_m + 1.0 / 3.0))
    _INV_G23[_m] = _INV_G23[_m - 1] / (_m * (_m - 1.0 / 3.0))


def _series_sums(u: float, alternating: bool) -> tuple[float, float, float, float]:
    """Partial sums shared by the two turning-point series.

    Returns (s_p, s_q, s_dp, s_dq1) where, with sign s = -1 when
    ``alternating`` else +1,

      s_p   = sum_m s^m u^m / (m! G(4/3+m))
      s_q   = sum_m s^m u^m / (m! G(2/3+m))
      s_dp  = sum_m s^m (3m+1) u^m / (m! G(4/3+m))
      s_dq1 = sum_{m>=1} s^m 3m u^{m-1} / (m! G(2/3+m))

    s_dq1 carries one power of u less than the Q' series needs; the caller
    multiplies by t^2 / (9 b^2) which restores it without ever forming the
    underflow-prone t^3.
    """
    s = -1.0 if alternating else 1.0
    s_p = s_q = s_dp = s_dq1 = 0.0
    upow = 1.0       # u^m
    upow_m1 = 0.0    # u^(m-1), defined for m >= 1
    sign = 1.0
    for m in range(_SERIES_TERMS):
        s_p += sign * _INV_G43[m] * upow
        s_q += sign * _INV_G23[m] * upow
        s_dp += sign * (3.0 * m + 1.0) * _INV_G43[m] * upow
        if m >= 1:
            s_dq1 += sign * 3.0 * m * _INV_G23[m] * upow_m1
        upow_m1 = upow if m == 0 else upow_m1 * u
        upow *= u
        sign *= s
        if upow == 0.0 and m >= 1:
            break
    return s_p, s_q, s_dp, s_dq1


def _basis_series(seg: Segment, z: float) -> BasisEval:
    b = seg.b
    babs = abs(b)
    cb_m = (3.0 * babs) ** (-1.0 / 3.0)
    cb_p = (3.0 * babs) ** (1.0 / 3.0)
    allowed = seg.regime is Regime.SLOPE_ALLOWED
    t = max(z, 0.0) if allowed else max(-z, 0.0)   # z or zeta, clamped
    w = 2.0 * t * math.sqrt(t) / (3.0 * babs)
    u = 0.25 * w * w
    s_p, s_q, s_dp, s_dq1 = _series_sums(u, alternating=allowed)
    p = cb_m * t * s_p
    q = cb_p * s_q
    dp = cb_m * s_dp
    dq = cb_p * t * t / (9.0 * b * b) * s_dq1
    if allowed:
        f_plus = p
        f_minus = (2.0 / _SQRT3) * (0.5 * p - q)
        g_plus = b * dp
        g_minus = (2.0 / _SQRT3) * b * (0.5 * dp - dq)
    else:
        f_plus = p
        f_minus = (math.pi / _SQRT3) * (q - p)
        g_plus = -b * dp
        g_minus = -(math.pi / _SQRT3) * b * (dq - dp)
    return BasisEval(
        f_plus=XReal.from_float(f_plus),
        f_minus=XReal.from_float(f_minus),
        g_plus=XReal.from_float(g_plus),
        g_minus=XReal.from_float(g_minus),
    )


def _basis_slope_allowed(seg: Segment, z: float, w: float) -> BasisEval:
    sb = 1.0 if seg.b > 0.0 else -1.0
    j13 = cyl_bessel(BesselKind.J, ORDER_THIRD, w)
    y13 = cyl_bessel(BesselKind.Y, ORDER_THIRD, w)
    j23 = cyl_bessel(BesselKind.J, ORDER_TWO_THIRDS, w)
    y23 = cyl_bessel(BesselKind.Y, ORDER_TWO_THIRDS, w)
    # order -2/3 via the reflection identities for order 2/3
    jm23 = xadd(j23.scaled_by(-0.5), y23.scaled_by(-_SQRT3 / 2.0))
    ym23 = xadd(j23.scaled_by(_SQRT3 / 2.0), y23.scaled_by(-0.5))
    sqz = XReal.from_float(math.sqrt(z))
    zs = XReal.from_float(sb * z)
    return BasisEval(
        f_plus=xmul(sqz, j13),
        f_minus=xmul(sqz, y13),
        g_plus=xmul(zs, jm23),
        g_minus=xmul(zs, ym23),
    )


def _basis_slope_forbidden(seg: Segment, z: float, w: float) -> BasisEval:
    sb = 1.0 if seg.b > 0.0 else -1.0
    zeta = -z
    i13 = cyl_bessel(BesselKind.I, ORDER_THIRD, w, scaled=True)
    k13 = cyl_bessel(BesselKind.K, ORDER_THIRD, w, scaled=True)
    i23 = cyl_bessel(BesselKind.I, ORDER_TWO_THIRDS, w, scaled=True)
    k23 = cyl_bessel(BesselKind.K, ORDER_TWO_THIRDS, w, scaled=True)
    im23 = xadd(i23, k23.scaled_by(_SQRT3 / math.pi))
    sqzeta = XReal.from_float(math.sqrt(zeta))
    zetas = XReal.from_float(sb * zeta)
    return BasisEval(
        f_plus=xmul(sqzeta, i13),
        f_minus=xmul(sqzeta, k13),
        g_plus=-xmul(zetas, im23),
        g_minus=xmul(zetas, k23),
    )


def basis_eval(seg: Segment, x: float) -> BasisEval:
    """Evaluate (f+, f-, f+', f-') of the segment's basis at position x.

    x may be a hair outside [x_lo, x_hi] (endpoint roundoff) but the local
    coefficient must match the regime's sign up to turning-point slack.
    """
    if not math.isfinite(x):
        raise ValueError(f"basis evaluation at non-finite x = {x}")
    r = seg.regime
    dx = x - seg.x_ref

    if r is Regime.FLAT_FREE:
        return BasisEval(
            f_plus=XReal.from_float(1.0),
            f_minus=XReal.from_float(dx),
            g_plus=XReal.zero(),
            g_minus=XReal.from_float(1.0),
        )
    if r is Regime.FLAT_ALLOWED:
        k = math.sqrt(seg.z_flat)
        return BasisEval(
            f_plus=XReal.from_float(math.cos(k * dx)),
            f_minus=XReal.from_float(math.sin(k * dx)),
            g_plus=XReal.from_float(-k * math.sin(k * dx)),
            g_minus=XReal.from_float(k * math.cos(k * dx)),
        )
    if r is Regime.FLAT_FORBIDDEN:
        rho = math.sqrt(-seg.z_flat)
        e_dn = exp_as_xreal(-rho * dx)
        e_up = exp_as_xreal(rho * dx)
        return BasisEval(
            f_plus=e_dn,
            f_minus=e_up,
            g_plus=xmul(XReal.from_float(-rho), e_dn),
            g_minus=xmul(XReal.from_float(rho), e_up),
        )

    z = seg.z(x)
    slack = _SIGN_SLACK * max(seg.z_scale, 1.0e-300)
    if r is Regime.SLOPE_ALLOWED and z < -slack:
        raise SegmentRegimeError(
            f"z = {z} < 0 at x = {x} in an allowed sloped segment")
    if r is Regime.SLOPE_FORBIDDEN and z > slack:
        raise SegmentRegimeError(
            f"z = {z} > 0 at x = {x} in a forbidden sloped segment")
    w = seg.w(x)
    if w > W_FLAT_COLLAPSE:
        raise ValueError(
            f"cylinder argument w = {w:.3g} beyond safe range; the grid "
            "should have demoted this segment to a flat one")
    if w < W_SERIES_SWITCH:
        return _basis_series(seg, z)
    if r is Regime.SLOPE_ALLOWED:
        return _basis_slope_allowed(seg, z, w)
    return _basis_slope_forbidden(seg, z, w)
