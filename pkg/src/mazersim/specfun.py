"""Bessel and gamma kernels for the segment basis functions.

Only four cylinder families at the two orders 1/3 and 2/3 are ever needed.
Values come back as :class:`~mazersim.extrange.XReal` so that the modified
functions stay usable deep inside classically forbidden regions, where
I and K carry factors like e**40000: scipy's exponentially scaled forms
supply the mantissa and the extended exponent absorbs e**(+-y).
"""

from __future__ import annotations

import enum
import math

from scipy import special as _sp

from .extrange import XReal, exp_as_xreal, xmul

__all__ = ["BesselKind", "ORDER_THIRD", "ORDER_TWO_THIRDS", "cyl_bessel", "log_gamma_complex"]

ORDER_THIRD = 1.0 / 3.0
ORDER_TWO_THIRDS = 2.0 / 3.0
_ORDERS = (ORDER_THIRD, ORDER_TWO_THIRDS)

# scipy's scaled I/K go NaN somewhere past 1e9; refuse before that
ARG_LIMIT = 2.0e9


class BesselKind(enum.Enum):
    J = "J"
    Y = "Y"
    I = "I"
    K = "K"


def cyl_bessel(kind: BesselKind, order: float, y: float, scaled: bool = False) -> XReal:
    """Evaluate one cylinder function at positive real argument.

    Parameters
    ----------
    kind : BesselKind
        J, Y (oscillatory) or I, K (modified).
    order : float
        1/3 or 2/3 only.
    y : float
        Argument, strictly positive.
    scaled : bool
        For I and K, build the result from the exponentially scaled
        mantissa (e**-y I, e**+y K) and carry e**(+-y) in the extended
        exponent; this is the only route that survives y beyond ~700.
        Ignored for J and Y.

    Returns
    -------
    XReal
        The true (unscaled) function value in every case.
    """
    if order not in _ORDERS:
        raise ValueError(f"unsupported order {order!r}; need 1/3 or 2/3")
    if not (y > 0.0) or not math.isfinite(y):
        raise ValueError(f"argument must be positive and finite, got {y!r}")
    if kind in (BesselKind.I, BesselKind.K) and y > ARG_LIMIT:
        raise ValueError(f"argument {y:g} beyond scaled-Bessel reliability limit")

    if kind is BesselKind.J:
        return XReal.from_float(float(_sp.jv(order, y)))
    if kind is BesselKind.Y:
        return XReal.from_float(float(_sp.yv(order, y)))
    if kind is BesselKind.I:
        if scaled:
            m = float(_sp.ive(order, y))
            if math.isnan(m):
                raise ValueError(f"scaled I({order}, {y:g}) not representable")
            return xmul(XReal.from_float(m), exp_as_xreal(y))
        return XReal.from_float(float(_sp.iv(order, y)))
    if scaled:
        m = float(_sp.kve(order, y))
        if math.isnan(m):
            raise ValueError(f"scaled K({order}, {y:g}) not representable")
        return xmul(XReal.from_float(m), exp_as_xreal(-y))
    return XReal.from_float(float(_sp.kv(order, y)))


def log_gamma_complex(z: complex) -> complex:
    """Principal-branch log Gamma for complex argument.

    Raises on the poles (nonpositive integers on the real axis); large
    imaginary parts up to ~1e6 stay accurate through scipy's implementation.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise ValueError(f"log gamma pole at {z!r}")
    out = complex(_sp.loggamma(z))
    if math.isnan(out.real) or math.isnan(out.imag):
        raise ValueError(f"log gamma failed at {z!r}")
    return out
