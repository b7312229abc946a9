"""Coefficient propagation across segment joins and amplitude extraction.

Matching the wavefunction and its derivative at a join gives a 2x2 map
between the coefficient pairs of adjacent segments.  Chaining those maps
from the outgoing side back to the incoming side turns the two-point
boundary problem into a single backward sweep; the incoming-side pair then
yields the complex transmission and reflection amplitudes.

Forbidden regions make the pair grow like exp(rho*dx), far beyond float
range at large interaction lengths, so the pair lives in extended-range
complex numbers and is renormalized after every join with the shift
accumulated in a decimal-scale ledger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .extrange import RangeFlag, XComplex, XReal, to_float_checked, xadd, xmul
from .grid import Grid
from .segment_basis import Segment, analytic_wronskian, basis_eval

__all__ = [
    "CoeffPair",
    "ScatterResult",
    "SegmentCoeffs",
    "TransferError",
    "join_matrix",
    "step_backward",
    "step_forward",
    "solve_scattering",
    "wavefunction",
]


class TransferError(Exception):
    """Degenerate join or amplitude extraction."""


@dataclass(frozen=True)
class CoeffPair:
    """Coefficient pair of one segment plus the accumulated rescale shift.

    True coefficients are the stored values times 10**log10_scale; after
    every join the larger of |C|, |D| is normalized into [1, 10).
    """

    C: XComplex
    D: XComplex
    log10_scale: int

    def rescaled(self) -> "CoeffPair":
        mag2 = self.C.abs2()
        d2 = self.D.abs2()
        if d2 > mag2:
            mag2 = d2
        if mag2.is_zero():
            raise TransferError("coefficient pair collapsed to zero")
        shift = math.floor(0.5 * mag2.log10_abs())
        if shift == 0:
            return self
        return CoeffPair(
            self.C.scaled10(-shift),
            self.D.scaled10(-shift),
            self.log10_scale + shift,
        )


@dataclass(frozen=True)
class SegmentCoeffs:
    """Recorded pair for one segment, for wavefunction reconstruction."""

    index: int
    C: XComplex
    D: XComplex
    log10_scale: int


@dataclass(frozen=True)
class ScatterResult:
    """Amplitudes for unit-amplitude incidence from the left.

    When |t| underflows double precision the field ``t`` is exactly 0 and
    ``t_log10_mag`` still carries its magnitude; ``unitarity_defect`` is a
    diagnostic the caller should surface, not clamp.
    """

    t: complex
    r: complex
    unitarity_defect: float
    E: float
    k: float
    t_log10_mag: float
    log10_scale: int
    coefficients: tuple[SegmentCoeffs, ...] | None = None


def join_matrix(
    base: Segment, other: Segment, x_join: float,
) -> tuple[XReal, XReal, XReal, XReal]:
    """Matrix mapping ``other``-side coefficients to ``base``-side ones.

    Row-major (b11, b12, b21, b22) of M_base(x)^-1 * M_other(x), the
    division done through the analytic Wronskian of ``base``.
    """
    pb = basis_eval(base, x_join)
    nb = basis_eval(other, x_join)
    w = analytic_wronskian(base)
    if w == 0.0:
        raise TransferError("degenerate basis: zero Wronskian")
    winv = XReal.from_float(w).reciprocal()
    b11 = xadd(xmul(pb.g_minus, nb.f_plus), -xmul(pb.f_minus, nb.g_plus))
    b12 = xadd(xmul(pb.g_minus, nb.f_minus), -xmul(pb.f_minus, nb.g_minus))
    b21 = xadd(xmul(pb.f_plus, nb.g_plus), -xmul(pb.g_plus, nb.f_plus))
    b22 = xadd(xmul(pb.f_plus, nb.g_minus), -xmul(pb.g_plus, nb.f_minus))
    return (xmul(b11, winv), xmul(b12, winv),
            xmul(b21, winv), xmul(b22, winv))


def _apply(mat, coeffs: CoeffPair) -> CoeffPair:
    b11, b12, b21, b22 = mat
    c_new = coeffs.C.scale(b11) + coeffs.D.scale(b12)
    d_new = coeffs.C.scale(b21) + coeffs.D.scale(b22)
    return CoeffPair(c_new, d_new, coeffs.log10_scale).rescaled()


def step_backward(
    seg_prev: Segment, seg_next: Segment, x_join: float, coeffs: CoeffPair,
) -> CoeffPair:
    """Pair on seg_next -> pair on seg_prev, same value and slope at the join."""
    return _apply(join_matrix(seg_prev, seg_next, x_join), coeffs)


def step_forward(
    seg_prev: Segment, seg_next: Segment, x_join: float, coeffs: CoeffPair,
) -> CoeffPair:
    """Pair on seg_prev -> pair on seg_next; inverse of step_backward."""
    return _apply(join_matrix(seg_next, seg_prev, x_join), coeffs)


def _component(x: XReal) -> float:
    """Stored-mantissa component to float; underflow is a physical zero."""
    v = to_float_checked(x)
    if isinstance(v, RangeFlag):
        if v is RangeFlag.UNDERFLOW:
            return 0.0
        raise TransferError("coefficient overflow despite rescaling")
    return v


def _as_complex(xc: XComplex) -> complex:
    return complex(_component(xc.re), _component(xc.im))


def solve_scattering(
    grid: Grid,
    record_coefficients: bool = False,
    debug_stream: IO[str] | None = None,
) -> ScatterResult:
    """Backward sweep from the outgoing free region to the incoming one.

    Seeds (C, D) = (1, i) on the rightmost segment, i.e. a unit outgoing
    plane wave in its {cos kx, sin kx} basis, and unwinds every join.  The
    left-side pair then gives t and r; the accumulated decimal shift
    re-enters t because the seed fixed the transmitted amplitude, not the
    incident one.
    """
    segs = grid.segments
    coeffs = CoeffPair(
        XComplex.from_complex(1.0 + 0.0j),
        XComplex.from_complex(1.0j),
        0,
    )
    recorded: list[SegmentCoeffs] = []
    if record_coefficients:
        recorded.append(SegmentCoeffs(len(segs) - 1, coeffs.C, coeffs.D, 0))
    if debug_stream is not None:
        debug_stream.write("# x_join,regime,log10_C,log10_D,log10_scale\n")
    for j in range(len(segs) - 2, -1, -1):
        x_join = segs[j].x_hi
        coeffs = step_backward(segs[j], segs[j + 1], x_join, coeffs)
        if record_coefficients:
            recorded.append(
                SegmentCoeffs(j, coeffs.C, coeffs.D, coeffs.log10_scale))
        if debug_stream is not None:
            debug_stream.write(
                f"{x_join:.17g},{segs[j].regime.name},"
                f"{0.5 * coeffs.C.abs2().log10_abs():.6f},"
                f"{0.5 * coeffs.D.abs2().log10_abs():.6f},"
                f"{coeffs.log10_scale}\n")

    c0 = _as_complex(coeffs.C)
    d0 = _as_complex(coeffs.D)
    denom = c0 - 1j * d0
    if denom == 0.0:
        raise TransferError("C0 - i*D0 vanished: degenerate normalization")
    sigma = coeffs.log10_scale
    amp = 2.0 / denom
    t_log10_mag = math.log10(abs(amp)) - sigma
    if -300.0 < t_log10_mag < 300.0:
        t = amp * 10.0 ** (-sigma)
    elif t_log10_mag <= -300.0:
        t = 0.0 + 0.0j
    else:
        raise TransferError("transmission overflow: scale ledger negative")
    r = (c0 + 1j * d0) / denom
    defect = abs(abs(t) ** 2 + abs(r) ** 2 - 1.0)
    return ScatterResult(
        t=t,
        r=r,
        unitarity_defect=defect,
        E=grid.E,
        k=grid.k,
        t_log10_mag=t_log10_mag,
        log10_scale=sigma,
        coefficients=tuple(reversed(recorded)) if record_coefficients else None,
    )


def wavefunction(
    grid: Grid,
    result: ScatterResult,
    positions: Sequence[float],
) -> list[tuple[float, complex]]:
    """Reconstruct phi at the sample positions, unit incident amplitude.

    Needs a result from solve_scattering(record_coefficients=True).
    Positions are limited to the window padded by two cavity lengths; the
    asymptotic cos/sin basis loses phase accuracy far outside it.
    """
    if result.coefficients is None:
        raise ValueError("solve_scattering must record coefficients first")
    pad = 2.0 * grid.profile.length
    lo, hi = grid.window[0] - pad, grid.window[1] + pad
    by_index = {sc.index: sc for sc in result.coefficients}
    sigma0 = by_index[0].log10_scale
    c0 = _as_complex(by_index[0].C)
    d0 = _as_complex(by_index[0].D)
    denom = c0 - 1j * d0
    norm = 2.0 / denom
    pts = grid.points
    out: list[tuple[float, complex]] = []
    for x in positions:
        if not lo <= x <= hi:
            raise ValueError(f"sample {x} outside [{lo}, {hi}]")
        if x < pts[0]:
            idx = 0
        elif x >= pts[-1]:
            idx = len(grid.segments) - 1
        else:
            idx = int(np.searchsorted(pts, x, side="right"))
        sc = by_index[idx]
        be = basis_eval(grid.segments[idx], float(x))
        combo = sc.C.scale(be.f_plus) + sc.D.scale(be.f_minus)
        combo = combo.scaled10(sc.log10_scale - sigma0)
        out.append((float(x), _as_complex(combo) * norm))
    return out
