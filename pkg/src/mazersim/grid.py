"""Cavity mode profiles and the piecewise-linear segmentation of V(x).

Everything is dimensionless: hbar = m = 1 and lengths are measured in the
inverse coupling wavenumber, so the atom's energy is E = (k_over_kappa)^2/2,
the dressed potentials are V = +-alpha*u(x)/2, and the cavity extent is the
single number ``length`` (the interaction length).

The solver downstream treats the potential as linear between grid nodes.
Two refinements keep that approximation honest:

* every solution of alpha*V(x) = E becomes a grid node, so no segment mixes
  classically allowed and forbidden character;
* the sampled potential is rescaled by alpha so its trapezoid area equals
  the exact area of the mode, which removes the leading quadrature bias of
  the linear interpolation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .segment_basis import (
    Regime,
    Segment,
    W_FLAT_COLLAPSE,
    make_segment,
)

__all__ = [
    "ModeShape",
    "ModeProfile",
    "Grid",
    "DEFAULT_WINDOW_FACTOR",
    "TURNING_MERGE_TOL",
    "eval_mode",
    "eval_mode_array",
    "load_tabulated",
    "signed_area",
    "abs_area",
    "interp_abs_area",
    "find_turning_points",
    "build_grid",
]

DEFAULT_WINDOW_FACTOR = 16.0

# a turning point closer than this to an existing node replaces the node
TURNING_MERGE_TOL = 1.0e-10

_ALPHA_FIXED_POINT_TOL = 1.0e-14
_MAX_ALPHA_ITER = 8


class ModeShape(enum.Enum):
    MESA = "mesa"
    SECH2 = "sech2"
    SIN_FUNDAMENTAL = "sin"
    SIN_FIRST_EXCITED = "sin2"
    GAUSSIAN = "gauss"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class ModeProfile:
    """A normalized cavity mode shape u(x) with |u| <= 1.

    ``length`` is the interaction length.  The mesa and the two sinusoidal
    modes live on [0, length]; sech2 and the Gaussian are centered on x = 0
    with unbounded support that the grid truncates to a finite window.  For
    TABULATED profiles ``table`` holds (x, u) breakpoints and ``length`` is
    the table span.
    """

    shape: ModeShape
    length: float
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.shape is ModeShape.TABULATED:
            if self.table is None or len(self.table) < 2:
                raise ValueError("TABULATED profile needs at least two points")
            xs = [p[0] for p in self.table]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("tabulated abscissae must be strictly increasing")
            if any(abs(p[1]) > 1.0 for p in self.table):
                raise ValueError("mode values must satisfy |u| <= 1")
            object.__setattr__(self, "length", xs[-1] - xs[0])
        else:
            if self.table is not None:
                raise ValueError(f"{self.shape.name} does not take a table")
            if not self.length >= 0.0 or not math.isfinite(self.length):
                raise ValueError(f"invalid length {self.length}")

    @property
    def sigma(self) -> float:
        """Gaussian width, tied to the length so the area matches sech2."""
        if self.shape is not ModeShape.GAUSSIAN:
            raise ValueError("sigma is defined for the Gaussian mode only")
        return math.sqrt(2.0 / math.pi) * self.length

    def support(self) -> tuple[float, float]:
        """Interval outside which u is identically zero (or negligible)."""
        if self.shape in (ModeShape.MESA, ModeShape.SIN_FUNDAMENTAL,
                          ModeShape.SIN_FIRST_EXCITED):
            return (0.0, self.length)
        if self.shape is ModeShape.TABULATED:
            return (self.table[0][0], self.table[-1][0])
        return (-math.inf, math.inf)

    def default_window(self, window_factor: float = DEFAULT_WINDOW_FACTOR,
                       ) -> tuple[float, float]:
        """Solution window: the support, or window_factor * length centered
        on the peak for the unbounded profiles."""
        if self.shape in (ModeShape.SECH2, ModeShape.GAUSSIAN):
            half = 0.5 * window_factor * self.length
            return (-half, half)
        return self.support()


def load_tabulated(path: str) -> ModeProfile:
    """Two-column (x, u) text file; '#' starts a comment, blank lines skipped."""
    pts = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            try:
                x, u = float(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not numeric") from exc
            pts.append((x, u))
    return ModeProfile(shape=ModeShape.TABULATED, length=0.0, table=tuple(pts))


def eval_mode(profile: ModeProfile, x: float) -> float:
    """Mode value u(x); exactly zero outside the support."""
    L = profile.length
    s = profile.shape
    if s is ModeShape.MESA:
        return 1.0 if 0.0 <= x <= L else 0.0
    if s is ModeShape.SECH2:
        t = abs(x) / L
        if t > 350.0:
            return 0.0
        e = math.exp(-t)
        sech = 2.0 * e / (1.0 + e * e)
        return sech * sech
    if s is ModeShape.SIN_FUNDAMENTAL:
        return math.sin(math.pi * x / L) if 0.0 < x < L else 0.0
    if s is ModeShape.SIN_FIRST_EXCITED:
        return math.sin(2.0 * math.pi * x / L) if 0.0 < x < L else 0.0
    if s is ModeShape.GAUSSIAN:
        t = x / profile.sigma
        arg = 0.5 * t * t
        return math.exp(-arg) if arg < 745.0 else 0.0
    xs = np.array([p[0] for p in profile.table])
    us = np.array([p[1] for p in profile.table])
    return float(np.interp(x, xs, us, left=0.0, right=0.0))


def eval_mode_array(profile: ModeProfile, xs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`eval_mode`."""
    L = profile.length
    s = profile.shape
    xs = np.asarray(xs, dtype=float)
    if s is ModeShape.MESA:
        return np.where((xs >= 0.0) & (xs <= L), 1.0, 0.0)
    if s is ModeShape.SECH2:
        t = np.minimum(np.abs(xs) / L, 350.0)
        e = np.exp(-t)
        sech = 2.0 * e / (1.0 + e * e)
        out = sech * sech
        out[np.abs(xs) / L > 350.0] = 0.0
        return out
    if s is ModeShape.SIN_FUNDAMENTAL:
        inside = (xs > 0.0) & (xs < L)
        return np.where(inside, np.sin(np.pi * xs / L), 0.0)
    if s is ModeShape.SIN_FIRST_EXCITED:
        inside = (xs > 0.0) & (xs < L)
        return np.where(inside, np.sin(2.0 * np.pi * xs / L), 0.0)
    if s is ModeShape.GAUSSIAN:
        t = xs / profile.sigma
        arg = 0.5 * t * t
        return np.where(arg < 745.0, np.exp(-np.minimum(arg, 745.0)), 0.0)
    txs = np.array([p[0] for p in profile.table])
    tus = np.array([p[1] for p in profile.table])
    return np.interp(xs, txs, tus, left=0.0, right=0.0)


# --- exact areas ----------------------------------------------------------

def _clip(a: float, b: float, lo: float, hi: float) -> tuple[float, float]:
    return max(a, lo), min(b, hi)


def signed_area(profile: ModeProfile, a: float, b: float) -> float:
    """Exact integral of u over [a, b], by closed form."""
    if b <= a:
        return 0.0
    L = profile.length
    s = profile.shape
    if s is ModeShape.MESA:
        lo, hi = _clip(a, b, 0.0, L)
        return max(hi - lo, 0.0)
    if s is ModeShape.SECH2:
        return L * (math.tanh(b / L) - math.tanh(a / L))
    if s is ModeShape.SIN_FUNDAMENTAL:
        lo, hi = _clip(a, b, 0.0, L)
        if hi <= lo:
            return 0.0
        c = math.pi / L
        return (math.cos(c * lo) - math.cos(c * hi)) / c
    if s is ModeShape.SIN_FIRST_EXCITED:
        lo, hi = _clip(a, b, 0.0, L)
        if hi <= lo:
            return 0.0
        c = 2.0 * math.pi / L
        return (math.cos(c * lo) - math.cos(c * hi)) / c
    if s is ModeShape.GAUSSIAN:
        sg = profile.sigma
        rt2 = math.sqrt(2.0)
        return sg * math.sqrt(math.pi / 2.0) * (
            math.erf(b / (sg * rt2)) - math.erf(a / (sg * rt2)))
    # tabulated: trapezoid over the table restricted to [a, b] is exact
    pts = [(x, u) for x, u in profile.table if a < x < b]
    lo, hi = _clip(a, b, profile.table[0][0], profile.table[-1][0])
    if hi <= lo:
        return 0.0
    pts = [(lo, eval_mode(profile, lo))] + pts + [(hi, eval_mode(profile, hi))]
    return math.fsum(0.5 * (u0 + u1) * (x1 - x0)
                     for (x0, u0), (x1, u1) in zip(pts, pts[1:]))


def abs_area(profile: ModeProfile, a: float, b: float) -> float:
    """Exact integral of |u| over [a, b].

    Identical to :func:`signed_area` for the single-signed modes; the first
    excited sinusoid and sign-changing tables are split at their zero
    crossings first.
    """
    if b <= a:
        return 0.0
    s = profile.shape
    L = profile.length
    if s is ModeShape.SIN_FIRST_EXCITED:
        lo, hi = _clip(a, b, 0.0, L)
        if hi <= lo:
            return 0.0
        total = 0.0
        half = 0.5 * L
        edges = [lo]
        if lo < half < hi:
            edges.append(half)
        edges.append(hi)
        for p, q in zip(edges, edges[1:]):
            total += abs(signed_area(profile, p, q))
        return total
    if s is ModeShape.TABULATED:
        total = 0.0
        tbl = profile.table
        lo, hi = _clip(a, b, tbl[0][0], tbl[-1][0])
        if hi <= lo:
            return 0.0
        xs = [lo] + [x for x, _ in tbl if lo < x < hi] + [hi]
        for x0, x1 in zip(xs, xs[1:]):
            u0, u1 = eval_mode(profile, x0), eval_mode(profile, x1)
            h = x1 - x0
            if u0 * u1 < 0.0:
                total += 0.5 * h * (u0 * u0 + u1 * u1) / (abs(u0) + abs(u1))
            else:
                total += 0.5 * h * (abs(u0) + abs(u1))
        return total
    return abs(signed_area(profile, a, b))


def interp_abs_area(xs: np.ndarray, us: np.ndarray) -> float:
    """Exact integral of |linear interpolant of the samples|.

    Not the trapezoid rule on |u_i|: an interval whose endpoints differ in
    sign contributes the two-triangle area h*(u0^2+u1^2)/(2(|u0|+|u1|)).
    """
    total = []
    for i in range(len(xs) - 1):
        u0, u1 = float(us[i]), float(us[i + 1])
        h = float(xs[i + 1] - xs[i])
        if u0 * u1 < 0.0:
            total.append(0.5 * h * (u0 * u0 + u1 * u1) / (abs(u0) + abs(u1)))
        else:
            total.append(0.5 * h * (abs(u0) + abs(u1)))
    return math.fsum(total)


# --- turning points -------------------------------------------------------

def find_turning_points(
    profile: ModeProfile,
    sign: int,
    E: float,
    window: tuple[float, float],
    *,
    alpha: float = 1.0,
    scan_points: int = 4096,
) -> list[float]:
    """All solutions of sign * alpha * u(x)/2 = E inside the window.

    Each root is bracketed by a sign change on a uniform scan and refined
    by bisection to 1e-12 absolute (or a few ulps at large |x|, whichever
    is coarser).  Mesa is special: its edges are potential jumps, handled
    as segment boundaries rather than roots, so the list is empty.
    """
    if E <= 0.0:
        raise ValueError("turning points are defined for E > 0")
    if profile.shape is ModeShape.MESA:
        return []
    a, b = window
    if not a < b:
        raise ValueError(f"empty window [{a}, {b}]")

    def h(x: float) -> float:
        return sign * alpha * eval_mode(profile, x) * 0.5 - E

    xs = np.linspace(a, b, max(int(scan_points), 16))
    hs = sign * alpha * eval_mode_array(profile, xs) * 0.5 - E
    roots: list[float] = []
    for i in range(len(xs) - 1):
        h0, h1 = float(hs[i]), float(hs[i + 1])
        if h0 == 0.0:
            roots.append(float(xs[i]))
            continue
        if h0 * h1 >= 0.0:
            continue
        lo, hi = float(xs[i]), float(xs[i + 1])
        flo = h0
        tol = max(1.0e-12, 4.0 * math.ulp(max(abs(lo), abs(hi))))
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            fm = h(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if flo * fm < 0.0:
                hi = mid
            else:
                lo, flo = mid, fm
        roots.append(0.5 * (lo + hi))
    if float(hs[-1]) == 0.0:
        roots.append(float(xs[-1]))
    # merge duplicates (tangent grazing finds the same root twice)
    merged: list[float] = []
    for r in sorted(roots):
        if merged and r - merged[-1] <= TURNING_MERGE_TOL:
            continue
        merged.append(r)
    return merged


# --- grid construction ----------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """The full segmentation of one scattering problem.

    ``segments`` starts and ends with the semi-infinite free regions; the
    interior entries tile the window.  ``V_values`` are the renormalized
    potential samples alpha*V at ``points``; turning nodes carry V = E
    exactly so no segment straddles a sign change of E - V.
    """

    points: np.ndarray
    V_values: np.ndarray
    alpha: float
    E: float
    k: float
    branch_sign: int
    profile: ModeProfile
    window: tuple[float, float]
    turning_points: tuple[float, ...]
    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        self.points.flags.writeable = False
        self.V_values.flags.writeable = False


def _merge_turning_nodes(uniform: np.ndarray, roots: list[float]) -> np.ndarray:
    """Insert roots into the node array; a root within the merge tolerance
    of an interior node replaces that node (window edges stay put)."""
    nodes = list(map(float, uniform))
    for r in roots:
        if r <= nodes[0] or r >= nodes[-1]:
            continue
        idx = int(np.searchsorted(nodes, r))
        near = None
        for j in (idx - 1, idx):
            if 0 <= j < len(nodes) and abs(nodes[j] - r) <= TURNING_MERGE_TOL:
                near = j
                break
        if near is not None:
            if near == 0 or near == len(nodes) - 1:
                continue   # never move a window edge
            nodes[near] = r
        else:
            nodes.insert(idx, r)
    return np.array(nodes)


def build_grid(
    profile: ModeProfile,
    sign: int,
    k_over_kappa: float,
    J: int,
    *,
    window: tuple[float, float] | None = None,
    window_factor: float = DEFAULT_WINDOW_FACTOR,
    renormalize: bool = True,
) -> Grid:
    """Uniform J-point grid over the window, turning points inserted,
    potential samples renormalized, segments tagged.

    sign selects the dressed-potential branch: +1 for the repulsive
    barrier, -1 for the attractive well.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if J < 2:
        raise ValueError("J must be at least 2")
    if not k_over_kappa > 0.0:
        raise ValueError("k_over_kappa must be positive")
    k = float(k_over_kappa)
    E = 0.5 * k * k
    z_free = k * k     # 2E

    if window is None:
        window = profile.default_window(window_factor)
    x_a, x_b = float(window[0]), float(window[1])
    s_lo, s_hi = profile.support()
    if not x_a < x_b:
        raise ValueError(f"empty window [{x_a}, {x_b}]")
    if x_b <= s_lo or x_a >= s_hi:
        raise ValueError("window does not overlap the mode support")

    if profile.shape is ModeShape.MESA:
        return _build_mesa_grid(profile, sign, k, E, (x_a, x_b))

    uniform = np.linspace(x_a, x_b, J)
    u_uniform = eval_mode_array(profile, uniform)
    area_exact = abs_area(profile, x_a, x_b)

    def alpha_for(nodes: np.ndarray, u_nodes: np.ndarray) -> float:
        if not renormalize:
            return 1.0
        denom = interp_abs_area(nodes, u_nodes)
        if area_exact == 0.0 or denom == 0.0:
            return 1.0
        return area_exact / denom

    alpha = alpha_for(uniform, u_uniform)
    nodes, u_nodes = uniform, u_uniform
    roots: list[float] = []
    prev_roots: list[float] = []
    for _ in range(_MAX_ALPHA_ITER):
        roots = find_turning_points(
            profile, sign, E, (x_a, x_b), alpha=alpha,
            scan_points=8 * max(J, 64))
        nodes = _merge_turning_nodes(uniform, roots)
        u_nodes = eval_mode_array(profile, nodes)
        new_alpha = alpha_for(nodes, u_nodes)
        stable_alpha = abs(new_alpha - alpha) <= _ALPHA_FIXED_POINT_TOL * max(
            abs(new_alpha), 1.0)
        stable_roots = len(roots) == len(prev_roots) and all(
            abs(r - p) <= 1.0e-11 for r, p in zip(roots, prev_roots))
        alpha = new_alpha
        prev_roots = roots
        if stable_alpha and stable_roots:
            break

    z = z_free - sign * alpha * u_nodes
    # a converged root satisfies its equation to ~1e-12 in x; snap the
    # sampled z there to exactly zero so the adjacent tags come out clean
    root_positions = []
    for r in roots:
        if nodes[0] < r < nodes[-1]:
            i = int(np.argmin(np.abs(nodes - r)))
            z[i] = 0.0
            root_positions.append(float(nodes[i]))

    # safety net: any residual sign change inside an interval is a turning
    # point of the interpolant itself and must become a node
    nodes, z, extra = _split_residual_crossings(nodes, z)
    root_positions = sorted(root_positions + extra)

    segments = _segments_from_samples(nodes, z, z_free)
    V_values = 0.5 * (z_free - z)

    grid = Grid(
        points=nodes,
        V_values=V_values,
        alpha=float(alpha),
        E=E,
        k=k,
        branch_sign=sign,
        profile=profile,
        window=(x_a, x_b),
        turning_points=tuple(root_positions),
        segments=tuple(segments),
    )
    _verify_grid(grid, area_exact, renormalize)
    return grid


def _build_mesa_grid(profile, sign, k, E, window) -> Grid:
    """Mesa: one flat segment across the clipped support, no interpolation."""
    lo, hi = _clip(window[0], window[1], 0.0, profile.length)
    if not lo < hi:
        raise ValueError("window does not overlap the mesa support")
    z_free = k * k
    z_top = z_free - sign * 1.0
    nodes = np.array([lo, hi])
    z = np.array([z_top, z_top])
    segments = _segments_from_samples(nodes, z, z_free)
    return Grid(
        points=nodes,
        V_values=np.array([0.5 * sign, 0.5 * sign]),
        alpha=1.0,
        E=E,
        k=k,
        branch_sign=sign,
        profile=profile,
        window=(lo, hi),
        turning_points=(),
        segments=tuple(segments),
    )


def _split_residual_crossings(
    nodes: np.ndarray, z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    out_x: list[float] = [float(nodes[0])]
    out_z: list[float] = [float(z[0])]
    inserted: list[float] = []
    for i in range(len(nodes) - 1):
        z0, z1 = float(z[i]), float(z[i + 1])
        if z0 * z1 < 0.0:
            xc = float(nodes[i]) + (float(nodes[i + 1]) - float(nodes[i])) * (
                z0 / (z0 - z1))
            if xc > out_x[-1]:
                out_x.append(xc)
                out_z.append(0.0)
                inserted.append(xc)
        out_x.append(float(nodes[i + 1]))
        out_z.append(z1)
    return np.array(out_x), np.array(out_z), inserted


def _segments_from_samples(
    nodes: np.ndarray, z: np.ndarray, z_free: float,
) -> list[Segment]:
    segs: list[Segment] = [
        Segment(x_lo=-math.inf, x_hi=float(nodes[0]), a=z_free, b=0.0,
                regime=Regime.FLAT_ALLOWED, x_ref=0.0, z_ref=z_free)
    ]
    for i in range(len(nodes) - 1):
        x0, x1 = float(nodes[i]), float(nodes[i + 1])
        z0, z1 = float(z[i]), float(z[i + 1])
        regime = None
        if z1 != z0:
            b = (z1 - z0) / (x1 - x0)
            w_max = max(_w_of(z0, b), _w_of(z1, b))
            if w_max > W_FLAT_COLLAPSE:
                zm = 0.5 * (z0 + z1)
                regime = (Regime.FLAT_ALLOWED if zm > 0.0 else
                          Regime.FLAT_FORBIDDEN if zm < 0.0 else
                          Regime.FLAT_FREE)
        segs.append(make_segment(x0, x1, z0, z1, regime=regime))
    segs.append(
        Segment(x_lo=float(nodes[-1]), x_hi=math.inf, a=z_free, b=0.0,
                regime=Regime.FLAT_ALLOWED, x_ref=0.0, z_ref=z_free)
    )
    return segs


def _w_of(zv: float, b: float) -> float:
    return 2.0 * abs(zv) * math.sqrt(abs(zv)) / (3.0 * abs(b))


def _verify_grid(grid: Grid, area_exact: float, renormalize: bool) -> None:
    pts = grid.points
    if not np.all(np.diff(pts) > 0.0):
        raise AssertionError("grid nodes not strictly increasing")
    if renormalize and area_exact > 0.0:
        u_eff = (grid.k * grid.k - _z_of_grid(grid)) * grid.branch_sign / grid.alpha
        approx = grid.alpha * interp_abs_area(pts, u_eff)
        if abs(approx - area_exact) > 1.0e-11 * area_exact:
            raise AssertionError(
                f"area renormalization off: {approx} vs {area_exact}")


def _z_of_grid(grid: Grid) -> np.ndarray:
    return grid.k * grid.k - 2.0 * grid.V_values
