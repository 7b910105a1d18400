"""Truncated Weierstrass-type series and a box-counting dimension estimator.

Two series are provided:

* the Weierstrass function ``W(x) = sum_{n>=0} b**n cos(a**n pi x)``,
* the cosine Weierstrass-Mandelbrot function
  ``C(z) = sum_{m in Z} a**((D-2) m) (1 - cos(a**m z))``.

Both are evaluated over an explicit, user-chosen index window and come with a
rigorous bound on the discarded tail. Terms are always accumulated in
ascending index order so that results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GeometryError, ParameterError, ProtocolError

__all__ = [
    "WeierstrassParams",
    "WMParams",
    "PlanarGraph",
    "BoxCountResult",
    "weierstrass_eval",
    "weierstrass_tail_bound",
    "weierstrass_order_for_tolerance",
    "wm_cosine_eval",
    "wm_tail_bound",
    "wm_window_for_tolerance",
    "graph_dimension",
    "box_counts",
    "box_counting_dimension",
    "geometric_scales",
]

# Estimates this far outside [1, 2] are treated as a failed measurement.
_DIMENSION_SLACK = 0.05


def _check_base(a) -> int:
    if isinstance(a, bool) or int(a) != a or a < 2:
        raise ParameterError(f"base a must be an integer >= 2, got {a!r}")
    return int(a)


@dataclass(frozen=True)
class WeierstrassParams:
    """Parameters of the truncated Weierstrass series.

    ``fractal=True`` additionally demands ``a*b >= 1``, the range in which the
    limit function is nowhere differentiable.
    """

    a: int
    b: float
    n_max: int
    fractal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", _check_base(self.a))
        if not (0.0 < self.b < 1.0) or not math.isfinite(self.b):
            raise ParameterError(f"b must lie in (0, 1), got {self.b!r}")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ParameterError(f"n_max must be a non-negative integer, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.fractal and self.a * self.b < 1.0:
            raise ParameterError(
                f"a*b = {self.a * self.b:g} < 1: not in the fractal range (need a*b >= 1)"
            )

    @property
    def dimension(self) -> float:
        """Closed-form graph dimension ``2 + ln b / ln a``."""
        return graph_dimension(self.a, self.b)


@dataclass(frozen=True)
class WMParams:
    """Parameters of the truncated cosine Weierstrass-Mandelbrot series.

    The sum runs over ``m_lo <= m <= m_hi``. ``d_graph`` must lie strictly in
    (1, 2); outside that range one of the two tails diverges.
    """

    a: int
    d_graph: float
    m_lo: int
    m_hi: int

    def __post_init__(self):
        object.__setattr__(self, "a", _check_base(self.a))
        if not (1.0 < self.d_graph < 2.0):
            raise ParameterError(f"d_graph must lie in (1, 2), got {self.d_graph!r}")
        if int(self.m_lo) != self.m_lo or int(self.m_hi) != self.m_hi:
            raise ParameterError("truncation indices must be integers")
        if not (self.m_lo <= 0 <= self.m_hi):
            raise ParameterError(f"need m_lo <= 0 <= m_hi, got ({self.m_lo}, {self.m_hi})")
        object.__setattr__(self, "m_lo", int(self.m_lo))
        object.__setattr__(self, "m_hi", int(self.m_hi))

    @property
    def ratio(self) -> float:
        """Weight ratio ``a**(D-2)`` between consecutive terms (< 1)."""
        return float(self.a) ** (self.d_graph - 2.0)


def graph_dimension(a: float, b: float) -> float:
    """Box-counting dimension ``2 + ln(b)/ln(a)`` of the Weierstrass graph."""
    if a <= 1 or not (0.0 < b < 1.0):
        raise ParameterError(f"need a > 1 and 0 < b < 1, got a={a!r}, b={b!r}")
    return 2.0 + math.log(b) / math.log(a)


def _scalar_or_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _two_sum(x, y):
    s = x + y
    t = s - x
    return s, (x - (s - t)) + (y - t)


def _half_turns(x: np.ndarray, a: int, count: int):
    """Yield ``(a**n * x) mod 2`` for ``n = 0 .. count-1`` as ``(hi, lo)`` pairs.

    The phase is carried in double-double so that the reduction stays exact
    far beyond the point where ``a**n * x`` itself has lost every fractional
    bit. Requires ``a < 2**26`` (the product ``a * hi`` is then error-free).
    """
    hi = np.fmod(x, 2.0)
    hi, lo = _two_sum(hi, np.where(hi < 0, 2.0, 0.0))
    af = float(a)
    for n in range(count):
        yield hi, lo
        if n == count - 1:
            break
        c = 134217729.0 * hi  # Dekker split of hi into 26-bit halves
        h = c - (c - hi)
        p = af * hi
        err = (af * h - p) + af * (hi - h)
        p = p - 2.0 * np.floor(0.5 * p)
        hi, lo = _two_sum(p, err + af * lo)


def weierstrass_eval(p: WeierstrassParams, x):
    """Evaluate ``sum_{n=0}^{n_max} b**n cos(a**n pi x)``.

    Accepts a scalar or an array. The absolute error against the infinite sum
    is at most :func:`weierstrass_tail_bound`; cosine arguments are reduced
    modulo 2 pi exactly, so ``W(1) == -1/(1-b)`` up to the tail even for
    large ``n_max``.
    """
    if p.a >= 2**26:
        raise ParameterError("weierstrass_eval supports a < 2**26")
    xs, scalar = _scalar_or_array(x)
    out = np.zeros_like(xs)
    for n, (hi, lo) in enumerate(_half_turns(xs, p.a, p.n_max + 1)):
        out += p.b**n * np.cos(np.pi * hi + np.pi * lo)
    return float(out) if scalar else out


def weierstrass_tail_bound(p: WeierstrassParams) -> float:
    """Geometric bound ``b**(n_max+1) / (1-b)`` on the discarded tail."""
    return p.b ** (p.n_max + 1) / (1.0 - p.b)


def weierstrass_order_for_tolerance(a: int, b: float, tol: float, fractal: bool = False) -> WeierstrassParams:
    """Smallest truncation whose tail bound does not exceed ``tol``."""
    if not tol > 0:
        raise ParameterError("tol must be positive")
    p = WeierstrassParams(a, b, 0, fractal)
    while weierstrass_tail_bound(p) > tol:
        p = WeierstrassParams(a, b, p.n_max + 1, fractal)
    return p


def wm_cosine_eval(p: WMParams, z):
    """Evaluate ``sum_{m=m_lo}^{m_hi} a**((D-2)m) (1 - cos(a**m z))``.

    ``1 - cos`` is computed as ``2 sin**2(w/2)`` to avoid cancellation for the
    many tiny-argument terms at negative ``m``.
    """
    zs, scalar = _scalar_or_array(z)
    out = np.zeros_like(zs)
    base = float(p.a)
    for m in range(p.m_lo, p.m_hi + 1):
        s = np.sin(0.5 * (base**m * zs))
        out += base ** ((p.d_graph - 2.0) * m) * (2.0 * s * s)
    return float(out) if scalar else out


def wm_tail_bound(p: WMParams, z) -> float:
    """Bound on ``|C(z) - C_truncated(z)|``.

    Upper tail uses ``|1 - cos| <= 2``; lower tail uses ``1 - cos(w) <= w**2/2``.
    """
    a = float(p.a)
    D = p.d_graph
    upper = 2.0 * a ** ((D - 2.0) * (p.m_hi + 1)) / (1.0 - a ** (D - 2.0))
    lower = 0.5 * float(z) ** 2 * a ** (D * p.m_lo) / (a**D - 1.0)
    return upper + lower


def wm_window_for_tolerance(a: int, d_graph: float, tol: float, z_max: float) -> WMParams:
    """Narrowest window whose tail bound is <= ``tol`` for every ``|z| <= z_max``.

    Half of the budget goes to each tail.
    """
    if not tol > 0:
        raise ParameterError("tol must be positive")
    m_hi = 0
    while wm_tail_bound(WMParams(a, d_graph, 0, m_hi), 0.0) > 0.5 * tol:
        m_hi += 1
    upper = wm_tail_bound(WMParams(a, d_graph, 0, m_hi), 0.0)
    m_lo = 0
    while wm_tail_bound(WMParams(a, d_graph, m_lo, m_hi), z_max) - upper > 0.5 * tol:
        m_lo -= 1
    return WMParams(a, d_graph, m_lo, m_hi)


@dataclass(frozen=True)
class PlanarGraph:
    """A polyline through ``(x, y)`` samples with strictly increasing ``x``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=float)
        y = np.ascontiguousarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise GeometryError("x and y must be 1-D arrays of equal length")
        if x.size < 2:
            raise GeometryError("a planar graph needs at least 2 points")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise GeometryError("graph coordinates must be finite")
        if np.any(np.diff(x) <= 0):
            raise GeometryError("x must be strictly increasing")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_function(cls, f, x_min: float, x_max: float, n: int) -> "PlanarGraph":
        xs = np.linspace(x_min, x_max, n)
        return cls(xs, np.asarray(f(xs), dtype=float))

    def __len__(self):
        return self.x.size

    def __eq__(self, other):
        if not isinstance(other, PlanarGraph):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    __hash__ = None


@dataclass(frozen=True)
class BoxCountResult:
    scales: tuple
    counts: tuple
    dimension: float
    r_squared: float


def geometric_scales(eps_max: float, eps_min: float, n_scales: int) -> list:
    """``n_scales`` box sizes spaced geometrically from ``eps_max`` down to ``eps_min``."""
    if not (eps_max > eps_min > 0) or n_scales < 2:
        raise ProtocolError("need eps_max > eps_min > 0 and n_scales >= 2")
    return [float(e) for e in np.geomspace(eps_max, eps_min, n_scales)]


def _cell_count(x: np.ndarray, y: np.ndarray, eps: float) -> int:
    # Within one grid column the polyline is connected, so it meets exactly the
    # contiguous run of cells between its lowest and highest point there. The
    # extremes are attained at samples or at the column edges.
    x0 = x[0]
    y0 = y.min()
    n_col = max(1, math.ceil((x[-1] - x0) / eps))
    n_row = max(1, math.ceil((y.max() - y0) / eps))

    col = np.clip(np.floor((x - x0) / eps).astype(np.int64), 0, n_col - 1)
    lo = np.full(n_col, np.inf)
    hi = np.full(n_col, -np.inf)
    np.minimum.at(lo, col, y)
    np.maximum.at(hi, col, y)

    if n_col > 1:
        edges = x0 + eps * np.arange(1, n_col)
        y_edge = np.interp(edges, x, y)
        # Edge i separates columns i-1 and i.
        lo[:-1] = np.minimum(lo[:-1], y_edge)
        hi[:-1] = np.maximum(hi[:-1], y_edge)
        lo[1:] = np.minimum(lo[1:], y_edge)
        hi[1:] = np.maximum(hi[1:], y_edge)

    r_lo = np.clip(np.floor((lo - y0) / eps), 0, n_row - 1)
    r_hi = np.clip(np.floor((hi - y0) / eps), 0, n_row - 1)
    return int(np.sum(r_hi - r_lo + 1))


def box_counts(g: PlanarGraph, eps_list: Sequence[float]) -> list:
    """Number of ``eps``-grid cells met by the polyline, for each ``eps``.

    The grid is anchored at the lower-left corner of the bounding box.
    """
    if g.x[-1] - g.x[0] <= 0:
        raise GeometryError("graph has zero x-range")
    return [_cell_count(g.x, g.y, float(e)) for e in eps_list]


def box_counting_dimension(g: PlanarGraph, eps_list: Sequence[float]) -> BoxCountResult:
    """Estimate the box-counting dimension of a graph.

    Fits ``log N(eps)`` against ``log(1/eps)`` by ordinary least squares over
    every supplied scale; choosing the scale window is left to the caller.

    Raises
    ------
    ProtocolError
        Fewer than 4 scales, or scales not positive and strictly decreasing.
    GeometryError
        Degenerate graph, or an estimate outside [1, 2].
    """
    eps = np.asarray(eps_list, dtype=float)
    if eps.ndim != 1 or eps.size < 4:
        raise ProtocolError(f"box counting needs at least 4 scales, got {eps.size}")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ProtocolError("scales must be positive and strictly decreasing")

    counts = box_counts(g, eps)
    lx = np.log(1.0 / eps)
    ly = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    dim = float(slope)
    if not (1.0 - _DIMENSION_SLACK <= dim <= 2.0 + _DIMENSION_SLACK):
        raise GeometryError(
            f"estimated dimension {dim:.4f} outside [1, 2]; the scales probably do not "
            "resolve the graph"
        )
    return BoxCountResult(
        scales=tuple(float(e) for e in eps),
        counts=tuple(counts),
        dimension=dim,
        r_squared=float(min(max(r2, 0.0), 1.0)),
    )
