"""Dispersion laws of fractal-interaction chains, closed form and measured.

Plane waves ``exp(i k n h)`` diagonalize every translation-invariant
coupling. For a kernel with terms ``(a_m, b_m)`` the eigenvalue is

    lambda(k) = sum_m mult_m * b_m * (1 - cos(h a_m k)),

where ``mult_m`` is the folding factor (1 for the first term, 2 for the
rest), and the dispersion law is ``omega(k)**2 = (2 c**2 / h**2) lambda(k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .errors import (
    NumericError,
    ParameterError,
    PoorFitError,
    ProtocolError,
    RegimeError,
)
from .interaction import InteractionKernel

__all__ = [
    "DispersionCurve",
    "ring_wavenumbers",
    "lambda_of_k",
    "omega_of_k",
    "omega_max",
    "apply_operator_dense",
    "weierstrass_operator_eigenvalue",
    "verlet_frequency",
    "unbias_verlet_frequency",
    "measure_mode_frequency",
    "sample_dispersion",
    "group_velocity_divergence_probe",
]


def ring_wavenumbers(n_particles: int, h: float) -> np.ndarray:
    """Wavenumbers ``2 pi j / (N h)``, ``j = 0 .. N-1``, of the ring modes."""
    return 2.0 * np.pi * np.arange(n_particles) / (n_particles * h)


def lambda_of_k(k: InteractionKernel, wavenumber):
    """Eigenvalue of the interaction operator on the plane wave ``exp(i k x)``.

    Vectorized over ``wavenumber``. ``1 - cos`` is evaluated as ``2 sin**2`` so
    that small-``k`` values keep full relative precision.
    """
    q = np.asarray(wavenumber, dtype=float)
    hq = k.h * q
    out = np.zeros_like(q)
    for (offset, weight), mult in zip(k.terms, k.multiplicities):
        s = np.sin(0.5 * (offset * hq))
        out += (mult * weight) * (2.0 * s * s)
    return float(out) if out.ndim == 0 else out


def omega_of_k(k: InteractionKernel, wavenumber):
    """Angular frequency ``sqrt(2 c**2 lambda(k)) / h`` (always real, >= 0)."""
    lam = lambda_of_k(k, wavenumber)
    out = np.sqrt(2.0 * lam) * (k.c / k.h)
    return float(out) if np.ndim(out) == 0 else out


def omega_max(k: InteractionKernel, n_particles: int) -> float:
    """Largest mode frequency on a ring of ``n_particles``."""
    return float(np.max(omega_of_k(k, ring_wavenumbers(n_particles, k.h))))


def apply_operator_dense(k: InteractionKernel, field) -> np.ndarray:
    """Apply the interaction operator to a (complex) field on the ring.

    ``out_n = 1/2 sum_m mult_m b_m (2 f_n - f_{n+a_m} - f_{n-a_m})``, indices
    taken modulo ``N``. Ring plane waves come back multiplied by
    :func:`lambda_of_k`.
    """
    f = np.asarray(field)
    if f.ndim != 1 or f.size < 2:
        raise ParameterError("field must be a 1-D array with at least 2 entries")
    if not np.all(np.isfinite(f)):
        raise NumericError("field contains non-finite values")
    f = f.astype(np.result_type(f.dtype, np.float64))
    n = np.arange(f.size)
    out = np.zeros_like(f)
    for (offset, weight), mult in zip(k.terms, k.multiplicities):
        fwd = f[(n + offset) % f.size]
        bwd = f[(n - offset) % f.size]
        out += (0.5 * mult * weight) * (2.0 * f - fwd - bwd)
    return out


def weierstrass_operator_eigenvalue(a: int, b: float, M: int, h: float, wavenumber):
    """Plane-wave eigenvalue ``sum_{m=0}^{M} b**m cos(a**m h k)`` of the Weierstrass operator."""
    if isinstance(a, bool) or int(a) != a or a < 2:
        raise ParameterError(f"base a must be an integer >= 2, got {a!r}")
    if not (0.0 < b < 1.0):
        raise ParameterError(f"b must lie in (0, 1), got {b!r}")
    if int(M) != M or M < 0:
        raise ParameterError(f"M must be a non-negative integer, got {M!r}")
    hq = h * np.asarray(wavenumber, dtype=float)
    out = np.zeros_like(hq)
    for m in range(int(M) + 1):
        out += b**m * np.cos(float(int(a) ** m) * hq)
    return float(out) if out.ndim == 0 else out


def verlet_frequency(omega, dt: float):
    """Frequency at which velocity Verlet actually oscillates a mode of frequency ``omega``."""
    return 2.0 / dt * np.arcsin(0.5 * np.asarray(omega) * dt)


def unbias_verlet_frequency(omega_numeric, dt: float):
    """Invert :func:`verlet_frequency`."""
    return 2.0 / dt * np.sin(0.5 * np.asarray(omega_numeric) * dt)


def _sinusoid_residual(omega, t, y):
    basis = np.column_stack([np.cos(omega * t), np.sin(omega * t), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    return y - basis @ coef


def measure_mode_frequency(tr, mode_index: int, max_residual: float = 1e-3) -> float:
    """Measure the oscillation frequency of ring mode ``mode_index`` in a trajectory.

    Each snapshot is projected onto the mode profile ``cos(2 pi j n / N)``.
    A sinusoid plus offset is fitted to the projection (discrete-spectrum
    peak as starting point, then nonlinear least squares), and the fitted
    frequency is corrected for the Verlet frequency bias using ``tr.dt``.

    Raises
    ------
    ProtocolError
        Fewer than 4 oscillation periods recorded.
    PoorFitError
        Relative RMS residual of the fit above ``max_residual``.
    """
    u = np.asarray(tr.displacements, dtype=float)
    t = np.asarray(tr.times, dtype=float)
    n_particles = u.shape[1]
    phase = 2.0 * np.pi * ((mode_index * np.arange(n_particles)) % n_particles) / n_particles
    profile = np.cos(phase)
    proj = u @ profile / (profile @ profile)

    scale = np.max(np.abs(proj))
    centered = proj - proj.mean()
    if scale == 0.0 or np.ptp(proj) <= 1e-12 * scale:
        return 0.0
    if t.size < 8:
        raise ProtocolError("trajectory too short to measure a frequency")
    crossings = int(np.count_nonzero(np.diff(np.signbit(centered))))
    if crossings < 8:
        raise ProtocolError(
            f"only {crossings / 2:.1f} periods recorded; need at least 4 to measure a frequency"
        )

    # Starting guess: zero-padded spectrum peak, assuming uniform sampling.
    spacing = (t[-1] - t[0]) / (t.size - 1)
    n_fft = 16 * t.size
    spectrum = np.abs(np.fft.rfft(centered, n_fft))
    freqs = 2.0 * np.pi * np.fft.rfftfreq(n_fft, spacing)
    guess = freqs[np.argmax(spectrum[1:]) + 1]
    bin_width = freqs[1] - freqs[0]

    tt = t - t[0]
    res = optimize.minimize_scalar(
        lambda w: float(np.sum(_sinusoid_residual(w, tt, proj) ** 2)),
        bounds=(max(guess - 2 * bin_width, 0.5 * guess), guess + 2 * bin_width),
        method="bounded",
        options={"xatol": 1e-12 * guess},
    )
    w0 = res.x
    basis = np.column_stack([np.cos(w0 * tt), np.sin(w0 * tt), np.ones_like(tt)])
    c0, *_ = np.linalg.lstsq(basis, proj, rcond=None)

    def model(params):
        a, b, off, w = params
        return a * np.cos(w * tt) + b * np.sin(w * tt) + off - proj

    fit = optimize.least_squares(
        model, x0=[c0[0], c0[1], c0[2], w0], x_scale=[scale, scale, scale, w0], xtol=1e-15, ftol=1e-15
    )
    omega_num = float(fit.x[3])
    rel = float(np.sqrt(np.mean(fit.fun**2)) / np.sqrt(np.mean(centered**2)))
    if rel > max_residual:
        raise PoorFitError(f"sinusoid fit residual {rel:.3g} exceeds {max_residual:g}", rel)
    return float(unbias_verlet_frequency(omega_num, tr.dt))


@dataclass(frozen=True)
class DispersionCurve:
    k: np.ndarray
    lambda_: np.ndarray
    omega: np.ndarray
    kernel_id: str
    kernel: dict

    def __eq__(self, other):
        if not isinstance(other, DispersionCurve):
            return NotImplemented
        return (
            np.array_equal(self.k, other.k)
            and np.array_equal(self.lambda_, other.lambda_)
            and np.array_equal(self.omega, other.omega)
            and self.kernel_id == other.kernel_id
        )

    __hash__ = None


def sample_dispersion(k: InteractionKernel, k_grid: Sequence[float]) -> DispersionCurve:
    """Evaluate ``lambda`` and ``omega`` on a sorted wavenumber grid."""
    grid = np.asarray(k_grid, dtype=float)
    if grid.ndim != 1:
        raise ParameterError("k_grid must be one-dimensional")
    if not np.all(np.isfinite(grid)):
        raise ParameterError("k_grid must be finite")
    if np.any(np.diff(grid) < 0):
        raise ParameterError("k_grid must be sorted")
    lam = np.atleast_1d(lambda_of_k(k, grid))
    omega = np.sqrt(2.0 * lam) * (k.c / k.h)
    return DispersionCurve(grid, lam, omega, k.kernel_id, k.to_dict())


def group_velocity_divergence_probe(
    a: int,
    b: float,
    h: float,
    wavenumber: float,
    m_list: Sequence[int],
    half_width: float = 0.05,
    points_per_period: int = 32,
) -> list:
    """Track how steep the truncated dispersion eigenvalue gets as terms are added.

    For each truncation ``M`` in ``m_list`` this returns ``(M, s_M)`` with

        s_M = max_{|q - k| <= half_width} sum_{m=0}^{M} mult_m b**m h a**m |sin(h a**m q)|,

    an upper envelope of ``|d lambda_M / dk|`` on the window, sampled finely
    enough to resolve the fastest term of the largest ``M``. When ``a*b > 1``
    the sequence grows like ``(a b)**M`` without bound, which is how the
    missing group velocity shows up at finite truncation.

    Raises
    ------
    RegimeError
        ``a*b <= 1``: the derivative series converges and the probe says nothing.
    """
    if isinstance(a, bool) or int(a) != a or a < 2:
        raise ParameterError(f"base a must be an integer >= 2, got {a!r}")
    if not (0.0 < b < 1.0):
        raise ParameterError(f"b must lie in (0, 1), got {b!r}")
    if a * b <= 1.0:
        raise RegimeError(f"a*b = {a * b:g} <= 1: the group velocity exists, nothing to probe")
    ms = [int(m) for m in m_list]
    if not ms or any(m < 0 for m in ms) or any(y <= x for x, y in zip(ms, ms[1:])):
        raise ParameterError("m_list must be a non-empty, strictly increasing list of orders >= 0")

    a = int(a)
    finest = math.pi / (h * float(a) ** ms[-1]) / points_per_period
    n_pts = int(math.ceil(2.0 * half_width / finest)) + 1
    q = np.linspace(wavenumber - half_width, wavenumber + half_width, n_pts)

    slope = np.zeros_like(q)
    wanted = set(ms)
    out = []
    for m in range(ms[-1] + 1):
        mult = 1.0 if m == 0 else 2.0
        off = float(a**m)
        slope += mult * b**m * h * off * np.abs(np.sin(h * off * q))
        if m in wanted:
            out.append((m, float(slope.max())))
    return out
