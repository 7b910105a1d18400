"""Time-domain simulation of an oscillator ring under an interaction kernel.

Equation of motion, with periodic indices and folding factors ``mult_m``::

    d2u_n/dt2 = (c/h)**2 sum_m mult_m b_m (u_{n+a_m} - 2 u_n + u_{n-a_m})

It is integrated with velocity Verlet. The potential energy

    V = (c**2 / 2 h**2) sum_m mult_m b_m sum_n (u_{n+a_m} - u_n)**2

generates exactly these forces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import omega_max
from .errors import DivergenceError, NumericError, ParameterError
from .interaction import InteractionKernel

__all__ = [
    "ChainState",
    "SimConfig",
    "Trajectory",
    "accelerations",
    "potential_energy",
    "total_energy",
    "shadow_energy",
    "step_verlet",
    "init_plane_wave",
    "init_random",
    "check_stability",
    "run",
    "DIVERGENCE_FACTOR",
]

DIVERGENCE_FACTOR = 1e6


def _finite_vector(x, name):
    arr = np.array(x, dtype=float)
    if arr.ndim != 1:
        raise ParameterError(f"{name} must be a 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ChainState:
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = _finite_vector(self.u, "u")
        v = _finite_vector(self.v, "v")
        if u.shape != v.shape or u.size < 2:
            raise ParameterError("u and v must have the same length N >= 2")
        if not math.isfinite(self.t):
            raise NumericError("time stamp must be finite")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_particles(self) -> int:
        return self.u.size

    def __eq__(self, other):
        if not isinstance(other, ChainState):
            return NotImplemented
        return self.t == other.t and np.array_equal(self.u, other.u) and np.array_equal(self.v, other.v)

    __hash__ = None


@dataclass(frozen=True)
class SimConfig:
    dt: float
    n_steps: int
    record_every: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ParameterError(f"dt must be positive, got {self.dt!r}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise ParameterError(f"n_steps must be a non-negative integer, got {self.n_steps!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ParameterError(f"record_every must be a positive integer, got {self.record_every!r}")


@dataclass
class Trajectory:
    """Recorded samples of a run. ``displacements`` and ``velocities`` are (records, N)."""

    dt: float
    times: list = field(default_factory=list)
    displacements: list = field(default_factory=list)
    velocities: list = field(default_factory=list)
    energy: list = field(default_factory=list)

    def append(self, state: ChainState, energy: float):
        self.times.append(state.t)
        self.displacements.append(state.u)
        self.velocities.append(state.v)
        self.energy.append(energy)

    def __len__(self):
        return len(self.times)

    @property
    def final_state(self) -> ChainState:
        return ChainState(self.displacements[-1], self.velocities[-1], self.times[-1])

    def relative_energy_drift(self) -> float:
        """``max |E(t) - E(0)| / E(0)`` over the record (0 for a zero-energy run)."""
        e = np.asarray(self.energy)
        if e.size == 0 or e[0] == 0:
            return 0.0
        return float(np.max(np.abs(e - e[0])) / abs(e[0]))


def _stencil_sum(k: InteractionKernel, u: np.ndarray) -> np.ndarray:
    # Kernel terms outer, ascending offset; fixed order keeps runs bit-reproducible.
    out = np.zeros_like(u)
    for (offset, weight), mult in zip(k.terms, k.multiplicities):
        out += (mult * weight) * (np.roll(u, -offset) - 2.0 * u + np.roll(u, offset))
    return out


def accelerations(k: InteractionKernel, u) -> np.ndarray:
    """Right-hand side of the equation of motion for displacements ``u``."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ParameterError("u must be a 1-D vector with N >= 2")
    if not np.all(np.isfinite(u)):
        raise NumericError("displacements contain non-finite values")
    return (k.c / k.h) ** 2 * _stencil_sum(k, u)


def potential_energy(k: InteractionKernel, u) -> float:
    u = np.asarray(u, dtype=float)
    total = 0.0
    for (offset, weight), mult in zip(k.terms, k.multiplicities):
        d = np.roll(u, -offset) - u
        total += mult * weight * float(d @ d)
    return 0.5 * (k.c / k.h) ** 2 * total


def total_energy(k: InteractionKernel, s: ChainState) -> float:
    """Kinetic plus potential energy (unit masses)."""
    return 0.5 * float(s.v @ s.v) + potential_energy(k, s.u)


def shadow_energy(k: InteractionKernel, s: ChainState, dt: float) -> float:
    """Quadratic invariant that velocity Verlet conserves exactly for this linear chain.

    With ``K`` the stiffness matrix (``acc = -K u``) the invariant is
    ``v.v/2 + u.K u/2 - dt**2 |K u|**2 / 8``. It differs from
    :func:`total_energy` by ``O((omega dt)**2)`` and is the right yardstick
    for judging whether an integration leaks energy.
    """
    ku = -accelerations(k, s.u)
    return 0.5 * float(s.v @ s.v) + 0.5 * float(s.u @ ku) - dt * dt / 8.0 * float(ku @ ku)


def _check_state(u, v, step_index, limit):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise DivergenceError(f"non-finite state at step {step_index}", step_index)
    if limit is not None and np.max(np.abs(u)) > limit:
        raise DivergenceError(
            f"displacement exceeded {limit:.3g} at step {step_index}; dt is probably unstable",
            step_index,
        )


def step_verlet(
    k: InteractionKernel,
    s: ChainState,
    dt: float,
    *,
    amplitude_limit: float | None = None,
    step_index: int = 1,
) -> ChainState:
    """Advance one velocity-Verlet step (half kick, drift, half kick).

    ``dt`` may be negative, which runs the step backwards; forward followed by
    backward restores the state up to rounding. ``amplitude_limit`` turns on
    the divergence guard.
    """
    a0 = accelerations(k, s.u)
    u, v, _ = _verlet(k, s.u, s.v, a0, dt)
    _check_state(u, v, step_index, amplitude_limit)
    return ChainState(u, v, s.t + dt)


def _verlet(k, u, v, a, dt):
    v_half = v + 0.5 * dt * a
    u_new = u + dt * v_half
    a_new = (k.c / k.h) ** 2 * _stencil_sum(k, u_new)
    return u_new, v_half + 0.5 * dt * a_new, a_new


def init_plane_wave(n_particles: int, mode_index: int, amplitude: float = 1.0, h: float = 1.0) -> ChainState:
    """Standing wave ``u_n = amplitude cos(k n h)``, ``k = 2 pi j / (N h)``, at rest."""
    if n_particles < 2:
        raise ParameterError("need at least 2 particles")
    if int(mode_index) != mode_index or not (0 <= mode_index < n_particles):
        raise ParameterError(f"mode index must lie in [0, {n_particles}), got {mode_index!r}")
    if not h > 0:
        raise ParameterError("h must be positive")
    n = np.arange(n_particles)
    # k n h = 2 pi (j n mod N) / N, reduced exactly in integers.
    u = amplitude * np.cos(2.0 * np.pi * ((int(mode_index) * n) % n_particles) / n_particles)
    return ChainState(u, np.zeros(n_particles), 0.0)


def init_random(n_particles: int, seed: int, amplitude: float = 1.0, with_velocities: bool = True) -> ChainState:
    """Uniformly random displacements (and velocities) in ``[-amplitude, amplitude]``."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(-amplitude, amplitude, n_particles)
    v = rng.uniform(-amplitude, amplitude, n_particles) if with_velocities else np.zeros(n_particles)
    return ChainState(u, v, 0.0)


def check_stability(k: InteractionKernel, n_particles: int, dt: float) -> float:
    """Return ``dt * omega_max``; raise if it reaches the Verlet limit 2."""
    ratio = abs(dt) * omega_max(k, n_particles)
    if ratio >= 2.0:
        raise ParameterError(f"dt * omega_max = {ratio:.4g} >= 2: velocity Verlet is unstable")
    return ratio


def run(k: InteractionKernel, s0: ChainState, cfg: SimConfig) -> Trajectory:
    """Integrate ``cfg.n_steps`` Verlet steps from ``s0``.

    Records the state and total energy at step 0, every ``record_every``
    steps, and at the final step. On divergence the partial trajectory is
    attached to the raised :class:`DivergenceError`.
    """
    check_stability(k, s0.n_particles, cfg.dt)
    amp = max(float(np.max(np.abs(s0.u))), cfg.dt * float(np.max(np.abs(s0.v))))
    limit = DIVERGENCE_FACTOR * amp if amp > 0 else None

    tr = Trajectory(dt=cfg.dt)
    tr.append(s0, total_energy(k, s0))
    u, v = s0.u.copy(), s0.v.copy()
    a = accelerations(k, u)
    for i in range(1, cfg.n_steps + 1):
        u, v, a = _verlet(k, u, v, a, cfg.dt)
        try:
            _check_state(u, v, i, limit)
        except DivergenceError as exc:
            exc.trajectory = tr
            raise
        if i % cfg.record_every == 0 or i == cfg.n_steps:
            s = ChainState(u, v, s0.t + i * cfg.dt)
            tr.append(s, total_energy(k, s))
    return tr
