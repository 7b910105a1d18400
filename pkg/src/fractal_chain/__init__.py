"""Oscillator chains with fractal long-range interactions.

Particles on a ring couple to partners at exponentially spaced offsets
``a**m``; the resulting dispersion laws are Weierstrass-type functions with
fractal graphs.
"""

from .chain import (
    ChainState,
    SimConfig,
    Trajectory,
    accelerations,
    init_plane_wave,
    init_random,
    run,
    shadow_energy,
    step_verlet,
    total_energy,
)
from .dispersion import (
    DispersionCurve,
    apply_operator_dense,
    group_velocity_divergence_probe,
    lambda_of_k,
    measure_mode_frequency,
    omega_max,
    omega_of_k,
    ring_wavenumbers,
    sample_dispersion,
    weierstrass_operator_eigenvalue,
)
from .errors import (
    DivergenceError,
    FormatError,
    FractalChainError,
    GeometryError,
    NumericError,
    ParameterError,
    PoorFitError,
    ProtocolError,
    RegimeError,
)
from .fractal_functions import (
    BoxCountResult,
    PlanarGraph,
    WeierstrassParams,
    WMParams,
    box_counting_dimension,
    graph_dimension,
    weierstrass_eval,
    weierstrass_tail_bound,
    wm_cosine_eval,
    wm_tail_bound,
)
from .interaction import (
    Explicit,
    GeometricWeierstrass,
    InteractionKernel,
    NearestNeighbor,
    WMFractal,
    build_kernel,
    effective_mass_squared,
    validate_kernel_for_ring,
)

__version__ = "0.1.0"

__all__ = [
    "ChainState",
    "SimConfig",
    "Trajectory",
    "accelerations",
    "init_plane_wave",
    "init_random",
    "run",
    "shadow_energy",
    "step_verlet",
    "total_energy",
    "DispersionCurve",
    "apply_operator_dense",
    "group_velocity_divergence_probe",
    "lambda_of_k",
    "measure_mode_frequency",
    "omega_max",
    "omega_of_k",
    "ring_wavenumbers",
    "sample_dispersion",
    "weierstrass_operator_eigenvalue",
    "DivergenceError",
    "FormatError",
    "FractalChainError",
    "GeometryError",
    "NumericError",
    "ParameterError",
    "PoorFitError",
    "ProtocolError",
    "RegimeError",
    "BoxCountResult",
    "PlanarGraph",
    "WeierstrassParams",
    "WMParams",
    "box_counting_dimension",
    "graph_dimension",
    "weierstrass_eval",
    "weierstrass_tail_bound",
    "wm_cosine_eval",
    "wm_tail_bound",
    "Explicit",
    "GeometricWeierstrass",
    "InteractionKernel",
    "NearestNeighbor",
    "WMFractal",
    "build_kernel",
    "effective_mass_squared",
    "validate_kernel_for_ring",
]
