"""Interaction kernels: which partners a particle couples to, and how strongly.

A kernel is a finite list of ``(offset, weight)`` terms plus the chain
constants ``c`` (wave speed) and ``h`` (lattice spacing). Particle ``n``
interacts with ``n +- offset`` for every term.

The doubly infinite sums over ``m`` in the chain equation are folded
symmetrically: ``a(-m) = a(m)`` and ``b(-m) = b(m)``. Only ``m >= 0`` is
stored. The first term (``m = 0``) is counted once and every later term
twice, and both the force and the dispersion formulas use this rule.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ParameterError

__all__ = [
    "InteractionKernel",
    "NearestNeighbor",
    "WMFractal",
    "GeometricWeierstrass",
    "Explicit",
    "KernelFamily",
    "build_kernel",
    "effective_mass_squared",
    "validate_kernel_for_ring",
    "family_from_dict",
]


@dataclass(frozen=True)
class InteractionKernel:
    terms: tuple
    c: float = 1.0
    h: float = 1.0
    weight_sum: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ParameterError(f"c must be positive, got {self.c!r}")
        if not (math.isfinite(self.h) and self.h > 0):
            raise ParameterError(f"h must be positive, got {self.h!r}")
        if len(self.terms) == 0:
            raise ParameterError("a kernel needs at least one term")

        merged = {}
        for offset, weight in self.terms:
            if isinstance(offset, bool) or int(offset) != offset or offset < 1:
                raise ParameterError(f"offsets must be positive integers, got {offset!r}")
            weight = float(weight)
            if not (math.isfinite(weight) and weight > 0):
                raise ParameterError(f"weights must be positive, got {weight!r}")
            merged[int(offset)] = merged.get(int(offset), 0.0) + weight
        terms = tuple((o, merged[o]) for o in sorted(merged))

        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "weight_sum", math.fsum(w for _, w in terms))

    @property
    def offsets(self) -> np.ndarray:
        return np.array([o for o, _ in self.terms], dtype=np.int64)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.terms], dtype=float)

    @property
    def multiplicities(self) -> np.ndarray:
        """Folding factor per term: 1 for the first, 2 for the rest."""
        mult = np.full(len(self.terms), 2.0)
        mult[0] = 1.0
        return mult

    @property
    def max_offset(self) -> int:
        return self.terms[-1][0]

    def partners(self, n: int) -> list:
        """Sorted indices ``n +- offset`` of the particles acting on particle ``n``."""
        return sorted({n + s * o for o, _ in self.terms for s in (1, -1)})

    def to_dict(self) -> dict:
        return {"c": self.c, "h": self.h, "terms": [[o, w] for o, w in self.terms]}

    @classmethod
    def from_dict(cls, d: dict) -> "InteractionKernel":
        try:
            return cls(tuple((int(o), float(w)) for o, w in d["terms"]), float(d["c"]), float(d["h"]))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed kernel description: {exc}") from exc

    @property
    def kernel_id(self) -> str:
        """Stable content hash used as provenance in exported files."""
        blob = json.dumps(
            {"c": repr(self.c), "h": repr(self.h), "terms": [[o, repr(w)] for o, w in self.terms]},
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class NearestNeighbor:
    pass


@dataclass(frozen=True)
class WMFractal:
    """Offsets ``a**m`` with weights ``a**((d_graph-2) m)`` for ``m = 0..M``."""

    a: int
    d_graph: float
    M: int


@dataclass(frozen=True)
class GeometricWeierstrass:
    """Offsets ``a**m`` with weights ``b**m`` for ``m = 0..M``."""

    a: int
    b: float
    M: int


@dataclass(frozen=True)
class Explicit:
    terms: tuple


KernelFamily = Union[NearestNeighbor, WMFractal, GeometricWeierstrass, Explicit]


def _check_order(M):
    if isinstance(M, bool) or int(M) != M or M < 0:
        raise ParameterError(f"truncation order M must be a non-negative integer, got {M!r}")
    return int(M)


def _check_base(a):
    if isinstance(a, bool) or int(a) != a or a < 2:
        raise ParameterError(f"base a must be an integer >= 2, got {a!r}")
    return int(a)


def build_kernel(f: KernelFamily, c: float = 1.0, h: float = 1.0) -> InteractionKernel:
    """Realize a kernel family as a finite kernel."""
    if isinstance(f, NearestNeighbor):
        terms = ((1, 1.0),)
    elif isinstance(f, WMFractal):
        a, M = _check_base(f.a), _check_order(f.M)
        if not (1.0 < f.d_graph < 2.0):
            raise ParameterError(f"d_graph must lie in (1, 2), got {f.d_graph!r}")
        terms = tuple((a**m, float(a) ** ((f.d_graph - 2.0) * m)) for m in range(M + 1))
    elif isinstance(f, GeometricWeierstrass):
        a, M = _check_base(f.a), _check_order(f.M)
        if not (0.0 < f.b < 1.0):
            raise ParameterError(f"b must lie in (0, 1), got {f.b!r}")
        terms = tuple((a**m, float(f.b) ** m) for m in range(M + 1))
    elif isinstance(f, Explicit):
        terms = tuple(f.terms)
    else:
        raise ParameterError(f"unknown kernel family {f!r}")
    return InteractionKernel(terms, c, h)


def family_from_dict(d: dict) -> KernelFamily:
    """Parse the shorthand used in config files.

    ``{"family": "nearest"}``, ``{"family": "wm", "a": 2, "d_graph": 1.5, "M": 10}``,
    ``{"family": "geometric", "a": 2, "b": 0.6, "M": 10}`` or
    ``{"family": "explicit", "terms": [[1, 1.0], [3, 0.2]]}``.
    """
    d = {str(key).lower(): value for key, value in d.items()}
    name = str(d.get("family", "")).strip().lower()
    try:
        if name in ("nearest", "nearest_neighbor", "nn"):
            return NearestNeighbor()
        if name in ("wm", "wm_fractal", "wmfractal"):
            return WMFractal(int(d["a"]), float(d["d_graph"]), int(d["m"]))
        if name in ("geometric", "geometric_weierstrass", "weierstrass"):
            return GeometricWeierstrass(int(d["a"]), float(d["b"]), int(d["m"]))
        if name == "explicit":
            terms = d["terms"]
            if isinstance(terms, str):
                terms = json.loads(terms)
            return Explicit(tuple((int(o), float(w)) for o, w in terms))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"bad parameters for kernel family {name!r}: {exc}") from exc
    raise ParameterError(f"unknown kernel family {name!r}")


def effective_mass_squared(b: float, h: float) -> float:
    """Mass term ``4 b / (h**2 (1 - b))`` of the geometric-weight chain."""
    if not (0.0 <= b < 1.0):
        raise ParameterError(f"b must lie in [0, 1) for a finite mass, got {b!r}")
    if not h > 0:
        raise ParameterError(f"h must be positive, got {h!r}")
    return 4.0 * b / (h * h * (1.0 - b))


def validate_kernel_for_ring(k: InteractionKernel, n_particles: int) -> list:
    """Warn about offsets that reach halfway round a ring of ``n_particles`` or further.

    Such offsets alias onto shorter ones, so the ring no longer realizes the
    intended interaction set.
    """
    if n_particles < 2:
        raise ParameterError("a ring needs at least 2 particles")
    return [
        f"offset {o} >= N/2 = {n_particles / 2:g}: interaction wraps around the ring"
        for o, _ in k.terms
        if o >= n_particles / 2
    ]

