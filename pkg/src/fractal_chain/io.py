"""Readers and writers for the CSV and JSON artifacts.

CSV dialect: comma separator, ``.`` decimal point, one header row, ``\\n``
line endings, UTF-8. Floats are written with 17 significant digits, which
round-trips every double exactly. JSON floats use Python's shortest
round-tripping representation, which is exact too.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .chain import ChainState, Trajectory
from .dispersion import DispersionCurve
from .errors import FormatError
from .fractal_functions import BoxCountResult, PlanarGraph
from .interaction import InteractionKernel

__all__ = [
    "fmt",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
    "write_graph_csv",
    "read_graph_csv",
    "write_boxcount_json",
    "read_boxcount_json",
    "write_kernel_json",
    "read_kernel_json",
    "write_state_csv",
    "read_state_csv",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_trajectory_json",
    "read_trajectory_json",
    "write_energy_csv",
    "read_energy_csv",
    "write_dispersion",
    "read_dispersion",
    "write_probe_csv",
    "read_probe_csv",
]


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path, header, columns):
    """Write equal-length columns under ``header``."""
    columns = [list(c) for c in columns]
    if len({len(c) for c in columns}) > 1:
        raise ValueError("columns must have equal length")
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in zip(*columns))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path, header, types=None):
    """Read a CSV written by :func:`write_csv`; returns one list per column."""
    types = types or [float] * len(header)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not rows or [h.strip() for h in rows[0]] != list(header):
        raise FormatError(f"{path}: expected header {','.join(header)}")
    cols = [[] for _ in header]
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise FormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            for col, typ, value in zip(cols, types, row):
                col.append(typ(value))
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return cols


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def write_graph_csv(path, g: PlanarGraph):
    write_csv(path, ["x", "y"], [g.x, g.y])


def read_graph_csv(path) -> PlanarGraph:
    x, y = read_csv(path, ["x", "y"])
    return PlanarGraph(np.array(x), np.array(y))


def write_boxcount_json(path, r: BoxCountResult):
    write_json(
        path,
        {
            "scales": list(r.scales),
            "counts": list(r.counts),
            "dimension": r.dimension,
            "r_squared": r.r_squared,
        },
    )


def read_boxcount_json(path) -> BoxCountResult:
    d = read_json(path)
    try:
        return BoxCountResult(
            tuple(float(s) for s in d["scales"]),
            tuple(int(n) for n in d["counts"]),
            float(d["dimension"]),
            float(d["r_squared"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: not a box-count result: {exc}") from exc


def write_kernel_json(path, k: InteractionKernel):
    write_json(path, k.to_dict())


def read_kernel_json(path) -> InteractionKernel:
    return InteractionKernel.from_dict(read_json(path))


def write_state_csv(path, s: ChainState):
    write_csv(path, ["n", "u", "v"], [range(s.n_particles), s.u, s.v])


def read_state_csv(path) -> ChainState:
    n, u, v = read_csv(path, ["n", "u", "v"], [int, float, float])
    if n != list(range(len(n))):
        raise FormatError(f"{path}: particle indices must be 0..N-1 in order")
    return ChainState(np.array(u), np.array(v), 0.0)


def write_trajectory_csv(path, tr: Trajectory):
    """Long format: one row per (record, particle)."""
    u = np.asarray(tr.displacements)
    v = np.asarray(tr.velocities)
    n_rec, n_part = u.shape
    t = np.repeat(np.asarray(tr.times), n_part)
    n = np.tile(np.arange(n_part), n_rec)
    write_csv(path, ["t", "n", "u", "v"], [t, n, u.ravel(), v.ravel()])


def read_trajectory_csv(path, dt: float) -> Trajectory:
    t, n, u, v = read_csv(path, ["t", "n", "u", "v"], [float, int, float, float])
    n_part = max(n) + 1 if n else 0
    if n_part == 0 or len(n) % n_part:
        raise FormatError(f"{path}: ragged trajectory")
    tr = Trajectory(dt=dt)
    u = np.array(u).reshape(-1, n_part)
    v = np.array(v).reshape(-1, n_part)
    tr.times = list(np.array(t)[::n_part])
    tr.displacements = list(u)
    tr.velocities = list(v)
    return tr


def write_trajectory_json(path, tr: Trajectory):
    write_json(
        path,
        {
            "dt": tr.dt,
            "times": [float(t) for t in tr.times],
            "u": np.asarray(tr.displacements).tolist(),
            "v": np.asarray(tr.velocities).tolist(),
            "energy": [float(e) for e in tr.energy],
        },
    )


def read_trajectory_json(path) -> Trajectory:
    d = read_json(path)
    try:
        return Trajectory(
            dt=float(d["dt"]),
            times=[float(t) for t in d["times"]],
            displacements=[np.array(row, dtype=float) for row in d["u"]],
            velocities=[np.array(row, dtype=float) for row in d["v"]],
            energy=[float(e) for e in d["energy"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: not a trajectory: {exc}") from exc


def write_energy_csv(path, tr: Trajectory):
    write_csv(path, ["t", "E"], [tr.times, tr.energy])


def read_energy_csv(path):
    t, e = read_csv(path, ["t", "E"])
    return np.array(t), np.array(e)


def write_dispersion(path_csv, curve: DispersionCurve, sidecar=None):
    """CSV ``k,lambda,omega`` plus a JSON sidecar with the kernel provenance."""
    write_csv(path_csv, ["k", "lambda", "omega"], [curve.k, curve.lambda_, curve.omega])
    sidecar = sidecar or os.path.splitext(path_csv)[0] + ".json"
    write_json(sidecar, {"kernel_id": curve.kernel_id, "kernel": curve.kernel, "n_points": int(curve.k.size)})
    return sidecar


def read_dispersion(path_csv, sidecar=None) -> DispersionCurve:
    k, lam, omega = read_csv(path_csv, ["k", "lambda", "omega"])
    meta = read_json(sidecar or os.path.splitext(path_csv)[0] + ".json")
    return DispersionCurve(np.array(k), np.array(lam), np.array(omega), meta["kernel_id"], meta["kernel"])


def write_probe_csv(path, rows):
    write_csv(path, ["M", "max_slope"], [[m for m, _ in rows], [s for _, s in rows]])


def read_probe_csv(path):
    m, s = read_csv(path, ["M", "max_slope"], [int, float])
    return list(zip(m, s))
