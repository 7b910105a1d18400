"""Command-line front end.

Usage::

    fractal-chain simulate    --config run.ini --out results/
    fractal-chain dispersion  --config run.ini --out results/ --measure
    fractal-chain weierstrass --set weierstrass.b=0.7 --out results/
    fractal-chain boxdim      --input graph.csv --out results/

Configuration is an INI file with the sections ``[kernel]``, ``[chain]``,
``[sim]``, ``[dispersion]``, ``[weierstrass]``, ``[boxdim]`` and ``[output]``.
Values given with ``--set section.key=value`` or a dedicated flag override
the file, and the file overrides the built-in defaults.

Exit codes: 0 success, 2 configuration or input error, 3 divergence
(partial output kept), 4 box-count fit below r**2 = 0.98 (results still
written).
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import time

import numpy as np

from . import io
from .chain import (
    SimConfig,
    check_stability,
    init_plane_wave,
    init_random,
    run,
    shadow_energy,
)
from .dispersion import (
    measure_mode_frequency,
    omega_max,
    omega_of_k,
    ring_wavenumbers,
    sample_dispersion,
    verlet_frequency,
)
from .errors import DivergenceError, FractalChainError, ParameterError
from .fractal_functions import (
    PlanarGraph,
    WeierstrassParams,
    box_counting_dimension,
    geometric_scales,
    weierstrass_eval,
    weierstrass_tail_bound,
)
from .interaction import build_kernel, family_from_dict, validate_kernel_for_ring

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_POOR_FIT = 4
MIN_R_SQUARED = 0.98

DEFAULTS = {
    "kernel": {"family": "nearest", "c": "1.0", "h": "1.0"},
    "chain": {"n": "64", "init": "mode", "mode": "1", "amplitude": "1.0"},
    "sim": {"dt_factor": "0.1", "n_steps": "1000", "record_every": "1"},
    "dispersion": {
        "k_min": "0.0",
        "k_max": str(math.pi),
        "n_points": "257",
        "measure_modes": "1,8,16",
        "measure_dt_factor": "0.05",
        "measure_periods": "8",
    },
    "weierstrass": {"a": "3", "b": "0.5", "n_max": "60", "x_min": "0.0", "x_max": "1.0", "n_samples": "1001"},
    "boxdim": {"eps_max": "0.125", "eps_min": "0.001953125", "n_scales": "7", "n_samples": "200001"},
    "output": {"dir": ".", "format": "csv", "plot_script": "false"},
}


class ConfigError(FractalChainError, ValueError):
    pass


def load_config(path=None, overrides=()) -> configparser.ConfigParser:
    """Defaults, then the file at ``path``, then ``section.key=value`` overrides."""
    cfg = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cfg.read_dict(DEFAULTS)
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, encoding="utf-8") as fh:
                cfg.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().partition(".")
        if not (sep and dot and section and option):
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        if not cfg.has_section(section):
            cfg.add_section(section)
        cfg.set(section, option, value.strip())
    return cfg


def _get(cfg, section, key, typ=str):
    try:
        raw = cfg.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError) as exc:
        raise ConfigError(f"missing [{section}] {key}") from exc
    try:
        if typ is bool:
            return cfg.getboolean(section, key)
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc


def _int_list(text):
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def kernel_from_config(cfg):
    spec = dict(cfg.items("kernel"))
    return build_kernel(family_from_dict(spec), _get(cfg, "kernel", "c", float), _get(cfg, "kernel", "h", float))


def _threads():
    raw = os.environ.get("FRACTAL_CHAIN_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"FRACTAL_CHAIN_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("FRACTAL_CHAIN_THREADS must be >= 0")
    return n


def _out_dir(cfg):
    out = _get(cfg, "output", "dir")
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return out


def _format(cfg):
    f = _get(cfg, "output", "format").lower()
    if f not in ("csv", "json"):
        raise ConfigError(f"output format must be csv or json, got {f!r}")
    return f


def _summary(**fields):
    print(json.dumps(fields, sort_keys=True))


_PLOT_TEMPLATE = '''"""Plot {name}. Generated file; edit freely."""
import csv
import matplotlib.pyplot as plt

with open({path!r}, newline="") as fh:
    rows = list(csv.DictReader(fh))
plt.plot([float(r[{x!r}]) for r in rows], [float(r[{y!r}]) for r in rows], lw=0.5)
plt.xlabel({x!r})
plt.ylabel({y!r})
plt.show()
'''


def _maybe_plot_script(cfg, out, data_file, x, y):
    if not _get(cfg, "output", "plot_script", bool):
        return None
    name = os.path.splitext(os.path.basename(data_file))[0]
    path = os.path.join(out, f"plot_{name}.py")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_PLOT_TEMPLATE.format(name=name, path=os.path.basename(data_file), x=x, y=y))
    return path


def _initial_state(cfg, seed):
    n = _get(cfg, "chain", "n", int)
    how = _get(cfg, "chain", "init").lower()
    amp = _get(cfg, "chain", "amplitude", float)
    if how == "mode":
        return init_plane_wave(n, _get(cfg, "chain", "mode", int), amp, _get(cfg, "kernel", "h", float))
    if how == "random":
        return init_random(n, seed, amp)
    if how == "file":
        return io.read_state_csv(_get(cfg, "chain", "state_file"))
    raise ConfigError(f"[chain] init must be mode, random or file, got {how!r}")


def _time_step(cfg, kernel, n):
    wmax = omega_max(kernel, n)
    if cfg.has_option("sim", "dt"):
        dt = _get(cfg, "sim", "dt", float)
    else:
        dt = _get(cfg, "sim", "dt_factor", float) / wmax
    check_stability(kernel, n, dt)
    return dt


def cmd_simulate(cfg, seed=0) -> int:
    kernel = kernel_from_config(cfg)
    s0 = _initial_state(cfg, seed)
    dt = _time_step(cfg, kernel, s0.n_particles)
    sim = SimConfig(dt, _get(cfg, "sim", "n_steps", int), _get(cfg, "sim", "record_every", int))
    out, fmt = _out_dir(cfg), _format(cfg)
    warnings = validate_kernel_for_ring(kernel, s0.n_particles)

    started = time.perf_counter()
    status = EXIT_OK
    try:
        tr = run(kernel, s0, sim)
    except DivergenceError as exc:
        tr, status = exc.trajectory, EXIT_DIVERGED
        print(f"error: {exc}", file=sys.stderr)
    wall = time.perf_counter() - started

    files = []
    if fmt == "csv":
        files.append(os.path.join(out, "trajectory.csv"))
        io.write_trajectory_csv(files[-1], tr)
    else:
        files.append(os.path.join(out, "trajectory.json"))
        io.write_trajectory_json(files[-1], tr)
    files.append(os.path.join(out, "energy.csv"))
    io.write_energy_csv(files[-1], tr)
    plot = _maybe_plot_script(cfg, out, files[-1], "t", "E")
    if plot:
        files.append(plot)

    shadow0 = shadow_energy(kernel, s0, dt)
    shadow1 = shadow_energy(kernel, tr.final_state, dt)
    _summary(
        command="simulate",
        status=status,
        steps=sim.n_steps if status == EXIT_OK else None,
        records=len(tr),
        dt=dt,
        dt_omega_max=dt * omega_max(kernel, s0.n_particles),
        energy_drift=tr.relative_energy_drift(),
        shadow_energy_drift=abs(shadow1 - shadow0) / shadow0 if shadow0 else 0.0,
        warnings=warnings,
        files=files,
        threads=_threads(),
        wall_time_s=round(wall, 6),
    )
    return status


def cmd_dispersion(cfg, measure=False) -> int:
    kernel = kernel_from_config(cfg)
    n_points = _get(cfg, "dispersion", "n_points", int)
    if n_points < 1:
        raise ConfigError("dispersion grid is empty (n_points < 1)")
    grid = np.linspace(_get(cfg, "dispersion", "k_min", float), _get(cfg, "dispersion", "k_max", float), n_points)
    curve = sample_dispersion(kernel, grid)
    out, fmt = _out_dir(cfg), _format(cfg)

    files = []
    if fmt == "csv":
        files.append(os.path.join(out, "dispersion.csv"))
        files.append(io.write_dispersion(files[0], curve))
    else:
        files.append(os.path.join(out, "dispersion.json"))
        io.write_json(
            files[0],
            {
                "k": curve.k.tolist(),
                "lambda": curve.lambda_.tolist(),
                "omega": curve.omega.tolist(),
                "kernel_id": curve.kernel_id,
                "kernel": curve.kernel,
            },
        )
    plot = _maybe_plot_script(cfg, out, files[0], "k", "omega") if fmt == "csv" else None
    if plot:
        files.append(plot)

    summary = {"command": "dispersion", "status": EXIT_OK, "n_points": n_points, "kernel_id": curve.kernel_id}
    if measure:
        rows = _measure_modes(cfg, kernel)
        path = os.path.join(out, "measured.csv")
        io.write_csv(path, ["j", "k", "omega_analytic", "omega_measured", "rel_error"], list(zip(*rows)))
        files.append(path)
        summary["max_rel_error"] = max(r[-1] for r in rows)
    summary.update(files=files, threads=_threads())
    _summary(**summary)
    return EXIT_OK


def _measure_modes(cfg, kernel):
    n = _get(cfg, "chain", "n", int)
    modes = _int_list(_get(cfg, "dispersion", "measure_modes"))
    periods = _get(cfg, "dispersion", "measure_periods", float)
    dt = _get(cfg, "dispersion", "measure_dt_factor", float) / omega_max(kernel, n)
    ks = ring_wavenumbers(n, kernel.h)
    rows = []
    for j in modes:
        state = init_plane_wave(n, j, 1.0, kernel.h)
        w = omega_of_k(kernel, ks[j])
        if w == 0.0:
            n_steps = 16
        else:
            n_steps = int(math.ceil(periods * 2.0 * math.pi / (float(verlet_frequency(w, dt)) * dt)))
        tr = run(kernel, state, SimConfig(dt, n_steps, 1))
        wm = measure_mode_frequency(tr, j)
        rel = abs(wm - w) / w if w > 0 else abs(wm)
        rows.append((j, ks[j], w, wm, rel))
    return rows


def cmd_weierstrass(cfg) -> int:
    p = WeierstrassParams(
        _get(cfg, "weierstrass", "a", int), _get(cfg, "weierstrass", "b", float), _get(cfg, "weierstrass", "n_max", int)
    )
    n = _get(cfg, "weierstrass", "n_samples", int)
    if n < 1:
        raise ConfigError("n_samples must be >= 1")
    x = np.linspace(_get(cfg, "weierstrass", "x_min", float), _get(cfg, "weierstrass", "x_max", float), n)
    w = np.atleast_1d(weierstrass_eval(p, x))
    out, fmt = _out_dir(cfg), _format(cfg)
    header = {"a": p.a, "b": p.b, "n_max": p.n_max, "tail_bound": weierstrass_tail_bound(p), "n_samples": n}

    files = []
    if fmt == "csv":
        files.append(os.path.join(out, "weierstrass.csv"))
        io.write_csv(files[0], ["x", "W"], [x, w])
        files.append(os.path.join(out, "weierstrass.json"))
        io.write_json(files[1], header)
        plot = _maybe_plot_script(cfg, out, files[0], "x", "W")
        if plot:
            files.append(plot)
    else:
        files.append(os.path.join(out, "weierstrass.json"))
        io.write_json(files[0], dict(header, x=x.tolist(), W=w.tolist()))
    _summary(command="weierstrass", status=EXIT_OK, tail_bound=header["tail_bound"], files=files)
    return EXIT_OK


def cmd_boxdim(cfg, input_path=None) -> int:
    if cfg.has_option("boxdim", "scales"):
        scales = [float(s) for s in _get(cfg, "boxdim", "scales").split(",") if s.strip()]
    else:
        scales = geometric_scales(
            _get(cfg, "boxdim", "eps_max", float), _get(cfg, "boxdim", "eps_min", float), _get(cfg, "boxdim", "n_scales", int)
        )
    if len(scales) < 4:
        raise ConfigError(f"box counting needs at least 4 scales, got {len(scales)}")

    input_path = input_path or (cfg.get("boxdim", "input") if cfg.has_option("boxdim", "input") else None)
    if input_path:
        g = io.read_graph_csv(input_path)
        source = os.path.basename(input_path)
    else:
        p = WeierstrassParams(
            _get(cfg, "weierstrass", "a", int), _get(cfg, "weierstrass", "b", float), _get(cfg, "weierstrass", "n_max", int)
        )
        g = PlanarGraph.from_function(
            lambda x: weierstrass_eval(p, x),
            _get(cfg, "weierstrass", "x_min", float),
            _get(cfg, "weierstrass", "x_max", float),
            _get(cfg, "boxdim", "n_samples", int),
        )
        source = f"weierstrass(a={p.a}, b={p.b!r}, n_max={p.n_max})"

    result = box_counting_dimension(g, scales)
    out = _out_dir(cfg)
    path = os.path.join(out, "boxdim.json")
    io.write_boxcount_json(path, result)
    status = EXIT_OK if result.r_squared >= MIN_R_SQUARED else EXIT_POOR_FIT
    if status != EXIT_OK:
        print(f"warning: regression r^2 = {result.r_squared:.4f} < {MIN_R_SQUARED}", file=sys.stderr)
    _summary(
        command="boxdim",
        status=status,
        source=source,
        dimension=result.dimension,
        r_squared=result.r_squared,
        files=[path],
    )
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI configuration file")
    common.add_argument("--out", help="output directory (overrides [output] dir)")
    common.add_argument("--format", choices=["csv", "json"], help="data file format")
    common.add_argument("--seed", type=int, default=0, help="seed for random initial states")
    common.add_argument(
        "--set", action="append", default=[], metavar="SECTION.KEY=VALUE", help="override one config value"
    )
    common.add_argument("--plot-script", action="store_true", help="also write a matplotlib script for the data")

    parser = argparse.ArgumentParser(prog="fractal-chain", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="integrate the chain and write the trajectory")
    p.add_argument("--steps", type=int, help="number of Verlet steps")
    p.add_argument("--dt", type=float, help="time step (default: dt_factor / omega_max)")
    p.add_argument("--mode", type=int, help="plane-wave mode index for init = mode")

    p = sub.add_parser("dispersion", parents=[common], help="sample the dispersion law")
    p.add_argument("--measure", action="store_true", help="also measure mode frequencies by simulation")
    p.add_argument("--n-points", type=int, help="number of grid points")

    sub.add_parser("weierstrass", parents=[common], help="sample the Weierstrass function")

    p = sub.add_parser("boxdim", parents=[common], help="estimate a graph's box-counting dimension")
    p.add_argument("--input", help="two-column x,y CSV (default: generate W(x))")
    p.add_argument("--scales", help="comma-separated box sizes, descending")
    return parser


def _flag_overrides(args):
    pairs = []
    if args.out is not None:
        pairs.append(f"output.dir={args.out}")
    if args.format is not None:
        pairs.append(f"output.format={args.format}")
    if args.plot_script:
        pairs.append("output.plot_script=true")
    for flag, key in (
        ("steps", "sim.n_steps"),
        ("dt", "sim.dt"),
        ("mode", "chain.mode"),
        ("n_points", "dispersion.n_points"),
        ("scales", "boxdim.scales"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            pairs.append(f"{key}={value}")
    return pairs


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads()
        cfg = load_config(args.config, list(args.set) + _flag_overrides(args))
        if args.command == "simulate":
            return cmd_simulate(cfg, seed=args.seed)
        if args.command == "dispersion":
            return cmd_dispersion(cfg, measure=args.measure)
        if args.command == "weierstrass":
            return cmd_weierstrass(cfg)
        return cmd_boxdim(cfg, input_path=args.input)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (FractalChainError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
