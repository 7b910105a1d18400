import numpy as np
import pytest

from fractal_chain import io
from fractal_chain.chain import SimConfig, init_random, run
from fractal_chain.dispersion import sample_dispersion
from fractal_chain.errors import FormatError
from fractal_chain.fractal_functions import PlanarGraph, box_counting_dimension
from fractal_chain.interaction import WMFractal, build_kernel

KERNEL = build_kernel(WMFractal(2, 1.5, 3), 1.1, 0.9)


def test_float_format_round_trips(rng):
    for x in rng.normal(size=1000) * 10.0 ** rng.integers(-300, 300, 1000):
        assert float(io.fmt(x)) == x


def test_graph_csv_round_trip(tmp_path, rng):
    g = PlanarGraph(np.sort(rng.uniform(0, 1, 500)), rng.normal(size=500))
    path = tmp_path / "g.csv"
    io.write_graph_csv(path, g)
    text = path.read_bytes()
    assert text.startswith(b"x,y\n") and b"\r" not in text
    assert io.read_graph_csv(path) == g


def test_boxcount_json_round_trip(tmp_path):
    g = PlanarGraph(np.linspace(0, 1, 300), np.sin(np.linspace(0, 30, 300)))
    r = box_counting_dimension(g, [0.25, 0.125, 0.0625, 0.03125, 0.015625])
    path = tmp_path / "r.json"
    io.write_boxcount_json(path, r)
    assert set(io.read_json(path)) == {"scales", "counts", "dimension", "r_squared"}
    assert io.read_boxcount_json(path) == r


def test_kernel_json_round_trip(tmp_path):
    path = tmp_path / "k.json"
    io.write_kernel_json(path, KERNEL)
    assert io.read_json(path)["terms"][1] == [2, KERNEL.terms[1][1]]
    assert io.read_kernel_json(path) == KERNEL


def test_state_csv_round_trip(tmp_path):
    s = init_random(12, 7)
    io.write_state_csv(tmp_path / "s.csv", s)
    assert io.read_state_csv(tmp_path / "s.csv") == s


def test_trajectory_round_trips(tmp_path):
    tr = run(KERNEL, init_random(6, 1), SimConfig(0.05, 20, 5))
    io.write_trajectory_csv(tmp_path / "t.csv", tr)
    back = io.read_trajectory_csv(tmp_path / "t.csv", tr.dt)
    assert back.times == tr.times
    assert all(np.array_equal(a, b) for a, b in zip(back.displacements, tr.displacements))
    assert all(np.array_equal(a, b) for a, b in zip(back.velocities, tr.velocities))

    io.write_trajectory_json(tmp_path / "t.json", tr)
    back = io.read_trajectory_json(tmp_path / "t.json")
    assert back.energy == tr.energy and back.times == tr.times
    assert all(np.array_equal(a, b) for a, b in zip(back.displacements, tr.displacements))

    io.write_energy_csv(tmp_path / "e.csv", tr)
    t, e = io.read_energy_csv(tmp_path / "e.csv")
    assert list(t) == tr.times and list(e) == tr.energy


def test_dispersion_round_trip(tmp_path):
    curve = sample_dispersion(KERNEL, np.linspace(0, np.pi, 40))
    sidecar = io.write_dispersion(tmp_path / "d.csv", curve)
    assert io.read_json(sidecar)["kernel_id"] == KERNEL.kernel_id
    assert io.read_dispersion(tmp_path / "d.csv") == curve


def test_probe_csv_round_trip(tmp_path):
    rows = [(4, 1.25), (5, 1.875000000000001)]
    io.write_probe_csv(tmp_path / "p.csv", rows)
    assert io.read_probe_csv(tmp_path / "p.csv") == rows


@pytest.mark.parametrize(
    "content",
    ["a,b\n1,2\n", "x,y\n1,2,3\n", "x,y\n1,abc\n", ""],
)
def test_malformed_graph_csv(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(FormatError):
        io.read_graph_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        io.read_graph_csv(tmp_path / "nope.csv")
