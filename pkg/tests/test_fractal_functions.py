import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractal_chain.errors import GeometryError, ParameterError, ProtocolError
from fractal_chain.fractal_functions import (
    PlanarGraph,
    WeierstrassParams,
    WMParams,
    box_counting_dimension,
    geometric_scales,
    graph_dimension,
    weierstrass_eval,
    weierstrass_order_for_tolerance,
    weierstrass_tail_bound,
    wm_cosine_eval,
    wm_tail_bound,
    wm_window_for_tolerance,
)

# Frozen from 50-digit mpmath term-by-term sums (see _mp_weierstrass / _mp_wm below).
W_A3_B05_N10_AT_037 = 0.02103998633923438489783256
WM_A2_D15_M30_40_AT_1 = 3.905410094813760281348295

FINE_SCALES = [2.0**-k for k in range(3, 10)]


def _mp_weierstrass(a, b, n_max, x):
    with mpmath.workdps(50):
        x = mpmath.mpf(x)
        return mpmath.fsum(mpmath.mpf(b) ** n * mpmath.cos(a**n * mpmath.pi * x) for n in range(n_max + 1))


def _mp_wm(a, d, ms, z):
    with mpmath.workdps(50):
        a, d, z = mpmath.mpf(a), mpmath.mpf(d), mpmath.mpf(z)
        return mpmath.fsum(a ** ((d - 2) * m) * (1 - mpmath.cos(a**m * z)) for m in ms)


def _weierstrass_graph(a, b, n=200_001, n_max=60):
    p = WeierstrassParams(a, b, n_max)
    return PlanarGraph.from_function(lambda x: weierstrass_eval(p, x), 0.0, 1.0, n)


class TestWeierstrassEval:
    def test_at_zero_is_geometric_sum(self):
        assert weierstrass_eval(WeierstrassParams(3, 0.5, 60), 0.0) == pytest.approx(2.0, abs=1e-12)

    def test_at_one_all_cosines_are_minus_one(self):
        assert weierstrass_eval(WeierstrassParams(3, 0.5, 60), 1.0) == pytest.approx(-2.0, abs=1e-12)

    def test_matches_high_precision_oracle(self):
        got = weierstrass_eval(WeierstrassParams(3, 0.5, 10), 0.37)
        assert abs(got - W_A3_B05_N10_AT_037) <= 1e-12

    @pytest.mark.parametrize("x", [-3.7, -0.123, 0.5, 0.999, 7.25, 1e-9])
    def test_large_order_against_oracle(self, x):
        got = weierstrass_eval(WeierstrassParams(3, 0.7, 60), x)
        assert abs(got - float(_mp_weierstrass(3, 0.7, 60, x))) <= 1e-12

    def test_array_input(self):
        p = WeierstrassParams(2, 0.6, 20)
        xs = np.linspace(-1, 1, 11)
        out = weierstrass_eval(p, xs)
        assert out.shape == xs.shape
        assert np.array_equal(out, [weierstrass_eval(p, x) for x in xs])

    @pytest.mark.parametrize("b", [0.0, 1.0, -0.2, 1.5, float("nan")])
    def test_rejects_b_outside_unit_interval(self, b):
        with pytest.raises(ParameterError):
            WeierstrassParams(3, b, 10)

    @pytest.mark.parametrize("a", [1, 0, 2.5, True])
    def test_rejects_bad_base(self, a):
        with pytest.raises(ParameterError):
            WeierstrassParams(a, 0.5, 10)

    def test_fractal_flag_enforces_hardy_range(self):
        WeierstrassParams(3, 0.5, 10, fractal=True)
        WeierstrassParams(2, 0.5, 10, fractal=True)  # a*b == 1 is allowed
        with pytest.raises(ParameterError):
            WeierstrassParams(3, 0.3, 10, fractal=True)

    @given(k=st.integers(-512, 512), n_max=st.integers(0, 40))
    def test_period_two(self, k, n_max):
        p = WeierstrassParams(3, 0.5, n_max)
        x = k / 256.0
        assert weierstrass_eval(p, x + 2.0) == weierstrass_eval(p, x)


class TestWeierstrassTail:
    def test_examples(self):
        assert weierstrass_tail_bound(WeierstrassParams(3, 0.5, 9)) == pytest.approx(2.0**-9, rel=1e-15)
        # Everything after the n = 0 term: sum_{n>=1} 2**-n = 1.
        assert weierstrass_tail_bound(WeierstrassParams(3, 0.5, 0)) == pytest.approx(1.0, rel=1e-15)

    def test_against_partial_sum_of_discarded_terms(self):
        bound = weierstrass_tail_bound(WeierstrassParams(3, 0.9, 100))
        partial = math.fsum(0.9**n for n in range(101, 10**6 + 1))
        # The bound also covers terms past 10**6, which are below double resolution here.
        assert bound >= partial * (1 - 1e-15)
        assert bound == pytest.approx(partial, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(
        x=st.floats(-4, 4),
        b=st.floats(0.05, 0.95),
        n=st.integers(0, 30),
        extra=st.integers(1, 25),
    )
    def test_truncation_monotonicity(self, x, b, n, extra):
        short = WeierstrassParams(3, b, n)
        longer = WeierstrassParams(3, b, n + extra)
        diff = abs(weierstrass_eval(short, x) - weierstrass_eval(longer, x))
        assert diff <= weierstrass_tail_bound(short) + 1e-13

    def test_order_for_tolerance(self):
        p = weierstrass_order_for_tolerance(3, 0.5, 1e-10)
        assert weierstrass_tail_bound(p) <= 1e-10
        assert weierstrass_tail_bound(WeierstrassParams(3, 0.5, p.n_max - 1)) > 1e-10


class TestWMCosine:
    P = WMParams(2, 1.5, -30, 40)

    def test_zero(self):
        assert wm_cosine_eval(self.P, 0.0) == 0.0

    @pytest.mark.parametrize("z", [0.3, 1.0, 17.5, 1e-4])
    def test_even(self, z):
        assert wm_cosine_eval(self.P, z) == wm_cosine_eval(self.P, -z)

    def test_matches_high_precision_oracle(self):
        assert abs(wm_cosine_eval(self.P, 1.0) - WM_A2_D15_M30_40_AT_1) <= 1e-10

    def test_oracle_helper_reproduces_frozen_value(self):
        assert float(_mp_wm(2, 1.5, range(-30, 41), 1.0)) == pytest.approx(WM_A2_D15_M30_40_AT_1, rel=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(z=st.floats(-100, 100), d=st.floats(1.05, 1.95))
    def test_non_negative(self, z, d):
        assert wm_cosine_eval(WMParams(3, d, -10, 10), z) >= 0.0

    @pytest.mark.parametrize("d", [1.0, 2.0, 0.5, 2.5])
    def test_rejects_dimension_outside_open_interval(self, d):
        with pytest.raises(ParameterError):
            WMParams(2, d, -5, 5)

    def test_rejects_window_not_containing_zero(self):
        with pytest.raises(ParameterError):
            WMParams(2, 1.5, 1, 5)


class TestWMTail:
    def test_upper_tail_decays_by_weight_ratio(self):
        b1 = wm_tail_bound(WMParams(2, 1.5, -10, 30), 0.0)
        b2 = wm_tail_bound(WMParams(2, 1.5, -10, 31), 0.0)
        assert b2 / b1 == pytest.approx(2**-0.5, rel=1e-13)

    def test_zero_argument_has_no_lower_tail(self):
        p = WMParams(2, 1.5, -7, 12)
        expected = 2 * 2 ** (-0.5 * 13) / (1 - 2**-0.5)
        assert wm_tail_bound(p, 0.0) == pytest.approx(expected, rel=1e-14)

    def test_bounds_wide_window_remainder(self):
        p = WMParams(2, 1.5, -20, 30)
        outside = list(range(-200, -20)) + list(range(31, 201))
        remainder = float(_mp_wm(2, 1.5, outside, 1.0))
        assert wm_tail_bound(p, 1.0) >= remainder

    def test_window_for_tolerance(self):
        p = wm_window_for_tolerance(2, 1.5, 1e-9, 10.0)
        assert wm_tail_bound(p, 10.0) <= 1e-9
        assert p.m_lo < 0 < p.m_hi


class TestBoxCounting:
    def test_diagonal_segment(self):
        g = PlanarGraph(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        r = box_counting_dimension(g, [2.0**-k for k in range(2, 9)])
        assert r.dimension == pytest.approx(1.0, abs=0.05)

    def test_constant_function(self):
        g = PlanarGraph(np.linspace(0, 1, 1001), np.full(1001, 0.5))
        r = box_counting_dimension(g, [2.0**-k for k in range(2, 9)])
        assert r.dimension == pytest.approx(1.0, abs=0.05)
        assert list(r.counts) == [4, 8, 16, 32, 64, 128, 256]

    def test_segment_crossing_counts_every_cell(self):
        # Two samples only: point counting would see 2 cells, the segment meets 4 on the diagonal
        # (plus the boundary-touching neighbours of the conservative rule).
        g = PlanarGraph(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        r = box_counting_dimension(g, [0.5, 0.25, 0.125, 0.0625])
        assert r.counts[1] >= 4

    def test_weierstrass_graph_dimension(self):
        r = box_counting_dimension(_weierstrass_graph(3, 0.5), FINE_SCALES)
        assert r.dimension == pytest.approx(2 + math.log(0.5) / math.log(3), abs=0.1)

    def test_counts_grow_as_boxes_shrink(self):
        r = box_counting_dimension(_weierstrass_graph(3, 0.5, n=50_001, n_max=30), FINE_SCALES)
        assert all(n1 <= n2 for n1, n2 in zip(r.counts, r.counts[1:]))
        assert 0.0 <= r.r_squared <= 1.0

    def test_y_scaling_does_not_change_dimension_much(self):
        g = _weierstrass_graph(3, 0.5)
        doubled = PlanarGraph(g.x, 2.0 * g.y)
        d1 = box_counting_dimension(g, FINE_SCALES).dimension
        d2 = box_counting_dimension(doubled, FINE_SCALES).dimension
        assert d2 >= d1 - 0.1
        assert abs(d2 - d1) <= 0.1

    def test_estimator_orders_known_dimensions(self):
        pairs = [(3, 0.4), (3, 0.5), (3, 0.7)]
        closed = [graph_dimension(a, b) for a, b in pairs]
        est = [box_counting_dimension(_weierstrass_graph(a, b), FINE_SCALES).dimension for a, b in pairs]
        assert closed == sorted(closed)
        assert est[0] < est[1] < est[2]

    def test_needs_four_scales(self):
        g = PlanarGraph(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        with pytest.raises(ProtocolError):
            box_counting_dimension(g, [0.5, 0.25, 0.125])

    def test_scales_must_decrease(self):
        g = PlanarGraph(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        with pytest.raises(ProtocolError):
            box_counting_dimension(g, [0.1, 0.2, 0.05, 0.01])

    def test_degenerate_graphs_rejected(self):
        with pytest.raises(GeometryError):
            PlanarGraph(np.array([0.5, 0.5]), np.array([0.0, 1.0]))
        with pytest.raises(GeometryError):
            PlanarGraph(np.array([0.0]), np.array([0.0]))
        with pytest.raises(GeometryError):
            PlanarGraph(np.array([0.0, 1.0, 0.5]), np.zeros(3))

    def test_out_of_range_estimate_is_an_error(self):
        # Boxes far larger than the graph: N stays 1, slope 0.
        g = PlanarGraph(np.linspace(0, 1e-3, 10), np.zeros(10))
        with pytest.raises(GeometryError):
            box_counting_dimension(g, [1.0, 0.5, 0.25, 0.125])


def test_closed_form_dimension():
    assert graph_dimension(3, 0.5) == pytest.approx(1.3691, abs=5e-5)
    assert graph_dimension(2, 0.5) == pytest.approx(1.0)


def test_geometric_scales():
    s = geometric_scales(2.0**-3, 2.0**-9, 7)
    assert s == pytest.approx(FINE_SCALES, rel=1e-15)
