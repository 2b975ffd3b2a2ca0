"""Tests for splitting, regluing and the end point map."""

import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.curve_family import CurveFamily, straight_line
from src.curve_kernel import LoopSamples, TurningCurve, theta_rate, winding_number
from src.rearrange import (
    Arc,
    Cuts,
    EndpointMap,
    Perm,
    concat,
    e3_closed_form,
    endpoint_map,
    rearranged,
    split,
    tangent_mismatch,
)

TWO_CUT = Perm((1, 3, 2))


@st.composite
def perm_and_cuts(draw, max_k=6):
    k = draw(st.integers(min_value=2, max_value=max_k))
    values = draw(st.permutations(list(range(1, k + 1))))
    cuts = sorted(draw(st.lists(st.floats(0.0, 1.0), min_size=k - 1, max_size=k - 1)))
    return Perm(tuple(values)), Cuts(tuple(cuts))


class TestPermAndCuts:
    def test_parse(self):
        assert Perm.parse("2 5 1 6 4 3").values == (2, 5, 1, 6, 4, 3)

    def test_parse_rejects_non_permutation(self):
        with pytest.raises(ValueError, match="not a permutation"):
            Perm.parse("1 1 2")
        with pytest.raises(ValueError, match="cannot parse"):
            Perm.parse("1 x 2")

    def test_inverse(self):
        sigma = Perm((2, 5, 1, 6, 4, 3))
        inv = sigma.inverse()
        assert all(inv(sigma(i)) == i for i in range(1, 7))

    def test_cuts_must_be_nondecreasing(self):
        with pytest.raises(ValueError, match="c_1 <="):
            Cuts.of(0.6, 0.4)
        with pytest.raises(ValueError, match="c_1 <="):
            Cuts.of(-0.1, 0.4)

    def test_margin(self):
        assert Cuts.of(0.2, 0.7).margin == pytest.approx(0.2)
        assert Cuts.of(0.3, 0.3).margin == 0.0


class TestConcat:
    def test_straight_arcs_at_a_right_angle(self):
        flat = straight_line()
        upright = TurningCurve.from_samples(1.0, np.full(65, math.pi / 2))
        first = Arc.cut(flat.table(), 0.0, 0.5)
        second = Arc.cut(upright.table(), 0.5, 1.0)
        joined = concat(first, second)
        assert abs(joined.endpoint - 1.0) < 1e-12
        assert joined.exit_angle == pytest.approx(0.0)

    def test_speed_mismatch(self):
        a = Arc.cut(straight_line(1.0).table(), 0.0, 0.5)
        b = Arc.cut(straight_line(2.0).table(), 0.0, 0.5)
        with pytest.raises(ValueError, match="speed"):
            concat(a, b)

    def test_split_keeps_degenerate_arcs(self, wobbly):
        arcs = split(wobbly, Cuts.of(0.3, 0.3))
        assert [arc.degenerate for arc in arcs] == [False, True, False]
        assert arcs[1].entry_angle == pytest.approx(float(wobbly.theta_at(0.3)))


class TestRearranged:
    def test_identity_reproduces_curve_end(self, wobbly):
        end = wobbly.table().endpoint
        chain = rearranged(wobbly, Perm.identity(4), Cuts.of(0.1, 0.5, 0.8))
        assert abs(chain.endpoint - end) < 1e-12

    def test_chain_starts_at_origin_facing_east(self, m1_curve):
        chain = rearranged(m1_curve, Perm((3, 1, 2)), Cuts.of(0.2, 0.6))
        assert abs(chain.start) < 1e-15
        assert chain.entry_angle == pytest.approx(0.0, abs=1e-15)
        assert abs(chain.position(np.array([0.0]))[0]) < 1e-12

    def test_chain_positions_are_continuous(self, m1_curve):
        chain = rearranged(m1_curve, TWO_CUT, Cuts.of(0.25, 0.6))
        points = chain.sample(4001)
        assert np.max(np.abs(np.diff(points))) < 2.0 / 4000
        assert abs(points[-1] - chain.endpoint) < 1e-12

    def test_to_curve_resamples_the_chain(self, m1_curve):
        chain = rearranged(m1_curve, TWO_CUT, Cuts.of(0.25, 0.6))
        curve = chain.to_curve()
        assert curve.normalized
        assert abs(curve.table().endpoint - chain.endpoint) < 1e-5

    def test_dimension_mismatch(self, wobbly):
        with pytest.raises(ValueError, match="k=3"):
            rearranged(wobbly, TWO_CUT, Cuts.of(0.5))

    @settings(deadline=None, max_examples=60)
    @given(case=perm_and_cuts())
    def test_chord_sum_matches_explicit_chain(self, case):
        sigma, cuts = case
        curve = CurveFamily(3).fourier_curve(1)
        fast = endpoint_map(curve, sigma, cuts)
        slow = rearranged(curve, sigma, cuts).endpoint
        assert abs(complex(*fast) - slow) < 1e-10

    def test_small_cut_moves_give_small_end_point_moves(self, m2_curve):
        sigma = Perm((3, 1, 4, 2))
        rng = np.random.default_rng(11)
        base = np.sort(rng.random((200, 3)), axis=1)
        moved = np.sort(np.clip(base + rng.uniform(-1e-4, 1e-4, base.shape), 0.0, 1.0), axis=1)
        endpoints = EndpointMap(m2_curve, sigma)
        change = np.abs(endpoints(moved) - endpoints(base))
        band = 3 * sigma.k * m2_curve.speed * (1.0 + theta_rate(m2_curve)) * 1e-4
        assert np.max(change) <= band

    def test_batch_matches_single_evaluations(self, m2_curve):
        sigma = Perm((2, 4, 1, 3))
        rng = np.random.default_rng(5)
        batch = np.sort(rng.random((50, 3)), axis=1)
        values = EndpointMap(m2_curve, sigma)(batch)
        for row, value in zip(batch, values):
            single = endpoint_map(m2_curve, sigma, Cuts(tuple(row)))
            assert abs(complex(*single) - value) < 1e-12


class TestTwoCutClosedForm:
    def test_boundary_loop_is_a_rotated_end_point(self):
        family = CurveFamily(2024)
        ts = np.linspace(0.0, 1.0, 1024)
        for i in range(10):
            m = 1 + i % 3
            curve = family.fourier_curve(m)
            fast = EndpointMap(curve, TWO_CUT)(np.column_stack([np.zeros_like(ts), ts]))
            end = curve.table().endpoint
            closed = np.exp(-1j * curve.theta_at(ts)) * end
            assert np.max(np.abs(fast - closed)) <= 1e-6
            assert np.max(np.abs(np.abs(fast) - abs(end))) <= 1e-6
            loop = LoopSamples.from_complex(fast, ts)
            assert winding_number(loop, (0.0, 0.0)) == -m

    def test_closed_form_helper(self, m1_curve):
        value = e3_closed_form(m1_curve, 0.4)
        assert value == pytest.approx(endpoint_map(m1_curve, TWO_CUT, Cuts.of(0.0, 0.4)), abs=1e-12)

    def test_closed_form_needs_full_turns(self, tailed):
        with pytest.raises(ValueError, match="multiple of 2"):
            e3_closed_form(tailed, 0.4)

    def test_tangents_match_for_full_turns(self, m1_curve):
        chain = rearranged(m1_curve, TWO_CUT, Cuts.of(0.31, 0.77))
        assert tangent_mismatch(chain) <= 1e-12

    def test_every_arrangement_keeps_total_turning(self, m2_curve):
        cuts = Cuts.of(0.1, 0.35, 0.8)
        for values in permutations(range(1, 5)):
            chain = rearranged(m2_curve, Perm(values), cuts)
            assert chain.total_turning() == pytest.approx(4.0 * math.pi, abs=1e-12)
