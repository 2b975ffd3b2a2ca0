"""Tests for turning-angle curves, quadrature and winding numbers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

from src.curve_family import circle, straight_line
from src.curve_kernel import (
    LoopSamples,
    RigidMotion,
    TurningCurve,
    WindingError,
    endpoint_norm,
    max_radius,
    normalize,
    position,
    theta_rate,
    require_normalized,
    total_turning,
    turning_multiple,
    winding_number,
)


def unit_circle(count=256, reverse=False):
    z = np.exp(2j * np.pi * np.linspace(0.0, 1.0, count + 1))
    if reverse:
        z = z[::-1]
    return LoopSamples.from_complex(z, np.linspace(0.0, 1.0, count + 1))


class TestTheta:
    def test_anchored_fourier_starts_at_zero(self):
        curve = TurningCurve.from_fourier(1.0, 1, [(0.5, 2.0, 0.7)], anchored=True)
        assert curve.theta_at(0.0) == 0.0
        assert curve.normalized

    def test_normalize_subtracts_start_angle(self):
        curve = TurningCurve.from_fourier(1.0, 1, [(0.5, 2.0, 0.7)])
        assert not curve.normalized
        fixed = normalize(curve)
        assert fixed.theta_at(0.0) == 0.0
        assert fixed.theta_at(0.3) == pytest.approx(curve.theta_at(0.3) - 0.5 * math.sin(0.7))

    def test_require_normalized_rejects_raw_curve(self):
        with pytest.raises(ValueError, match="normalized"):
            require_normalized(TurningCurve.from_fourier(1.0, 1, [(0.5, 2.0, 0.7)]))

    def test_integer_frequencies_give_exact_turning(self):
        curve = TurningCurve.from_fourier(1.0, -2, [(0.4, 3.0, 1.1), (0.2, 1.0, 0.3)], anchored=True)
        assert total_turning(curve) == -2 * 2.0 * math.pi
        assert turning_multiple(curve) == -2

    def test_extra_turn_has_no_multiple(self):
        curve = TurningCurve.from_samples(1.0, np.linspace(0.0, 2.0 * math.pi + 0.3, 129))
        assert total_turning(curve) == pytest.approx(2.0 * math.pi + 0.3)
        assert turning_multiple(curve) is None

    def test_fractional_frequency_turning_from_formula(self):
        curve = TurningCurve.from_fourier(1.0, 1, [(0.5, 0.25, 0.0)])
        assert total_turning(curve) == pytest.approx(2.0 * math.pi + 0.5)
        assert turning_multiple(curve) is None

    def test_straight_line_has_multiple_zero(self):
        assert turning_multiple(straight_line()) == 0

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="at least"):
            TurningCurve.from_samples(1.0, np.zeros(10))

    def test_samples_must_be_a_continuous_lift(self):
        values = np.zeros(65)
        values[30:] = 4.0
        with pytest.raises(ValueError, match="continuous lift"):
            TurningCurve.from_samples(1.0, values)

    def test_speed_must_be_positive(self):
        with pytest.raises(ValueError, match="speed"):
            TurningCurve.from_fourier(0.0, 1)


class TestQuadrature:
    def test_circle_positions(self):
        curve = circle()
        assert position(curve, 0.5) == pytest.approx([0.0, 1.0 / math.pi], abs=1e-6)
        assert position(curve, 0.25) == pytest.approx([0.5 / math.pi, 0.5 / math.pi], abs=1e-6)

    def test_circle_is_closed(self):
        assert endpoint_norm(circle()) < 1e-12
        assert endpoint_norm(circle(turns=3)) < 1e-12

    def test_straight_line(self):
        line = straight_line(speed=2.0)
        assert position(line, 0.3) == pytest.approx([0.6, 0.0], abs=1e-12)
        assert position(line, 1.0) == pytest.approx([2.0, 0.0], abs=1e-12)

    def test_parameter_out_of_range(self):
        with pytest.raises(ValueError, match="lie in"):
            position(circle(), 1.5)

    def test_max_radius_of_circle_is_its_diameter(self):
        assert max_radius(circle()) == pytest.approx(1.0 / math.pi, abs=1e-6)

    @pytest.mark.parametrize("i, j", [(0, 256), (37, 101), (128, 129), (200, 256)])
    def test_position_is_additive_over_subintervals(self, wobbly, i, j):
        table = wobbly.table(256)
        nodes = np.arange(i, j + 1) / 256
        chord = wobbly.speed * trapezoid(np.exp(1j * table.theta_at(nodes)), nodes)
        assert abs(table.position(j / 256) - table.position(i / 256) - chord) <= 1e-12

    def test_constant_speed(self, wobbly):
        h = 1e-5
        rng = np.random.default_rng(3)
        for s in rng.uniform(h, 1.0 - h, 100):
            tangent = (position(wobbly, s + h) - position(wobbly, s - h)) / (2.0 * h)
            assert abs(np.linalg.norm(tangent) / wobbly.speed - 1.0) <= 1e-3

    def test_positions_are_continuous_across_nodes(self, wobbly):
        table = wobbly.table(256)
        node = 100 / 256
        left, right = table.position(node - 1e-12), table.position(node + 1e-12)
        assert abs(right - left) < 1e-10

    def test_theta_rate(self, wobbly):
        # 2*pi + 0.9 * 4*pi at s = 0
        assert theta_rate(wobbly) == pytest.approx(2.0 * math.pi * 2.8, rel=1e-4)
        assert theta_rate(straight_line()) == 0.0

    def test_speed_scales_positions(self, wobbly):
        fast = TurningCurve(3.0, wobbly.theta)
        assert position(fast, 0.7) == pytest.approx(3.0 * position(wobbly, 0.7), abs=1e-12)


class TestWindingNumber:
    def test_unit_circle_about_origin(self):
        assert winding_number(unit_circle(), (0.0, 0.0)) == 1

    def test_reversed_orientation_negates(self):
        assert winding_number(unit_circle(reverse=True), (0.0, 0.0)) == -1

    def test_outside_point(self):
        assert winding_number(unit_circle(), (3.0, 0.5)) == 0

    def test_invariant_under_cyclic_rotation(self):
        z = unit_circle().as_complex()[:-1]
        rotated = np.roll(z, 37)
        loop = LoopSamples.from_complex(np.append(rotated, rotated[0]), np.arange(z.size + 1))
        assert winding_number(loop, (0.2, -0.1)) == 1

    def test_point_on_loop(self):
        with pytest.raises(WindingError, match="lies on the loop"):
            winding_number(unit_circle(), (1.0, 0.0))

    def test_coarse_loop_is_rejected(self):
        z = np.exp(2j * np.pi * np.array([0.0, 1 / 3, 2 / 3, 1.0]))
        with pytest.raises(WindingError, match="resample"):
            winding_number(LoopSamples.from_complex(z, np.arange(4)), (0.0, 0.0))

    def test_open_loop_is_rejected(self):
        with pytest.raises(ValueError, match="not closed"):
            LoopSamples(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]), np.arange(3))

    def test_on_loop_threshold_scales(self):
        z = 1e6 * np.exp(2j * np.pi * np.linspace(0.0, 1.0, 257))
        loop = LoopSamples.from_complex(z, np.arange(257))
        point = (1e6 - 1e-7, 0.0)
        with pytest.raises(WindingError, match="lies on the loop"):
            winding_number(loop, point, scale=1e6)
        assert winding_number(loop, (0.0, 0.0), scale=1e6) == 1

    def test_double_circle(self):
        z = np.exp(4j * np.pi * np.linspace(0.0, 1.0, 513))
        assert winding_number(LoopSamples.from_complex(z, np.arange(513)), (0.1, 0.1)) == 2


class TestRigidMotion:
    @settings(deadline=None)
    @given(
        a=st.floats(-10, 10),
        b=st.floats(-10, 10),
        sx=st.floats(-5, 5),
        sy=st.floats(-5, 5),
        px=st.floats(-5, 5),
        py=st.floats(-5, 5),
    )
    def test_then_applies_self_first(self, a, b, sx, sy, px, py):
        first = RigidMotion(a, complex(sx, sy))
        second = RigidMotion(b, complex(sy, sx))
        z = complex(px, py)
        assert abs(first.then(second).apply(z) - second.apply(first.apply(z))) < 1e-9

    def test_preserves_distances(self):
        motion = RigidMotion(1.3, 2 - 1j)
        p, q = 0.3 + 0.4j, -1.0 + 2.0j
        assert abs(motion.apply(p) - motion.apply(q)) == pytest.approx(abs(p - q))
