import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fieldosc.core import (
    OscParams,
    block_propagator,
    composite_simpson,
    cumulative_simpson,
    cross_matrix,
    energy_form_2x2,
    energy_form_6x6,
    free_block_2x2,
    propagator_2x2,
    rotation_about_z,
)

finite_floats = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


class TestCrossMatrix:
    def test_axial_structure(self):
        b3 = 2.5
        expected = np.array([[0.0, -b3, 0.0], [b3, 0.0, 0.0], [0.0, 0.0, 0.0]])
        assert np.array_equal(cross_matrix((0.0, 0.0, b3)), expected)

    def test_zero_field(self):
        assert np.array_equal(cross_matrix((0, 0, 0)), np.zeros((3, 3)))

    def test_known_cross_product(self):
        # (1,2,3) x (4,5,6) = (-3, 6, -3), frozen from direct evaluation
        w = cross_matrix((1.0, 2.0, 3.0))
        assert np.allclose(w @ np.array([4.0, 5.0, 6.0]), [-3.0, 6.0, -3.0], atol=0)

    def test_antisymmetry_and_trace_bit_exact(self):
        w = cross_matrix((0.3, -1.7, 2.2))
        assert np.array_equal(w, -w.T)
        assert w.trace() == 0.0

    @given(b=st.tuples(finite_floats, finite_floats, finite_floats),
           x=st.tuples(finite_floats, finite_floats, finite_floats))
    def test_matches_numpy_cross(self, b, x):
        w = cross_matrix(b)
        assert np.allclose(w @ np.array(x), np.cross(b, x), atol=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            cross_matrix((np.inf, 0.0, 0.0))


class TestRotationAboutZ:
    def test_zero_angle_is_identity(self):
        assert np.array_equal(rotation_about_z(0.0), np.eye(3))

    def test_quarter_turn(self):
        expected = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        assert np.allclose(rotation_about_z(math.pi / 2), expected, atol=1e-15)

    @given(a=finite_floats, b=finite_floats)
    @settings(max_examples=50)
    def test_composition(self, a, b):
        lhs = rotation_about_z(a) @ rotation_about_z(b)
        assert np.allclose(lhs, rotation_about_z(a + b), atol=1e-12)

    @given(a=finite_floats)
    @settings(max_examples=50)
    def test_orthogonal_unit_determinant(self, a):
        r = rotation_about_z(a)
        assert np.max(np.abs(r.T @ r - np.eye(3))) <= 1e-14
        assert abs(np.linalg.det(r) - 1.0) <= 1e-14

    def test_symmetric_sine_variant_is_not_a_rotation(self):
        # regression guard: with +sin in both off-diagonal slots the block
        # is not orthogonal, which is why the antisymmetric generator is
        # the one we exponentiate
        a = 0.8
        c, s = math.cos(a), math.sin(a)
        bad = np.array([[c, s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        assert np.max(np.abs(bad.T @ bad - np.eye(3))) > 0.1


class TestPropagator2x2:
    def test_identity_at_zero_time(self):
        assert np.allclose(propagator_2x2(OscParams(1.0, 1.0), 0.0), np.eye(2), atol=0)

    def test_half_period(self):
        u = propagator_2x2(OscParams(1.0, 2.0), math.pi / 2)
        assert np.allclose(u, [[-1.0, 0.0], [0.0, -1.0]], atol=1e-15)

    def test_energy_form_invariance_spot(self):
        params = OscParams(1.0, 1.3)
        u = propagator_2x2(params, 0.7)
        h = energy_form_2x2(params)
        assert np.max(np.abs(u.T @ h @ u - h)) <= 1e-12

    @given(m=st.floats(0.2, 5.0), w=st.floats(0.0, 8.0), t=st.floats(-6.0, 6.0))
    @settings(max_examples=80)
    def test_symplectic_and_invariant(self, m, w, t):
        params = OscParams(m, w)
        u = propagator_2x2(params, t)
        assert abs(np.linalg.det(u) - 1.0) <= 1e-12
        h = energy_form_2x2(params)
        assert np.max(np.abs(u.T @ h @ u - h)) <= 1e-12

    def test_small_frequency_limit(self):
        m, t = 1.4, 2.0
        u = propagator_2x2(OscParams(m, 1e-6), t)
        assert np.max(np.abs(u - free_block_2x2(m, t))) <= 1e-5

    def test_zero_frequency_is_free_block(self):
        assert np.array_equal(
            propagator_2x2(OscParams(2.0, 0.0), 3.0), free_block_2x2(2.0, 3.0)
        )

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            OscParams(-1.0, 1.0)
        with pytest.raises(ValueError):
            OscParams(1.0, -0.5)
        with pytest.raises(ValueError):
            propagator_2x2(OscParams(1.0, 1.0), math.inf)


class TestBlockPropagator:
    def test_identity_at_zero_time(self):
        assert np.allclose(block_propagator(OscParams(1.0, 1.7), 0.0), np.eye(6), atol=0)

    @given(w=st.floats(0.0, 5.0), t=finite_floats, s=finite_floats)
    @settings(max_examples=60)
    def test_semigroup(self, w, t, s):
        params = OscParams(1.0, w)
        lhs = block_propagator(params, t + s)
        rhs = block_propagator(params, t) @ block_propagator(params, s)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_axial_free_motion(self):
        q3, p3, t = 0.7, -0.4, 1.9
        z = np.array([0.0, 0.0, 0.0, 0.0, q3, p3])
        out = block_propagator(OscParams(1.0, 2.0), t) @ z
        assert np.allclose(out, [0, 0, 0, 0, q3 + p3 * t, p3], atol=1e-15)

    @given(m=st.floats(0.3, 4.0), w=st.floats(0.0, 6.0), t=st.floats(-5.0, 5.0))
    @settings(max_examples=60)
    def test_six_dim_energy_form_invariance(self, m, w, t):
        params = OscParams(m, w)
        u = block_propagator(params, t)
        h = energy_form_6x6(params)
        assert np.max(np.abs(u.T @ h @ u - h)) <= 1e-12


class TestSimpson:
    def test_exact_on_cubic(self):
        x = np.linspace(0.0, 2.0, 11)
        vals = x**3 - 2 * x**2 + 0.5
        assert abs(composite_simpson(vals, x[1] - x[0]) - (4.0 - 16.0 / 3 + 1.0)) <= 1e-13

    def test_cumulative_matches_antiderivative(self):
        x = np.linspace(0.0, 3.0, 601)
        vals = np.sin(2.3 * x)
        got = cumulative_simpson(vals, x[1] - x[0])
        exact = (1.0 - np.cos(2.3 * x)) / 2.3
        assert np.max(np.abs(got - exact)) <= 1e-9

    def test_rejects_odd_panel_count(self):
        with pytest.raises(ValueError):
            composite_simpson(np.zeros(4), 0.1)
