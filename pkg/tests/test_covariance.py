"""Transformation-law tests: covector, contravariant vector, invariant scalar."""

import numpy as np
import pytest

import wavevel as wv


class TestAffineMap:
    def test_apply_invert_roundtrip(self):
        rng = np.random.default_rng(1)
        amap = wv.random_affine(rng, 3, max_condition=20.0)
        x = rng.standard_normal((10, 3))
        assert amap.invert(amap.apply(x)) == pytest.approx(x, rel=1e-12)

    def test_singular_rejected(self):
        with pytest.raises(ValueError, match="invertible"):
            wv.AffineMap(np.array([[1.0, 2.0], [2.0, 4.0]]))

    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError):
            wv.AffineMap(np.ones((2, 3)))
        with pytest.raises(ValueError):
            wv.AffineMap(np.eye(2), np.zeros(3))

    def test_inverse_residual(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            amap = wv.random_affine(rng, 2, max_condition=50.0)
            resid = np.abs(amap.matrix @ amap.inverse_matrix - np.eye(2)).max()
            assert resid <= 1e-12

    def test_random_affine_condition_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            amap = wv.random_affine(rng, 3, max_condition=50.0)
            assert np.linalg.cond(amap.matrix) <= 50.0 * (1 + 1e-9)


class TestTransforms:
    def test_identity(self):
        ident = wv.AffineMap.identity(2)
        w = np.array([1.2, -0.7])
        assert np.array_equal(wv.transform_covector(w, ident), w)
        assert np.array_equal(wv.transform_vector(w, ident), w)

    def test_diagonal_covector(self):
        amap = wv.AffineMap(np.diag([2.0, 3.0]))
        assert wv.transform_covector(np.array([1.0, 1.0]), amap) == pytest.approx([2.0, 3.0])

    def test_diagonal_vector(self):
        amap = wv.AffineMap(np.diag([2.0, 1.0]))
        assert wv.transform_vector(np.array([2.0, 0.0]), amap) == pytest.approx([1.0, 0.0])

    def test_duality_pairing_preserved(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            amap = wv.random_affine(rng, int(rng.integers(1, 5)), max_condition=30.0)
            w = rng.standard_normal(amap.dim)
            v = rng.standard_normal(amap.dim)
            before = w @ v
            after = wv.transform_covector(w, amap) @ wv.transform_vector(v, amap)
            assert after == pytest.approx(before, rel=1e-13, abs=1e-13)

    def test_vector_roundtrip_through_inverse_map(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            amap = wv.random_affine(rng, 3, max_condition=30.0)
            inverse_map = wv.AffineMap(amap.inverse_matrix)
            v = rng.standard_normal(3)
            back = wv.transform_vector(wv.transform_vector(v, amap), inverse_map)
            assert back == pytest.approx(v, rel=1e-12)

    def test_dim_mismatch(self):
        amap = wv.AffineMap.identity(2)
        with pytest.raises(ValueError):
            wv.transform_covector(np.ones(3), amap)


class TestPullback:
    def test_identity_leaves_jet(self):
        jet = wv.TranslatingGaussian((0.7, 0.0), 1.0).jet2(np.array([0.1, 0.2]), 0.0)
        out = wv.pullback_jet2(jet, wv.AffineMap.identity(2))
        assert np.array_equal(out.grad, jet.grad)
        assert np.array_equal(out.hessian, jet.hessian)
        assert np.array_equal(out.time_mixed, jet.time_mixed)

    def test_diagonal_gradient(self):
        jet = wv.Jet2(
            wv.Jet1(0.0, 1.0, np.array([1.0, 1.0])), np.eye(2), np.zeros(2)
        )
        out = wv.pullback_jet2(jet, wv.AffineMap(np.diag([2.0, 1.0])))
        assert out.grad == pytest.approx([2.0, 1.0])

    def test_matches_composed_field_jets(self):
        # oracle: numerically differentiate the composed evaluation itself
        rng = np.random.default_rng(6)
        base = wv.TranslatingGaussian((0.7, 0.2), 1.3)
        amap = wv.random_affine(rng, 2, max_condition=8.0)
        composed = wv.AffineReparamField(base, amap)
        fd = wv.make_fd_jet2_fn(h=5e-3, dt=5e-3, spec=wv.StencilSpec(4, "shrink-to-valid"))
        for _ in range(5):
            x = rng.uniform(-0.4, 0.4, 2)
            exact = composed.jet2(x, 0.3)
            approx = fd(composed, x, 0.3)
            assert approx.grad == pytest.approx(exact.grad, abs=2e-9)
            assert approx.hessian == pytest.approx(exact.hessian, abs=2e-7)
            assert approx.time_mixed == pytest.approx(exact.time_mixed, abs=2e-7)

    def test_hessian_stays_symmetric(self):
        rng = np.random.default_rng(7)
        base = wv.TranslatingGaussian((0.7, 0.2), 1.0)
        for _ in range(20):
            amap = wv.random_affine(rng, 2, max_condition=40.0)
            jet = base.jet2(rng.uniform(-0.5, 0.5, 2), 0.1)
            out = wv.pullback_jet2(jet, amap)
            assert np.array_equal(out.hessian, out.hessian.T)


class TestTwoPathChecks:
    FIELD = wv.TranslatingGaussian((0.7, 0.2), 2.0)

    def _points(self, rng, amap, count=10):
        # sample in the new frame near the bump, pull back to the old frame
        X = rng.uniform(-1.0, 1.0, size=(count, 2)) + np.asarray(self.FIELD.velocity) * 0.3
        return amap.invert(X)

    def test_identity_map_is_exact(self):
        pts = np.array([[0.3, 0.1], [-0.2, 0.4]])
        ident = wv.AffineMap.identity(2)
        assert wv.check_zero_order_covariance(self.FIELD, ident, pts, 0.3).max_deviation == 0.0
        assert wv.check_first_order_covariance(self.FIELD, ident, pts, 0.3).max_deviation == 0.0
        assert wv.check_contraction_invariance(self.FIELD, ident, pts, 0.3).max_deviation == 0.0

    def test_random_affine_analytic_jets(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            amap = wv.random_affine(rng, 2, max_condition=50.0)
            pts = self._points(rng, amap)
            r0 = wv.check_zero_order_covariance(self.FIELD, amap, pts, 0.3)
            r1 = wv.check_first_order_covariance(self.FIELD, amap, pts, 0.3)
            rc = wv.check_contraction_invariance(self.FIELD, amap, pts, 0.3)
            assert r0.max_deviation <= 1e-12 and r0.checked == 10
            assert r1.max_deviation <= 1e-12
            assert rc.max_deviation <= 1e-12 * 2.0

    def test_fd_jets_zero_order(self):
        # measured budget for order-4 local sampling at h=0.02
        rng = np.random.default_rng(9)
        amap = wv.AffineMap(np.array([[2.0, 0.3], [0.1, 1.5]]), np.array([0.2, -0.1]))
        pts = self._points(rng, amap, count=15)
        fd = wv.make_fd_jet2_fn(h=0.02, dt=0.005)
        report = wv.check_zero_order_covariance(self.FIELD, amap, pts, 0.3, jet2_fn=fd)
        assert report.checked == 15
        assert report.max_deviation <= 1e-6

    def test_fd_jets_first_order_rotation(self):
        rng = np.random.default_rng(10)
        rot = wv.AffineMap.rotation_2d(np.pi / 6)
        pts = self._points(rng, rot, count=15)
        fd = wv.make_fd_jet2_fn(h=0.02, dt=0.005)
        report = wv.check_first_order_covariance(self.FIELD, rot, pts, 0.3, jet2_fn=fd)
        assert report.checked > 0
        assert report.max_deviation <= 1e-5

    def test_stationary_points_skipped(self):
        static = wv.StaticGaussian(1.0)
        amap = wv.AffineMap(np.diag([2.0, 0.5]))
        pts = np.array([[0.2, 0.1], [0.1, -0.3]])
        report = wv.check_zero_order_covariance(static, amap, pts, 0.0)
        assert report.checked == 0
        assert report.skipped == 2

    def test_singular_hessian_points_skipped(self):
        pw = wv.PlaneWave((2.0, 1.0), 3.0)
        amap = wv.AffineMap(np.diag([2.0, 0.5]))
        pts = np.array([[0.2, 0.1]])
        report = wv.check_first_order_covariance(pw, amap, pts, 0.0)
        assert report.checked == 0 and report.skipped == 1


class TestMirror:
    def test_mirror_flips_and_preserves(self):
        field = wv.TranslatingGaussian((0.7, 0.2), 1.0)
        mirror = wv.AffineMap.mirror(2)
        jet = field.jet2(np.array([0.4, -0.3]), 0.3)
        jet_m = wv.pullback_jet2(jet, mirror)
        v0 = wv.zero_order_velocity(jet.jet1)
        v0m = wv.zero_order_velocity(jet_m.jet1)
        v1 = wv.first_order_velocity_nd(jet)
        v1m = wv.first_order_velocity_nd(jet_m)
        # exact sign flips, bitwise
        assert np.array_equal(v0m.reciprocal, -v0.reciprocal)
        assert np.array_equal(v0m.components, -v0.components)
        assert np.array_equal(v1m.components, -v1.components)
        # transformation laws hold exactly for the mirror
        assert np.array_equal(wv.transform_covector(v0.reciprocal, mirror), v0m.reciprocal)
        assert np.array_equal(wv.transform_vector(v1.components, mirror), v1m.components)
        # contraction untouched
        assert wv.contraction_scalar(v0m, v1m) == wv.contraction_scalar(v0, v1)

    def test_mirror_check_reports_zero(self):
        field = wv.TranslatingGaussian((0.7, 0.2), 1.0)
        mirror = wv.AffineMap.mirror(2)
        pts = np.array([[0.4, -0.3], [0.1, 0.2]])
        assert wv.check_contraction_invariance(field, mirror, pts, 0.3).max_deviation == 0.0


class TestComponentsAreNotCovariant:
    def test_raw_components_fail_linear_law(self):
        # only the reciprocals transform linearly; the per-component
        # velocities do not follow any linear rule under a generic map
        field = wv.TranslatingGaussian((0.7, 0.2), 1.0)
        amap = wv.AffineMap(np.array([[1.0, 0.8], [0.0, 1.0]]))
        x = np.array([0.3, 0.15])
        jet_x = wv.AffineReparamField(field, amap).jet2(x, 0.3)
        jet_X = field.jet2(amap.apply(x), 0.3)
        v_direct = wv.zero_order_velocity(jet_x.jet1).components
        v_new = wv.zero_order_velocity(jet_X.jet1).components
        as_covector = wv.transform_covector(v_new, amap)
        as_vector = wv.transform_vector(v_new, amap)
        assert np.abs(v_direct - as_covector).max() > 1e-3
        assert np.abs(v_direct - as_vector).max() > 1e-3
