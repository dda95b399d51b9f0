import numpy as np
import pytest

from heleshaw.conformal import (
    LaurentMap,
    boundary_contour,
    fit_map,
    harmonic_moments,
    map_from_json,
    map_to_json,
    random_univalent_map,
)
from heleshaw.errors import (
    FitError,
    InvalidInputError,
    MomentUndefinedError,
    UnivalenceError,
)
from heleshaw.geometry import area


class TestEvaluate:
    def test_pure_rotation(self):
        m = LaurentMap(2.5, 0.0, [])
        w = np.exp(1j * np.linspace(0, 2 * np.pi, 7))
        assert np.allclose(m(w), 2.5 * w)

    def test_direct_sum(self):
        m = LaurentMap(1.0, 0.0, [0.3])
        assert m(np.asarray(1.0 + 0j)) == pytest.approx(1.3)

    def test_derivative_symbolic_oracle(self):
        # f = w + 0.3/w has f'(w) = 1 - 0.3/w^2; at w = i that is 1 + 0.3
        m = LaurentMap(1.0, 0.0, [0.3])
        assert m.deriv(np.asarray(1j)) == pytest.approx(1.3)

    def test_interior_rejected(self):
        m = LaurentMap(1.0, 0.0, [0.1])
        with pytest.raises(InvalidInputError):
            m(np.asarray(0.5 + 0j))

    def test_univalence_check(self):
        with pytest.raises(UnivalenceError):
            LaurentMap(1.0, 0.0, [1.5])  # |f'| vanishes on |w|=1


class TestBoundaryContour:
    def test_identity_map_samples(self):
        c = boundary_contour(LaurentMap(1.0, 0.0, []), 4)
        assert np.allclose(c.samples, [1, 1j, -1, -1j], atol=1e-15)

    def test_scaled_area(self):
        c = boundary_contour(LaurentMap(2.0, 0.0, []), 64)
        assert area(c) == pytest.approx(4 * np.pi, abs=1e-12)

    def test_ellipse_closed_form(self):
        c = boundary_contour(LaurentMap(1.0, 0.0, [0.5]), 128)
        x, y = c.samples.real, c.samples.imag
        assert x.max() == pytest.approx(1.5, abs=1e-12)
        assert y.max() == pytest.approx(0.5, abs=1e-12)
        assert area(c) == pytest.approx(0.75 * np.pi, abs=1e-12)

    def test_power_of_two_required(self):
        with pytest.raises(InvalidInputError):
            boundary_contour(LaurentMap(1.0, 0.0, []), 100)


class TestFitMap:
    def test_affine_exact(self):
        c = boundary_contour(LaurentMap(2.0, 1.0, []), 64)
        m, res = fit_map(c, K=4)
        assert res < 1e-12
        assert m.r == pytest.approx(2.0, abs=1e-13)
        assert m.a0 == pytest.approx(1.0, abs=1e-13)
        assert np.max(np.abs(m.u)) < 1e-13

    def test_single_mode(self):
        c = boundary_contour(LaurentMap(1.0, 0.0, [0.3]), 256)
        m, res = fit_map(c, K=4)
        assert m.u[0] == pytest.approx(0.3, abs=1e-12)

    def test_round_trip_random(self, rng):
        for _ in range(5):
            m0 = random_univalent_map(8, rng)
            c = boundary_contour(m0, 128)
            m1, res = fit_map(c, K=8)
            assert res < 1e-10
            assert abs(m1.r - m0.r) < 1e-10
            assert abs(m1.a0 - m0.a0) < 1e-10
            assert np.max(np.abs(m1.u - m0.u)) < 1e-10

    def test_gauge_rotation_recovered(self):
        # samples of a rotated parametrization refit to r real positive
        m0 = LaurentMap(1.0, 0.2j, [0.1, 0.05j])
        w = np.exp(2j * np.pi * (np.arange(128) + 17.3) / 128)
        from heleshaw.geometry import Contour

        c = Contour(m0(w))
        m1, res = fit_map(c, K=2)
        assert res < 1e-12
        assert m1.r > 0

    def test_fit_failure_carries_residual(self):
        # a non-map curve (square-ish) cannot be matched by K=1 modes
        th = 2 * np.pi * np.arange(256) / 256
        from heleshaw.geometry import Contour

        c = Contour((1 + 0.3 * np.cos(4 * th)) * np.exp(1j * th))
        with pytest.raises(FitError) as err:
            fit_map(c, K=1, tol=1e-12)
        assert err.value.residual > 1e-12


class TestHarmonicMoments:
    def test_circle_residue_oracle(self):
        # t_k = (1/2 pi i k) oint z^{-k} conj(z) dz; on |z| = R the integrand
        # is R^2 z^{-k-1} whose residue at 0 vanishes for k >= 1
        mv = harmonic_moments(LaurentMap(1.7, 0.0, []), 5)
        assert mv.t0 == pytest.approx(1.7**2, abs=1e-12)
        assert np.max(np.abs(mv.tk)) < 1e-12

    def test_ellipse_tail_vanishes(self):
        # centered two-term map r w + u/w: residue calculus on the preimage
        # circle kills every moment except t2 (and t0), so t_k = 0 for k >= 3
        mv = harmonic_moments(LaurentMap(1.0, 0.0, [0.25]), 6)
        assert np.max(np.abs(mv.tk[2:])) < 1e-12
        assert abs(mv.tk[0]) < 1e-12  # centered: t1 vanishes too
        assert abs(mv.tk[1]) > 1e-3

    def test_translation_moves_t1_not_t0(self):
        m1 = LaurentMap(1.0, 2.0, [0.2])
        m2 = LaurentMap(1.0, 2.0 + 0.5j, [0.2])
        v1 = harmonic_moments(m1, 3)
        v2 = harmonic_moments(m2, 3)
        assert v1.t0 == pytest.approx(v2.t0, abs=1e-12)
        assert abs(v1.tk[0] - v2.tk[0]) > 1e-3

    def test_resampling_invariance(self):
        m = LaurentMap(1.0, 2.5, [0.2, 0.1j, 0.03])
        v1 = harmonic_moments(m, 5, n=512)
        v2 = harmonic_moments(m, 5, n=1024)
        assert v1.diff_norm(v2) < 1e-12

    def test_origin_guard(self):
        # unit circle centered at 1 passes through the origin
        with pytest.raises(MomentUndefinedError):
            harmonic_moments(LaurentMap(1.0, 1.0, []), 3)


class TestCoefficientArea:
    def test_against_quadrature(self, rng):
        # closed form pi (r^2 - sum k |u_k|^2) versus spectral quadrature
        for _ in range(5):
            m = random_univalent_map(6, rng)
            quad = area(boundary_contour(m, 256))
            assert quad == pytest.approx(m.coeff_area(), abs=1e-10)


class TestJson:
    def test_round_trip(self):
        m = LaurentMap(1.25, 0.5 - 0.25j, [0.1, 0.02j])
        m2 = map_from_json(map_to_json(m))
        assert m2.r == m.r and m2.a0 == m.a0
        assert np.array_equal(m2.u, m.u)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(InvalidInputError):
            map_from_json('{"r": -1.0, "a0": [0, 0], "u": []}')
