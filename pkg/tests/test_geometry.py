import numpy as np
import pytest

from heleshaw.errors import InvalidInputError, ProximityError
from heleshaw.geometry import (
    Contour,
    area,
    cauchy_transform,
    hausdorff_distance,
    read_contour_csv,
    write_contour_csv,
)


def circle(R=1.0, center=0.0, n=256, phase=0.0):
    th = 2 * np.pi * np.arange(n) / n + phase
    return Contour(center + R * np.exp(1j * th))


def ellipse_map_image(r, u, n=256):
    w = np.exp(2j * np.pi * np.arange(n) / n)
    return Contour(r * w + u / w)


class TestArea:
    def test_unit_circle(self):
        assert abs(area(circle(n=256)) - np.pi) < 1e-12

    def test_ellipse_closed_form(self):
        # image of the unit circle under r w + u/w is an ellipse with
        # semi-axes r + u, r - u, area pi (r^2 - u^2)
        r, u = 1.0, 0.3
        assert abs(area(ellipse_map_image(r, u)) - np.pi * (r**2 - u**2)) < 1e-12

    def test_reversal_antisymmetry(self, rng):
        for _ in range(10):
            n = 128
            th = 2 * np.pi * np.arange(n) / n
            rad = 1.0 + 0.2 * np.cos(3 * th + rng.uniform(0, np.pi))
            c = Contour(rad * np.exp(1j * th))
            assert area(c.reversed()) == pytest.approx(-area(c), abs=1e-14)

    def test_nonfinite_rejected(self):
        z = np.exp(2j * np.pi * np.arange(16) / 16)
        z[3] = np.nan
        with pytest.raises(InvalidInputError):
            Contour(z)


class TestContourInvariants:
    def test_self_intersection_rejected(self):
        th = 2 * np.pi * np.arange(128) / 128
        figure_eight = np.cos(th) + 0.5j * np.sin(2 * th)
        with pytest.raises(InvalidInputError):
            Contour(figure_eight)

    def test_orientation_enforced(self):
        th = 2 * np.pi * np.arange(64) / 64
        with pytest.raises(InvalidInputError):
            Contour(np.exp(-1j * th))  # clockwise

    def test_spacing_guard(self):
        th = np.concatenate([np.linspace(0, 0.1, 60), np.linspace(0.2, 2 * np.pi, 60, endpoint=False)])
        with pytest.raises(InvalidInputError):
            Contour(np.exp(1j * th))


class TestCauchyTransform:
    def test_outside_circle_residue_oracle(self):
        # oint conj(xi) dxi/(z - xi) on |xi| = R: conj(xi) = R^2/xi, so the
        # only pole inside is xi = 0 with residue R^2/z
        R = 1.3
        c = circle(R, n=256)
        for z in (2.0 + 0.5j, -3.1j, 4.0):
            expected = 2j * np.pi * R**2 / z
            assert abs(cauchy_transform(c, z) - expected) < 1e-12

    def test_inside_circle_residues_cancel(self):
        # poles at xi = 0 and xi = z now both contribute: R^2/z - R^2/z = 0
        c = circle(1.3, n=256)
        for z in (0.3 + 0.4j, -0.5j, 0.62):
            assert abs(cauchy_transform(c, z)) < 1e-12

    def test_translation_change_of_variables(self):
        # substituting xi -> xi + t: the added term t-bar * oint dxi/(z-xi)
        # vanishes for exterior z and is -2 pi i conj(t) for interior z
        t = 0.7 - 0.4j
        c = circle(1.0, n=256)
        cs = circle(1.0, center=t, n=256)
        z_out = 2.5 + 1.0j
        assert abs(cauchy_transform(cs, z_out + t) - cauchy_transform(c, z_out)) < 1e-12
        z_in = 0.2 - 0.3j
        diff = cauchy_transform(cs, z_in + t) - cauchy_transform(c, z_in)
        assert abs(diff - (-2j * np.pi * np.conj(t))) < 1e-12

    def test_proximity_guard(self):
        c = circle(1.0, n=128)
        with pytest.raises(ProximityError):
            cauchy_transform(c, 1.0 + 0.01j)

    def test_analyticity_finite_difference(self):
        # Cauchy-Riemann residual of the quadrature transform at distance
        # > 0.1 from a smooth contour
        c = circle(1.0, n=256)
        z0 = 1.6 + 0.9j
        h = 1e-5
        dx = (cauchy_transform(c, z0 + h) - cauchy_transform(c, z0 - h)) / (2 * h)
        dy = (cauchy_transform(c, z0 + 1j * h) - cauchy_transform(c, z0 - 1j * h)) / (2 * h)
        assert abs(dy - 1j * dx) < 1e-8  # Cauchy-Riemann: d/dy = i d/dx


class TestHausdorff:
    def test_identical(self):
        c = circle(1.0, n=256)
        assert hausdorff_distance(c, c) < 1e-13

    def test_concentric_circles(self):
        d = hausdorff_distance(circle(1.0, n=256), circle(1.1, n=256))
        assert d == pytest.approx(0.1, abs=1e-10)

    def test_phase_offset_resampling(self):
        c1 = circle(1.0, n=512)
        c2 = circle(1.0, n=512, phase=np.pi / 512 * 0.618)
        assert hausdorff_distance(c1, c2) < 1e-8

    def test_metric_axioms_random(self, rng):
        # symmetry is exact by construction; triangle inequality spot-checked
        cs = []
        for _ in range(3):
            th = 2 * np.pi * np.arange(128) / 128
            rad = 1.0 + 0.15 * np.cos(2 * th + rng.uniform(0, 2 * np.pi)) \
                + 0.1 * np.sin(3 * th + rng.uniform(0, 2 * np.pi))
            cs.append(Contour(rad * np.exp(1j * th) + rng.normal(scale=0.2)))
        d01 = hausdorff_distance(cs[0], cs[1])
        d12 = hausdorff_distance(cs[1], cs[2])
        d02 = hausdorff_distance(cs[0], cs[2])
        assert d02 <= d01 + d12 + 1e-10
        assert d01 == hausdorff_distance(cs[1], cs[0])


class TestCsvRoundTrip:
    def test_bit_exact(self, tmp_path, rng):
        th = 2 * np.pi * np.arange(128) / 128
        c = Contour((1 + 0.1 * np.cos(4 * th)) * np.exp(1j * th) * np.pi / 3)
        path = tmp_path / "contour.csv"
        write_contour_csv(path, c)
        c2 = read_contour_csv(path)
        assert np.array_equal(c.samples, c2.samples)

    def test_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(InvalidInputError):
            read_contour_csv(path)
