"""
Usage:
python3 -m unittest tests.test_geometry
"""
import math
import unittest

import numpy as np

from surfarea.errors import DegenerateTriangle, InvalidParameter
from surfarea.geometry import (
    Rectangle,
    barycentric_gradients,
    ktilde_vertices,
    normalize_to_ktilde,
    triangle_geom,
    triangle_metrics,
)


def rigid_motion(points, angle, shift):
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return np.asarray(points, dtype=np.float64) @ rot.T + np.asarray(shift)


class RectangleTest(unittest.TestCase):
    def test_measures(self):
        rect = Rectangle(-1.0, 1.0, 0.0, 3.0)
        self.assertEqual(rect.width, 2.0)
        self.assertEqual(rect.height, 3.0)
        self.assertEqual(rect.area, 6.0)
        self.assertEqual(Rectangle.square(), Rectangle(-1.0, 1.0, -1.0, 1.0))

    def test_rejects_empty_or_infinite(self):
        with self.assertRaises(InvalidParameter):
            Rectangle(1.0, 1.0, 0.0, 1.0)
        with self.assertRaises(InvalidParameter):
            Rectangle(0.0, 1.0, 2.0, 1.0)
        with self.assertRaises(InvalidParameter):
            Rectangle(0.0, math.inf, 0.0, 1.0)


class TriangleGeomTest(unittest.TestCase):
    def test_right_isosceles(self):
        tri = triangle_geom((0, 0), (1, 0), (0, 1))
        self.assertAlmostEqual(tri.area, 0.5, places=15)
        self.assertAlmostEqual(tri.diameter, math.sqrt(2), places=15)
        self.assertAlmostEqual(tri.circumradius, math.sqrt(2) / 2, places=15)
        self.assertAlmostEqual(tri.max_angle, math.pi / 2, places=15)

    def test_equilateral(self):
        tri = triangle_geom((0, 0), (1, 0), (0.5, math.sqrt(3) / 2))
        self.assertAlmostEqual(tri.circumradius, 1 / math.sqrt(3), places=14)
        self.assertAlmostEqual(tri.min_angle, math.pi / 3, places=14)
        self.assertAlmostEqual(tri.max_angle, math.pi / 3, places=14)

    def test_thin_isosceles_circumradius(self):
        h, alpha = 1 / 6, 1.6
        tri = triangle_geom((0, 0), (h, 0), (h / 2, h**alpha))
        estimate = h**alpha / 2 + h ** (2 - alpha) / 8
        self.assertLess(abs(tri.circumradius - estimate), 0.02 * estimate)

    def test_invariants(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            pts = rng.uniform(-1, 1, (3, 2))
            try:
                tri = triangle_geom(*pts)
            except DegenerateTriangle:
                continue
            self.assertAlmostEqual(sum(tri.angles), math.pi, delta=1e-12)
            self.assertEqual(tri.diameter, max(tri.edge_lengths))
            self.assertLessEqual(tri.min_angle, math.pi / 3 + 1e-12)
            self.assertGreaterEqual(tri.max_angle, math.pi / 3 - 1e-12)

    def test_cyclic_permutation_and_rigid_motion(self):
        pts = np.array([[0.1, -0.3], [0.9, 0.2], [0.35, 0.05]])
        base = triangle_geom(*pts)
        moved = rigid_motion(pts[[1, 2, 0]], 0.7, (3.0, -2.0))
        other = triangle_geom(*moved)
        for name in ("area", "diameter", "circumradius", "min_angle", "max_angle"):
            a, b = getattr(base, name), getattr(other, name)
            self.assertAlmostEqual(a, b, delta=1e-12 * abs(a), msg=name)
        np.testing.assert_allclose(sorted(base.edge_lengths), sorted(other.edge_lengths), rtol=1e-12)

    def test_clockwise_input_is_reordered(self):
        tri = triangle_geom((0, 0), (0, 1), (1, 0))
        self.assertGreater(tri.area, 0)
        a = tri.as_array()
        cross = (a[1, 0] - a[0, 0]) * (a[2, 1] - a[0, 1]) - (a[1, 1] - a[0, 1]) * (a[2, 0] - a[0, 0])
        self.assertGreater(cross, 0)

    def test_degenerate(self):
        with self.assertRaises(DegenerateTriangle):
            triangle_geom((0, 0), (1, 0), (2, 0))
        with self.assertRaises(DegenerateTriangle):
            triangle_geom((0, 0), (0, 0), (0, 0))
        with self.assertRaises(InvalidParameter):
            triangle_geom((0, 0), (1, 0), (math.nan, 1))

    def test_very_thin_triangle_is_accepted(self):
        # aspect ratios of the finest anisotropic meshes stay far above the threshold
        h = 2 / 4096
        tri = triangle_geom((0, 0), (h, 0), (h / 2, h**3))
        self.assertGreater(tri.area, 0)
        self.assertAlmostEqual(tri.max_angle, math.pi - 2 * math.atan(2 * h**2), delta=1e-12)


class NormalizeTest(unittest.TestCase):
    def assert_reconstructs(self, tri):
        transform, alpha = normalize_to_ktilde(tri)
        self.assertAlmostEqual(transform.s**2 + transform.t**2, 1.0, delta=1e-12)
        self.assertGreater(transform.t, 0)
        self.assertGreater(transform.scale, 0)
        self.assertLessEqual(alpha, 1.0 + 1e-15)
        image = transform.apply(ktilde_vertices(alpha, transform.s, transform.t))
        original = tri.as_array()
        scale = tri.diameter
        for p in image:
            self.assertLess(np.min(np.hypot(*(original - p).T)), 1e-12 * scale)
        for p in original:
            self.assertLess(np.min(np.hypot(*(image - p).T)), 1e-12 * scale)
        return transform, alpha

    def test_reference_triangle(self):
        transform, alpha = self.assert_reconstructs(triangle_geom((0, 0), (1, 0), (0, 1)))
        self.assertAlmostEqual(alpha, 1.0, places=14)
        self.assertAlmostEqual(transform.s, 0.0, places=14)
        self.assertAlmostEqual(transform.t, 1.0, places=14)

    def test_equilateral(self):
        tri = triangle_geom((0, 0), (2, 0), (1, math.sqrt(3)))
        transform, alpha = self.assert_reconstructs(tri)
        self.assertAlmostEqual(alpha, 1.0, places=14)
        self.assertAlmostEqual(transform.scale, 2.0, places=14)

    def test_round_trip(self):
        self.assert_reconstructs(triangle_geom((0, 0), (1, 0), (0.1, 0.05)))
        rng = np.random.default_rng(1)
        for _ in range(100):
            pts = rng.uniform(-2, 2, (3, 2))
            try:
                tri = triangle_geom(*pts)
            except DegenerateTriangle:
                continue
            self.assert_reconstructs(tri)


class VectorizedMetricsTest(unittest.TestCase):
    def test_matches_scalar_measures(self):
        rng = np.random.default_rng(2)
        pts = rng.uniform(-1, 1, (20, 3, 2))
        metrics = triangle_metrics(pts)
        for k in range(len(pts)):
            tri = triangle_geom(*pts[k])
            self.assertAlmostEqual(abs(metrics["signed_area"][k]), tri.area, delta=1e-14)
            self.assertAlmostEqual(metrics["circumradius"][k], tri.circumradius, delta=1e-10 * tri.circumradius)
            self.assertAlmostEqual(metrics["diameter"][k], tri.diameter, delta=1e-15)
            self.assertAlmostEqual(metrics["angles"][k].max(), tri.max_angle, delta=1e-12)

    def test_barycentric_gradients(self):
        pts = np.array([[[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]])
        gx, gy, area = barycentric_gradients(pts)
        self.assertEqual(area[0], 1.0)
        np.testing.assert_allclose(gx[0], [-0.5, 0.5, 0.0])
        np.testing.assert_allclose(gy[0], [-1.0, 0.0, 1.0])
        np.testing.assert_allclose(gx.sum(axis=1), 0.0, atol=1e-15)


if __name__ == "__main__":
    unittest.main()
