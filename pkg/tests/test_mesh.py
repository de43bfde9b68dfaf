"""
Usage:
python3 -m unittest tests.test_mesh
"""
import math
import os
import tempfile
import unittest

import numpy as np

from surfarea.errors import DegenerateTriangle, InsufficientData, InvalidParameter
from surfarea.fields.analytic import CylinderSlice
from surfarea.geometry import Point3, Rectangle
from surfarea.mesh import (
    Triangulation,
    aniso_band,
    aniso_band_count,
    aniso_strip_count,
    check_face_to_face,
    generate_aniso,
    generate_lantern,
    generate_rectangle,
    generate_uniform,
    iter_aniso_bands,
    lantern_parameter_mesh,
    mesh_condition_summary,
    read_off,
    write_off,
)
from surfarea.interp import interpolate_mesh
from surfarea.protocol.report_protocol import InterpKind

SQUARE = Rectangle.square()
UNIT = Rectangle(0.0, 1.0, 0.0, 1.0)


def first_band(N, alpha, strips=4):
    """A few strips of the anisotropic mesh; every strip repeats the same shapes."""
    return next(iter_aniso_bands(N, alpha, SQUARE, max_triangles=strips * (2 * N + 1)))


class TriangulationTest(unittest.TestCase):
    def test_orientation_and_metrics(self):
        mesh = Triangulation([[0, 0], [1, 0], [0, 1], [1, 1]], [[0, 2, 1], [1, 3, 2]], UNIT)
        self.assertTrue(np.all(mesh.areas > 0))
        self.assertEqual(mesh.num_vertices, 4)
        self.assertEqual(mesh.num_triangles, 2)
        self.assertAlmostEqual(mesh.area_sum(), 1.0)
        self.assertAlmostEqual(mesh.fineness, math.sqrt(2))
        self.assertAlmostEqual(mesh.max_angle, math.pi / 2)
        self.assertAlmostEqual(mesh.min_angle, math.pi / 4)
        check_face_to_face(mesh)

    def test_arrays_are_read_only(self):
        mesh = generate_uniform(2, UNIT)
        with self.assertRaises(ValueError):
            mesh.vertices[0, 0] = 5.0
        with self.assertRaises(ValueError):
            mesh.areas[0] = 5.0

    def test_rejects_bad_input(self):
        with self.assertRaises(InvalidParameter):
            Triangulation([[0, 0], [1, 0], [0, 1]], [[0, 1, 3]], UNIT)
        with self.assertRaises(InvalidParameter):
            Triangulation([[0, 0], [1, 0], [0, 1]], np.zeros((0, 3)), UNIT)
        with self.assertRaises(InvalidParameter):
            Triangulation([[0, 0], [1, 0], [0, math.inf]], [[0, 1, 2]], UNIT)
        with self.assertRaises(DegenerateTriangle) as ctx:
            Triangulation([[0, 0], [1, 0], [0, 1], [2, 0]], [[0, 1, 2], [0, 1, 3]], UNIT)
        self.assertEqual(ctx.exception.triangle_index, 1)

    def test_edges(self):
        N = 5
        mesh = generate_uniform(N, UNIT)
        edges, tri_edges = mesh.edges()
        self.assertEqual(len(edges), 3 * N * N + 2 * N)
        self.assertTrue(np.all(edges[:, 0] < edges[:, 1]))
        # tri_edges[k, i] is opposite local vertex i
        for k in (0, 7, 31):
            for i in range(3):
                edge = set(edges[tri_edges[k, i]].tolist())
                self.assertNotIn(int(mesh.triangles[k, i]), edge)

    def test_same_as(self):
        a = generate_uniform(3, UNIT)
        self.assertTrue(a.same_as(generate_uniform(3, UNIT)))
        self.assertFalse(a.same_as(generate_uniform(4, UNIT)))


class FaceToFaceTest(unittest.TestCase):
    def test_hanging_vertex(self):
        vertices = [[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]]
        triangles = [[0, 1, 2], [0, 4, 3], [4, 2, 3]]
        with self.assertRaises(InvalidParameter):
            check_face_to_face(Triangulation(vertices, triangles, UNIT))

    def test_overlap(self):
        vertices = [[0, 0], [1, 0], [1, 1], [0, 1]]
        triangles = [[0, 1, 2], [0, 2, 3], [0, 1, 3]]
        with self.assertRaises(InvalidParameter):
            check_face_to_face(Triangulation(vertices, triangles, UNIT))

    def test_missing_triangle(self):
        mesh = Triangulation([[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 1, 2]], UNIT)
        with self.assertRaises(InvalidParameter):
            check_face_to_face(mesh)


class UniformTest(unittest.TestCase):
    def test_examples(self):
        mesh = generate_uniform(1, UNIT)
        self.assertEqual(mesh.num_triangles, 2)
        self.assertAlmostEqual(mesh.area_sum(), 1.0)
        mesh = generate_uniform(12, SQUARE)
        self.assertEqual(mesh.num_triangles, 288)
        self.assertAlmostEqual(mesh.fineness, math.sqrt(2) * 2 / 12, places=14)
        check_face_to_face(mesh)

    def test_rectangle_grid(self):
        dom = Rectangle(0.0, 3.0, -1.0, 1.0)
        mesh = generate_rectangle(6, 2, dom)
        self.assertEqual(mesh.num_triangles, 24)
        self.assertEqual(mesh.num_vertices, 21)
        self.assertEqual(mesh.vertices[:, 0].max(), 3.0)
        check_face_to_face(mesh)
        with self.assertRaises(InvalidParameter):
            generate_rectangle(0, 2, dom)
        with self.assertRaises(InvalidParameter):
            generate_uniform(0, dom)


class AnisoTest(unittest.TestCase):
    def test_strip_count(self):
        self.assertEqual(aniso_strip_count(12, 1.6, SQUARE), 35)
        for N in (2, 4, 12, 64):
            self.assertEqual(aniso_strip_count(N, 1.0, SQUARE), N)
        with self.assertRaises(InvalidParameter):
            aniso_strip_count(1, 1.6, SQUARE)
        with self.assertRaises(InvalidParameter):
            aniso_strip_count(12, 0.9, SQUARE)
        with self.assertRaises(InvalidParameter):
            aniso_strip_count(2, 1.5, Rectangle(0.0, 10.0, 0.0, 1.0))

    def test_figure_mesh(self):
        mesh = generate_aniso(12, 1.6, SQUARE)
        M = 35
        self.assertEqual(mesh.num_triangles, M * (2 * 12 + 1))
        self.assertEqual(len(np.unique(mesh.vertices[:, 1])), M + 1)
        self.assertAlmostEqual(mesh.area_sum(), 4.0, delta=4e-9)
        check_face_to_face(mesh)
        # bases of length 1/6 are the longest edges
        self.assertAlmostEqual(mesh.fineness, 1 / 6, places=14)
        widths = np.ptp(mesh.triangle_points()[..., 0], axis=1)
        self.assertAlmostEqual(widths.max(), 1 / 6, places=14)

    def test_face_to_face_for_parameters(self):
        for N, alpha in [(2, 1.0), (3, 1.3), (7, 2.0), (10, 2.4), (16, 1.2)]:
            mesh = generate_aniso(N, alpha, SQUARE)
            check_face_to_face(mesh)
            self.assertEqual(mesh.num_triangles, aniso_strip_count(N, alpha, SQUARE) * (2 * N + 1))

    def test_other_domain(self):
        dom = Rectangle(0.0, 2.0, 1.0, 2.5)
        mesh = generate_aniso(8, 1.5, dom)
        check_face_to_face(mesh)
        self.assertAlmostEqual(mesh.area_sum(), dom.area, delta=1e-9 * dom.area)

    def test_bands_match_full_mesh(self):
        N, alpha = 6, 1.6
        full = generate_aniso(N, alpha, SQUARE)
        bands = list(iter_aniso_bands(N, alpha, SQUARE, max_triangles=3 * (2 * N + 1)))
        self.assertEqual(len(bands), 4)
        self.assertEqual(aniso_band_count(N, alpha, SQUARE, 3 * (2 * N + 1)), 4)
        np.testing.assert_array_equal(aniso_band(N, alpha, SQUARE, 2, 3 * (2 * N + 1)).vertices, bands[2].vertices)
        with self.assertRaises(InvalidParameter):
            aniso_band(N, alpha, SQUARE, 4, 3 * (2 * N + 1))
        for band in bands:
            check_face_to_face(band)
        points = np.concatenate([band.triangle_points() for band in bands])
        np.testing.assert_array_equal(points, full.triangle_points())
        self.assertEqual(bands[0].domain.c, -1.0)
        self.assertEqual(bands[-1].domain.d, 1.0)
        for lower, upper in zip(bands, bands[1:]):
            self.assertEqual(lower.domain.d, upper.domain.c)

    def test_edge_table_matches_generic(self):
        for N, alpha, strips in [(2, 1.0, 2), (5, 1.6, 3), (9, 2.4, 4)]:
            for band in iter_aniso_bands(N, alpha, SQUARE, max_triangles=strips * (2 * N + 1)):
                edges, tri_edges = band.edges()
                plain_edges, plain_tri_edges = Triangulation(band.vertices, band.triangles, band.domain).edges()
                self.assertEqual(edges.shape, plain_edges.shape)
                self.assertEqual(len(np.unique(tri_edges)), len(edges))
                self.assertTrue(np.all(edges[:, 0] < edges[:, 1]))
                np.testing.assert_array_equal(edges[tri_edges], plain_edges[plain_tri_edges])

        f = CylinderSlice(a=1.1)
        mesh = generate_aniso(7, 2.0, SQUARE)
        plain = Triangulation(mesh.vertices, mesh.triangles, SQUARE)
        for kind in InterpKind:
            np.testing.assert_allclose(
                interpolate_mesh(f, mesh, kind).coefficients,
                interpolate_mesh(f, plain, kind).coefficients,
                rtol=0,
                atol=1e-12,
            )

    def test_alpha_one_angles_bounded(self):
        for N in (4, 8, 16, 32):
            mesh = generate_aniso(N, 1.0, SQUARE)
            self.assertAlmostEqual(mesh.max_angle, math.pi / 2, delta=1e-12)
            self.assertAlmostEqual(mesh.min_angle, math.atan(0.5), delta=1e-12)

    def test_max_angle_grows(self):
        angles = [generate_aniso(N, 1.6, SQUARE).max_angle for N in (8, 16, 32, 64)]
        self.assertTrue(all(b > a for a, b in zip(angles, angles[1:])))
        for N, angle in zip((8, 16, 32, 64), angles):
            h = 2 / N
            apex = math.pi - 2 * math.atan(2 * (2 / aniso_strip_count(N, 1.6, SQUARE)) / h)
            self.assertAlmostEqual(angle, max(apex, math.pi / 2), delta=1e-12)

    def test_circumradius_bookkeeping(self):
        grow = [first_band(N, 2.4).max_circumradius for N in (16, 32, 64, 128)]
        self.assertTrue(all(b > a for a, b in zip(grow, grow[1:])), grow)
        shrink = [first_band(N, 1.6).max_circumradius for N in (16, 32, 64, 128)]
        self.assertTrue(all(b < a for a, b in zip(shrink, shrink[1:])), shrink)

    def test_first_band_has_full_mesh_metrics(self):
        full = generate_aniso(8, 2.0, SQUARE)
        band = first_band(8, 2.0)
        self.assertAlmostEqual(band.max_circumradius, full.max_circumradius, delta=1e-12 * full.max_circumradius)
        self.assertAlmostEqual(band.max_angle, full.max_angle, delta=1e-12)


class LanternTest(unittest.TestCase):
    def test_smallest(self):
        lantern = generate_lantern(1, 2, 1.0, 1.0)
        self.assertEqual(len(lantern.faces()), 4)
        v = lantern.vertices()
        np.testing.assert_allclose(np.hypot(v[:, 0], v[:, 1]), 1.0, rtol=1e-15)
        first = lantern.triangle(0)
        self.assertIsInstance(first[0], Point3)
        np.testing.assert_allclose(first, [[1, 0, 0], [-1, 0, 0], [0, 1, 1]], atol=1e-15)

    def test_invariants(self):
        for m, n, r, H in [(3, 5, 1.0, 1.0), (4, 4, 0.5, 2.0), (7, 3, 2.0, 0.5)]:
            lantern = generate_lantern(m, n, r, H)
            v = lantern.vertices()
            self.assertEqual(len(v), (m + 1) * n)
            self.assertEqual(len(lantern.faces()), 2 * m * n)
            np.testing.assert_allclose(np.hypot(v[:, 0], v[:, 1]), r, rtol=1e-12)
            self.assertTrue(np.all((v[:, 2] >= 0) & (v[:, 2] <= H)))
            t = lantern.triangles3d
            edges = np.sort(
                np.linalg.norm(t[:, [1, 2, 0]] - t[:, [2, 0, 1]], axis=-1), axis=1
            )
            np.testing.assert_allclose(edges, np.broadcast_to(edges[0], edges.shape), rtol=1e-12)
            base = 2 * r * math.sin(math.pi / n)
            height = math.hypot(H / m, r * (1 - math.cos(math.pi / n)))
            np.testing.assert_allclose(lantern.triangle_areas(), 0.5 * base * height, rtol=1e-12)

    def test_closed_form_example(self):
        expected = 2 * 4 * 4 * math.sin(math.pi / 4) * math.hypot(1 / 4, 1 - math.cos(math.pi / 4))
        self.assertAlmostEqual(generate_lantern(4, 4, 1.0, 1.0).area(), expected, delta=1e-12 * expected)

    def test_rings_rotate(self):
        lantern = generate_lantern(2, 6, 1.0, 1.0)
        v = lantern.vertices().reshape(3, 6, 3)
        phi = np.arctan2(v[..., 1], v[..., 0])
        turn = np.mod(phi[1, 0] - phi[0, 0], 2 * math.pi)
        self.assertAlmostEqual(turn, math.pi / 6, places=14)

    def test_invalid(self):
        for args in [(0, 4, 1, 1), (4, 1, 1, 1), (4, 4, 0, 1), (4, 4, 1, -1)]:
            with self.assertRaises(InvalidParameter):
                generate_lantern(*args)

    def test_parameter_mesh(self):
        mesh, field = lantern_parameter_mesh(3, 5, 1.0, 2.0)
        self.assertEqual(mesh.num_triangles, 30)
        self.assertAlmostEqual(mesh.domain.b, 2 * math.pi)
        lantern = generate_lantern(3, 5, 1.0, 2.0)
        image = field.eval(mesh.vertices[:, 0], mesh.vertices[:, 1]).T
        # every image vertex is a lantern vertex
        v = lantern.vertices()
        for p in image:
            self.assertLess(np.min(np.linalg.norm(v - p, axis=1)), 1e-12)


class QualityTest(unittest.TestCase):
    def test_uniform_meshes_satisfy_every_condition(self):
        summary = mesh_condition_summary([generate_uniform(N, SQUARE) for N in (4, 8, 16, 32)])
        self.assertEqual(len(summary["rows"]), 4)
        self.assertAlmostEqual(summary["min_angle_bound"], math.pi / 4)
        self.assertAlmostEqual(summary["max_angle_bound"], math.pi / 2)
        self.assertTrue(summary["minimum_angle_condition"])
        self.assertTrue(summary["maximum_angle_condition"])
        self.assertTrue(summary["circumradius_condition"])

    def test_circumradius_only(self):
        # the circumradius shrinks for 1 < alpha < 2 although the angles degenerate
        summary = mesh_condition_summary([generate_aniso(N, 1.6, SQUARE) for N in (8, 16, 32, 64)])
        self.assertFalse(summary["minimum_angle_condition"])
        self.assertFalse(summary["maximum_angle_condition"])
        self.assertTrue(summary["circumradius_condition"])

    def test_no_condition(self):
        summary = mesh_condition_summary([first_band(N, 2.4) for N in (8, 16, 32, 64)])
        self.assertFalse(summary["maximum_angle_condition"])
        self.assertFalse(summary["circumradius_condition"])

    def test_needs_two_meshes(self):
        with self.assertRaises(InsufficientData):
            mesh_condition_summary([generate_uniform(2, SQUARE)])


class OffTest(unittest.TestCase):
    def test_lantern_round_trip(self):
        lantern = generate_lantern(3, 4, 1.0, 2.0)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sub", "lantern.off")
            lantern.to_off(path)
            vertices, faces = read_off(path)
        np.testing.assert_array_equal(vertices, lantern.vertices())
        np.testing.assert_array_equal(faces, lantern.faces())

    def test_reader_accepts_comments_and_inline_counts(self):
        text = "OFF 3 1 0\n# a comment\n0 0 0\n1 0 0\n0 1 0 # trailing\n3 0 1 2\n"
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "t.off")
            with open(path, "w") as fout:
                fout.write(text)
            vertices, faces = read_off(path)
        self.assertEqual(vertices.shape, (3, 3))
        np.testing.assert_array_equal(faces, [[0, 1, 2]])

    def test_reader_errors(self):
        bad = {
            "header": "3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n",
            "truncated": "OFF\n3 1 0\n0 0 0\n1 0 0\n",
            "quad": "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n",
            "range": "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n",
        }
        with tempfile.TemporaryDirectory() as tmp:
            for name, text in bad.items():
                path = os.path.join(tmp, f"{name}.off")
                with open(path, "w") as fout:
                    fout.write(text)
                with self.assertRaises(InvalidParameter, msg=name):
                    read_off(path)

    def test_writer_checks_shapes(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(InvalidParameter):
                write_off(os.path.join(tmp, "x.off"), np.zeros((3, 2)), [[0, 1, 2]])


if __name__ == "__main__":
    unittest.main()
