"""
Lagrange and Crouzeix-Raviart interpolation onto piecewise affine functions.

A piecewise linear surface stores one row (P, Q, R) per triangle for the
affine function P*x + Q*y + R. Lagrange interpolants match f at vertices;
Crouzeix-Raviart interpolants match the mean of f over every edge.
"""
import dataclasses
from typing import List, Optional, Tuple

import numpy as np

from surfarea.constants import DEFAULT_EDGE_ORDER
from surfarea.errors import InterpolationError, InvalidParameter
from surfarea.geometry import Rectangle, TriangleGeom, barycentric_gradients
from surfarea.mesh.off_io import read_off, write_off
from surfarea.mesh.triangulation import Triangulation
from surfarea.protocol.report_protocol import InterpKind
from surfarea.quadrature import EdgeRule, _as_callable, edge_means, gauss_legendre


@dataclasses.dataclass(frozen=True)
class AffineFunction:
    P: float
    Q: float
    R: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.P, self.Q, self.R])):
            raise InvalidParameter(f"affine coefficients must be finite: {self}")

    def __call__(self, x, y):
        return self.P * np.asarray(x, dtype=np.float64) + self.Q * np.asarray(y) + self.R

    @property
    def gradient(self) -> Tuple[float, float]:
        return self.P, self.Q


@dataclasses.dataclass(frozen=True)
class CRBasis:
    """theta_i = (1 - 2 lambda_i) / |e_i|, dual to the edge integrals."""

    theta: Tuple[AffineFunction, AffineFunction, AffineFunction]
    triangle: TriangleGeom


class PiecewiseLinearSurface:
    def __init__(self, mesh: Triangulation, coefficients: np.ndarray, kind: InterpKind):
        coefficients = np.asarray(coefficients, dtype=np.float64)
        if coefficients.shape != (mesh.num_triangles, 3):
            raise InvalidParameter(
                f"expected coefficients of shape {(mesh.num_triangles, 3)}, got {coefficients.shape}"
            )
        coefficients.setflags(write=False)
        self.mesh = mesh
        self.coefficients = coefficients
        self.kind = InterpKind(kind)

    @property
    def P(self) -> np.ndarray:
        return self.coefficients[:, 0]

    @property
    def Q(self) -> np.ndarray:
        return self.coefficients[:, 1]

    @property
    def R(self) -> np.ndarray:
        return self.coefficients[:, 2]

    @property
    def per_triangle(self) -> List[AffineFunction]:
        return [AffineFunction(*row) for row in self.coefficients.tolist()]

    def piece(self, k: int) -> AffineFunction:
        return AffineFunction(*self.coefficients[k].tolist())

    def evaluate(self, tri_index, x, y) -> np.ndarray:
        """Value of the piece on triangle(s) ``tri_index`` at (x, y)."""
        c = self.coefficients[tri_index]
        return c[..., 0] * x + c[..., 1] * y + c[..., 2]

    def corner_values(self) -> np.ndarray:
        """Each piece evaluated at its own three vertices, shape (nt, 3)."""
        pts = self.mesh.triangle_points()
        return self.evaluate(np.arange(self.mesh.num_triangles)[:, None], pts[..., 0], pts[..., 1])

    def vertex_discrepancy(self) -> float:
        """Largest disagreement between pieces meeting at a vertex."""
        return _spread(self.mesh.triangles.ravel(), self.corner_values().ravel(), self.mesh.num_vertices)

    def midpoint_discrepancy(self) -> float:
        """Largest disagreement between pieces at a shared edge midpoint."""
        pts = self.mesh.triangle_points()
        mids = 0.5 * (pts[:, [1, 2, 0]] + pts[:, [2, 0, 1]])
        values = self.evaluate(np.arange(self.mesh.num_triangles)[:, None], mids[..., 0], mids[..., 1])
        edges, tri_edges = self.mesh.edges()
        return _spread(tri_edges.ravel(), values.ravel(), len(edges))


def _spread(groups: np.ndarray, values: np.ndarray, size: int) -> float:
    hi = np.full(size, -np.inf)
    lo = np.full(size, np.inf)
    np.maximum.at(hi, groups, values)
    np.minimum.at(lo, groups, values)
    used = np.isfinite(hi)
    return float(np.max(hi[used] - lo[used])) if np.any(used) else 0.0


def _affine_from_corner_values(points: np.ndarray, values: np.ndarray, gradients=None) -> np.ndarray:
    """(P, Q, R) of the affine functions taking ``values`` (nt, 3) at ``points``."""
    gx, gy = gradients or barycentric_gradients(points)[:2]
    P = np.sum(values * gx, axis=1)
    Q = np.sum(values * gy, axis=1)
    R = np.mean(values - P[:, None] * points[..., 0] - Q[:, None] * points[..., 1], axis=1)
    return np.column_stack([P, Q, R])


def _affine_from_edge_means(points: np.ndarray, means: np.ndarray, gradients=None) -> np.ndarray:
    """(P, Q, R) of sum_i means_i * (1 - 2 lambda_i); means_i is on the edge opposite vertex i."""
    gx, gy = gradients or barycentric_gradients(points)[:2]
    # sum_i grad lambda_i = 0, so subtracting means_0 only removes cancellation
    shifted = means - means[:, :1]
    P = -2.0 * np.sum(shifted * gx, axis=1)
    Q = -2.0 * np.sum(shifted * gy, axis=1)
    # every lambda_i is 1/3 at the centroid
    centroid = points.mean(axis=1)
    R = means.mean(axis=1) - P * centroid[:, 0] - Q * centroid[:, 1]
    return np.column_stack([P, Q, R])


def _check_finite(values: np.ndarray, what: str):
    """values has one row per triangle."""
    bad = ~np.isfinite(values)
    if np.any(bad):
        rows = np.flatnonzero(np.any(bad, axis=1))
        raise InterpolationError(f"field is not finite at a {what}", triangle_index=int(rows[0]))


def lagrange_on_triangle(f, tri: TriangleGeom) -> AffineFunction:
    """The affine function agreeing with ``f`` at the three vertices."""
    pts = tri.as_array()[None]
    values = np.asarray(_as_callable(f)(pts[..., 0], pts[..., 1]), dtype=np.float64)
    _check_finite(values, "vertex")
    return AffineFunction(*_affine_from_corner_values(pts, values)[0].tolist())


def cr_basis(tri: TriangleGeom) -> CRBasis:
    pts = tri.as_array()[None]
    gx, gy, _ = barycentric_gradients(pts)
    theta = []
    for i in range(3):
        x_i, y_i = pts[0, i]
        # lambda_i(x, y) = gx*x + gy*y + c with lambda_i(x_i) = 1
        c = 1.0 - gx[0, i] * x_i - gy[0, i] * y_i
        length = tri.edge_lengths[i]
        theta.append(
            AffineFunction(
                -2.0 * gx[0, i] / length, -2.0 * gy[0, i] / length, (1.0 - 2.0 * c) / length
            )
        )
    return CRBasis(theta=tuple(theta), triangle=tri)


def cr_on_triangle(f, tri: TriangleGeom, edge_rule: Optional[EdgeRule] = None) -> AffineFunction:
    """sum_i (integral of f over e_i) * theta_i."""
    edge_rule = edge_rule or gauss_legendre(DEFAULT_EDGE_ORDER)
    pts = tri.as_array()
    means = edge_means(f, pts[[1, 2, 0]], pts[[2, 0, 1]], edge_rule)[None]
    _check_finite(means, "edge")
    return AffineFunction(*_affine_from_edge_means(pts[None], means)[0].tolist())


def interpolate_mesh(
    f, mesh: Triangulation, kind=InterpKind.LAGRANGE, edge_rule: Optional[EdgeRule] = None
) -> PiecewiseLinearSurface:
    """Apply the chosen interpolation operator on every triangle of ``mesh``.

    Crouzeix-Raviart edge means are computed once per global edge, so the
    two triangles sharing an edge consume the same value.
    """
    kind = InterpKind(kind)
    fn = _as_callable(f)
    points = mesh.triangle_points()
    if kind == InterpKind.LAGRANGE:
        vertex_values = np.asarray(fn(mesh.vertices[:, 0], mesh.vertices[:, 1]), dtype=np.float64)
        values = vertex_values[mesh.triangles]
        _check_finite(values, "vertex")
        coefficients = _affine_from_corner_values(points, values, mesh.gradients())
    else:
        edge_rule = edge_rule or gauss_legendre(DEFAULT_EDGE_ORDER)
        edges, tri_edges = mesh.edges()
        means = edge_means(fn, mesh.vertices[edges[:, 0]], mesh.vertices[edges[:, 1]], edge_rule)
        values = means[tri_edges]
        _check_finite(values, "edge")
        coefficients = _affine_from_edge_means(points, values, mesh.gradients())
    return PiecewiseLinearSurface(mesh, coefficients, kind)


def interpolate_mesh_vector(
    f, mesh: Triangulation, kind=InterpKind.LAGRANGE, edge_rule: Optional[EdgeRule] = None
) -> Tuple[PiecewiseLinearSurface, PiecewiseLinearSurface, PiecewiseLinearSurface]:
    return tuple(interpolate_mesh(f.component(k), mesh, kind, edge_rule) for k in range(3))


def surface_to_off(surface: PiecewiseLinearSurface, path) -> None:
    """Write the graph z = g(x, y).

    Lagrange surfaces share the mesh vertices; Crouzeix-Raviart surfaces
    are written as a soup of 3 * nt vertices.
    """
    mesh = surface.mesh
    values = surface.corner_values()
    if surface.kind == InterpKind.LAGRANGE:
        z = np.empty(mesh.num_vertices)
        z[mesh.triangles.ravel()] = values.ravel()
        vertices = np.column_stack([mesh.vertices, z])
        faces = mesh.triangles
    else:
        xy = mesh.triangle_points().reshape(-1, 2)
        vertices = np.column_stack([xy, values.ravel()])
        faces = np.arange(3 * mesh.num_triangles).reshape(-1, 3)
    write_off(path, vertices, faces)


def surface_from_graph_off(path, kind=None) -> PiecewiseLinearSurface:
    """Rebuild a surface from an OFF graph written by surface_to_off."""
    vertices, faces = read_off(path)
    if len(faces) == 0:
        raise InvalidParameter(f"{path}: no faces")
    if kind is None:
        soup = len(vertices) == 3 * len(faces) and np.array_equal(
            faces.ravel(), np.arange(3 * len(faces))
        )
        kind = InterpKind.CROUZEIX_RAVIART if soup else InterpKind.LAGRANGE
    xy = vertices[:, :2]
    domain = Rectangle(xy[:, 0].min(), xy[:, 0].max(), xy[:, 1].min(), xy[:, 1].max())
    mesh = Triangulation(xy, faces, domain)
    # Triangulation may have reordered corners counterclockwise
    z = vertices[mesh.triangles, 2]
    return PiecewiseLinearSurface(mesh, _affine_from_corner_values(mesh.triangle_points(), z), kind)
