"""The Triangulation data structure and its conformity checks."""
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from surfarea.constants import DEGENERACY_RATIO
from surfarea.errors import DegenerateTriangle, InvalidParameter
from surfarea.geometry import Rectangle, barycentric_gradients, triangle_metrics

# Pairwise vertex-on-edge scans are only run below this many (edge, vertex) pairs
HANGING_NODE_SCAN_LIMIT = 4_000_000


class Triangulation:
    """Immutable vertex/triangle arrays over a rectangle with quality metrics.

    Triangles are stored counterclockwise. Metric arrays (areas, diameters,
    circumradii, angles) are computed once at construction.

    Generators that know their edge structure may pass ``edges`` as the
    pair returned by :meth:`edges`; it is then used as is.
    """

    def __init__(
        self,
        vertices,
        triangles,
        domain: Rectangle,
        edges: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ):
        vertices = np.array(vertices, dtype=np.float64).reshape(-1, 2)
        triangles = np.array(triangles, dtype=np.int64).reshape(-1, 3)
        if len(triangles) == 0:
            raise InvalidParameter("a triangulation needs at least one triangle")
        if triangles.min() < 0 or triangles.max() >= len(vertices):
            raise InvalidParameter("triangle references a vertex index out of range")
        if not np.all(np.isfinite(vertices)):
            raise InvalidParameter("vertex coordinates must be finite")

        points = vertices[triangles]
        metrics = triangle_metrics(points)
        clockwise = metrics["signed_area"] < 0
        if np.any(clockwise):
            triangles[clockwise] = triangles[clockwise][:, [0, 2, 1]]
            points = vertices[triangles]
            metrics = triangle_metrics(points)

        areas = metrics["signed_area"]
        bad = np.flatnonzero(areas < DEGENERACY_RATIO * metrics["diameter"] ** 2)
        if len(bad):
            raise DegenerateTriangle(
                f"area {areas[bad[0]]:.3e} below {DEGENERACY_RATIO:g} * diameter^2",
                triangle_index=int(bad[0]),
            )

        for arr in (vertices, triangles):
            arr.setflags(write=False)
        self.vertices = vertices
        self.triangles = triangles
        self.domain = domain
        self.areas = _frozen(areas)
        self.diameters = _frozen(metrics["diameter"])
        self.circumradii = _frozen(metrics["circumradius"])
        self.angles = _frozen(metrics["angles"])
        self.edge_lengths = _frozen(metrics["edge_lengths"])
        # fills the cached properties below
        self._triangle_points = _frozen(points)
        if edges is not None:
            self._edges = _given_edges(edges, clockwise, len(triangles))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def fineness(self) -> float:
        """|tau|, the largest triangle diameter."""
        return float(self.diameters.max())

    @property
    def max_circumradius(self) -> float:
        return float(self.circumradii.max())

    @property
    def max_angle(self) -> float:
        return float(self.angles.max())

    @property
    def min_angle(self) -> float:
        return float(self.angles.min())

    def area_sum(self) -> float:
        return float(np.add.reduce(self.areas))

    def triangle_points(self) -> np.ndarray:
        """Vertex coordinates per triangle, shape (nt, 3, 2)."""
        return self._triangle_points

    def gradients(self) -> Tuple[np.ndarray, np.ndarray]:
        """Barycentric gradients (grad_x, grad_y), each of shape (nt, 3)."""
        return self._gradients

    @cached_property
    def _gradients(self):
        gx, gy, _ = barycentric_gradients(self._triangle_points)
        return _frozen(gx), _frozen(gy)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Unique edges (lower index first) and the triangle -> edge map.

        tri_edges[k, i] is the global edge opposite local vertex i of
        triangle k. Edges are sorted by (lower, upper) index unless the
        mesh was built with its own edge table.
        """
        return self._edges

    @cached_property
    def _edges(self):
        t = self.triangles
        starts = np.stack([t[:, 1], t[:, 2], t[:, 0]], axis=1)
        ends = np.stack([t[:, 2], t[:, 0], t[:, 1]], axis=1)
        lo = np.minimum(starts, ends).ravel()
        hi = np.maximum(starts, ends).ravel()
        keys = lo * self.num_vertices + hi
        unique_keys, inverse = np.unique(keys, return_inverse=True)
        edges = np.stack([unique_keys // self.num_vertices, unique_keys % self.num_vertices], axis=1)
        return _frozen(edges), _frozen(inverse.reshape(-1, 3))

    def same_as(self, other: "Triangulation") -> bool:
        if self is other:
            return True
        return (
            self.triangles.shape == other.triangles.shape
            and self.vertices.shape == other.vertices.shape
            and np.array_equal(self.triangles, other.triangles)
            and np.array_equal(self.vertices, other.vertices)
        )

    def __repr__(self):
        return (
            f"Triangulation(vertices={self.num_vertices}, triangles={self.num_triangles}, "
            f"fineness={self.fineness:.4g}, max_circumradius={self.max_circumradius:.4g})"
        )


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _given_edges(edges, clockwise: np.ndarray, num_triangles: int):
    edge_table, tri_edges = (np.asarray(a, dtype=np.int64) for a in edges)
    tri_edges = tri_edges.reshape(-1, 3)
    if tri_edges.shape[0] != num_triangles or edge_table.ndim != 2 or edge_table.shape[1] != 2:
        raise InvalidParameter(
            f"edge table does not fit {num_triangles} triangles: {edge_table.shape}, {tri_edges.shape}"
        )
    if np.any(clockwise):
        # swapping corners 1 and 2 swaps the edges opposite them
        tri_edges = tri_edges.copy()
        tri_edges[clockwise] = tri_edges[clockwise][:, [0, 2, 1]]
    return _frozen(edge_table), _frozen(tri_edges)


def check_face_to_face(mesh: Triangulation, area_rtol: float = 1e-9) -> None:
    """Raise InvalidParameter at the first conformity violation.

    Interior edges must be shared by exactly two oppositely oriented
    triangles, edges used once must lie on the domain boundary, and the
    triangle areas must add up to the domain area.
    """
    t = mesh.triangles
    starts = np.stack([t[:, 1], t[:, 2], t[:, 0]], axis=1).ravel()
    ends = np.stack([t[:, 2], t[:, 0], t[:, 1]], axis=1).ravel()
    _, tri_edges = mesh.edges()
    edge_ids = tri_edges.ravel()
    ne = int(edge_ids.max()) + 1

    counts = np.bincount(edge_ids, minlength=ne)
    if counts.max() > 2:
        e = int(np.argmax(counts))
        raise InvalidParameter(f"edge {e} is shared by {counts[e]} triangles")

    direction = np.where(starts < ends, 1, -1)
    balance = np.bincount(edge_ids, weights=direction, minlength=ne)
    bad = np.flatnonzero((counts == 2) & (balance != 0))
    if len(bad):
        raise InvalidParameter(f"edge {int(bad[0])} is shared by two triangles with the same orientation")

    edges, _ = mesh.edges()
    boundary = edges[counts == 1]
    p, q = mesh.vertices[boundary[:, 0]], mesh.vertices[boundary[:, 1]]
    dom = mesh.domain
    tol = 1e-12 * max(dom.width, dom.height)
    on_side = (
        (np.abs(p[:, 0] - dom.a) <= tol) & (np.abs(q[:, 0] - dom.a) <= tol)
        | (np.abs(p[:, 0] - dom.b) <= tol) & (np.abs(q[:, 0] - dom.b) <= tol)
        | (np.abs(p[:, 1] - dom.c) <= tol) & (np.abs(q[:, 1] - dom.c) <= tol)
        | (np.abs(p[:, 1] - dom.d) <= tol) & (np.abs(q[:, 1] - dom.d) <= tol)
    )
    if not np.all(on_side):
        k = int(np.flatnonzero(~on_side)[0])
        raise InvalidParameter(
            f"edge {tuple(int(v) for v in boundary[k])} is used by one triangle but is not on the boundary"
        )

    total = mesh.area_sum()
    if abs(total - dom.area) > area_rtol * dom.area:
        raise InvalidParameter(f"triangle areas sum to {total!r}, domain area is {dom.area!r}")

    if len(edges) * mesh.num_vertices <= HANGING_NODE_SCAN_LIMIT:
        _check_hanging_vertices(mesh, edges)


def _check_hanging_vertices(mesh: Triangulation, edges: np.ndarray) -> None:
    p = mesh.vertices[edges[:, 0]][:, None, :]
    d = mesh.vertices[edges[:, 1]][:, None, :] - p
    w = mesh.vertices[None, :, :] - p
    length2 = np.sum(d * d, axis=-1)
    t = np.sum(w * d, axis=-1) / length2
    cross = d[..., 0] * w[..., 1] - d[..., 1] * w[..., 0]
    dist = np.abs(cross) / np.sqrt(length2)
    scale = np.sqrt(length2)
    inside = (t > 1e-12) & (t < 1 - 1e-12) & (dist <= 1e-12 * scale)
    if np.any(inside):
        e, v = np.argwhere(inside)[0]
        raise InvalidParameter(f"vertex {int(v)} lies inside edge {tuple(int(i) for i in edges[e])}")
