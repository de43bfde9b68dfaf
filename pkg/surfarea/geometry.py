"""
Plane primitives, triangle measures and the shape parameters that the
minimum-angle, maximum-angle and circumradius conditions are stated in.

Scalar helpers (triangle_geom, normalize_to_ktilde) work on one triangle;
triangle_metrics is the vectorized form used for whole meshes.
"""
import dataclasses
import math
from typing import NamedTuple, Tuple

import numpy as np

from surfarea.constants import DEGENERACY_RATIO
from surfarea.errors import DegenerateTriangle, InvalidParameter


class Point2(NamedTuple):
    x: float
    y: float


class Point3(NamedTuple):
    x: float
    y: float
    z: float


@dataclasses.dataclass(frozen=True)
class Rectangle:
    """The open axis-aligned rectangle (a, b) x (c, d)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        values = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in values):
            raise InvalidParameter(f"rectangle bounds must be finite: {values}")
        if not (self.a < self.b and self.c < self.d):
            raise InvalidParameter(f"empty rectangle: {values}")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def height(self) -> float:
        return self.d - self.c

    @property
    def area(self) -> float:
        return self.width * self.height

    @classmethod
    def square(cls, lo: float = -1.0, hi: float = 1.0) -> "Rectangle":
        return cls(lo, hi, lo, hi)


@dataclasses.dataclass(frozen=True)
class TriangleGeom:
    vertices: Tuple[Point2, Point2, Point2]
    # edge_lengths[i] is the length of the edge opposite vertex i
    edge_lengths: Tuple[float, float, float]
    area: float
    diameter: float
    circumradius: float
    angles: Tuple[float, float, float]

    @property
    def min_angle(self) -> float:
        return min(self.angles)

    @property
    def max_angle(self) -> float:
        return max(self.angles)

    def as_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=np.float64)


@dataclasses.dataclass(frozen=True)
class ShapeTransform:
    """Similarity (plus optional mirror) carrying K~_alpha onto a triangle.

    A point q of K~_alpha is mapped to
    translation + scale * Rot(rotation) * diag(1, -1 if mirrored) * q.
    """

    s: float
    t: float
    scale: float
    rotation: float
    translation: Point2
    mirrored: bool

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        x = pts[:, 0]
        y = -pts[:, 1] if self.mirrored else pts[:, 1]
        cos_r, sin_r = math.cos(self.rotation), math.sin(self.rotation)
        out = np.empty_like(pts)
        out[:, 0] = self.translation.x + self.scale * (cos_r * x - sin_r * y)
        out[:, 1] = self.translation.y + self.scale * (sin_r * x + cos_r * y)
        return out


def ktilde_vertices(alpha: float, s: float, t: float) -> np.ndarray:
    """Vertices (0,0), (1,0), (alpha*s, alpha*t) of K~_alpha."""
    return np.array([[0.0, 0.0], [1.0, 0.0], [alpha * s, alpha * t]])


def _as_point(p) -> Point2:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidParameter(f"point coordinates must be finite: {(x, y)}")
    return Point2(x, y)


def _cross(ux, uy, vx, vy):
    return ux * vy - uy * vx


def _angle(ux, uy, vx, vy) -> float:
    # atan2 keeps full accuracy on very thin triangles, acos does not
    return math.atan2(abs(_cross(ux, uy, vx, vy)), ux * vx + uy * vy)


def triangle_geom(p0, p1, p2) -> TriangleGeom:
    """Measure one triangle; vertices are reordered counterclockwise."""
    p0, p1, p2 = _as_point(p0), _as_point(p1), _as_point(p2)
    signed = 0.5 * _cross(p1.x - p0.x, p1.y - p0.y, p2.x - p0.x, p2.y - p0.y)
    if signed < 0:
        p1, p2 = p2, p1
        signed = -signed
    pts = (p0, p1, p2)

    edges = []
    for i in range(3):
        q, r = pts[(i + 1) % 3], pts[(i + 2) % 3]
        edges.append(math.hypot(r.x - q.x, r.y - q.y))
    diameter = max(edges)
    if diameter == 0.0 or signed < DEGENERACY_RATIO * diameter**2:
        raise DegenerateTriangle(
            f"signed area {signed:.3e} below {DEGENERACY_RATIO:g} * diameter^2"
        )

    angles = []
    for i in range(3):
        o, q, r = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        angles.append(_angle(q.x - o.x, q.y - o.y, r.x - o.x, r.y - o.y))

    circumradius = edges[0] * edges[1] * edges[2] / (4.0 * signed)
    return TriangleGeom(
        vertices=pts,
        edge_lengths=tuple(edges),
        area=signed,
        diameter=diameter,
        circumradius=circumradius,
        angles=tuple(angles),
    )


def normalize_to_ktilde(tri: TriangleGeom) -> Tuple[ShapeTransform, float]:
    """Find the transform carrying K~_alpha onto ``tri`` and return it with alpha.

    In K~_alpha the longest edge is e_1 (opposite x_1 = origin), |e_3| = 1
    is the edge x_1 x_2 and |e_2| = alpha <= 1 is the edge x_1 x_3.
    """
    pts = [np.array(v, dtype=np.float64) for v in tri.vertices]
    lengths = tri.edge_lengths
    apex = int(np.argmax(lengths))
    others = [(apex + 1) % 3, (apex + 2) % 3]
    # |x_1 x_j| is the length of the edge opposite the third vertex
    dist = {j: lengths[3 - apex - j] for j in others}
    far, near = sorted(others, key=lambda j: (-dist[j], j))
    if dist[near] <= 0.0 or dist[far] <= 0.0:
        raise DegenerateTriangle("zero-length edge")

    origin = pts[apex]
    u = pts[far] - origin
    v = pts[near] - origin
    scale = float(np.hypot(u[0], u[1]))
    alpha = float(np.hypot(v[0], v[1])) / scale
    cross = _cross(u[0], u[1], v[0], v[1])
    theta = _angle(u[0], u[1], v[0], v[1])
    if theta <= 0.0:
        raise DegenerateTriangle("collinear vertices")

    transform = ShapeTransform(
        s=math.cos(theta),
        t=math.sin(theta),
        scale=scale,
        rotation=math.atan2(u[1], u[0]),
        translation=Point2(float(origin[0]), float(origin[1])),
        mirrored=bool(cross < 0),
    )
    return transform, alpha


def triangle_metrics(points: np.ndarray) -> dict:
    """Vectorized triangle measures for an array of shape (nt, 3, 2).

    Returns signed areas, edge lengths (nt, 3), diameters, circumradii and
    the three angles (nt, 3). No degeneracy check is applied here.
    """
    pts = np.asarray(points, dtype=np.float64)
    p0, p1, p2 = pts[:, 0], pts[:, 1], pts[:, 2]
    signed = 0.5 * _cross(
        p1[:, 0] - p0[:, 0], p1[:, 1] - p0[:, 1], p2[:, 0] - p0[:, 0], p2[:, 1] - p0[:, 1]
    )
    edge_vecs = np.stack([p2 - p1, p0 - p2, p1 - p0], axis=1)
    edges = np.hypot(edge_vecs[..., 0], edge_vecs[..., 1])

    angles = np.empty_like(edges)
    for i in range(3):
        o, q, r = pts[:, i], pts[:, (i + 1) % 3], pts[:, (i + 2) % 3]
        ux, uy = q[:, 0] - o[:, 0], q[:, 1] - o[:, 1]
        vx, vy = r[:, 0] - o[:, 0], r[:, 1] - o[:, 1]
        angles[:, i] = np.arctan2(np.abs(_cross(ux, uy, vx, vy)), ux * vx + uy * vy)

    with np.errstate(divide="ignore", invalid="ignore"):
        circumradius = np.prod(edges, axis=1) / (4.0 * np.abs(signed))
    return {
        "signed_area": signed,
        "edge_lengths": edges,
        "diameter": edges.max(axis=1),
        "circumradius": circumradius,
        "angles": angles,
    }


def barycentric_gradients(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of the barycentric coordinates on each triangle.

    Returns (grad_x (nt,3), grad_y (nt,3), signed_area (nt,)). grad lambda_i
    is the rotated opposite edge vector divided by twice the signed area.
    """
    pts = np.asarray(points, dtype=np.float64)
    metrics_area = 0.5 * _cross(
        pts[:, 1, 0] - pts[:, 0, 0],
        pts[:, 1, 1] - pts[:, 0, 1],
        pts[:, 2, 0] - pts[:, 0, 0],
        pts[:, 2, 1] - pts[:, 0, 1],
    )
    gx = np.empty(pts.shape[:2])
    gy = np.empty(pts.shape[:2])
    for i in range(3):
        q, r = pts[:, (i + 1) % 3], pts[:, (i + 2) % 3]
        gx[:, i] = (q[:, 1] - r[:, 1]) / (2.0 * metrics_area)
        gy[:, i] = (r[:, 0] - q[:, 0]) / (2.0 * metrics_area)
    return gx, gy, metrics_area
