"""
Quadrature on segments and triangles.

Edge rules are Gauss-Legendre rules mapped to [0, 1]. Triangle rules are
stored in barycentric coordinates with weights summing to one, so that
the integral over a triangle K is |K| * sum_q w_q g(x_q).
"""
import dataclasses
from functools import lru_cache
import math
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from surfarea.constants import MAX_EDGE_ORDER, MAX_TRIANGLE_DEGREE, QUADRATURE_BATCH_POINTS
from surfarea.errors import InvalidParameter
from surfarea.geometry import TriangleGeom


@dataclasses.dataclass(frozen=True)
class EdgeRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray


@dataclasses.dataclass(frozen=True)
class TriangleRule:
    degree: int
    barycentric_nodes: np.ndarray  # (nq, 3)
    weights: np.ndarray  # (nq,)

    def refined(self, k: int) -> "TriangleRule":
        """Composite rule on the 4^k uniform subdivision of the triangle."""
        if k < 0:
            raise InvalidParameter(f"refine level must be >= 0, got {k}")
        if k == 0:
            return self
        return _refined_rule(self.degree, k)

    @property
    def size(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> EdgeRule:
    if not 1 <= order <= MAX_EDGE_ORDER:
        raise InvalidParameter(
            f"edge rule order must be in [1, {MAX_EDGE_ORDER}], got {order}"
        )
    x, w = leggauss(order)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return EdgeRule(order=order, nodes=nodes, weights=weights)


def _orbit3(a: float) -> np.ndarray:
    b = 1.0 - 2.0 * a
    return np.array([[a, a, b], [a, b, a], [b, a, a]])


def _radon_rule() -> np.ndarray:
    # 7-point symmetric rule, exact for degree 5
    r15 = math.sqrt(15.0)
    a1 = (6.0 - r15) / 21.0
    a2 = (6.0 + r15) / 21.0
    nodes = np.vstack([[[1 / 3, 1 / 3, 1 / 3]], _orbit3(a1), _orbit3(a2)])
    weights = np.array(
        [9.0 / 40.0]
        + [(155.0 - r15) / 1200.0] * 3
        + [(155.0 + r15) / 1200.0] * 3
    )
    return nodes, weights


def _collapsed_gauss_rule(degree: int):
    """Duffy-collapsed tensor rule on the reference triangle.

    x = u, y = (1 - u) v with (u, v) in [0,1]^2; the Jacobian (1 - u) is
    absorbed by a Gauss-Jacobi rule in u.
    """
    n = (degree + 2) // 2 + 1
    xu, wu = roots_jacobi(n, 1.0, 0.0)
    u = 0.5 * (xu + 1.0)
    wu = wu / 4.0  # (1-x)/2 weight and the dx -> du change
    xv, wv = leggauss(n)
    v = 0.5 * (xv + 1.0)
    wv = 0.5 * wv
    U, V = np.meshgrid(u, v, indexing="ij")
    W = np.outer(wu, wv)
    x = U.ravel()
    y = ((1.0 - U) * V).ravel()
    # weights currently integrate over the reference triangle of area 1/2
    weights = 2.0 * W.ravel()
    nodes = np.column_stack([1.0 - x - y, x, y])
    return nodes, weights


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> TriangleRule:
    if not 1 <= degree <= MAX_TRIANGLE_DEGREE:
        raise InvalidParameter(
            f"triangle rule degree must be in [1, {MAX_TRIANGLE_DEGREE}], got {degree}"
        )
    if degree == 1:
        nodes = np.array([[1 / 3, 1 / 3, 1 / 3]])
        weights = np.array([1.0])
    elif degree == 2:
        nodes = _orbit3(1.0 / 6.0)
        weights = np.full(3, 1.0 / 3.0)
    elif degree <= 5:
        nodes, weights = _radon_rule()
    else:
        nodes, weights = _collapsed_gauss_rule(degree)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return TriangleRule(degree=degree, barycentric_nodes=nodes, weights=weights)


@lru_cache(maxsize=None)
def _refined_rule(degree: int, k: int) -> TriangleRule:
    base = triangle_rule(degree)
    # sub-triangles of the 2^k x 2^k barycentric grid, as barycentric vertex triples
    n = 2**k
    subs = []
    for i in range(n):
        for j in range(n - i):
            a = np.array([i, j, n - i - j]) / n
            b = np.array([i + 1, j, n - i - j - 1]) / n
            c = np.array([i, j + 1, n - i - j - 1]) / n
            subs.append((a, b, c))
            if j < n - i - 1:
                d = np.array([i + 1, j + 1, n - i - j - 2]) / n
                subs.append((b, d, c))
    nodes = []
    for a, b, c in subs:
        corners = np.stack([a, b, c])  # rows: sub-vertices in parent barycentrics
        nodes.append(base.barycentric_nodes @ corners)
    nodes = np.vstack(nodes)
    weights = np.tile(base.weights, len(subs)) / len(subs)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return TriangleRule(degree=degree, barycentric_nodes=nodes, weights=weights)


def integrate_edge(f, p, q, rule: EdgeRule) -> float:
    """Integral of ``f`` along the segment p -> q.

    ``f`` is a ScalarField or a vectorized callable g(x, y).
    """
    fn = _as_callable(f)
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    d = q - p
    x = p[0] + d[0] * rule.nodes
    y = p[1] + d[1] * rule.nodes
    length = float(np.hypot(d[0], d[1]))
    return float(np.dot(rule.weights, fn(x, y))) * length


def edge_means(f, starts: np.ndarray, ends: np.ndarray, rule: EdgeRule) -> np.ndarray:
    """Mean value of ``f`` on each segment starts[k] -> ends[k]."""
    fn = _as_callable(f)
    starts = np.asarray(starts, dtype=np.float64)
    d = np.asarray(ends, dtype=np.float64) - starts
    out = np.empty(len(starts))
    batch = max(1, QUADRATURE_BATCH_POINTS // rule.order)
    for lo in range(0, len(starts), batch):
        hi = min(lo + batch, len(starts))
        x = starts[lo:hi, 0, None] + d[lo:hi, 0, None] * rule.nodes
        y = starts[lo:hi, 1, None] + d[lo:hi, 1, None] * rule.nodes
        out[lo:hi] = fn(x, y) @ rule.weights
    return out


def integrate_triangle(g, tri: TriangleGeom, rule: TriangleRule, refine: int = 0) -> float:
    """Integral of ``g`` over one triangle by affine pullback of ``rule``."""
    fn = _as_callable(g)
    rule = rule.refined(refine)
    pts = rule.barycentric_nodes @ tri.as_array()
    return tri.area * float(np.dot(rule.weights, fn(pts[:, 0], pts[:, 1])))


def integrate_points(
    g: Callable, points: np.ndarray, areas: np.ndarray, rule: TriangleRule, refine: int = 0
) -> np.ndarray:
    """Per-triangle integrals of ``g`` over triangles ``points`` (nt, 3, 2).

    ``g`` receives the quadrature coordinates (x, y) of shape (batch, nq)
    together with the triangle indices of the batch and returns values of
    the same shape.
    """
    rule = rule.refined(refine)
    nt = len(points)
    out = np.empty(nt)
    batch = max(1, QUADRATURE_BATCH_POINTS // rule.size)
    lam = rule.barycentric_nodes
    for lo in range(0, nt, batch):
        hi = min(lo + batch, nt)
        block = points[lo:hi]
        x = block[:, :, 0] @ lam.T
        y = block[:, :, 1] @ lam.T
        values = g(x, y, np.arange(lo, hi))
        out[lo:hi] = np.abs(areas[lo:hi]) * (values @ rule.weights)
    return out


def integrate_mesh(g, mesh, rule: TriangleRule, refine: int = 0) -> np.ndarray:
    """Per-triangle integrals of ``g`` over every triangle of ``mesh``."""
    fn = _as_callable(g)
    return integrate_points(
        lambda x, y, _: fn(x, y), mesh.triangle_points(), mesh.areas, rule, refine
    )


def _as_callable(f):
    if hasattr(f, "eval"):
        return f.eval
    return f
