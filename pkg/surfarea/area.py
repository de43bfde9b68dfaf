"""
Area functionals of graphs and parametric surfaces, exact and piecewise
linear, plus the W^{1,1} and W^{1,inf} seminorms that bound their errors.

Per-triangle contributions are summed with numpy's pairwise reduction so
that a given mesh always produces the same bits.
"""
from typing import Optional, Sequence

import numpy as np

from surfarea.constants import (
    DEFAULT_EDGE_ORDER,
    DEFAULT_QUAD_DEGREE,
    DEFAULT_SEMINORM_REFINE,
    QUADRATURE_BATCH_POINTS,
)
from surfarea.errors import MeshMismatch
from surfarea.interp import PiecewiseLinearSurface, interpolate_mesh
from surfarea.mesh.triangulation import Triangulation
from surfarea.protocol.report_protocol import AreaMethod, AreaReport, InterpKind
from surfarea.quadrature import (
    EdgeRule,
    TriangleRule,
    gauss_legendre,
    integrate_points,
    triangle_rule,
)
from surfarea.utils import pairwise_sum


def _report(value: float, method: AreaMethod, mesh: Triangulation, kind=None) -> AreaReport:
    return AreaReport(
        value=value,
        method=method,
        mesh_fineness=mesh.fineness,
        max_circumradius=mesh.max_circumradius,
        kind=kind,
        triangle_count=mesh.num_triangles,
    )


def area_exact(f, mesh: Triangulation, rule: Optional[TriangleRule] = None, refine: int = 0) -> AreaReport:
    """Quadrature of sqrt(1 + |grad f|^2) over the mesh."""
    rule = rule or triangle_rule(DEFAULT_QUAD_DEGREE)

    def integrand(x, y, _):
        gx, gy = f.grad(x, y)
        return np.sqrt(1.0 + gx * gx + gy * gy)

    parts = integrate_points(integrand, mesh.triangle_points(), mesh.areas, rule, refine)
    return _report(pairwise_sum(parts), AreaMethod.EXACT_QUADRATURE, mesh)


def area_pl_graph(s: PiecewiseLinearSurface) -> AreaReport:
    """Elementary area sum_K |K| sqrt(1 + P_K^2 + Q_K^2); no quadrature."""
    parts = s.mesh.areas * np.sqrt(1.0 + s.P * s.P + s.Q * s.Q)
    return _report(pairwise_sum(parts), AreaMethod.PL_GRAPH, s.mesh, s.kind)


def area_cr(f, mesh: Triangulation, edge_rule: Optional[EdgeRule] = None) -> AreaReport:
    """The Crouzeix-Raviart area functional: the graph area of the CR interpolant."""
    edge_rule = edge_rule or gauss_legendre(DEFAULT_EDGE_ORDER)
    surface = interpolate_mesh(f, mesh, InterpKind.CROUZEIX_RAVIART, edge_rule)
    return area_pl_graph(surface).model_copy(update={"method": AreaMethod.CR_FUNCTIONAL})


def area_parametric_exact(
    f, mesh: Triangulation, rule: Optional[TriangleRule] = None, refine: int = 0
) -> AreaReport:
    """Quadrature of |f_x x f_y| for a parametrization f: Omega -> R^3."""
    rule = rule or triangle_rule(DEFAULT_QUAD_DEGREE)

    def integrand(x, y, _):
        jac = f.jacobian(x, y)
        cross = np.cross(np.moveaxis(jac[:, 0], 0, -1), np.moveaxis(jac[:, 1], 0, -1))
        return np.linalg.norm(cross, axis=-1)

    parts = integrate_points(integrand, mesh.triangle_points(), mesh.areas, rule, refine)
    return _report(pairwise_sum(parts), AreaMethod.PARAMETRIC_EXACT, mesh)


def area_parametric_pl(surfaces: Sequence[PiecewiseLinearSurface]) -> AreaReport:
    """sum_K |K| |g_x x g_y| for the componentwise interpolant g."""
    if len(surfaces) != 3:
        raise MeshMismatch(f"a parametric surface needs 3 components, got {len(surfaces)}")
    mesh = surfaces[0].mesh
    kind = surfaces[0].kind
    for k, s in enumerate(surfaces[1:], start=1):
        if not s.mesh.same_as(mesh):
            raise MeshMismatch(f"component {k} lives on a different mesh than component 0")
        if s.kind != kind:
            raise MeshMismatch(f"component {k} is a {s.kind.value} interpolant, component 0 is {kind.value}")
    gx = np.stack([s.P for s in surfaces], axis=-1)
    gy = np.stack([s.Q for s in surfaces], axis=-1)
    parts = mesh.areas * np.linalg.norm(np.cross(gx, gy), axis=-1)
    return _report(pairwise_sum(parts), AreaMethod.PARAMETRIC_PL, mesh, kind)


def seminorm_error_w11(
    f,
    s: PiecewiseLinearSurface,
    rule: Optional[TriangleRule] = None,
    refine: int = DEFAULT_SEMINORM_REFINE,
) -> float:
    """|f - s|_{1,1} = sum_K integral_K |f_x - P_K| + |f_y - Q_K|.

    The integrand has a kink wherever f_x = P_K, hence the refined rule.
    """
    rule = rule or triangle_rule(DEFAULT_QUAD_DEGREE)
    P, Q = s.P, s.Q

    def integrand(x, y, idx):
        gx, gy = f.grad(x, y)
        return np.abs(gx - P[idx, None]) + np.abs(gy - Q[idx, None])

    parts = integrate_points(integrand, s.mesh.triangle_points(), s.mesh.areas, rule, refine)
    return pairwise_sum(parts)


def w1inf_seminorm(s: PiecewiseLinearSurface) -> float:
    """|s|_{1,inf}: the largest |P_K| or |Q_K|."""
    return float(max(np.max(np.abs(s.P)), np.max(np.abs(s.Q))))


def sampled_w1inf_seminorm(f, mesh: Triangulation, rule: Optional[TriangleRule] = None) -> float:
    """|f|_{1,inf} estimated from grad f at the quadrature points of every triangle."""
    rule = rule or triangle_rule(DEFAULT_QUAD_DEGREE)
    lam = rule.barycentric_nodes
    points = mesh.triangle_points()
    batch = max(1, QUADRATURE_BATCH_POINTS // rule.size)
    best = 0.0
    for lo in range(0, len(points), batch):
        block = points[lo : lo + batch]
        gx, gy = f.grad(block[:, :, 0] @ lam.T, block[:, :, 1] @ lam.T)
        best = max(best, float(np.max(np.abs(gx))), float(np.max(np.abs(gy))))
    return best
