"""
Mesh generators: uniform rectangle grids, the anisotropic isosceles
family and the Schwarz lantern.

Vertices are numbered by grid-index arithmetic; no generator ever
compares floating-point coordinates to deduplicate.
"""
import dataclasses
import math
from typing import Iterator, NamedTuple, Optional, Tuple

import numpy as np

from surfarea.constants import BAND_TRIANGLES, FLOOR_SLACK
from surfarea.errors import InvalidParameter
from surfarea.fields.analytic import CylinderParam
from surfarea.geometry import Point3, Rectangle
from surfarea.mesh.off_io import write_off
from surfarea.mesh.triangulation import Triangulation
from surfarea.utils import build_logger

logger = build_logger("mesh", "mesh.log")


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    x = lo + (hi - lo) * (np.arange(n + 1) / n)
    x[-1] = hi
    return x


def generate_rectangle(nx: int, ny: int, domain: Rectangle) -> Triangulation:
    """nx x ny grid of cells, each split by the diagonal (i+1, j) - (i, j+1)."""
    if nx < 1 or ny < 1:
        raise InvalidParameter(f"grid needs nx >= 1 and ny >= 1, got nx={nx}, ny={ny}")
    xs = _grid(domain.a, domain.b, nx)
    ys = _grid(domain.c, domain.d, ny)
    X, Y = np.meshgrid(xs, ys)
    vertices = np.column_stack([X.ravel(), Y.ravel()])

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    v00 = (j * (nx + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + nx + 1
    v11 = v01 + 1
    lower = np.column_stack([v00, v10, v01])
    upper = np.column_stack([v10, v11, v01])
    triangles = np.stack([lower, upper], axis=1).reshape(-1, 3)
    return Triangulation(vertices, triangles, domain)


def generate_uniform(N: int, domain: Rectangle) -> Triangulation:
    if N < 1:
        raise InvalidParameter(f"N must be >= 1, got {N}")
    return generate_rectangle(N, N, domain)


def aniso_strip_count(N: int, alpha: float, domain: Rectangle) -> int:
    """M = floor(height / h^alpha) with h = width / N."""
    if N < 2:
        raise InvalidParameter(f"N must be >= 2, got {N}")
    if not alpha >= 1.0:
        raise InvalidParameter(f"alpha must be >= 1, got {alpha}")
    h = domain.width / N
    M = math.floor(domain.height / h**alpha * (1.0 + FLOOR_SLACK))
    if M < 1:
        raise InvalidParameter(
            f"h^alpha = {h ** alpha:.4g} exceeds the domain height {domain.height:.4g}"
        )
    return M


def _row_offset(N: int, j):
    # even rows hold the N+1 base vertices, odd rows the N apexes plus both corners
    return j * (N + 1) + j // 2


def _row_x(N: int, odd: bool, domain: Rectangle) -> np.ndarray:
    if not odd:
        return _grid(domain.a, domain.b, N)
    x = np.empty(N + 2)
    x[0] = domain.a
    x[1:-1] = domain.a + domain.width * ((2 * np.arange(N) + 1) / (2 * N))
    x[-1] = domain.b
    return x


class StripTemplate(NamedTuple):
    """Local structure of one strip for both row parities.

    Every array has a leading axis of length 2: entry 0 describes a strip
    whose bottom row is a full base row, entry 1 one whose bottom row is
    offset. For the 2N+1 triangles of a strip, ``on_top`` says whether a
    corner sits on the strip's upper row and ``index`` is its position in
    that row. Edges are labelled per (triangle, opposite corner):
    ``edge_kind`` is 0 for the bottom row, 1 for the top row and 2 for an
    edge crossing the strip; ``edge_local`` numbers it within that group.
    Row edges join positions k and k+1 and are numbered by k; crossing
    edge c joins bottom position ``cross_bottom[c]`` to top position
    ``cross_top[c]``.
    """

    on_top: np.ndarray
    index: np.ndarray
    edge_kind: np.ndarray
    edge_local: np.ndarray
    cross_bottom: np.ndarray
    cross_top: np.ndarray


def _strip_templates(N: int) -> StripTemplate:
    i = np.arange(N)
    k = np.arange(1, N)
    zeros_n, ones_n = np.zeros(N, dtype=bool), np.ones(N, dtype=bool)
    zeros_k, ones_k = np.zeros(N - 1, dtype=bool), np.ones(N - 1, dtype=bool)

    # full bottom: upward triangles on the base edges, downward between apexes
    full_top = np.concatenate(
        [
            np.column_stack([zeros_n, zeros_n, ones_n]),
            np.column_stack([zeros_k, ones_k, ones_k]),
            [[False, True, True]],
            [[False, True, True]],
        ]
    )
    full_idx = np.concatenate(
        [
            np.column_stack([i, i + 1, i + 1]),
            np.column_stack([k, k + 1, k]),
            [[0, 1, 0]],
            [[N, N + 1, N]],
        ]
    )
    # offset bottom: the mirror image
    offset_top = np.concatenate(
        [
            np.column_stack([zeros_n, ones_n, ones_n]),
            np.column_stack([zeros_k, zeros_k, ones_k]),
            [[False, False, True]],
            [[False, False, True]],
        ]
    )
    offset_idx = np.concatenate(
        [
            np.column_stack([i + 1, i + 1, i]),
            np.column_stack([k, k + 1, k]),
            [[0, 1, 0]],
            [[N, N + 1, N]],
        ]
    )
    on_top = np.stack([full_top, offset_top])
    index = np.stack([full_idx, offset_idx])

    # the edge opposite corner i joins corners i+1 and i+2
    top_a, top_b = on_top[..., [1, 2, 0]], on_top[..., [2, 0, 1]]
    idx_a, idx_b = index[..., [1, 2, 0]], index[..., [2, 0, 1]]
    crossing = top_a != top_b
    edge_kind = np.where(crossing, 2, top_a.astype(np.int64))
    edge_local = np.minimum(idx_a, idx_b)
    bottom_pos = np.where(top_a, idx_b, idx_a)
    top_pos = np.where(top_a, idx_a, idx_b)
    cross_bottom, cross_top = [], []
    for parity in (0, 1):
        keys = bottom_pos[parity][crossing[parity]] * (N + 2) + top_pos[parity][crossing[parity]]
        unique_keys, inverse = np.unique(keys, return_inverse=True)
        edge_local[parity][crossing[parity]] = inverse.ravel()
        cross_bottom.append(unique_keys // (N + 2))
        cross_top.append(unique_keys % (N + 2))
    return StripTemplate(
        on_top=on_top,
        index=index,
        edge_kind=edge_kind,
        edge_local=edge_local,
        cross_bottom=np.stack(cross_bottom),
        cross_top=np.stack(cross_top),
    )


def _band_edges(N: int, j0: int, j1: int, offsets: np.ndarray, template: StripTemplate):
    """Edge table of strips j0..j1-1 laid out as row j0, strip j0, row j0+1, ..."""
    rows = np.arange(j0, j1 + 1)
    strips = rows[:-1]
    parity = strips % 2
    crossings = template.cross_bottom.shape[1]
    # a full row has N edges, an offset row N+1
    lengths = np.empty(2 * len(rows) - 1, dtype=np.int64)
    lengths[0::2] = N + rows % 2
    lengths[1::2] = crossings
    starts = np.concatenate([[0], np.cumsum(lengths)[:-1]])
    row_start, strip_start = starts[0::2], starts[1::2]

    edges = np.empty((int(lengths.sum()), 2), dtype=np.int64)
    for row_parity in (0, 1):
        sel = rows % 2 == row_parity
        k = np.arange(N + row_parity)
        ids = row_start[sel][:, None] + k
        edges[ids, 0] = offsets[sel][:, None] + k
        edges[ids, 1] = edges[ids, 0] + 1
    ids = strip_start[:, None] + np.arange(crossings)
    edges[ids, 0] = offsets[:-1, None] + template.cross_bottom[parity]
    edges[ids, 1] = offsets[1:, None] + template.cross_top[parity]

    block = np.column_stack([row_start[:-1], row_start[1:], strip_start])
    which = np.arange(len(strips))[:, None, None]
    tri_edges = block[which, template.edge_kind[parity]] + template.edge_local[parity]
    return edges, tri_edges.reshape(-1, 3)


def _aniso_band(N: int, M: int, j0: int, j1: int, domain: Rectangle, template: StripTemplate):
    """Vertices, triangles, edge table and y-range of strips j0..j1-1 (rows j0..j1)."""
    rows = np.arange(j0, j1 + 1)
    base = _row_offset(N, j0)
    offsets = _row_offset(N, rows) - base

    ys = domain.c + domain.height * (rows / M)
    ys[rows == M] = domain.d
    ys[rows == 0] = domain.c
    sizes = N + 1 + rows % 2
    pattern = np.concatenate([_row_x(N, False, domain), _row_x(N, True, domain)])
    start = 0 if j0 % 2 == 0 else N + 1
    total = int(sizes.sum())
    x = np.tile(pattern, len(rows) // 2 + 2)[start : start + total]
    vertices = np.column_stack([x, np.repeat(ys, sizes)])

    strips = np.arange(j0, j1)
    parity = strips % 2
    bottom = offsets[:-1][:, None, None]
    top = offsets[1:][:, None, None]
    on_top, index = template.on_top[parity], template.index[parity]
    triangles = np.where(on_top, top + index, bottom + index).reshape(-1, 3)
    edges = _band_edges(N, j0, j1, offsets, template)
    return vertices, triangles, edges, (float(ys[0]), float(ys[-1]))


def _strips_per_band(N: int, max_triangles: int) -> int:
    return max(1, max_triangles // (2 * N + 1))


def aniso_band_count(
    N: int, alpha: float, domain: Rectangle, max_triangles: int = BAND_TRIANGLES
) -> int:
    M = aniso_strip_count(N, alpha, domain)
    return -(-M // _strips_per_band(N, max_triangles))


def aniso_band(
    N: int,
    alpha: float,
    domain: Rectangle,
    k: int,
    max_triangles: int = BAND_TRIANGLES,
    template: Optional[StripTemplate] = None,
) -> Triangulation:
    """Band k of iter_aniso_bands, built on its own."""
    M = aniso_strip_count(N, alpha, domain)
    step = _strips_per_band(N, max_triangles)
    j0 = k * step
    if not 0 <= j0 < M:
        raise InvalidParameter(f"band {k} out of range for {-(-M // step)} bands")
    vertices, triangles, edges, (lo, hi) = _aniso_band(
        N, M, j0, min(j0 + step, M), domain, template or _strip_templates(N)
    )
    return Triangulation(vertices, triangles, Rectangle(domain.a, domain.b, lo, hi), edges)


def iter_aniso_bands(
    N: int, alpha: float, domain: Rectangle, max_triangles: int = BAND_TRIANGLES
) -> Iterator[Triangulation]:
    """Yield the anisotropic mesh as consecutive bands of whole strips.

    Each band triangulates its own sub-rectangle and adjacent bands share
    the coordinates of their common row exactly.
    """
    M = aniso_strip_count(N, alpha, domain)
    bands = aniso_band_count(N, alpha, domain, max_triangles)
    logger.info(
        f"aniso mesh N={N} alpha={alpha} strips={M} triangles={M * (2 * N + 1)} bands={bands}"
    )
    template = _strip_templates(N)
    for k in range(bands):
        yield aniso_band(N, alpha, domain, k, max_triangles, template)


def generate_aniso(N: int, alpha: float, domain: Rectangle) -> Triangulation:
    """Strips of height (d-c)/M tiled by isosceles triangles of base h.

    Apexes of one strip sit at the base midpoints of the next, so strip
    rows alternate between N+1 base points and N offset apexes. The
    half triangles at the left and right walls are closed by right
    triangles.
    """
    M = aniso_strip_count(N, alpha, domain)
    vertices, triangles, edges, _ = _aniso_band(N, M, 0, M, domain, _strip_templates(N))
    return Triangulation(vertices, triangles, domain, edges)


@dataclasses.dataclass(frozen=True)
class LanternMesh:
    """The Schwarz lantern inscribed in the cylinder of radius r, height H.

    Vertex (j, i) sits on ring j at height jH/m and angle 2 pi i/n + j pi/n.
    """

    m: int
    n: int
    r: float
    H: float

    def vertices(self) -> np.ndarray:
        j, i = np.meshgrid(np.arange(self.m + 1), np.arange(self.n), indexing="ij")
        phi = 2 * np.pi * i / self.n + np.pi * j / self.n
        z = self.H * (j / self.m)
        return np.stack([self.r * np.cos(phi), self.r * np.sin(phi), z], axis=-1).reshape(-1, 3)

    def faces(self) -> np.ndarray:
        n = self.n
        j, i = np.meshgrid(np.arange(self.m), np.arange(n), indexing="ij")
        here = j * n + i
        right = j * n + (i + 1) % n
        above = here + n
        above_right = right + n
        up = np.stack([here, right, above], axis=-1)
        down = np.stack([above, right, above_right], axis=-1)
        return np.stack([up, down], axis=2).reshape(-1, 3)

    @property
    def triangles3d(self) -> np.ndarray:
        """Shape (2mn, 3, 3)."""
        return self.vertices()[self.faces()]

    def triangle(self, k: int) -> Tuple[Point3, Point3, Point3]:
        v = self.vertices()[self.faces()[k]]
        return tuple(Point3(*map(float, p)) for p in v)

    def triangle_areas(self) -> np.ndarray:
        t = self.triangles3d
        cross = np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0])
        return 0.5 * np.linalg.norm(cross, axis=1)

    def area(self) -> float:
        return math.fsum(self.triangle_areas())

    def to_off(self, path) -> None:
        write_off(path, self.vertices(), self.faces())


def generate_lantern(m: int, n: int, r: float, H: float) -> LanternMesh:
    if m < 1 or n < 2:
        raise InvalidParameter(f"lantern needs m >= 1 and n >= 2, got m={m}, n={n}")
    if not (r > 0 and H > 0):
        raise InvalidParameter(f"lantern needs r > 0 and H > 0, got r={r}, H={H}")
    return LanternMesh(m=m, n=n, r=float(r), H=float(H))


def lantern_parameter_mesh(m: int, n: int, r: float, H: float):
    """Flat grid on (0, 2 pi r) x (0, H) and the map rolling it onto the lantern.

    The grid has n columns and m rows; the cylinder parametrization is
    sheared so that ring j turns by j pi/n. Its Lagrange interpolant on
    the grid is the lantern.
    """
    generate_lantern(m, n, r, H)
    field = CylinderParam(r=r, H=H, twist=math.pi * r * m / (n * H))
    mesh = generate_rectangle(n, m, field.valid_domain)
    return mesh, field
