"""Closed form, limits and refinement schedules of the Schwarz lantern."""
import math
from typing import List, Optional, Sequence

from surfarea.errors import InvalidParameter
from surfarea.mesh.generators import generate_lantern
from surfarea.protocol.report_protocol import LanternRow
from surfarea.utils import build_logger

logger = build_logger("lantern", "lantern.log")

# Schedules above this many triangles report the closed form only
LANTERN_MESH_LIMIT = 4_000_000


def lantern_area_closed_form(m: int, n: int, r: float, H: float) -> float:
    """2 m n r sin(pi/n) sqrt((H/m)^2 + r^2 (1 - cos(pi/n))^2)."""
    generate_lantern(m, n, r, H)
    # 1 - cos(t) = 2 sin^2(t/2) without cancellation for large n
    sag = 2.0 * math.sin(math.pi / (2 * n)) ** 2
    return 2 * m * n * r * math.sin(math.pi / n) * math.hypot(H / m, r * sag)


def lantern_area_limit(r: float, H: float, ratio: float) -> float:
    """Limit of the lantern area when m / n^2 tends to ``ratio``.

    Equals the cylinder area 2 pi r H only for ratio = 0.
    """
    if not (r > 0 and H > 0):
        raise InvalidParameter(f"lantern needs r > 0 and H > 0, got r={r}, H={H}")
    if ratio < 0:
        raise InvalidParameter(f"ratio must be >= 0, got {ratio}")
    if math.isinf(ratio):
        return math.inf
    return 2 * math.pi * r * math.hypot(H, math.pi**2 * r * ratio / 2)


def _strips(schedule: str, n: int, c: int) -> int:
    if schedule == "m=n":
        return n
    if schedule == "m=n^2":
        return n * n
    if schedule == "m=n^3":
        return n**3
    if schedule == "m=c":
        return c
    if schedule.startswith("m="):
        try:
            return int(schedule[2:])
        except ValueError:
            pass
    raise InvalidParameter(f"unknown lantern schedule {schedule!r}")


def _limit_ratio(schedule: str) -> float:
    return {"m=n^2": 1.0, "m=n^3": math.inf}.get(schedule, 0.0)


def lantern_schedule(
    schedule: str, n_values: Sequence[int], r: float = 1.0, H: float = 1.0, c: int = 1
) -> List[LanternRow]:
    """Lantern areas along the refinement m = m(n) for each n in ``n_values``."""
    limit = lantern_area_limit(r, H, _limit_ratio(schedule))
    rows = []
    for n in n_values:
        m = _strips(schedule, n, c)
        closed = lantern_area_closed_form(m, n, r, H)
        mesh_area: Optional[float] = None
        if 2 * m * n <= LANTERN_MESH_LIMIT:
            mesh_area = generate_lantern(m, n, r, H).area()
        gap = abs(closed - limit) / limit if math.isfinite(limit) else None
        rows.append(
            LanternRow(
                n=n,
                m=m,
                area_mesh=mesh_area,
                area_closed_form=closed,
                limit=limit,
                relative_gap=gap,
            )
        )
        logger.info(f"lantern {schedule} n={n} m={m} area={closed!r} limit={limit!r}")
    return rows


def doubling_sequence(n_max: int, n_min: int = 2) -> List[int]:
    """n_min, 2 n_min, ... up to n_max."""
    if n_max < n_min:
        raise InvalidParameter(f"--n-max must be >= {n_min}, got {n_max}")
    values = []
    n = n_min
    while n <= n_max:
        values.append(n)
        n *= 2
    return values
