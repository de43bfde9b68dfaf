"""Minimum-angle, maximum-angle and circumradius conditions along a mesh sequence."""
import math
from typing import Dict, List, Sequence

import numpy as np
from scipy.stats import linregress

from surfarea.errors import InsufficientData
from surfarea.mesh.triangulation import Triangulation

# A quantity q is judged to decay with the mesh when the log-log slope of q
# against |tau| exceeds this value.
DECAY_SLOPE = 0.1


def _slope(h: np.ndarray, q: np.ndarray) -> float:
    return float(linregress(np.log(h), np.log(q)).slope)


def mesh_condition_summary(meshes: Sequence[Triangulation]) -> Dict:
    """Tabulate the mesh conditions and judge each on this sequence.

    The verdicts are empirical: a condition "holds" when the guarded
    quantity does not decay like a power of |tau| (min angle, pi minus the
    max angle) or when it does (max circumradius).
    """
    if len(meshes) < 2:
        raise InsufficientData(f"need at least 2 meshes, got {len(meshes)}")
    rows: List[Dict] = []
    for mesh in meshes:
        rows.append(
            {
                "triangles": mesh.num_triangles,
                "fineness": mesh.fineness,
                "min_angle": mesh.min_angle,
                "max_angle": mesh.max_angle,
                "max_circumradius": mesh.max_circumradius,
            }
        )
    h = np.array([row["fineness"] for row in rows])
    min_angle = np.array([row["min_angle"] for row in rows])
    gap = math.pi - np.array([row["max_angle"] for row in rows])
    radius = np.array([row["max_circumradius"] for row in rows])

    min_angle_slope = _slope(h, min_angle)
    max_angle_slope = _slope(h, gap)
    radius_slope = _slope(h, radius)
    return {
        "rows": rows,
        "min_angle_bound": float(min_angle.min()),
        "max_angle_bound": float(math.pi - gap.min()),
        "min_angle_slope": min_angle_slope,
        "max_angle_slope": max_angle_slope,
        "circumradius_slope": radius_slope,
        "minimum_angle_condition": min_angle_slope < DECAY_SLOPE,
        "maximum_angle_condition": max_angle_slope < DECAY_SLOPE,
        "circumradius_condition": radius_slope > DECAY_SLOPE,
    }
