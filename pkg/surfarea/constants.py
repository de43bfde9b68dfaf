"""
Global constants.
"""

from enum import IntEnum
import math
import os

# The output dir of log files. Empty means log to the console only.
LOGDIR = os.getenv("SURFAREA_LOGDIR", "")

##### Geometry
# A triangle is degenerate when |signed area| < DEGENERACY_RATIO * diameter^2
DEGENERACY_RATIO = 1e-14
# Relative slack used when flooring the anisotropic strip count
FLOOR_SLACK = 1e-12

##### Quadrature defaults (overridable through surfarea.settings)
DEFAULT_EDGE_ORDER = 5
DEFAULT_QUAD_DEGREE = 8
DEFAULT_SEMINORM_REFINE = 2
DEFAULT_REFERENCE_REFINE = 3
MAX_EDGE_ORDER = 20
MAX_TRIANGLE_DEGREE = 20
# Number of quadrature points evaluated per numpy batch
QUADRATURE_BATCH_POINTS = int(os.getenv("SURFAREA_QUADRATURE_BATCH_POINTS", 4_000_000))

##### Studies
DEFAULT_ALPHAS = [1.0, 1.2, 1.6, 2.0, 2.4]
DEFAULT_NS = [16, 32, 64, 128, 256, 512]
DEFAULT_FIELD_SPEC = "cylinder-slice:a=1.1"
# Streaming band size for large anisotropic meshes
BAND_TRIANGLES = int(os.getenv("SURFAREA_BAND_TRIANGLES", 2_000_000))
# Thresholds for the qualitative convergence checks
CR_COLLAPSE_RATIO = 1.5
CR_MIN_SLOPE = 0.9
LAGRANGE_STALL_FACTOR = 0.5
# Allowed gap between the closed-form and the quadrature reference area
REFERENCE_AREA_TOL = 1e-10

CSV_COLUMNS = [
    "N",
    "alpha",
    "h",
    "max_circumradius",
    "max_angle_deg",
    "area_exact",
    "area_lagrange",
    "area_cr",
    "err_lagrange",
    "err_cr",
]

##### Schwarz lantern
LANTERN_SCHEDULES = ["m=n", "m=n^2", "m=n^3", "m=c"]

# The largest root of 1/x + tan(1/x) = 0 lies in 1/x in (pi/2, pi)
A2_BRACKET = (math.pi / 2, math.pi)


class ErrorCode(IntEnum):
    """
    Machine-readable error codes carried by every SurfAreaError.
    4xxxx: invalid input, 5xxxx: computation failure.
    """

    VALIDATION_TYPE_ERROR = 40001

    INVALID_PARAMETER = 40301
    UNKNOWN_FIELD = 40302
    MESH_MISMATCH = 40303
    INSUFFICIENT_DATA = 40304
    NONPOSITIVE_ERROR = 40305

    DEGENERATE_TRIANGLE = 50001
    INTERPOLATION_FAILURE = 50002
    IO_ERROR = 50003
    INTERNAL_ERROR = 50004


class ExitCode(IntEnum):
    OK = 0
    USAGE = 1
    COMPUTATION = 2
