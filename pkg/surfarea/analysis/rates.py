"""Log-log convergence rates."""
import math
from typing import Sequence

import numpy as np
from scipy.stats import linregress

from surfarea.errors import InsufficientData, NonpositiveError
from surfarea.protocol.report_protocol import RateFit

MIN_FIT_POINTS = 4


def _column(records, name: str):
    values = []
    for rec in records:
        value = rec.get(name) if isinstance(rec, dict) else getattr(rec, name, None)
        values.append(value)
    return values


def fit_rate(records: Sequence, column: str, x: str = "h") -> RateFit:
    """Least-squares slope of log(column) against log(x)."""
    records = list(records)
    if len(records) < MIN_FIT_POINTS:
        raise InsufficientData(
            f"a rate fit needs at least {MIN_FIT_POINTS} records, got {len(records)}"
        )
    ys = _column(records, column)
    xs = _column(records, x)
    for name, values in ((column, ys), (x, xs)):
        bad = [v for v in values if v is None or not v > 0 or not math.isfinite(v)]
        if bad:
            raise NonpositiveError(f"{name} must be positive to take logarithms, got {bad[0]!r}")
    log_x = np.log(np.asarray(xs, dtype=np.float64))
    log_y = np.log(np.asarray(ys, dtype=np.float64))
    if np.ptp(log_x) == 0.0:
        raise InsufficientData(f"all records share the same {x}")
    fit = linregress(log_x, log_y)
    return RateFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=min(1.0, float(fit.rvalue) ** 2),
        points=len(records),
    )
