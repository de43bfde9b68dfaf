"""
Convergence studies of the Lagrange and Crouzeix-Raviart area functionals
on the anisotropic mesh family, with CSV/gnuplot output.
"""
import dataclasses
from functools import partial
import math
import multiprocessing as mp
import os
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from surfarea.analysis.rates import MIN_FIT_POINTS, fit_rate
from surfarea.area import area_exact, area_pl_graph, seminorm_error_w11
from surfarea.constants import (
    CR_COLLAPSE_RATIO,
    CR_MIN_SLOPE,
    CSV_COLUMNS,
    LAGRANGE_STALL_FACTOR,
    REFERENCE_AREA_TOL,
)
from surfarea.errors import InvalidParameter
from surfarea.fields.analytic import CylinderSlice, ScalarField
from surfarea.geometry import Rectangle
from surfarea.interp import interpolate_mesh
from surfarea.mesh.generators import aniso_band, aniso_band_count, generate_uniform
from surfarea.protocol.report_protocol import ConvergenceRecord, InterpKind
from surfarea.quadrature import gauss_legendre, triangle_rule
from surfarea.settings import StudySettings, get_settings
from surfarea.utils import build_logger, exact_sum

logger = build_logger("convergence", "convergence.log")

KIND_SETS: Dict[str, Tuple[InterpKind, ...]] = {
    "both": (InterpKind.LAGRANGE, InterpKind.CROUZEIX_RAVIART),
    "lagrange-only": (InterpKind.LAGRANGE,),
    "cr-only": (InterpKind.CROUZEIX_RAVIART,),
}
COLUMN_SUFFIX = {InterpKind.LAGRANGE: "lagrange", InterpKind.CROUZEIX_RAVIART: "cr"}

# Uniform grid used for reference-area quadrature
REFERENCE_GRID = 32


def reference_area(
    field: ScalarField, domain: Optional[Rectangle] = None, settings: Optional[StudySettings] = None
) -> float:
    """A(f) over ``domain``: the closed form when one exists, quadrature otherwise."""
    settings = settings or get_settings()
    domain = domain or field.valid_domain
    mesh = generate_uniform(REFERENCE_GRID, domain)
    quad = area_exact(
        field, mesh, triangle_rule(settings.quad_degree), settings.reference_refine
    ).value
    if not isinstance(field, CylinderSlice):
        logger.info(f"reference area of {field.name} by quadrature: {quad!r}")
        return quad

    closed = field.exact_area(domain)
    gap = abs(closed - quad) / closed
    if gap > REFERENCE_AREA_TOL:
        logger.warning(
            f"closed-form area {closed!r} and quadrature {quad!r} differ by {gap:.2e} (relative)"
        )
    else:
        logger.info(f"reference area {closed!r}, quadrature agrees to {gap:.2e}")
    return closed


@dataclasses.dataclass(frozen=True)
class StudyTask:
    N: int
    alpha: float
    area_exact: float
    kinds: Tuple[InterpKind, ...]
    seminorm: bool = False


@dataclasses.dataclass(frozen=True)
class BandResult:
    """Partial sums and mesh maxima of one band of one study row."""

    task: StudyTask
    band: int
    fineness: float
    max_circumradius: float
    max_angle: float
    triangle_count: int
    # in the order of task.kinds
    areas: Tuple[float, ...]
    seminorms: Tuple[float, ...] = ()


def study_band(
    unit: Tuple[StudyTask, int], field: ScalarField, domain: Rectangle, settings: StudySettings
) -> BandResult:
    task, k = unit
    band = aniso_band(task.N, task.alpha, domain, k, settings.band_triangles)
    edge_rule = gauss_legendre(settings.edge_order)
    areas, seminorms = [], []
    for kind in task.kinds:
        surface = interpolate_mesh(field, band, kind, edge_rule)
        areas.append(area_pl_graph(surface).value)
        if task.seminorm:
            seminorms.append(
                seminorm_error_w11(
                    field, surface, triangle_rule(settings.quad_degree), settings.seminorm_refine
                )
            )
    return BandResult(
        task=task,
        band=k,
        fineness=band.fineness,
        max_circumradius=band.max_circumradius,
        max_angle=band.max_angle,
        triangle_count=band.num_triangles,
        areas=tuple(areas),
        seminorms=tuple(seminorms),
    )


def combine_bands(task: StudyTask, parts: Sequence[BandResult]) -> ConvergenceRecord:
    """The study row of ``task`` from all of its band results, in any order."""
    parts = sorted(parts, key=lambda p: p.band)
    values = dict(
        N=task.N,
        alpha=task.alpha,
        h=max(p.fineness for p in parts),
        max_circumradius=max(p.max_circumradius for p in parts),
        max_angle=max(p.max_angle for p in parts),
        area_exact=task.area_exact,
        triangle_count=sum(p.triangle_count for p in parts),
    )
    for i, kind in enumerate(task.kinds):
        suffix = COLUMN_SUFFIX[kind]
        total = exact_sum(p.areas[i] for p in parts)
        values[f"area_{suffix}"] = total
        values[f"err_{suffix}"] = abs(total - task.area_exact)
        if task.seminorm:
            values[f"seminorm_{suffix}"] = exact_sum(p.seminorms[i] for p in parts)
    return ConvergenceRecord(**values)


def run_convergence(
    field: ScalarField,
    alphas: Sequence[float],
    Ns: Sequence[int],
    kind_set: str = "both",
    settings: Optional[StudySettings] = None,
    domain: Optional[Rectangle] = None,
    seminorm: bool = False,
    area_ref: Optional[float] = None,
) -> List[ConvergenceRecord]:
    """Records for every (N, alpha), ordered by (alpha, N).

    Work is split into mesh bands; a row sums its band results exactly,
    so the output does not depend on settings.num_workers.
    """
    settings = settings or get_settings()
    if kind_set not in KIND_SETS:
        raise InvalidParameter(f"kind set must be one of {', '.join(KIND_SETS)}, got {kind_set!r}")
    Ns = [int(N) for N in Ns]
    if not Ns or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise InvalidParameter(f"Ns must be non-empty and strictly increasing, got {Ns}")
    bad = [a for a in alphas if not a >= 1.0]
    if not alphas or bad or len(set(alphas)) != len(alphas):
        raise InvalidParameter(f"alphas must be distinct, non-empty and >= 1, got {list(alphas)}")

    domain = domain or field.valid_domain
    if area_ref is None:
        area_ref = reference_area(field, domain, settings)
    tasks = [
        StudyTask(N=N, alpha=float(alpha), area_exact=area_ref, kinds=KIND_SETS[kind_set], seminorm=seminorm)
        for alpha in alphas
        for N in Ns
    ]
    # largest meshes first so the pool is not left waiting on one worker
    tasks.sort(key=lambda t: -(t.N ** (1 + t.alpha)))
    units = [
        (task, k)
        for task in tasks
        for k in range(aniso_band_count(task.N, task.alpha, domain, settings.band_triangles))
    ]
    worker = partial(study_band, field=field, domain=domain, settings=settings)

    logger.info(
        f"study {field.name}: {len(tasks)} points in {len(units)} bands, kinds={kind_set}, "
        f"workers={settings.num_workers}"
    )
    if settings.num_workers > 1:
        with mp.Pool(settings.num_workers) as pool:
            parts = list(tqdm(pool.imap_unordered(worker, units), total=len(units)))
    else:
        parts = [worker(unit) for unit in tqdm(units)]

    by_task: Dict[StudyTask, List[BandResult]] = {}
    for part in parts:
        by_task.setdefault(part.task, []).append(part)
    records = [combine_bands(task, by_task[task]) for task in tasks]

    records.sort(key=lambda r: (r.alpha, r.N))
    for rec in records:
        logger.info(
            f"alpha={rec.alpha} N={rec.N} triangles={rec.triangle_count} h={rec.h:.4g} "
            f"R={rec.max_circumradius:.4g} "
            f"err_lagrange={rec.err_lagrange} err_cr={rec.err_cr}"
        )
    return records


def records_to_frame(records: Sequence[ConvergenceRecord], kind_set: str = "both") -> pd.DataFrame:
    """Records as a table with the CSV columns, minus those of excluded kinds."""
    rows = []
    for rec in records:
        row = rec.model_dump()
        row["max_angle_deg"] = math.degrees(rec.max_angle)
        rows.append(row)
    columns = list(CSV_COLUMNS)
    for kind, suffix in COLUMN_SUFFIX.items():
        if kind not in KIND_SETS[kind_set]:
            columns = [c for c in columns if not c.endswith(f"_{suffix}")]
    return pd.DataFrame(rows, columns=columns)


def write_convergence_csv(
    records: Sequence[ConvergenceRecord], path, kind_set: str = "both"
) -> pd.DataFrame:
    df = records_to_frame(records, kind_set)
    dirname = os.path.dirname(os.fspath(path))
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    df.to_csv(path, index=False, float_format="%.17g")
    return df


def write_gnuplot_script(csv_path, columns: Sequence[str], alphas: Sequence[float], path=None) -> str:
    """Write a gnuplot script drawing one log-log panel per error column."""
    path = path or f"{csv_path}.gp"
    csv_name = os.path.basename(os.fspath(csv_path))
    stem = os.path.splitext(csv_name)[0]
    col = {name: i + 1 for i, name in enumerate(columns)}
    panels = [c for c in ("err_lagrange", "err_cr") if c in col]
    titles = {"err_lagrange": "Lagrange interpolation", "err_cr": "Crouzeix-Raviart interpolation"}

    lines = [
        f"# plots {csv_name}; run from its directory with: gnuplot {os.path.basename(os.fspath(path))}",
        'set datafile separator ","',
        "set terminal pngcairo size 800,{}".format(450 * len(panels)),
        f'set output "{stem}.png"',
        "set logscale xy",
        'set format x "10^{%L}"',
        'set format y "10^{%L}"',
        'set xlabel "|tau|"',
        'set ylabel "area error"',
        "set key left top",
        'ALPHAS = "{}"'.format(" ".join(repr(float(a)) for a in alphas)),
        f"set multiplot layout {len(panels)},1",
    ]
    for name in panels:
        lines += [
            f'set title "{titles[name]}"',
            f'plot for [i=1:words(ALPHAS)] "{csv_name}" skip 1 '
            f'using (abs(${col["alpha"]} - word(ALPHAS, i)) < 1e-9 ? ${col["h"]} : 1/0):{col[name]} '
            'with linespoints title sprintf("alpha = %s", word(ALPHAS, i))',
        ]
    lines.append("unset multiplot")

    with open(path, "w", encoding="utf-8") as fout:
        fout.write("\n".join(lines) + "\n")
    return path


def _by_alpha(records: Sequence[ConvergenceRecord]) -> Dict[float, List[ConvergenceRecord]]:
    groups: Dict[float, List[ConvergenceRecord]] = {}
    for rec in sorted(records, key=lambda r: (r.alpha, r.N)):
        groups.setdefault(rec.alpha, []).append(rec)
    return groups


def _decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def check_study_properties(records: Sequence[ConvergenceRecord]) -> Dict[str, Optional[bool]]:
    """Judge a study against the qualitative behaviour of the area errors.

    A property that the records cannot decide (missing column, too few
    points or alphas) is reported as None.
    """
    groups = _by_alpha(records)
    aniso = {a: recs for a, recs in groups.items() if a > 1.0}
    has_cr = all(r.err_cr is not None for r in records)
    has_lagrange = all(r.err_lagrange is not None for r in records)
    result: Dict[str, Optional[bool]] = {}

    result["cr_decreasing"] = (
        all(_decreasing([r.err_cr for r in recs]) for recs in groups.values()) if has_cr else None
    )

    collapse = None
    if has_cr and len(aniso) >= 2:
        by_n: Dict[int, List[float]] = {}
        for recs in aniso.values():
            for r in recs:
                by_n.setdefault(r.N, []).append(r.err_cr)
        ratios = [max(v) / min(v) for v in by_n.values() if len(v) == len(aniso) and min(v) > 0]
        collapse = bool(ratios) and max(ratios) < CR_COLLAPSE_RATIO
    result["cr_collapse"] = collapse

    slopes = None
    if has_cr and all(len(recs) >= MIN_FIT_POINTS for recs in groups.values()):
        slopes = all(fit_rate(recs, "err_cr").slope >= CR_MIN_SLOPE for recs in groups.values())
    result["cr_rate"] = slopes

    stall = None
    large = [a for a in aniso if a > 2.0]
    if has_lagrange and large:
        recs = {r.N: r for r in aniso[max(large)]}
        n_max = max(recs)
        if n_max // 4 in recs:
            stall = recs[n_max].err_lagrange >= LAGRANGE_STALL_FACTOR * recs[n_max // 4].err_lagrange
    result["lagrange_stalls"] = stall

    result["lagrange_decreasing"] = (
        _decreasing([r.err_lagrange for r in aniso[min(aniso)]]) if has_lagrange and aniso else None
    )

    for name, ok in result.items():
        if ok is False:
            logger.warning(f"study property {name} does not hold")
    return result
