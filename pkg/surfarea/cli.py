"""
Command line interface for the surface area experiments.

Usage:
python3 -m surfarea.cli lantern --m 4 --n 4
python3 -m surfarea.cli lantern --schedule m=n^2 --n-max 32
python3 -m surfarea.cli area --field cylinder-slice:a=1.1 --N 128 --alpha 2.4
python3 -m surfarea.cli converge --alphas 1.0,1.2,1.6,2.0,2.4 --Ns 16,32,64,128 --out fig5.csv --check
python3 -m surfarea.cli export --field cylinder-slice:a=1.1 --N 12 --alpha 1.6 --kind cr --out cr.off
python3 -m surfarea.cli constants

Every subcommand also accepts --config FILE.json holding the same flags;
flags given on the command line win.
"""
import argparse
import json
import sys
from typing import Dict, List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from surfarea.analysis.convergence import (
    check_study_properties,
    run_convergence,
    write_convergence_csv,
    write_gnuplot_script,
)
from surfarea.analysis.interp_constants import a2_residual, babuska_aziz_a2
from surfarea.analysis.lantern import (
    doubling_sequence,
    lantern_area_closed_form,
    lantern_area_limit,
    lantern_schedule,
)
from surfarea.area import (
    area_exact,
    area_parametric_exact,
    area_parametric_pl,
    area_pl_graph,
    seminorm_error_w11,
)
from surfarea.constants import ErrorCode, ExitCode
from surfarea.errors import InvalidParameter, SurfAreaError
from surfarea.fields.analytic import ScalarField
from surfarea.fields.field_registry import list_fields, parse_field_spec
from surfarea.interp import interpolate_mesh, interpolate_mesh_vector, surface_to_off
from surfarea.mesh.generators import generate_aniso, generate_lantern, generate_uniform
from surfarea.protocol.report_protocol import (
    ErrorResponse,
    InterpKind,
    RunConfig,
    describe_validation_error,
)
from surfarea.quadrature import gauss_legendre, triangle_rule
from surfarea.settings import get_settings
from surfarea.utils import build_logger

logger = build_logger("cli", "cli.log")

CONFIG_ALIASES = {"field": "field_spec", "out": "output_path"}


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; usage errors here exit with 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default(name):
    return RunConfig.model_fields[name].get_default(call_default_factory=True)


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=str, help="JSON file with values for the flags below.")


def _add_field_mesh(parser: argparse.ArgumentParser):
    fields = ", ".join(info.name for info in list_fields())
    parser.add_argument(
        "--field",
        dest="field_spec",
        type=str,
        help=f'Field spec "name:k=v,...". Built-ins: {fields}. Default: {_default("field_spec")}.',
    )
    parser.add_argument(
        "--mesh",
        choices=["aniso", "uniform"],
        help='Mesh family. Default: aniso.',
    )
    parser.add_argument("--N", type=int, help=f"Base subdivision count. Default: {_default('N')}.")
    parser.add_argument(
        "--alpha", type=float, help=f"Anisotropy exponent, >= 1. Default: {_default('alpha')}."
    )


def _add_rules(parser: argparse.ArgumentParser):
    settings = get_settings()
    parser.add_argument(
        "--quad-degree",
        dest="quad_degree",
        type=int,
        help=f"Triangle quadrature degree. Default: {settings.quad_degree} (SURFAREA_QUAD_DEGREE).",
    )
    parser.add_argument(
        "--edge-order",
        dest="edge_order",
        type=int,
        help=f"Gauss-Legendre order on edges. Default: {settings.edge_order} (SURFAREA_EDGE_ORDER).",
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="surfarea", description=__doc__.strip().splitlines()[0], argument_default=argparse.SUPPRESS
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("lantern", help="Schwarz lantern areas.", argument_default=argparse.SUPPRESS)
    _add_common(p)
    p.add_argument("--m", type=int, help=f"Number of strips. Default: {_default('m')}.")
    p.add_argument("--n", type=int, help=f"Triangles per ring half. Default: {_default('n')}.")
    p.add_argument("--r", type=float, help=f"Cylinder radius. Default: {_default('r')}.")
    p.add_argument("--H", type=float, help=f"Cylinder height. Default: {_default('H')}.")
    p.add_argument(
        "--schedule",
        type=str,
        help='Sweep n = 2, 4, ... up to --n-max with m = m(n): "m=n", "m=n^2", "m=n^3" or "m=<int>".',
    )
    p.add_argument("--n-max", dest="n_max", type=int, help=f"Largest n of a sweep. Default: {_default('n_max')}.")
    p.add_argument("--export", dest="output_path", type=str, help="Write the lantern as an OFF file.")
    p.add_argument("--format", choices=["csv", "json"], help="json prints JSON rows instead of a table.")

    p = sub.add_parser("area", help="Area functionals on one mesh.", argument_default=argparse.SUPPRESS)
    _add_common(p)
    _add_field_mesh(p)
    p.add_argument("--kind", choices=["lagrange", "cr", "both"], help="Interpolation. Default: both.")
    p.add_argument("--refine", type=int, help="4^k subdivision of the exact-area quadrature. Default: 0.")
    p.add_argument("--seminorm", action="store_true", help="Also report |f - I f|_{1,1}.")
    _add_rules(p)

    p = sub.add_parser("converge", help="Convergence study over N and alpha.", argument_default=argparse.SUPPRESS)
    _add_common(p)
    p.add_argument("--field", dest="field_spec", type=str, help=f"Field spec. Default: {_default('field_spec')}.")
    p.add_argument(
        "--alphas",
        type=_float_list,
        help=f"Comma-separated alphas. Default: {','.join(str(a) for a in _default('alphas'))}.",
    )
    p.add_argument(
        "--Ns",
        type=_int_list,
        help=f"Comma-separated, strictly increasing N. Default: {','.join(str(n) for n in _default('Ns'))}.",
    )
    p.add_argument(
        "--kind", choices=["both", "lagrange-only", "cr-only"], help="Error columns to compute. Default: both."
    )
    p.add_argument("--threads", type=int, help="Worker processes. Default: 1 (SURFAREA_NUM_WORKERS).")
    p.add_argument("--out", dest="output_path", type=str, help="Output file. Default: convergence.csv.")
    p.add_argument("--format", choices=["csv", "json"], help="Output file format. Default: csv.")
    p.add_argument("--check", action="store_true", help="Evaluate the expected error behaviour.")
    p.add_argument("--seminorm", action="store_true", help="Also compute |f - I f|_{1,1} per row.")
    _add_rules(p)

    p = sub.add_parser("export", help="Write an interpolated graph as OFF.", argument_default=argparse.SUPPRESS)
    _add_common(p)
    _add_field_mesh(p)
    p.add_argument("--kind", choices=["lagrange", "cr"], help="Interpolation. Default: lagrange.")
    p.add_argument("--out", dest="output_path", type=str, help="OFF file to write (required).")
    p.add_argument("--edge-order", dest="edge_order", type=int, help="Gauss-Legendre order on edges.")

    p = sub.add_parser("constants", help="Print the interpolation constant A_2.", argument_default=argparse.SUPPRESS)
    _add_common(p)
    p.add_argument("--format", choices=["csv", "json"], help="json prints JSON instead of a table.")
    return parser


def load_config(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as fin:
        data = json.load(fin)
    if not isinstance(data, dict):
        raise InvalidParameter(f"--config: {path} must hold a JSON object")
    out = {}
    for key, value in data.items():
        key = key.lstrip("-").replace("-", "_")
        out[CONFIG_ALIASES.get(key, key)] = value
    return out


def parse_run_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    settings = get_settings()
    values = {
        "quad_degree": settings.quad_degree,
        "edge_order": settings.edge_order,
        "threads": settings.num_workers,
    }
    subcommand = args["subcommand"]
    if subcommand == "export":
        values["kind"] = "lagrange"
    if subcommand == "converge":
        values["output_path"] = "convergence.csv"
    config_path = args.pop("config", None)
    if config_path:
        values.update(load_config(config_path))
    values.update(args)
    return RunConfig(**values)


def _mesh(cfg: RunConfig, field):
    domain = field.valid_domain
    if cfg.mesh == "uniform":
        return generate_uniform(cfg.N, domain)
    return generate_aniso(cfg.N, cfg.alpha, domain)


def _kinds(kind: str) -> List[InterpKind]:
    if kind == "both":
        return [InterpKind.LAGRANGE, InterpKind.CROUZEIX_RAVIART]
    return [InterpKind(kind)]


def cmd_lantern(cfg: RunConfig, console: Console) -> Dict:
    if cfg.schedule:
        rows = lantern_schedule(cfg.schedule, doubling_sequence(cfg.n_max), cfg.r, cfg.H)
        result = {"schedule": cfg.schedule, "rows": [row.model_dump() for row in rows]}
        if cfg.format == "json":
            print(json.dumps(result))
            return result
        table = Table(title=f"lantern {cfg.schedule}, r={cfg.r:g}, H={cfg.H:g}")
        for name in ("n", "m", "triangle sum", "closed form", "limit", "relative gap"):
            table.add_column(name, justify="right")
        for row in rows:
            table.add_row(
                str(row.n),
                str(row.m),
                "-" if row.area_mesh is None else f"{row.area_mesh:.12g}",
                f"{row.area_closed_form:.12g}",
                f"{row.limit:.12g}",
                "-" if row.relative_gap is None else f"{row.relative_gap:.3e}",
            )
        console.print(table)
        return result

    lantern = generate_lantern(cfg.m, cfg.n, cfg.r, cfg.H)
    closed = lantern_area_closed_form(cfg.m, cfg.n, cfg.r, cfg.H)
    mesh_area = lantern.area()
    result = {
        "m": cfg.m,
        "n": cfg.n,
        "r": cfg.r,
        "H": cfg.H,
        "triangles": 2 * cfg.m * cfg.n,
        "area_closed_form": closed,
        "area_mesh": mesh_area,
        "relative_gap": abs(mesh_area - closed) / closed,
        "cylinder_area": lantern_area_limit(cfg.r, cfg.H, 0.0),
    }
    if cfg.output_path:
        lantern.to_off(cfg.output_path)
        result["off"] = cfg.output_path
    if cfg.format == "json":
        print(json.dumps(result))
    else:
        table = Table(title="Schwarz lantern")
        table.add_column("quantity")
        table.add_column("value", justify="right")
        for key, value in result.items():
            table.add_row(key, f"{value:.15g}" if isinstance(value, float) else str(value))
        console.print(table)
    return result


def cmd_area(cfg: RunConfig, console: Console) -> Dict:
    field = parse_field_spec(cfg.field_spec)
    mesh = _mesh(cfg, field)
    rule = triangle_rule(cfg.quad_degree)
    edge_rule = gauss_legendre(cfg.edge_order)
    result = {"field": cfg.field_spec, "mesh": cfg.mesh, "N": cfg.N}
    if cfg.mesh == "aniso":
        result["alpha"] = cfg.alpha

    if isinstance(field, ScalarField):
        exact = area_exact(field, mesh, rule, cfg.refine)
        result["exact"] = exact.model_dump(mode="json")
        for kind in _kinds(cfg.kind):
            surface = interpolate_mesh(field, mesh, kind, edge_rule)
            report = area_pl_graph(surface)
            result[kind.value] = report.model_dump(mode="json")
            result[f"err_{kind.value}"] = abs(report.value - exact.value)
            if cfg.seminorm:
                result[f"seminorm_{kind.value}"] = seminorm_error_w11(field, surface, rule)
    else:
        exact = area_parametric_exact(field, mesh, rule, cfg.refine)
        result["exact"] = exact.model_dump(mode="json")
        for kind in _kinds(cfg.kind):
            report = area_parametric_pl(interpolate_mesh_vector(field, mesh, kind, edge_rule))
            result[kind.value] = report.model_dump(mode="json")
            result[f"err_{kind.value}"] = abs(report.value - exact.value)
    print(json.dumps(result, indent=2))
    return result


def cmd_converge(cfg: RunConfig, console: Console) -> Dict:
    field = parse_field_spec(cfg.field_spec)
    if not isinstance(field, ScalarField):
        raise InvalidParameter(f"--field: converge needs a scalar field, got {cfg.field_spec!r}")
    settings = get_settings().model_copy(
        update={
            "num_workers": cfg.threads,
            "quad_degree": cfg.quad_degree,
            "edge_order": cfg.edge_order,
        }
    )
    records = run_convergence(
        field, cfg.alphas, cfg.Ns, cfg.kind, settings=settings, seminorm=cfg.seminorm
    )
    if cfg.format == "json":
        with open(cfg.output_path, "w", encoding="utf-8") as fout:
            json.dump([rec.model_dump() for rec in records], fout, indent=2)
        script = None
    else:
        df = write_convergence_csv(records, cfg.output_path, cfg.kind)
        script = write_gnuplot_script(cfg.output_path, list(df.columns), cfg.alphas)

    table = Table(title=f"{cfg.field_spec} -> {cfg.output_path}")
    columns = ["alpha", "N", "h", "max_circumradius", "err_lagrange", "err_cr"]
    for name in columns:
        table.add_column(name, justify="right")
    for rec in records:
        values = [getattr(rec, name) for name in columns]
        table.add_row(*("-" if v is None else f"{v:.6g}" for v in values))
    console.print(table)

    result = {"rows": len(records), "out": cfg.output_path, "gnuplot": script}
    if cfg.check:
        checks = check_study_properties(records)
        result["checks"] = checks
        for name, ok in checks.items():
            verdict = {True: "[green]holds", False: "[red]fails", None: "[yellow]undecided"}[ok]
            console.print(f"{name}: {verdict}")
    return result


def cmd_export(cfg: RunConfig, console: Console) -> Dict:
    field = parse_field_spec(cfg.field_spec)
    if not isinstance(field, ScalarField):
        raise InvalidParameter(f"--field: export writes graphs and needs a scalar field, got {cfg.field_spec!r}")
    mesh = _mesh(cfg, field)
    surface = interpolate_mesh(field, mesh, InterpKind(cfg.kind), gauss_legendre(cfg.edge_order))
    surface_to_off(surface, cfg.output_path)
    soup = surface.kind == InterpKind.CROUZEIX_RAVIART
    result = {
        "out": cfg.output_path,
        "kind": cfg.kind,
        "vertices": 3 * mesh.num_triangles if soup else mesh.num_vertices,
        "faces": mesh.num_triangles,
        "area": area_pl_graph(surface).value,
    }
    print(json.dumps(result))
    return result


def cmd_constants(cfg: RunConfig, console: Console) -> Dict:
    a2 = babuska_aziz_a2()
    result = {"A2": a2, "residual": abs(a2_residual(a2)), "inverse": 1.0 / a2}
    if cfg.format == "json":
        print(json.dumps(result))
    else:
        table = Table(title="interpolation constants")
        table.add_column("name")
        table.add_column("value", justify="right")
        table.add_row("A_2", f"{a2:.15g}")
        table.add_row("|1/A_2 + tan(1/A_2)|", f"{result['residual']:.3e}")
        console.print(table)
    return result


COMMANDS = {
    "lantern": cmd_lantern,
    "area": cmd_area,
    "converge": cmd_converge,
    "export": cmd_export,
    "constants": cmd_constants,
}


def _fail(message: str, code: int, exit_code: ExitCode) -> int:
    print(ErrorResponse(message=message, code=code).model_dump_json(), file=sys.stderr)
    return int(exit_code)


def main(argv: Optional[List[str]] = None) -> int:
    console = Console()
    try:
        cfg = parse_run_config(argv)
    except UsageError as e:
        build_parser().print_usage(sys.stderr)
        return _fail(str(e), ErrorCode.VALIDATION_TYPE_ERROR, ExitCode.USAGE)
    except ValidationError as e:
        return _fail(describe_validation_error(e), ErrorCode.VALIDATION_TYPE_ERROR, ExitCode.USAGE)
    except SurfAreaError as e:
        return _fail(e.message, e.code, ExitCode.USAGE)
    except (OSError, json.JSONDecodeError) as e:
        return _fail(f"--config: {e}", ErrorCode.IO_ERROR, ExitCode.USAGE)

    logger.info(f"{cfg.subcommand}: {cfg.model_dump_json(exclude_defaults=True)}")
    try:
        COMMANDS[cfg.subcommand](cfg, console)
    except SurfAreaError as e:
        usage = e.code < ErrorCode.DEGENERATE_TRIANGLE
        return _fail(e.message, e.code, ExitCode.USAGE if usage else ExitCode.COMPUTATION)
    except OSError as e:
        return _fail(str(e), ErrorCode.IO_ERROR, ExitCode.COMPUTATION)
    except (ArithmeticError, ValueError) as e:
        logger.exception("computation failed")
        return _fail(str(e), ErrorCode.INTERNAL_ERROR, ExitCode.COMPUTATION)
    return int(ExitCode.OK)


if __name__ == "__main__":
    sys.exit(main())
