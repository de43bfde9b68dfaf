"""
Usage:
python3 -m unittest tests.test_cli
"""
import contextlib
import io
import json
import math
import os
import tempfile
import unittest

import numpy as np
import pandas as pd

from surfarea.analysis.lantern import lantern_area_closed_form
from surfarea.cli import main, parse_run_config
from surfarea.constants import CSV_COLUMNS, ErrorCode, ExitCode
from surfarea.interp import surface_from_graph_off
from surfarea.protocol.report_protocol import InterpKind


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def error_of(stderr: str) -> dict:
    return json.loads(stderr.strip().splitlines()[-1])


class LanternCommandTest(unittest.TestCase):
    def test_single(self):
        code, out, _ = run("lantern", "--m", "4", "--n", "4", "--format", "json")
        self.assertEqual(code, ExitCode.OK)
        result = json.loads(out)
        closed = lantern_area_closed_form(4, 4, 1.0, 1.0)
        self.assertEqual(result["triangles"], 32)
        self.assertAlmostEqual(result["area_closed_form"], closed, delta=1e-15 * closed)
        self.assertAlmostEqual(result["area_mesh"], closed, delta=1e-10 * closed)
        self.assertAlmostEqual(result["cylinder_area"], 2 * math.pi, places=14)

    def test_schedule(self):
        code, out, _ = run("lantern", "--schedule", "m=n^2", "--n-max", "16", "--format", "json")
        self.assertEqual(code, ExitCode.OK)
        result = json.loads(out)
        self.assertEqual(result["schedule"], "m=n^2")
        self.assertEqual([row["n"] for row in result["rows"]], [2, 4, 8, 16])
        self.assertEqual([row["m"] for row in result["rows"]], [4, 16, 64, 256])

    def test_table_and_export(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "lantern.off")
            code, out, _ = run("lantern", "--m", "3", "--n", "5", "--export", path)
            self.assertEqual(code, ExitCode.OK)
            self.assertIn("Schwarz lantern", out)
            with open(path, encoding="utf-8") as fin:
                self.assertTrue(fin.readline().startswith("OFF"))


class ConstantsCommandTest(unittest.TestCase):
    def test_json(self):
        code, out, _ = run("constants", "--format", "json")
        self.assertEqual(code, ExitCode.OK)
        result = json.loads(out)
        self.assertAlmostEqual(result["A2"], 0.49291, delta=1e-5)
        self.assertLess(result["residual"], 1e-12)
        self.assertAlmostEqual(result["inverse"], 1 / result["A2"], places=12)


class AreaCommandTest(unittest.TestCase):
    def test_graph(self):
        code, out, _ = run("area", "--field", "cylinder-slice:a=1.1", "--N", "12", "--alpha", "1.6", "--seminorm")
        self.assertEqual(code, ExitCode.OK)
        result = json.loads(out)
        self.assertEqual(result["N"], 12)
        self.assertEqual(result["alpha"], 1.6)
        self.assertEqual(result["exact"]["method"], "ExactQuadrature")
        for kind in ("lagrange", "cr"):
            self.assertEqual(result[kind]["kind"], kind)
            self.assertAlmostEqual(
                result[f"err_{kind}"], abs(result[kind]["value"] - result["exact"]["value"]), places=14
            )
            self.assertLessEqual(result[f"err_{kind}"], result[f"seminorm_{kind}"] + 1e-8)

    def test_parametric(self):
        code, out, _ = run("area", "--field", "cylinder-param:r=1,H=1", "--mesh", "uniform", "--N", "8", "--kind", "lagrange")
        self.assertEqual(code, ExitCode.OK)
        result = json.loads(out)
        self.assertNotIn("alpha", result)
        self.assertNotIn("cr", result)
        self.assertAlmostEqual(result["exact"]["value"], 2 * math.pi, places=12)
        self.assertEqual(result["lagrange"]["method"], "ParametricPL")
        self.assertLess(result["lagrange"]["value"], 2 * math.pi)


class ConvergeCommandTest(unittest.TestCase):
    def test_csv_and_script(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "fig.csv")
            code, out, _ = run(
                "converge", "--field", "cylinder-slice:a=1.1", "--alphas", "1.0,1.6", "--Ns", "4,8,16,32",
                "--out", path, "--check",
            )
            self.assertEqual(code, ExitCode.OK)
            df = pd.read_csv(path)
            self.assertEqual(list(df.columns), CSV_COLUMNS)
            self.assertEqual(len(df), 8)
            self.assertEqual(list(df["alpha"]), [1.0] * 4 + [1.6] * 4)
            self.assertTrue(np.all(df["err_cr"] >= 0))
            self.assertTrue(os.path.exists(path + ".gp"))
            self.assertIn("cr_decreasing", out)

    def test_threads_give_identical_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            contents = []
            for threads in ("1", "3"):
                path = os.path.join(tmp, f"t{threads}.csv")
                code, _, _ = run(
                    "converge", "--alphas", "1.0,2.0", "--Ns", "4,8,12", "--threads", threads, "--out", path
                )
                self.assertEqual(code, ExitCode.OK)
                with open(path, "rb") as fin:
                    contents.append(fin.read())
            self.assertEqual(contents[0], contents[1])

    def test_cr_only_and_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cr.csv")
            code, _, _ = run("converge", "--alphas", "1.2", "--Ns", "4,8", "--kind", "cr-only", "--out", path)
            self.assertEqual(code, ExitCode.OK)
            columns = list(pd.read_csv(path).columns)
            self.assertIn("err_cr", columns)
            self.assertNotIn("err_lagrange", columns)

            path = os.path.join(tmp, "rows.json")
            code, _, _ = run("converge", "--alphas", "1.2", "--Ns", "4,8", "--format", "json", "--out", path)
            self.assertEqual(code, ExitCode.OK)
            with open(path, encoding="utf-8") as fin:
                rows = json.load(fin)
            self.assertEqual([row["N"] for row in rows], [4, 8])


class ExportCommandTest(unittest.TestCase):
    def test_lagrange_and_cr(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "lagrange.off")
            code, out, _ = run("export", "--field", "gauss-bump", "--mesh", "uniform", "--N", "4", "--out", path)
            self.assertEqual(code, ExitCode.OK)
            result = json.loads(out)
            self.assertEqual(result["vertices"], 25)
            self.assertEqual(result["faces"], 32)
            back = surface_from_graph_off(path)
            self.assertEqual(back.kind, InterpKind.LAGRANGE)
            self.assertAlmostEqual(float(np.sum(back.mesh.areas)), 4.0, places=12)

            path = os.path.join(tmp, "cr.off")
            code, out, _ = run("export", "--N", "6", "--alpha", "1.3", "--kind", "cr", "--out", path)
            self.assertEqual(code, ExitCode.OK)
            result = json.loads(out)
            self.assertEqual(result["vertices"], 3 * result["faces"])
            self.assertEqual(surface_from_graph_off(path).kind, InterpKind.CROUZEIX_RAVIART)


class ErrorTest(unittest.TestCase):
    def assert_usage_error(self, *argv, code=None):
        status, _, err = run(*argv)
        self.assertEqual(status, ExitCode.USAGE, argv)
        body = error_of(err)
        self.assertEqual(body["object"], "error")
        if code is not None:
            self.assertEqual(body["code"], code)
        return body

    def test_unknown_field(self):
        body = self.assert_usage_error("area", "--field", "saddle", code=ErrorCode.UNKNOWN_FIELD)
        self.assertIn("cylinder-slice", body["message"])

    def test_bad_values(self):
        body = self.assert_usage_error("area", "--alpha", "0.5", code=ErrorCode.VALIDATION_TYPE_ERROR)
        self.assertIn("--alpha", body["message"])
        self.assert_usage_error("converge", "--Ns", "8,4")
        self.assert_usage_error("converge", "--alphas", "x")
        self.assert_usage_error("lantern", "--n", "1")
        self.assert_usage_error("area", "--kind", "lagrange-only")

    def test_bad_flags(self):
        self.assert_usage_error("area", "--bogus", "1")
        self.assert_usage_error("plot")
        self.assert_usage_error("export", "--N", "4")

    def test_vector_field_rejected(self):
        self.assert_usage_error("converge", "--field", "cylinder-param", "--Ns", "4,8", code=ErrorCode.INVALID_PARAMETER)
        with tempfile.TemporaryDirectory() as tmp:
            self.assert_usage_error(
                "export", "--field", "affine-map", "--out", os.path.join(tmp, "x.off"), code=ErrorCode.INVALID_PARAMETER
            )

    def test_missing_config(self):
        self.assert_usage_error("constants", "--config", "/nonexistent/surfarea.json", code=ErrorCode.IO_ERROR)


class ConfigFileTest(unittest.TestCase):
    def test_flags_override_config(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.json")
            with open(path, "w", encoding="utf-8") as fout:
                json.dump({"field": "affine:P=1", "N": 4, "alpha": 1.0, "kind": "cr", "quad-degree": 4}, fout)
            cfg = parse_run_config(["area", "--config", path, "--N", "6"])
            self.assertEqual(cfg.field_spec, "affine:P=1")
            self.assertEqual(cfg.N, 6)
            self.assertEqual(cfg.kind, "cr")
            self.assertEqual(cfg.quad_degree, 4)

            code, out, _ = run("area", "--config", path)
            self.assertEqual(code, ExitCode.OK)
            result = json.loads(out)
            self.assertEqual(result["N"], 4)
            self.assertAlmostEqual(result["cr"]["value"], 4 * math.sqrt(2), places=12)

    def test_converge_defaults(self):
        cfg = parse_run_config(["converge"])
        self.assertEqual(cfg.output_path, "convergence.csv")
        self.assertEqual(cfg.kind, "both")
        self.assertEqual(cfg.alphas, [1.0, 1.2, 1.6, 2.0, 2.4])
        self.assertEqual(parse_run_config(["export", "--out", "x.off"]).kind, "lagrange")


if __name__ == "__main__":
    unittest.main()
