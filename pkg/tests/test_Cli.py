"""
Unit tests for the command line frontend
"""

from contextlib import redirect_stdout, redirect_stderr
from pathlib import Path
from tempfile import TemporaryDirectory
import unittest
import json
import io
import sys

import numpy as np

sys.path.append("src")
from orbit_krein.cli import main
from orbit_krein.flow import Trajectory
from orbit_krein.real_sl2 import RealSL2, couple_from_A, rotation
from orbit_krein.monodromy import report_from_couple
from orbit_krein.shooting import Orbit, SymmetryCertificate


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def _write_json(path, document):
    with Path(path).open("w", encoding="utf-8") as f:
        json.dump(document, f)
    return str(path)


class TestClassify(unittest.TestCase):

    def test_positive_hyperbolic(self):
        self.assertEqual(_run(["classify", "--matrix", "3,2,4,3"]), (0, "positive-hyperbolic, B-sign +\n"))

    def test_elliptic(self):
        self.assertEqual(_run(["classify", "--matrix", "0,1,-1,0"]), (0, "elliptic, B-sign +\n"))

    def test_negative_sign(self):
        self.assertEqual(_run(["classify", "--matrix=-5,-2,-12,-5"]), (0, "negative-hyperbolic, B-sign -\n"))

    def test_degenerate(self):
        self.assertEqual(_run(["classify", "--matrix", "1,0,0,1"]), (0, "degenerate-plus, B-sign undefined\n"))

    def test_determinant_error(self):
        self.assertEqual(_run(["classify", "--matrix", "1,1,1,1"])[0], 2)

    def test_not_slr_form(self):
        self.assertEqual(_run(["classify", "--matrix", "2,1,1,1"])[0], 2)

    def test_usage_errors(self):
        self.assertEqual(_run([])[0], 1)
        self.assertEqual(_run(["classify"])[0], 1)
        self.assertEqual(_run(["classify", "--matrix", "1,2,3"])[0], 1)
        self.assertEqual(_run(["classify", "--matrix", "a,b,c,d"])[0], 1)
        self.assertEqual(_run(["unknown"])[0], 1)


class TestInputErrors(unittest.TestCase):

    def setUp(self):
        self._tmp = TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_missing_energy(self):
        self.assertEqual(_run(["shoot", "--system", "hill", "--output-directory", str(self.tmp)])[0], 1)

    def test_unknown_system(self):
        self.assertEqual(_run(["shoot", "--system", "kepler", "--energy", "-2.5", "--bracket", "0.1,0.2"])[0], 1)

    def test_bad_config_file(self):
        path = self.tmp / "run.json"
        path.write_text('{"energie": -2.5}', encoding="utf-8")
        self.assertEqual(_run(["shoot", "--config", str(path)])[0], 1)

    def test_corrupt_orbit(self):
        path = self.tmp / "orbit.json"
        path.write_text('{"schema": "orbit-krein/1", "kind": ', encoding="utf-8")
        self.assertEqual(_run(["lc-lift", str(path), "--output-directory", str(self.tmp)])[0], 1)

    def test_missing_orbit(self):
        self.assertEqual(_run(["monodromy", str(self.tmp / "missing.json")])[0], 1)

    def test_wrong_document_kind(self):
        report = report_from_couple(couple_from_A(rotation(0.3)))
        path = _write_json(self.tmp / "report.json", report.to_dict())
        self.assertEqual(_run(["lc-lift", path, "--output-directory", str(self.tmp)])[0], 1)

    def test_even_winding(self):
        t = np.linspace(0.0, 1.0, 129)
        q = np.exp(4j * np.pi * t)
        p = 1j * q
        states = np.column_stack((q.real, q.imag, p.real, p.imag))
        trajectory = Trajectory("hill", t, states)
        orbit = Orbit("hill", "synthetic", states[0], 1.0, 0.0, SymmetryCertificate(1), trajectory)
        path = _write_json(self.tmp / "orbit.json", orbit.to_dict())
        self.assertEqual(_run(["lc-lift", path, "--output-directory", str(self.tmp)])[0], 5)


class TestEuler(unittest.TestCase):

    def setUp(self):
        self._tmp = TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.elliptic = _write_json(
            self.tmp / "elliptic.json", report_from_couple(couple_from_A(rotation(0.3))).to_dict()
        )
        self.hyperbolic = _write_json(
            self.tmp / "hyperbolic.json", report_from_couple(couple_from_A(RealSL2(2.0, 1.0, 1.0, 1.0))).to_dict()
        )
        self.negative = _write_json(
            self.tmp / "negative.json", report_from_couple(couple_from_A(RealSL2(2.0, 1.0, -3.0, -1.0))).to_dict()
        )

    def tearDown(self):
        self._tmp.cleanup()

    def test_single_elliptic(self):
        code, out = _run(["euler", self.elliptic])
        self.assertEqual(code, 0)
        result = json.loads(out)
        self.assertEqual(result["chi_sft"], -1)
        self.assertTrue(result["stable_orbit_exists"])

    def test_covers(self):
        code, out = _run(["euler", self.elliptic, self.hyperbolic + ":2", self.negative + ":2"])
        self.assertEqual(code, 0)
        # bad double cover of the negative hyperbolic orbit is excluded
        self.assertEqual(json.loads(out)["chi_sft"], 0)

    def test_degenerate_report(self):
        path = _write_json(self.tmp / "identity.json", report_from_couple(couple_from_A(RealSL2.identity())).to_dict())
        self.assertEqual(_run(["euler", path])[0], 2)

    def test_invalid_cover(self):
        self.assertEqual(_run(["euler", self.elliptic + ":0"])[0], 1)


class TestHillCommands(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls._tmp = TemporaryDirectory()
        cls.tmp = Path(cls._tmp.name)
        cls.shoot_args = [
            "shoot",
            "--system",
            "hill",
            "--energy=-2.5",
            "--bracket",
            "0.05,0.6",
            "--branch",
            "retro",
            "--output-directory",
            str(cls.tmp),
        ]
        cls.code, cls.out = _run(cls.shoot_args)
        cls.orbit_file = cls.tmp / "orbit.json"

    @classmethod
    def tearDownClass(cls):
        cls._tmp.cleanup()

    def test_shoot(self):
        self.assertEqual(self.code, 0)
        with self.orbit_file.open("r", encoding="utf-8") as f:
            orbit = json.load(f)
        self.assertEqual(orbit["certificate"]["kind"], "doubly_symmetric")
        with (self.tmp / "orbit.report.json").open("r", encoding="utf-8") as f:
            report = json.load(f)
        self.assertEqual(report["b_signs"][0], report["b_signs"][1])
        self.assertNotEqual(report["classification"], "negative-hyperbolic")
        self.assertTrue((self.tmp / "orbit.json.meta.json").is_file())
        self.assertIn(orbit["orbit_id"], self.out)

    def test_deterministic_output(self):
        first = self.orbit_file.read_bytes()
        args = self.shoot_args[:-1] + [str(self.tmp / "again")]
        self.assertEqual(_run(args)[0], 0)
        self.assertEqual((self.tmp / "again" / "orbit.json").read_bytes(), first)

    def test_no_overwrite(self):
        args = self.shoot_args[:-1] + [str(self.tmp / "locked")]
        self.assertEqual(_run(args)[0], 0)
        self.assertEqual(_run(args + ["--no-overwrite"])[0], 1)

    def test_monodromy(self):
        code, out = _run(["monodromy", str(self.orbit_file), "--output-directory", str(self.tmp / "mono")])
        self.assertEqual(code, 0)
        with (self.tmp / "mono" / "report.json").open("r", encoding="utf-8") as f:
            report = json.load(f)
        with (self.tmp / "orbit.report.json").open("r", encoding="utf-8") as f:
            expected = json.load(f)
        self.assertEqual(report["classification"], expected["classification"])
        self.assertAlmostEqual(report["trace"], expected["trace"], delta=1e-6)

    def test_monodromy_rejects_csv(self):
        self.assertEqual(_run(["monodromy", str(self.orbit_file), "--format", "csv"])[0], 1)

    def test_lc_lift(self):
        code, out = _run(
            ["lc-lift", str(self.orbit_file), "--format", "csv", "--output-directory", str(self.tmp / "lift")]
        )
        self.assertEqual(code, 0)
        lines = (self.tmp / "lift" / "lifted.csv").read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "t,z_re,z_im,w_re,w_im")
        self.assertEqual(len(lines), 1 + 2 * 256 + 1)
        self.assertIn("winding", out)

    def test_euler_of_report(self):
        code, out = _run(["euler", str(self.tmp / "orbit.report.json")])
        self.assertEqual(code, 0)
        self.assertEqual(abs(json.loads(out)["chi_sft"]), 1)

    def test_family_single_energy(self):
        code, out = _run(
            [
                "family",
                "--system",
                "hill",
                "--energy-range=-2.5,-2.5",
                "--bracket",
                "0.05,0.6",
                "--branch",
                "retro",
                "--output-directory",
                str(self.tmp / "family"),
            ]
        )
        self.assertEqual(code, 0)
        lines = (self.tmp / "family" / "family.csv").read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "energy,q1_start,period,trace,b_sign_0,b_sign_half,class")
        self.assertEqual(len(lines), 2)
        with (self.tmp / "family" / "family.report.json").open("r", encoding="utf-8") as f:
            summary = json.load(f)
        self.assertEqual(summary["members"], 1)
        self.assertEqual(summary["violations"], [])
        self.assertIn("1 members", out)

    def test_config_file(self):
        path = _write_json(
            self.tmp / "run.json",
            {"system": "hill", "energy": -2.5, "bracket": [0.05, 0.6], "branch": "retro", "output_file": "cfg.json"},
        )
        code, _ = _run(["shoot", "--config", path, "--output-directory", str(self.tmp / "cfg")])
        self.assertEqual(code, 0)
        self.assertEqual((self.tmp / "cfg" / "cfg.json").read_bytes(), self.orbit_file.read_bytes())
        self.assertTrue((self.tmp / "cfg" / "cfg.report.json").is_file())

    def test_no_sign_change(self):
        args = ["shoot", "--energy=-2.5", "--bracket", "0.8,0.9", "--branch", "retro"]
        self.assertEqual(_run(args + ["--output-directory", str(self.tmp / "none")])[0], 3)

    def test_langmuir_shoot(self):
        target = self.tmp / "langmuir"
        args = ["shoot", "--system", "langmuir", "--energy=-2", "--bracket", "0.175,1.575"]
        code, _ = _run(args + ["--output-directory", str(target)])
        self.assertEqual(code, 0)
        with (target / "orbit.json").open("r", encoding="utf-8") as f:
            orbit = json.load(f)
        self.assertEqual(orbit["system"], "langmuir")
        self.assertEqual(orbit["certificate"]["kind"], "doubly_symmetric")
        self.assertAlmostEqual(orbit["initial_state"][1], 0.70353, delta=1e-4)
        with (target / "orbit.report.json").open("r", encoding="utf-8") as f:
            report = json.load(f)
        self.assertEqual(report["b_signs"][0], report["b_signs"][1])
        self.assertNotEqual(report["classification"], "negative-hyperbolic")


if __name__ == "__main__":
    unittest.main()
