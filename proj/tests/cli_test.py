"""End-to-end checks of the invbinom command line tool.

Usage: cli_test.py PATH_TO_BINARY PATH_TO_SCHEMA
"""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = None
SCHEMA = None


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("INVBINOM_CACHE", None)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, timeout=600)


def run_json(*args, env=None):
    proc = run("--format", "json", *args, env=env)
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, SCHEMA)
    return proc, doc


class EvalConstant(unittest.TestCase):
    def test_pi_text(self):
        proc = run("--digits", "30", "eval-constant", "pi")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(proc.stdout.strip(), "3.14159265358979323846264338328")

    def test_alias_and_json(self):
        proc, doc = run_json("--digits", "20", "eval-constant", "πζ_4")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(doc["name"], "omega_4_5")
        self.assertTrue(doc["value"].startswith("3.40"))

    def test_unknown_name(self):
        proc = run("eval-constant", "omega_11_5")
        self.assertEqual(proc.returncode, 2)
        self.assertIn("omega_1_5", proc.stderr)

    def test_too_few_digits(self):
        self.assertEqual(run("--digits", "5", "eval-constant", "pi").returncode, 2)


class EvalSum(unittest.TestCase):
    def test_pi_squared_over_18(self):
        proc = run("--digits", "30", "eval-sum", "/ j^2")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(proc.stdout.strip(), "0.548311355616075478824138388882")
        self.assertIn("truncated at J =", proc.stderr)

    def test_json(self):
        proc, doc = run_json("--digits", "25", "eval-sum", "sqrt3 S4 / j^1")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(doc["weight"], 5)
        self.assertGreater(doc["truncation_index"], 30)

    def test_parse_error(self):
        proc = run("eval-sum", "S1 S1")
        self.assertEqual(proc.returncode, 2)
        self.assertTrue(proc.stderr)


class Verify(unittest.TestCase):
    def test_full_table_json(self):
        proc, doc = run_json("--digits", "30", "--jobs", "2", "verify")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(doc["pass_count"], 24)
        self.assertEqual(doc["fail_count"], 0)
        self.assertEqual(len(doc["identities"]), 24)

    def test_filter_text(self):
        proc = run("--digits", "20", "--filter", "bracket_L*", "verify")
        self.assertEqual(proc.returncode, 0)
        self.assertIn("bracket_L1_over_j4", proc.stdout)
        self.assertNotIn("angle_S4_over_j", proc.stdout)

    def test_digits_floor(self):
        self.assertEqual(run("--digits", "15", "verify").returncode, 2)


class Discover(unittest.TestCase):
    def test_identity_match(self):
        proc, doc = run_json("--digits", "60", "discover", "bracket_S1_over_j4")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(doc["verdict"], "MATCH")
        self.assertEqual(doc["coefficients"], ["-28/81", "19/27", "134/27"])

    def test_incomplete_basis(self):
        proc, doc = run_json(
            "--digits", "80", "discover", "angle_S4_over_j", "--basis", "omega_3_5,omega_4_5,omega_8_5"
        )
        self.assertEqual(proc.returncode, 1)
        self.assertEqual(doc["verdict"], "NO RELATION")

    def test_precision_error(self):
        proc = run("--digits", "60", "discover", "angle_S1S1S1S1_over_j", "--max-coeff-bits", "30")
        self.assertEqual(proc.returncode, 3)

    def test_values_file(self):
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
            # φ², φ, 1
            f.write("2.618033988749894848204586834365638117720309179805762862135448622705260462818902449707207204\n")
            f.write("1.618033988749894848204586834365638117720309179805762862135448622705260462818902449707207204\n")
            f.write("1\n")
            path = f.name
        try:
            proc = run("--digits", "60", "discover", "--values", path, "--max-coeff-bits", "10")
            self.assertEqual(proc.returncode, 0, proc.stderr)
            self.assertIn("1 -1 -1", proc.stdout.replace(",", " "))
        finally:
            os.unlink(path)


class ListAndBench(unittest.TestCase):
    def test_list_json(self):
        proc, doc = run_json("list")
        self.assertEqual(proc.returncode, 0)
        names = {c["name"] for c in doc["constants"]}
        self.assertIn("omega_10_5", names)
        self.assertIn("sigma_6_5", names)

    def test_list_identities_text(self):
        proc = run("list", "identities")
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(sum(1 for line in proc.stdout.splitlines() if "_over_j" in line), 24)

    def test_help(self):
        self.assertEqual(run("--help").returncode, 0)
        self.assertEqual(run("no-such-command").returncode, 2)


class Cache(unittest.TestCase):
    def test_env_cache_and_compaction(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "cache.tsv")
            env = {"INVBINOM_CACHE": path}
            first = run("--digits", "40", "eval-constant", "omega_2_5", env=env)
            self.assertEqual(first.returncode, 0)
            with open(path) as f:
                lines = f.read().splitlines()
            self.assertTrue(any(line.startswith("omega_2_5\t40\t") for line in lines))
            with open(path, "a") as f:
                f.write("omega_2_5\t40\t0000000000000000\t0.0\n")
            second = run("--digits", "40", "eval-constant", "omega_2_5", env=env)
            self.assertEqual(second.stdout, first.stdout)
            other = os.path.join(d, "other.tsv")
            third = run("--cache", other, "--digits", "40", "eval-constant", "pi", env=env)
            self.assertEqual(third.returncode, 0)
            self.assertTrue(os.path.exists(other))
            compact = run("--cache", path, "--compact-cache", "list", "basis")
            self.assertEqual(compact.returncode, 0)
            with open(path) as f:
                for line in f.read().splitlines():
                    self.assertNotIn("0000000000000000", line)


if __name__ == "__main__":
    BIN = os.path.abspath(sys.argv[1])
    with open(sys.argv[2]) as f:
        SCHEMA = json.load(f)
    unittest.main(argv=[sys.argv[0]], verbosity=2)
