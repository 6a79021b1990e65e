"""
Tests for the command line interface
"""
import io
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

from thabit_solver.cli import build_config, main, parse_arguments
from thabit_solver.pipeline import EXIT_CONFIG_ERROR, EXIT_OK

FAMILY_FLAGS = ["--sequence", "padovan", "--form", "thabit", "--kind", "first"]


@patch("thabit_solver.config.load_dotenv")
class TestCli(unittest.TestCase):
    """Command dispatch and exit codes"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def run_main(self, argv):
        with patch("sys.stdout", new_callable=io.StringIO) as stdout:
            code = main(argv)
        return code, stdout.getvalue()

    def test_version(self, _):
        code, output = self.run_main(["-V"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("1.0.0", output)

    def test_config_create_and_view(self, _):
        path = os.path.join(self.temp_dir, "thabit.yaml")
        code, output = self.run_main(["config", "--create", "--file", path])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(os.path.exists(path))
        code, output = self.run_main(["config", "--file", path])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("b_max: 10", output)

    def test_config_missing(self, _):
        code, _output = self.run_main(["config", "--file", os.path.join(self.temp_dir, "none.yaml")])
        self.assertEqual(code, EXIT_CONFIG_ERROR)

    def test_search(self, _):
        code, output = self.run_main(["search", *FAMILY_FLAGS, "--b-max", "3"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(n, b, l) = (7, 2, 1): 5", output)

    def test_bad_base_range(self, _):
        code, _output = self.run_main(["solve", *FAMILY_FLAGS, "--b-min", "1"])
        self.assertEqual(code, EXIT_CONFIG_ERROR)

    def test_missing_config_file(self, _):
        code, _output = self.run_main(["-c", os.path.join(self.temp_dir, "none.yaml"), "search", *FAMILY_FLAGS])
        self.assertEqual(code, EXIT_CONFIG_ERROR)

    def test_no_command(self, _):
        code, _output = self.run_main([])
        self.assertEqual(code, EXIT_CONFIG_ERROR)

    def test_solve_writes_certificate(self, _):
        out = os.path.join(self.temp_dir, "certificate.json")
        code, output = self.run_main(["solve", *FAMILY_FLAGS, "--b-max", "2", "--check-paper", "--out", out])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(os.path.exists(out))
        self.assertIn("status: ok", output)

    def test_reduce(self, _):
        code, output = self.run_main(["reduce", "--sequence", "perrin", "--form", "williams",
                                      "--kind", "second", "--b-max", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Legendre", output)


@patch("thabit_solver.config.load_dotenv")
class TestBuildConfig(unittest.TestCase):

    def test_flags_override_file(self, _):
        temp_dir = tempfile.mkdtemp()
        try:
            path = os.path.join(temp_dir, "thabit.yaml")
            with open(path, "w") as f:
                f.write("b_min: 3\nb_max: 6\nmax_workers: 2\n")
            args = parse_arguments(["-c", path, "all", "--b-max", "8", "--parallel", "--workers", "3"])
            config = build_config(args)
        finally:
            shutil.rmtree(temp_dir, ignore_errors=True)
        self.assertEqual((config.b_min, config.b_max), (3, 8))
        self.assertTrue(config.parallel_processing)
        self.assertEqual(config.max_workers, 3)
