"""
Integration tests for ThabitSolver
"""
import os
import json
import shutil
import tempfile
import unittest

import pytest

from thabit_solver.config import SolverConfig
from thabit_solver.linear_forms import FAMILY_CONSTANTS
from thabit_solver.pipeline import EXIT_OK, exit_status, reduce_base, run_all, write_reports
from thabit_solver.reduction import ReductionMethod
from thabit_solver.search import all_families
from thabit_solver.sequences import SequenceId
from thabit_solver.utils.stats import RunStats


@pytest.mark.integration
class TestIntegration(unittest.TestCase):
    """All twelve families for 2 <= b <= 10"""

    @classmethod
    def setUpClass(cls):
        cls.config = SolverConfig(check_paper=True, show_progress=False)
        cls.reports = run_all(2, 10, cls.config)

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_reproduces_published_tables(self):
        self.assertEqual(exit_status(self.reports), EXIT_OK)
        self.assertEqual([r.family.slug for r in self.reports], [f.slug for f in all_families()])
        for report in self.reports:
            self.assertTrue(report.expected_match, report.family.label)
            self.assertEqual(report.status, "ok")
        self.assertEqual(sum(len(r.solutions) for r in self.reports), 53)

    def test_every_base_certified(self):
        for report in self.reports:
            cutoff = FAMILY_CONSTANTS[report.family.sequence].search_cutoff
            self.assertEqual([r.b for r in report.records], list(range(2, 11)))
            for record in report.records:
                self.assertTrue(record.gap_verified)
                self.assertLess(record.reduction.new_bound, cutoff)
                self.assertGreater(record.matveev_bound, cutoff)

    def test_reduced_bounds_per_base(self):
        for report in self.reports:
            family = report.family
            constants = FAMILY_CONSTANTS[family.sequence]
            for record in report.records:
                outcome = record.reduction
                if outcome.method is ReductionMethod.LEGENDRE:
                    self.assertEqual((family.sequence, family.form, record.b), (SequenceId.PERRIN, "williams", 2))
                    self.assertLessEqual(outcome.a_max, constants.published_legendre_a_max)
                    self.assertLess(outcome.new_bound, constants.published_legendre_bound)
                elif family.sequence is not SequenceId.PERRIN or record.b >= 3:
                    self.assertLessEqual(outcome.new_bound, constants.published_reduced_bound + 10,
                                         (family.slug, record.b))

    def test_reduction_with_largest_bound(self):
        for report in self.reports:
            family = report.family
            constants = FAMILY_CONSTANTS[family.sequence]
            M = max(record.matveev_bound for record in report.records)
            for b in range(2, 11):
                outcome = reduce_base(family, b, M, self.config)
                if outcome.method is ReductionMethod.LEGENDRE:
                    self.assertEqual(outcome.a_max, constants.published_legendre_a_max)
                    self.assertLessEqual(abs(outcome.convergent_index - constants.published_legendre_index), 2)
                    self.assertLessEqual(outcome.new_bound, constants.published_legendre_bound + 10)
                elif family.sequence is not SequenceId.PERRIN or b >= 3:
                    self.assertLessEqual(outcome.new_bound, constants.published_reduced_bound + 10,
                                         (family.slug, b))
                    self.assertLessEqual(
                        abs(outcome.convergent_index - constants.published_convergent_index), 2, (family.slug, b)
                    )

    def test_outputs(self):
        paths = write_reports(self.reports, self.temp_dir)
        self.assertEqual(len(paths), 13)
        with open(os.path.join(self.temp_dir, "narayana-thabit-second.json"), encoding="utf-8") as f:
            payload = json.load(f)
        triples = [(s["n"], s["b"], s["l"]) for entry in payload["per_b"] for s in entry["solutions"]]
        self.assertEqual(triples, [(8, 2, 2), (8, 3, 1), (22, 7, 3)])

        stats = RunStats()
        for report in self.reports:
            stats.record_report(report)
        stats.finish()
        self.assertEqual(stats.families, 12)
        self.assertEqual(stats.bases, 108)
        self.assertEqual(stats.reduction_failures, 0)
        self.assertTrue(os.path.exists(stats.save_report(self.temp_dir)))
