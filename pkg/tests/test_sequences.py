"""
Tests for the sequence generators and their certified bound checks
"""
import unittest

import pytest

from thabit_solver.errors import DomainError
from thabit_solver.sequences import (
    NARAYANA,
    PADOVAN,
    PERRIN,
    SequenceId,
    check_binet_error,
    check_growth_bounds,
    get_sequence,
    term,
    terms_up_to,
)


class TestTerms(unittest.TestCase):
    """Exact generation"""

    def test_padovan_listing(self):
        self.assertEqual(
            terms_up_to(PADOVAN, 20),
            [1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12, 16, 21, 28, 37, 49, 65, 86, 114, 151, 200],
        )

    def test_perrin_listing(self):
        self.assertEqual(
            terms_up_to(PERRIN, 20),
            [3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17, 22, 29, 39, 51, 68, 90, 119, 158, 209, 277],
        )

    def test_narayana_listing(self):
        self.assertEqual(
            terms_up_to(NARAYANA, 20),
            [1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189, 277, 406, 595, 872, 1278],
        )

    def test_single_terms(self):
        self.assertEqual(term(PADOVAN, 26), 1081)
        self.assertEqual(term(NARAYANA, 22), 2745)
        self.assertEqual(term(PERRIN, 0), 3)

    def test_term_matches_listing(self):
        for spec in (PADOVAN, PERRIN, NARAYANA):
            values = terms_up_to(spec, 120)
            for n in (0, 1, 2, 3, 57, 120):
                self.assertEqual(term(spec, n), values[n])

    def test_short_listing(self):
        self.assertEqual(terms_up_to(PERRIN, 1), [3, 0])
        self.assertEqual(terms_up_to(PERRIN, 0), [3])

    def test_negative_index(self):
        with self.assertRaises(DomainError):
            term(PADOVAN, -1)
        with self.assertRaises(DomainError):
            terms_up_to(PADOVAN, -1)

    def test_lookup(self):
        self.assertIs(get_sequence("Perrin"), PERRIN)
        self.assertIs(get_sequence(SequenceId.NARAYANA), NARAYANA)
        self.assertIs(get_sequence(PADOVAN), PADOVAN)
        with self.assertRaises(ValueError):
            get_sequence("fibonacci")


class TestBoundChecks(unittest.TestCase):
    """Certified growth and Binet error bounds"""

    def test_padovan_growth_fails_only_at_three(self):
        report = check_growth_bounds(PADOVAN, 200)
        self.assertEqual(report.failures, [3])
        self.assertFalse(report.passed)
        self.assertFalse(report.passed_at(3))
        self.assertTrue(report.passed_at(4))
        self.assertEqual(report.kind, "growth")

    def test_perrin_and_narayana_growth(self):
        for spec in (PERRIN, NARAYANA):
            report = check_growth_bounds(spec, 200)
            self.assertTrue(report.passed, spec.name)
            self.assertEqual(report.n_min, spec.growth_valid_from)
            self.assertEqual(report.checked, 200 - spec.growth_valid_from + 1)

    def test_binet_error(self):
        for spec in (PADOVAN, PERRIN, NARAYANA):
            report = check_binet_error(spec, 80)
            self.assertTrue(report.passed, spec.name)
            self.assertEqual(report.kind, "binet")
            self.assertGreaterEqual(report.precision, 192)

    def test_range_checks(self):
        with self.assertRaises(DomainError):
            check_growth_bounds(PERRIN, 1)
        with self.assertRaises(DomainError):
            check_binet_error(PADOVAN, 0)
        report = check_growth_bounds(NARAYANA, 10)
        with self.assertRaises(DomainError):
            report.passed_at(11)


@pytest.mark.slow
class TestBoundChecksLongRange(unittest.TestCase):
    """Growth and Binet certificates for every n up to 1000"""

    def test_growth(self):
        self.assertEqual(check_growth_bounds(PADOVAN, 1000).failures, [3])
        for spec in (PERRIN, NARAYANA):
            self.assertTrue(check_growth_bounds(spec, 1000).passed, spec.name)

    def test_binet_error(self):
        for spec in (PADOVAN, PERRIN, NARAYANA):
            report = check_binet_error(spec, 1000)
            self.assertTrue(report.passed, spec.name)
            self.assertEqual(report.checked, 1000)
