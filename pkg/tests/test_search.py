"""
Tests for equation families and the exhaustive solution search
"""
import unittest

from thabit_solver.errors import DomainError
from thabit_solver.pipeline import PUBLISHED_SOLUTIONS, expected_solutions
from thabit_solver.search import (
    EquationFamily,
    Sign,
    all_families,
    decompose,
    enumerate_solutions,
    verify_no_solutions_between,
)
from thabit_solver.linear_forms import FAMILY_CONSTANTS
from thabit_solver.sequences import SequenceId, terms_up_to


class TestEquationFamily(unittest.TestCase):
    """Family naming and values"""

    def test_twelve_families_in_order(self):
        slugs = [family.slug for family in all_families()]
        self.assertEqual(len(slugs), 12)
        self.assertEqual(slugs[:4], [
            "padovan-thabit-first",
            "padovan-thabit-second",
            "padovan-williams-first",
            "padovan-williams-second",
        ])
        self.assertEqual(slugs[-1], "narayana-williams-second")

    def test_from_names(self):
        family = EquationFamily.from_names("perrin", "williams", "first")
        self.assertEqual(family.sequence, SequenceId.PERRIN)
        self.assertIs(family.base_sign, Sign.MINUS)
        self.assertIs(family.tail_sign, Sign.MINUS)
        self.assertEqual(family.equation, "E_n = (b-1)*b^l - 1")
        self.assertEqual(family.to_dict(), {"sequence": "perrin", "base_sign": "minus", "tail_sign": "minus"})
        with self.assertRaises(ValueError):
            EquationFamily.from_names("perrin", "mersenne", "first")
        with self.assertRaises(ValueError):
            EquationFamily.from_names("perrin", "thabit", "third")

    def test_values(self):
        thabit = EquationFamily.from_names("padovan", "thabit", "second")
        self.assertEqual(thabit.value(4, 1), 21)
        williams = EquationFamily.from_names("narayana", "williams", "first")
        self.assertEqual(williams.value(7, 3), 6 * 343 - 1)


class TestDecompose(unittest.TestCase):

    def test_inverts_the_form(self):
        self.assertEqual(decompose(5, 2, Sign.PLUS, Sign.MINUS), 1)
        self.assertEqual(decompose(2057, 6, Sign.MINUS, Sign.PLUS), None)
        self.assertEqual(decompose(5 * 6 ** 3 + 1, 6, Sign.MINUS, Sign.PLUS), 3)
        self.assertEqual(decompose(3, 2, Sign.MINUS, Sign.MINUS), 2)

    def test_rejects_exponent_zero_and_small_values(self):
        # 2 = 1 * 2^0 + 1 has l = 0
        self.assertIsNone(decompose(2, 2, Sign.MINUS, Sign.PLUS))
        self.assertIsNone(decompose(0, 3, Sign.PLUS, Sign.PLUS))
        self.assertIsNone(decompose(1, 2, Sign.PLUS, Sign.PLUS))

    def test_agrees_with_direct_powers(self):
        for family in all_families():
            values = terms_up_to(family.spec, 400)
            largest = max(values)
            for b in range(2, 11):
                exponents = {}
                l = 1
                while family.value(b, l) <= largest:
                    exponents[family.value(b, l)] = l
                    l += 1
                for n, value in enumerate(values):
                    self.assertEqual(
                        decompose(value, b, family.base_sign, family.tail_sign),
                        exponents.get(value),
                        (family.slug, n, b),
                    )

    def test_base_checked(self):
        with self.assertRaises(DomainError):
            decompose(7, 1, Sign.PLUS, Sign.PLUS)


class TestEnumeration(unittest.TestCase):
    """Exhaustive search against the published tables"""

    def test_matches_published_tables(self):
        for family in all_families():
            cutoff = FAMILY_CONSTANTS[family.sequence].search_cutoff
            found = {s.triple for s in enumerate_solutions(family, (2, 10), cutoff)}
            self.assertEqual(found, set(expected_solutions(family)), family.label)

    def test_tables_cover_every_family(self):
        self.assertEqual(len(PUBLISHED_SOLUTIONS), 12)
        self.assertEqual(sum(len(t) for t in PUBLISHED_SOLUTIONS.values()), 53)

    def test_solutions_sorted_and_exact(self):
        family = EquationFamily.from_names("padovan", "williams", "second")
        solutions = enumerate_solutions(family, (2, 10), 300)
        keys = [(s.b, s.n, s.l) for s in solutions]
        self.assertEqual(keys, sorted(keys))
        for s in solutions:
            self.assertEqual(family.value(s.b, s.l), s.value)
        self.assertEqual(solutions[-1].to_dict(), {"n": 26, "b": 6, "l": 3, "value": "1081"})

    def test_l_not_below_n_is_kept(self):
        family = EquationFamily.from_names("padovan", "williams", "first")
        solutions = enumerate_solutions(family, (2, 2), 10)
        flagged = [s.triple for s in solutions if not s.l_below_n]
        self.assertEqual(flagged, [(0, 2, 1), (1, 2, 1)])

    def test_precomputed_terms(self):
        family = EquationFamily.from_names("narayana", "thabit", "second")
        terms = terms_up_to(family.spec, 400)
        self.assertEqual(
            enumerate_solutions(family, (2, 10), 30, terms),
            enumerate_solutions(family, (2, 10), 30),
        )
        with self.assertRaises(DomainError):
            enumerate_solutions(family, (2, 10), 30, terms[:10])

    def test_invalid_ranges(self):
        family = all_families()[0]
        with self.assertRaises(DomainError):
            enumerate_solutions(family, (1, 5), 10)
        with self.assertRaises(DomainError):
            enumerate_solutions(family, (6, 5), 10)
        with self.assertRaises(DomainError):
            enumerate_solutions(family, (2, 5), -1)


class TestGapCertificate(unittest.TestCase):

    def test_empty_gap(self):
        family = EquationFamily.from_names("padovan", "williams", "second")
        certificate = verify_no_solutions_between(family, (2, 10), 26, 300)
        self.assertTrue(certificate.empty)
        self.assertEqual(certificate.checked_terms, 274)

    def test_gap_with_solution(self):
        family = EquationFamily.from_names("padovan", "williams", "second")
        certificate = verify_no_solutions_between(family, (2, 10), 25, 300)
        self.assertFalse(certificate.empty)
        self.assertEqual([s.triple for s in certificate.solutions], [(26, 6, 3)])

    def test_degenerate_gaps(self):
        family = all_families()[0]
        self.assertTrue(verify_no_solutions_between(family, (2, 10), 50, 50).empty)
        with self.assertRaises(DomainError):
            verify_no_solutions_between(family, (2, 10), 51, 50)
