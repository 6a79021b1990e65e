"""
Tests for certified continued fractions and the reduction steps
"""
import unittest
from fractions import Fraction

import flint

from thabit_solver.algebraic import RealEnclosure, Refinable, dominant_root, PLASTIC_CUBIC
from thabit_solver.errors import (
    AmbiguousMidpoint,
    CertificationError,
    DomainError,
    MuDegenerate,
    PrecisionExhausted,
)
from thabit_solver.linear_forms import FAMILY_CONSTANTS, family_bound, reduction_A, reduction_inputs
from thabit_solver.reduction import (
    ContinuedFraction,
    ReductionMethod,
    ReductionOutcome,
    baker_davenport,
    legendre_bound,
    legendre_precondition,
    nearest_integer_distance,
    partial_quotients,
)
from thabit_solver.search import EquationFamily
from thabit_solver.sequences import SequenceId


def golden_ratio() -> Refinable:
    return Refinable.from_arb(lambda p: (1 + flint.arb(5).sqrt()) / 2, "golden ratio")


def log_ratio(b: int) -> Refinable:
    return Refinable.from_arb(
        lambda p: flint.arb(b).log() / dominant_root(PLASTIC_CUBIC, p).to_arb().log(),
        f"log {b} / log alpha",
    )


class TestContinuedFraction(unittest.TestCase):
    """Certified partial quotients"""

    def test_log_ratio_quotients(self):
        expansion = partial_quotients(log_ratio(2), 26)
        self.assertEqual(
            expansion.quotients[:26],
            [2, 2, 6, 1, 1, 1, 2, 1, 13, 3, 1, 1, 1, 1, 1, 8, 1, 3, 2, 2, 7, 1, 2, 5, 1, 2],
        )

    def test_golden_ratio_convergents(self):
        expansion = partial_quotients(golden_ratio(), 20)
        self.assertEqual(expansion.quotients[:20], [1] * 20)
        self.assertEqual(
            [q for _, q in expansion.convergents[:20]],
            [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765],
        )
        self.assertEqual(expansion.convergent(3), (5, 3))
        self.assertEqual(expansion.first_index_exceeding(100), 11)

    def test_determinant_identity(self):
        for expansion in (partial_quotients(golden_ratio(), 20), partial_quotients(log_ratio(2), 40)):
            convergents = expansion.convergents
            for k in range(1, len(convergents)):
                (p, q), (p_prev, q_prev) = convergents[k], convergents[k - 1]
                self.assertEqual(p * q_prev - p_prev * q, (-1) ** (k - 1), (expansion.value.label, k))

    def test_error_bound_at_every_index(self):
        for expansion in (partial_quotients(golden_ratio(), 20), partial_quotients(log_ratio(2), 40)):
            for k in range(len(expansion.convergents) - 2):
                self.assertTrue(expansion.error_bound_holds(k), (expansion.value.label, k))

    def test_rational_expansion_ends(self):
        expansion = ContinuedFraction(Refinable.constant(Fraction(7, 3)))
        expansion.extend(2)
        self.assertEqual(expansion.quotients, [2, 3])
        self.assertEqual(expansion.convergents, [(2, 1), (7, 3)])
        with self.assertRaises(PrecisionExhausted):
            expansion.extend(3)

    def test_precision_cap(self):
        with self.assertRaises(PrecisionExhausted):
            partial_quotients(log_ratio(2), 200, precision=64, precision_cap=128)


class TestNearestIntegerDistance(unittest.TestCase):

    def test_distance(self):
        distance = nearest_integer_distance(RealEnclosure(Fraction("2.1"), Fraction("2.2")))
        self.assertEqual((distance.lo, distance.hi), (Fraction("0.1"), Fraction("0.2")))
        distance = nearest_integer_distance(RealEnclosure(Fraction("2.8"), Fraction("2.9")))
        self.assertEqual((distance.lo, distance.hi), (Fraction("0.1"), Fraction("0.2")))

    def test_integer_inside(self):
        distance = nearest_integer_distance(RealEnclosure(Fraction("4.95"), Fraction("5.05")))
        self.assertEqual(distance.lo, 0)
        self.assertEqual(distance.hi, Fraction("0.05"))

    def test_ambiguous(self):
        with self.assertRaises(AmbiguousMidpoint):
            nearest_integer_distance(RealEnclosure(Fraction("2.45"), Fraction("2.55")))
        with self.assertRaises(DomainError):
            nearest_integer_distance(RealEnclosure(Fraction("2"), Fraction("2.25")))


class TestLegendre(unittest.TestCase):
    """Homogeneous reduction"""

    def test_golden_ratio(self):
        outcome = legendre_bound(golden_ratio(), RealEnclosure.exact(1), RealEnclosure.exact(2), 100)
        self.assertIs(outcome.method, ReductionMethod.LEGENDRE)
        self.assertEqual(outcome.a_max, 1)
        self.assertEqual(outcome.convergent_index, 11)
        self.assertEqual(outcome.q, 144)
        self.assertEqual(outcome.new_bound, 8)

    def test_perrin_base_two(self):
        M = int(Fraction("1.34e16"))
        outcome = legendre_bound(
            log_ratio(2), reduction_A(SequenceId.PERRIN), dominant_root(PLASTIC_CUBIC), M
        )
        self.assertEqual(outcome.a_max, 80)
        self.assertTrue(41 <= outcome.convergent_index <= 45)
        self.assertGreater(outcome.q, M)
        self.assertLess(outcome.new_bound, FAMILY_CONSTANTS[SequenceId.PERRIN].published_legendre_bound)

    def test_precondition(self):
        A, B = RealEnclosure.exact(1), RealEnclosure.exact(2)
        self.assertTrue(legendre_precondition(A, B, 100, 7))
        self.assertFalse(legendre_precondition(A, B, 100, 6))

    def test_invalid(self):
        with self.assertRaises(DomainError):
            legendre_bound(golden_ratio(), RealEnclosure.exact(1), RealEnclosure.exact(1), 100)


class TestBakerDavenport(unittest.TestCase):
    """Inhomogeneous reduction"""

    def test_padovan_family(self):
        family = EquationFamily.from_names("padovan", "thabit", "first")
        M = family_bound(family, 2)
        inputs = reduction_inputs(family, 2)
        outcome = baker_davenport(inputs.tau, inputs.mu, inputs.A, inputs.B, M)
        self.assertIsInstance(outcome, ReductionOutcome)
        self.assertIs(outcome.method, ReductionMethod.BAKER_DAVENPORT)
        self.assertGreater(outcome.q, 6 * M)
        self.assertTrue(outcome.epsilon.certainly_positive())
        self.assertLessEqual(outcome.new_bound, FAMILY_CONSTANTS[SequenceId.PADOVAN].search_cutoff)
        self.assertGreaterEqual(outcome.attempts, 1)

    def test_vanishing_mu(self):
        with self.assertRaises(MuDegenerate):
            baker_davenport(log_ratio(2), Refinable.constant(0), RealEnclosure.exact(1),
                            dominant_root(PLASTIC_CUBIC), 100, mu_vanishes=True)

    def test_mu_declared_zero_but_not(self):
        with self.assertRaises(CertificationError):
            baker_davenport(log_ratio(2), Refinable.constant(Fraction(1, 3)), RealEnclosure.exact(1),
                            dominant_root(PLASTIC_CUBIC), 100, mu_vanishes=True)

    def test_invalid_parameters(self):
        with self.assertRaises(DomainError):
            baker_davenport(log_ratio(2), Refinable.constant(Fraction(1, 3)), RealEnclosure.exact(1),
                            RealEnclosure.exact(1), 100)


class TestOutcomeInvariants(unittest.TestCase):

    def test_baker_davenport_needs_large_q(self):
        with self.assertRaises(CertificationError):
            ReductionOutcome(ReductionMethod.BAKER_DAVENPORT, 3, 50, 10, M=10,
                             epsilon=RealEnclosure.exact(Fraction(1, 10)))

    def test_legendre_needs_a_max(self):
        with self.assertRaises(CertificationError):
            ReductionOutcome(ReductionMethod.LEGENDRE, 3, 500, 10, M=100)
