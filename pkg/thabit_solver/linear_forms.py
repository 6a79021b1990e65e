"""
Matveev's lower bound for the linear forms in three logarithms, the absolute
bound on n it implies, and the per-family constants used by the reduction step.

For a family T_n = (b +- 1) * b^l +- 1 the linear form is

    Lambda = (b +- 1) * coeff^-1 * b^l * root^-(n + shift) - 1,

with |Lambda| < lambda_cap / root^n for n above the family's search cutoff.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

import flint

from thabit_solver.algebraic import (
    DEFAULT_PRECISION,
    UNIT_MINPOLY,
    NumberDescriptor,
    RealEnclosure,
    Refinable,
    binet_coefficient,
    binet_data,
    dominant_root,
    enclose,
    log_height,
    power_ball,
    rational_ball,
    root_ball,
)
from thabit_solver.errors import CertificationError, DomainError
from thabit_solver.search import EquationFamily
from thabit_solver.sequences import SequenceId, SequenceSpec, get_sequence

logger = logging.getLogger("thabit_solver")

MATVEEV_LEADING = Fraction(7, 5)
MIN_HEIGHT_BOUND = Fraction(4, 25)
# (1 + log n) is replaced by LOG_FACTOR * log n above the search cutoff
LOG_FACTOR = Fraction(6, 5)


@dataclass(frozen=True)
class MatveevInput:
    """Parameters of Matveev's theorem for one linear form"""
    s: int
    degree: int
    D: int
    B: Tuple[RealEnclosure, ...]

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(self.B))
        if self.s < 1 or self.degree < 1 or self.D < 1:
            raise DomainError(f"need s, degree, D >= 1, got {self.s}, {self.degree}, {self.D}")
        if len(self.B) != self.s:
            raise DomainError(f"expected {self.s} height bounds, got {len(self.B)}")
        for j, bound in enumerate(self.B, start=1):
            if bound.lo < MIN_HEIGHT_BOUND:
                raise DomainError(f"B_{j} = {bound} is below 0.16")


def matveev_bound(data: MatveevInput, precision: int = DEFAULT_PRECISION) -> RealEnclosure:
    """
    Upper enclosure of 1.4 * 30^(s+3) * s^4.5 * d^2 * (1 + log d) * (1 + log D) * B_1 ... B_s

    The upper endpoint of each B_j is used, so the result is monotone in every field.

    Args:
        data: Theorem parameters
        precision: Working precision in bits

    Returns:
        Enclosure of the constant; -log|Lambda| is below its upper endpoint
    """
    def compute():
        s = flint.arb(data.s)
        d = flint.arb(data.degree)
        value = rational_ball(MATVEEV_LEADING) * flint.arb(30) ** (data.s + 3)
        value = value * s ** 4 * s.sqrt() * d ** 2 * (1 + d.log())
        value = value * (1 + flint.arb(data.D).log())
        for bound in data.B:
            value = value * rational_ball(bound.hi)
        return value

    return enclose(compute, precision)


def resolve_n_bound(S: Union[RealEnclosure, int, Fraction], precision: int = DEFAULT_PRECISION) -> int:
    """
    Turn x / log x < S into x < 2 S log S

    Args:
        S: Enclosure (or exact value) of S
        precision: Working precision in bits

    Returns:
        Ceiling of the upper endpoint of 2 S log S

    Raises:
        DomainError: If S may be below 4
    """
    if not isinstance(S, RealEnclosure):
        S = RealEnclosure.exact(S, precision)
    if S.lo < 4:
        raise DomainError(f"S = {S} must be at least 4")
    bound = enclose(lambda: 2 * rational_ball(S.hi) * rational_ball(S.hi).log(), precision)
    return math.ceil(bound.hi)


@dataclass(frozen=True)
class FamilyConstants:
    """Analytic constants shared by the four families of one sequence"""
    sequence: SequenceId
    lambda_cap_numerator: Fraction
    b1_inner_constant: int
    search_cutoff: int
    theorem_constant: Fraction
    # published figures, kept for comparison only
    published_reduction_A: Fraction
    published_matveev_bound: Fraction
    published_reduced_bound: int
    published_convergent_index: int
    published_legendre_bound: Optional[int] = None
    published_legendre_index: Optional[int] = None
    published_legendre_a_max: Optional[int] = None

    @property
    def spec(self) -> SequenceSpec:
        return get_sequence(self.sequence)

    @property
    def gamma_cap_numerator(self) -> Fraction:
        # |log(1 + x)| < 2|x| for |x| < 1/2
        return 2 * self.lambda_cap_numerator

    @property
    def reduction_A(self) -> RealEnclosure:
        return reduction_A(self.sequence)


FAMILY_CONSTANTS: Dict[SequenceId, FamilyConstants] = {
    SequenceId.PADOVAN: FamilyConstants(
        sequence=SequenceId.PADOVAN,
        lambda_cap_numerator=Fraction("2.77"),
        b1_inner_constant=184,
        search_cutoff=300,
        theorem_constant=Fraction("1.96e13"),
        published_reduction_A=Fraction("19.7"),
        published_matveev_bound=Fraction("1.82e16"),
        published_reduced_bound=212,
        published_convergent_index=44,
    ),
    SequenceId.PERRIN: FamilyConstants(
        sequence=SequenceId.PERRIN,
        lambda_cap_numerator=Fraction(3),
        b1_inner_constant=8,
        search_cutoff=350,
        theorem_constant=Fraction("1.96e13"),
        published_reduction_A=Fraction("21.34"),
        published_matveev_bound=Fraction("1.34e16"),
        published_reduced_bound=219,
        published_convergent_index=43,
        published_legendre_bound=159,
        published_legendre_index=43,
        published_legendre_a_max=80,
    ),
    SequenceId.NARAYANA: FamilyConstants(
        sequence=SequenceId.NARAYANA,
        lambda_cap_numerator=Fraction("3.4"),
        b1_inner_constant=248,
        search_cutoff=400,
        theorem_constant=Fraction("1.95e13"),
        published_reduction_A=Fraction("17.79"),
        published_matveev_bound=Fraction("1.85e16"),
        published_reduced_bound=169,
        published_convergent_index=44,
    ),
}

THEOREM_OFFSET = Fraction("29.91")


def family_constants(sequence) -> FamilyConstants:
    return FAMILY_CONSTANTS[get_sequence(sequence).id]


@lru_cache(maxsize=None)
def reduction_A(sequence: SequenceId, precision: int = DEFAULT_PRECISION) -> RealEnclosure:
    """gamma_cap_numerator / log(root), the constant A of the reduction."""
    constants = FAMILY_CONSTANTS[sequence]
    spec = constants.spec
    return enclose(
        lambda: rational_ball(constants.gamma_cap_numerator) / root_ball(spec.char_poly, precision).log(),
        precision,
    )


def _check_log_factor(cutoff: int, shift: int, precision: int) -> None:
    """Certify 1 + log(n + shift) < 1.2 log n for every n > cutoff."""
    # 0.2 log n - 1 - log(1 + shift/n) increases with n, so n = cutoff + 1 suffices
    n = cutoff + 1
    margin = enclose(
        lambda: rational_ball(LOG_FACTOR) * flint.arb(n).log() - 1 - flint.arb(n + shift).log(),
        precision,
    )
    if not margin.certainly_positive():
        raise CertificationError(f"1 + log(n + {shift}) < 1.2 log n fails at n = {n}")


def verify_lambda_cap(sequence, n: int, precision: int = DEFAULT_PRECISION) -> bool:
    """
    Re-derive the cap |Lambda| < lambda_cap / root^n from the Binet error bound

    |Lambda| * root^n <= (binet_error_coeff * root^(-n/2) + 1) / (coeff * root^shift),
    and the cap is only used where |Lambda| < 1/2.

    Args:
        sequence: Sequence id, name or spec
        n: Index at which to check (normally just above the search cutoff)
        precision: Working precision in bits

    Returns:
        True if both inequalities are certified at this n
    """
    spec = get_sequence(sequence)
    constants = FAMILY_CONSTANTS[spec.id]
    binet = binet_data(spec, precision)
    with flint.ctx.workprec(precision):
        root = binet.root.to_arb()
        scaled = (spec.binet_error_coeff / power_ball(root.sqrt(), n) + 1) / (
            binet.coeff.to_arb() * power_ball(root, binet.index_shift)
        )
        cap = rational_ball(constants.lambda_cap_numerator)
        holds = bool(scaled < cap) and bool(cap / power_ball(root, n) < rational_ball(Fraction(1, 2)))
    if not holds:
        logger.warning(f"{spec.name}: Lambda cap {float(constants.lambda_cap_numerator)} not certified at n={n}")
    return holds


def theorem_bound(sequence, b: int, precision: int = DEFAULT_PRECISION) -> RealEnclosure:
    """
    The closed-form bound k * log b * log(c b^3) * (29.91 + log log b + log log(c b^3))

    Args:
        sequence: Sequence id, name or spec
        b: Base, b >= 2

    Returns:
        Enclosure of the published symbolic bound on n
    """
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")
    constants = family_constants(sequence)

    def compute():
        log_b = flint.arb(b).log()
        log_c = flint.arb(constants.b1_inner_constant * b ** 3).log()
        tail = rational_ball(THEOREM_OFFSET) + log_b.log() + log_c.log()
        return rational_ball(constants.theorem_constant) * log_b * log_c * tail

    return enclose(compute, precision)


@dataclass(frozen=True)
class FamilyBound:
    """Intermediate values of the absolute bound for one family and base"""
    family: EquationFamily
    b: int
    heights: Tuple[RealEnclosure, RealEnclosure, RealEnclosure]
    matveev_constant: RealEnclosure
    S: RealEnclosure
    bound: int


def _height_bounds(family: EquationFamily, b: int, precision: int) -> Tuple[RealEnclosure, ...]:
    spec = family.spec
    constants = FAMILY_CONSTANTS[spec.id]
    b1 = enclose(lambda: flint.arb(constants.b1_inner_constant * b ** 3).log(), precision)
    b2 = 3 * log_height(b, precision).value
    b3 = 3 * log_height(NumberDescriptor.root(spec.char_poly), precision).value

    # B1 = log(c b^3) must dominate 3 h(eta1) and |log eta1| for both (b +- 1)
    coefficient = NumberDescriptor.coefficient(spec.binet_coeff_minpoly)
    root = dominant_root(spec.char_poly, precision)
    coeff = binet_coefficient(spec, root)
    for factor in (b - 1, b + 1):
        eta = NumberDescriptor.product(NumberDescriptor.integer(factor), NumberDescriptor.inverse(coefficient))
        height = 3 * log_height(eta, precision).value
        log_eta = enclose(lambda: abs((flint.arb(factor) / coeff.to_arb()).log()), precision)
        if not (height.certainly_less(b1) and log_eta.certainly_less(b1)):
            raise CertificationError(f"{family.label}: B1 = {b1} does not dominate eta1 for b={b}")
    return b1, b2, b3


def family_bound_details(family: EquationFamily, b: int, precision: int = DEFAULT_PRECISION) -> FamilyBound:
    """
    Absolute bound on n for one family and base, with its intermediate values

    Matveev gives -log|Lambda| < K (1 + log D) with D = n + shift. For n above the
    search cutoff this is at most 1.2 K log n, and combined with
    log|Lambda| < log(cap) - n log(root):

        n / log n < 1.2 K / log(root) + log(cap) / (log(root) log(cutoff)) = S

    Args:
        family: Equation family
        b: Base, b >= 2
        precision: Working precision in bits

    Returns:
        FamilyBound whose bound field is ceil(2 S log S)
    """
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")
    spec = family.spec
    constants = FAMILY_CONSTANTS[spec.id]
    _check_log_factor(constants.search_cutoff, spec.binet_index_shift, precision)

    heights = _height_bounds(family, b, precision)
    K = matveev_bound(MatveevInput(s=3, degree=3, D=1, B=heights), precision)

    def compute():
        log_root = root_ball(spec.char_poly, precision).log()
        main = rational_ball(LOG_FACTOR) * K.to_arb() / log_root
        tail = rational_ball(constants.lambda_cap_numerator).log() / (
            log_root * flint.arb(constants.search_cutoff).log()
        )
        return main + tail

    S = enclose(compute, precision)
    bound = resolve_n_bound(S, precision)
    logger.debug(f"{family.label}, b={b}: K={K}, S={S}, n < {bound}")
    return FamilyBound(family, b, heights, K, S, bound)


def family_bound(family: EquationFamily, b: int, precision: int = DEFAULT_PRECISION) -> int:
    """Certified integer upper bound for n in the given family and base."""
    return family_bound_details(family, b, precision).bound


@dataclass
class ReductionInputs:
    """The inequality |l tau - v + mu| < A B^-n handed to the reduction step"""
    tau: Refinable
    mu: Refinable
    A: RealEnclosure
    B: RealEnclosure
    mu_vanishes: bool


def reduction_inputs(family: EquationFamily, b: int, precision: int = DEFAULT_PRECISION) -> ReductionInputs:
    """
    Build tau = log b / log root and mu = log((b +- 1) / coeff) / log root

    mu vanishes exactly when (b +- 1) / coeff = 1, which for the catalogued
    coefficients means a unit coefficient and b +- 1 = 1.
    """
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")
    spec = family.spec
    factor = family.factor(b)

    def tau(p):
        return flint.arb(b).log() / root_ball(spec.char_poly, p).log()

    def mu(p):
        coeff = binet_coefficient(spec, dominant_root(spec.char_poly, p)).to_arb()
        return (flint.arb(factor) / coeff).log() / root_ball(spec.char_poly, p).log()

    return ReductionInputs(
        tau=Refinable.from_arb(tau, label=f"log {b} / log root"),
        mu=Refinable.from_arb(mu, label=f"log({factor}/coeff) / log root"),
        A=reduction_A(spec.id, precision),
        B=dominant_root(spec.char_poly, precision),
        mu_vanishes=spec.binet_coeff_minpoly == UNIT_MINPOLY and factor == 1,
    )
