"""
Exact generation of the Padovan, Perrin and Narayana's cows sequences, and
certified checks of their growth and Binet-error bounds.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import flint

from thabit_solver.algebraic import (
    DEFAULT_PRECISION,
    NARAYANA_COEFF_MINPOLY,
    PADOVAN_COEFF_MINPOLY,
    PLASTIC_CUBIC,
    PRECISION_CAP,
    SUPERGOLDEN_CUBIC,
    UNIT_MINPOLY,
    BinetData,
    Polynomial,
    RealEnclosure,
    binet_data,
    dominant_root,
    power_ball,
)
from thabit_solver.errors import DomainError, PrecisionExhausted

logger = logging.getLogger("thabit_solver")


class SequenceId(Enum):
    PADOVAN = "padovan"
    PERRIN = "perrin"
    NARAYANA = "narayana"


@dataclass(frozen=True)
class SequenceSpec:
    """Full description of one ternary recurrence"""
    id: SequenceId
    symbol: str
    initials: Tuple[int, int, int]
    # (c2, c1, c0) in T(m+3) = c2*T(m+2) + c1*T(m+1) + c0*T(m)
    recurrence: Tuple[int, int, int]
    char_poly: Polynomial
    binet_coeff_minpoly: Polynomial
    binet_coeff_numerator: Polynomial
    binet_coeff_denominator: Polynomial
    growth_low_offset: int
    growth_high_offset: int
    binet_error_coeff: int
    growth_valid_from: int
    binet_index_shift: int = 0

    @property
    def name(self) -> str:
        return self.id.value.capitalize()


PADOVAN = SequenceSpec(
    id=SequenceId.PADOVAN,
    symbol="P",
    initials=(1, 1, 1),
    recurrence=(0, 1, 1),
    char_poly=PLASTIC_CUBIC,
    binet_coeff_minpoly=PADOVAN_COEFF_MINPOLY,
    # p = (1 + a) / (-a^2 + 3a + 1)
    binet_coeff_numerator=(1, 1),
    binet_coeff_denominator=(1, 3, -1),
    growth_low_offset=-3,
    growth_high_offset=-1,
    binet_error_coeff=1,
    growth_valid_from=1,
)

PERRIN = SequenceSpec(
    id=SequenceId.PERRIN,
    symbol="E",
    initials=(3, 0, 2),
    recurrence=(0, 1, 1),
    char_poly=PLASTIC_CUBIC,
    binet_coeff_minpoly=UNIT_MINPOLY,
    binet_coeff_numerator=(1,),
    binet_coeff_denominator=(1,),
    growth_low_offset=-2,
    growth_high_offset=1,
    binet_error_coeff=2,
    growth_valid_from=2,
)

NARAYANA = SequenceSpec(
    id=SequenceId.NARAYANA,
    symbol="N",
    initials=(1, 1, 1),
    recurrence=(1, 0, 1),
    char_poly=SUPERGOLDEN_CUBIC,
    binet_coeff_minpoly=NARAYANA_COEFF_MINPOLY,
    # phi / ((phi - lambda)(phi - delta)) = phi / f'(phi) = 1 / (3 phi - 2)
    binet_coeff_numerator=(1,),
    binet_coeff_denominator=(-2, 3),
    growth_low_offset=-2,
    growth_high_offset=-1,
    binet_error_coeff=1,
    growth_valid_from=1,
    # N_n is C_phi * phi^(n+1) plus conjugate terms with these initials
    binet_index_shift=1,
)

SEQUENCES: Dict[SequenceId, SequenceSpec] = {
    SequenceId.PADOVAN: PADOVAN,
    SequenceId.PERRIN: PERRIN,
    SequenceId.NARAYANA: NARAYANA,
}


def get_sequence(sequence) -> SequenceSpec:
    """Look up a SequenceSpec by id, name or spec."""
    if isinstance(sequence, SequenceSpec):
        return sequence
    if isinstance(sequence, str):
        try:
            sequence = SequenceId(sequence.lower())
        except ValueError:
            raise ValueError(f"Unknown sequence: {sequence}")
    return SEQUENCES[sequence]


def term(spec: SequenceSpec, n: int) -> int:
    """
    Exact n-th term by triple rotation

    Args:
        spec: Sequence description
        n: Index, n >= 0

    Returns:
        T_n as an exact integer
    """
    if n < 0:
        raise DomainError(f"term index must be non-negative, got {n}")
    c2, c1, c0 = spec.recurrence
    a, b, c = spec.initials
    for _ in range(n):
        a, b, c = b, c, c2 * c + c1 * b + c0 * a
    return a


def terms_up_to(spec: SequenceSpec, n_max: int) -> List[int]:
    """Terms T_0..T_n_max in a single pass."""
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    c2, c1, c0 = spec.recurrence
    values = list(spec.initials[: n_max + 1])
    while len(values) <= n_max:
        values.append(c2 * values[-1] + c1 * values[-2] + c0 * values[-3])
    return values


@dataclass
class BoundCheckReport:
    """Outcome of a certified bound check over a range of indices"""
    sequence: SequenceId
    kind: str
    n_min: int
    n_max: int
    failures: List[int] = field(default_factory=list)
    precision: int = DEFAULT_PRECISION

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def checked(self) -> int:
        return max(0, self.n_max - self.n_min + 1)

    def passed_at(self, n: int) -> bool:
        if not self.n_min <= n <= self.n_max:
            raise DomainError(f"n={n} is outside the checked range [{self.n_min}, {self.n_max}]")
        return n not in self.failures


def _growth_verdict(spec: SequenceSpec, root: RealEnclosure, n: int, value: int) -> Optional[bool]:
    with flint.ctx.workprec(root.precision):
        alpha = root.to_arb()
        t = flint.arb(value)
        lower = power_ball(alpha, n + spec.growth_low_offset)
        upper = power_ball(alpha, n + spec.growth_high_offset)
        if lower <= t and t <= upper:
            return True
        if lower > t or t > upper:
            return False
    return None


def _binet_verdict(spec: SequenceSpec, binet: BinetData, n: int, value: int) -> Optional[bool]:
    with flint.ctx.workprec(binet.precision):
        alpha = binet.root.to_arb()
        deviation = abs(flint.arb(value) - binet.coeff.to_arb() * power_ball(alpha, n + binet.index_shift))
        tolerance = spec.binet_error_coeff / power_ball(alpha.sqrt(), n)
        if deviation < tolerance:
            return True
        if deviation >= tolerance:
            return False
    return None


def check_growth_bounds(
    spec: SequenceSpec,
    n_max: int,
    root: Optional[RealEnclosure] = None,
    precision_cap: int = PRECISION_CAP,
) -> BoundCheckReport:
    """
    Certify root^(n+low) <= T_n <= root^(n+high) for growth_valid_from <= n <= n_max

    Undecided comparisons refine the root enclosure by doubling the precision.

    Args:
        spec: Sequence description
        n_max: Last index to check
        root: Starting enclosure of the dominant root (computed if omitted)
        precision_cap: Largest precision the ladder may reach

    Returns:
        BoundCheckReport listing every n where the bound fails

    Raises:
        PrecisionExhausted: If a comparison stays undecided at the cap
    """
    if n_max < spec.growth_valid_from:
        raise DomainError(f"n_max must be at least {spec.growth_valid_from} for {spec.name}")
    if root is None:
        root = dominant_root(spec.char_poly, DEFAULT_PRECISION)
    report = BoundCheckReport(spec.id, "growth", spec.growth_valid_from, n_max, precision=root.precision)

    values = terms_up_to(spec, n_max)
    for n in range(spec.growth_valid_from, n_max + 1):
        verdict = _growth_verdict(spec, root, n, values[n])
        while verdict is None:
            precision = root.precision * 2
            if precision > precision_cap:
                raise PrecisionExhausted(f"{spec.name} growth bound at n={n} undecided at {root.precision} bits")
            logger.debug(f"{spec.name} growth check at n={n}: raising precision to {precision} bits")
            root = dominant_root(spec.char_poly, precision).intersect(root)
            verdict = _growth_verdict(spec, root, n, values[n])
        if not verdict:
            report.failures.append(n)

    report.precision = root.precision
    if report.failures:
        logger.warning(f"{spec.name} growth bounds fail at n in {report.failures}")
    return report


def check_binet_error(
    spec: SequenceSpec,
    n_max: int,
    binet: Optional[BinetData] = None,
    precision_cap: int = PRECISION_CAP,
) -> BoundCheckReport:
    """
    Certify |T_n - coeff * root^(n+shift)| < binet_error_coeff / root^(n/2) for 1 <= n <= n_max

    Args:
        spec: Sequence description
        n_max: Last index to check
        binet: Starting Binet data (computed if omitted)
        precision_cap: Largest precision the ladder may reach

    Returns:
        BoundCheckReport listing every n where the bound fails

    Raises:
        PrecisionExhausted: If a comparison stays undecided at the cap
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if binet is None:
        binet = binet_data(spec, DEFAULT_PRECISION)
    report = BoundCheckReport(spec.id, "binet", 1, n_max, precision=binet.precision)

    values = terms_up_to(spec, n_max)
    for n in range(1, n_max + 1):
        verdict = _binet_verdict(spec, binet, n, values[n])
        while verdict is None:
            precision = binet.precision * 2
            if precision > precision_cap:
                raise PrecisionExhausted(f"{spec.name} Binet bound at n={n} undecided at {binet.precision} bits")
            logger.debug(f"{spec.name} Binet check at n={n}: raising precision to {precision} bits")
            binet = binet_data(spec, precision)
            verdict = _binet_verdict(spec, binet, n, values[n])
        if not verdict:
            report.failures.append(n)

    report.precision = binet.precision
    if report.failures:
        logger.warning(f"{spec.name} Binet error bound fails at n in {report.failures}")
    return report
