"""
Exact enumeration of the solutions (n, b, l) of T_n = (b +- 1) * b^l +- 1
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from thabit_solver.errors import CertificationError, DomainError
from thabit_solver.sequences import SEQUENCES, SequenceId, SequenceSpec, get_sequence, terms_up_to

logger = logging.getLogger("thabit_solver")


class Sign(Enum):
    PLUS = 1
    MINUS = -1

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.PLUS else "-"


# base sign: (b+1) Thabit, (b-1) Williams; tail sign: -1 first kind, +1 second kind
FORMS = {"thabit": Sign.PLUS, "williams": Sign.MINUS}
KINDS = {"first": Sign.MINUS, "second": Sign.PLUS}


@dataclass(frozen=True)
class EquationFamily:
    """One of the twelve equations T_n = (b +- 1) * b^l +- 1"""
    sequence: SequenceId
    base_sign: Sign
    tail_sign: Sign

    @classmethod
    def from_names(cls, sequence: str, form: str, kind: str) -> "EquationFamily":
        """
        Build a family from CLI-style names

        Args:
            sequence: padovan, perrin or narayana
            form: thabit or williams
            kind: first or second

        Returns:
            EquationFamily
        """
        spec = get_sequence(sequence)
        if form not in FORMS:
            raise ValueError(f"Unknown form: {form}")
        if kind not in KINDS:
            raise ValueError(f"Unknown kind: {kind}")
        return cls(spec.id, FORMS[form], KINDS[kind])

    @property
    def spec(self) -> SequenceSpec:
        return SEQUENCES[self.sequence]

    @property
    def form(self) -> str:
        return "thabit" if self.base_sign is Sign.PLUS else "williams"

    @property
    def kind(self) -> str:
        return "first" if self.tail_sign is Sign.MINUS else "second"

    @property
    def label(self) -> str:
        return f"{self.spec.name} {self.form.capitalize()} {self.kind} kind"

    @property
    def slug(self) -> str:
        return f"{self.sequence.value}-{self.form}-{self.kind}"

    @property
    def equation(self) -> str:
        return f"{self.spec.symbol}_n = (b{self.base_sign.symbol}1)*b^l {self.tail_sign.symbol} 1"

    def factor(self, b: int) -> int:
        return b + self.base_sign.value

    def value(self, b: int, l: int) -> int:
        return self.factor(b) * b ** l + self.tail_sign.value

    def to_dict(self) -> Dict[str, str]:
        return {
            "sequence": self.sequence.value,
            "base_sign": self.base_sign.name.lower(),
            "tail_sign": self.tail_sign.name.lower(),
        }


def all_families() -> List[EquationFamily]:
    """The twelve families, ordered by sequence, then Thabit/Williams, then first/second kind."""
    return [
        EquationFamily(sequence, FORMS[form], KINDS[kind])
        for sequence in SequenceId
        for form in ("thabit", "williams")
        for kind in ("first", "second")
    ]


@dataclass(frozen=True)
class Solution:
    family: EquationFamily
    n: int
    b: int
    l: int
    value: int

    @property
    def triple(self) -> Tuple[int, int, int]:
        return (self.n, self.b, self.l)

    @property
    def l_below_n(self) -> bool:
        return self.l < self.n

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "b": self.b, "l": self.l, "value": str(self.value)}


def decompose(value: int, b: int, base_sign: Sign, tail_sign: Sign) -> Optional[int]:
    """
    Invert value = (b +- 1) * b^l +- 1

    Args:
        value: Candidate term
        b: Base, b >= 2
        base_sign: Sign inside the (b +- 1) factor
        tail_sign: Sign of the trailing 1

    Returns:
        The exponent l >= 1, or None if value has no such form
    """
    if b < 2:
        raise DomainError(f"base must be at least 2, got {b}")
    core = value - tail_sign.value
    factor = b + base_sign.value
    if core <= 0:
        return None
    power, remainder = divmod(core, factor)
    if remainder:
        return None
    l = 0
    while power % b == 0:
        power //= b
        l += 1
    if power == 1 and l >= 1:
        return l
    return None


def _check_range(b_range: Sequence[int]) -> Tuple[int, int]:
    b_min, b_max = b_range
    if b_min < 2 or b_min > b_max:
        raise DomainError(f"invalid base range [{b_min}, {b_max}]")
    return b_min, b_max


def _solutions_in(family: EquationFamily, b_min: int, b_max: int,
                  values: Sequence[int], n_from: int) -> List[Solution]:
    found = []
    for b in range(b_min, b_max + 1):
        for n in range(n_from, len(values)):
            l = decompose(values[n], b, family.base_sign, family.tail_sign)
            if l is None:
                continue
            if family.value(b, l) != values[n]:
                raise CertificationError(f"{family.label}: ({n}, {b}, {l}) fails the exact check")
            solution = Solution(family, n, b, l, values[n])
            if not solution.l_below_n:
                logger.debug(f"{family.label}: solution {solution.triple} has l >= n")
            found.append(solution)
    found.sort(key=lambda s: (s.b, s.n, s.l))
    return found


def enumerate_solutions(
    family: EquationFamily,
    b_range: Sequence[int],
    n_max: int,
    terms: Optional[Sequence[int]] = None,
) -> List[Solution]:
    """
    Every solution with 0 <= n <= n_max and b in range, sorted by (b, n, l)

    Args:
        family: Equation family
        b_range: (b_min, b_max), inclusive
        n_max: Largest index searched
        terms: Precomputed terms T_0.. (at least n_max + 1 of them)

    Returns:
        List of exactly verified solutions
    """
    b_min, b_max = _check_range(b_range)
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    values = list(terms[: n_max + 1]) if terms is not None else terms_up_to(family.spec, n_max)
    if len(values) < n_max + 1:
        raise DomainError(f"need {n_max + 1} terms, got {len(values)}")
    return _solutions_in(family, b_min, b_max, values, 0)


@dataclass
class GapCertificate:
    """Result of an exhaustive search over lo < n <= hi"""
    family: EquationFamily
    b_range: Tuple[int, int]
    lo: int
    hi: int
    solutions: List[Solution] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.solutions

    @property
    def checked_terms(self) -> int:
        return max(0, self.hi - self.lo)


def verify_no_solutions_between(
    family: EquationFamily,
    b_range: Sequence[int],
    lo: int,
    hi: int,
    terms: Optional[Sequence[int]] = None,
) -> GapCertificate:
    """
    Exhaustively check that no solution has lo < n <= hi

    Returns:
        GapCertificate; any solution found in the gap is listed on it
    """
    b_min, b_max = _check_range(b_range)
    if lo > hi:
        raise DomainError(f"empty gap [{lo}, {hi}] is reversed")
    certificate = GapCertificate(family, (b_min, b_max), lo, hi)
    if lo == hi:
        return certificate
    values = list(terms[: hi + 1]) if terms is not None else terms_up_to(family.spec, hi)
    certificate.solutions = _solutions_in(family, b_min, b_max, values, max(lo + 1, 0))
    if certificate.solutions:
        logger.warning(
            f"{family.label}: solutions in the gap ({lo}, {hi}]: "
            f"{[s.triple for s in certificate.solutions]}"
        )
    return certificate
