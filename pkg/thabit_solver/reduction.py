"""
Certified continued fractions and the two reduction steps that shrink the
absolute bound on n: the Baker-Davenport lemma for inhomogeneous forms and the
Legendre criterion for homogeneous ones.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import flint

from thabit_solver.algebraic import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    RealEnclosure,
    Refinable,
    enclose,
    precision_ladder,
    rational_ball,
)
from thabit_solver.errors import (
    AmbiguousMidpoint,
    CertificationError,
    DomainError,
    MuDegenerate,
    PrecisionExhausted,
)

logger = logging.getLogger("thabit_solver")

MAX_ATTEMPTS = 10


def _common_quotients(lo: Fraction, hi: Fraction, limit: int) -> Tuple[List[int], bool]:
    """
    Partial quotients shared by every real in [lo, hi]

    Returns:
        (quotients, terminated), terminated being True when the enclosure is a
        single rational whose expansion ended
    """
    quotients: List[int] = []
    x, y = lo, hi
    while len(quotients) < limit:
        a = math.floor(x)
        if a != math.floor(y):
            return quotients, False
        quotients.append(a)
        x, y = x - a, y - a
        if x == 0 or y == 0:
            return quotients, x == 0 and y == 0
        x, y = 1 / x, 1 / y
    return quotients, False


class ContinuedFraction:
    """
    Continued fraction expansion of a refinable real

    Quotients are only recorded once every real in the current enclosure agrees
    on them; otherwise the precision is doubled. Instances cache their quotients
    and are not shared between threads.
    """

    def __init__(self, value: Refinable, precision: int = DEFAULT_PRECISION,
                 precision_cap: int = PRECISION_CAP):
        self.value = value
        self.precision = precision
        self.precision_cap = precision_cap
        self.quotients: List[int] = []
        self.convergents: List[Tuple[int, int]] = []
        self._exhausted = False

    def _record(self, quotients: List[int]) -> None:
        if quotients[: len(self.quotients)] != self.quotients:
            raise CertificationError(f"{self.value.label}: continued fraction changed under refinement")
        for a in quotients[len(self.quotients):]:
            # seeds p_-1/q_-1 = 1/0 and p_-2/q_-2 = 0/1
            if len(self.convergents) >= 2:
                (p2, q2), (p1, q1) = self.convergents[-2], self.convergents[-1]
            elif self.convergents:
                (p2, q2), (p1, q1) = (1, 0), self.convergents[-1]
            else:
                (p2, q2), (p1, q1) = (0, 1), (1, 0)
            self.quotients.append(a)
            self.convergents.append((a * p1 + p2, a * q1 + q2))

    def extend(self, count: int) -> "ContinuedFraction":
        """
        Make sure at least `count` quotients are certified

        Raises:
            PrecisionExhausted: If the cap is reached first, or the value is a
                rational whose expansion already ended
        """
        if len(self.quotients) >= count:
            return self
        if self._exhausted:
            raise PrecisionExhausted(f"{self.value.label} has only {len(self.quotients)} quotients")
        for precision in precision_ladder(self.precision, self.precision_cap):
            enclosure = self.value.at(precision)
            quotients, terminated = _common_quotients(enclosure.lo, enclosure.hi, count)
            self.precision = precision
            if len(quotients) > len(self.quotients):
                self._record(quotients)
            if len(self.quotients) >= count:
                return self
            if terminated:
                self._exhausted = True
                raise PrecisionExhausted(
                    f"{self.value.label} is rational with {len(self.quotients)} quotients"
                )
            logger.debug(f"{self.value.label}: {len(self.quotients)} quotients at {precision} bits, refining")
        raise PrecisionExhausted(
            f"{self.value.label}: only {len(self.quotients)} of {count} quotients below {self.precision_cap} bits"
        )

    def convergent(self, k: int) -> Tuple[int, int]:
        self.extend(k + 1)
        return self.convergents[k]

    def denominator(self, k: int) -> int:
        return self.convergent(k)[1]

    def first_index_exceeding(self, bound: int) -> int:
        """Smallest k with q_k > bound."""
        k = 0
        while True:
            if k >= len(self.convergents):
                self.extend(len(self.convergents) + 8)
            if self.convergents[k][1] > bound:
                return k
            k += 1

    def error_bound_holds(self, k: int) -> bool:
        """Certify |x - p_k/q_k| < 1 / (q_k q_{k+1})."""
        self.extend(k + 2)
        p, q = self.convergents[k]
        q_next = self.convergents[k + 1][1]
        enclosure = self.value.at(self.precision)
        deviation = max(abs(enclosure.lo - Fraction(p, q)), abs(enclosure.hi - Fraction(p, q)))
        return deviation < Fraction(1, q * q_next)


def partial_quotients(x: Refinable, count: int, precision: int = DEFAULT_PRECISION,
                      precision_cap: int = PRECISION_CAP) -> ContinuedFraction:
    """
    Certified partial quotients of x

    Args:
        x: Irrational real, refinable to arbitrary precision
        count: Minimum number of quotients
        precision: Starting precision in bits
        precision_cap: Largest precision the ladder may reach

    Returns:
        ContinuedFraction holding at least `count` quotients and convergents

    Raises:
        PrecisionExhausted: If a floor cannot be decided below the cap
    """
    return ContinuedFraction(x, precision, precision_cap).extend(count)


def nearest_integer_distance(x: RealEnclosure) -> RealEnclosure:
    """
    Enclosure of ||x||, the distance from x to the nearest integer

    Raises:
        DomainError: If the enclosure is 1/4 wide or wider
        AmbiguousMidpoint: If the enclosure straddles a half-integer
    """
    if x.width >= Fraction(1, 4):
        raise DomainError(f"enclosure {x} is too wide for ||x||")
    nearest = math.floor(x.lo + Fraction(1, 2))
    if x.hi > nearest + Fraction(1, 2):
        raise AmbiguousMidpoint(f"enclosure {x} straddles {nearest} + 1/2")
    lo_distance, hi_distance = abs(x.lo - nearest), abs(x.hi - nearest)
    if x.lo <= nearest <= x.hi:
        return RealEnclosure(0, max(lo_distance, hi_distance), x.precision)
    return RealEnclosure(min(lo_distance, hi_distance), max(lo_distance, hi_distance), x.precision)


class ReductionMethod(Enum):
    BAKER_DAVENPORT = "BakerDavenport"
    LEGENDRE = "Legendre"


@dataclass(frozen=True)
class ReductionOutcome:
    """Certificate of one reduction step"""
    method: ReductionMethod
    convergent_index: int
    q: int
    new_bound: int
    M: int
    epsilon: Optional[RealEnclosure] = None
    a_max: Optional[int] = None
    attempts: int = 1
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.method is ReductionMethod.BAKER_DAVENPORT:
            if not (self.q > 6 * self.M and self.epsilon is not None and self.epsilon.lo > 0):
                raise CertificationError("Baker-Davenport outcome needs q > 6M and epsilon > 0")
        elif not (self.q > self.M and self.a_max is not None):
            raise CertificationError("Legendre outcome needs q_N > M and a(M)")


@dataclass(frozen=True)
class ReductionFailure:
    """Why a reduction step gave up"""
    reason: str
    attempts: int
    convergent_index: int
    M: int

    EPSILON_NONPOSITIVE = "epsilon_nonpositive"
    PRECISION_EXHAUSTED = "precision_exhausted"


def _certify_convergent(expansion: ContinuedFraction, k: int) -> None:
    p, q = expansion.convergent(k)
    if not expansion.error_bound_holds(k):
        raise CertificationError(f"{expansion.value.label}: {p}/{q} is not a convergent")


def _log_ratio_floor(numerator: flint.arb, B: RealEnclosure, precision: int) -> int:
    """floor of the upper endpoint of log(numerator) / log(B.lo)."""
    if B.lo <= 1:
        raise DomainError(f"B = {B} must exceed 1")
    ratio = enclose(lambda: numerator.log() / rational_ball(B.lo).log(), precision)
    return math.floor(ratio.hi)


def _epsilon(tau: Refinable, mu: Refinable, q: int, M: int,
             start: int, cap: int) -> Tuple[Optional[RealEnclosure], int]:
    """
    Certified epsilon = ||mu q|| - M ||tau q||

    Returns:
        (epsilon, precision) where epsilon is None when it is certified <= 0
    """
    for precision in precision_ladder(start, cap):
        try:
            mu_distance = nearest_integer_distance(mu.at(precision) * q)
            tau_distance = nearest_integer_distance(tau.at(precision) * q)
        except (AmbiguousMidpoint, DomainError):
            continue
        epsilon = mu_distance - tau_distance * M
        if epsilon.lo > 0:
            return epsilon, precision
        if epsilon.hi <= 0:
            return None, precision
        logger.debug(f"epsilon undecided at {precision} bits for q={q}")
    raise PrecisionExhausted(f"sign of epsilon for q={q} undecided below {cap} bits")


def baker_davenport(
    tau: Refinable,
    mu: Refinable,
    A: RealEnclosure,
    B: RealEnclosure,
    M: int,
    mu_vanishes: bool = False,
    max_attempts: int = MAX_ATTEMPTS,
    precision: int = DEFAULT_PRECISION,
    precision_cap: int = PRECISION_CAP,
) -> Union[ReductionOutcome, ReductionFailure]:
    """
    Reduce 0 < |u tau - v + mu| < A B^-w with u <= M

    Takes the first convergent denominator q > 6M of tau and computes
    epsilon = ||mu q|| - M ||tau q||. When epsilon > 0 every solution has
    w <= floor(log(A q / epsilon) / log B). When epsilon <= 0 the next
    convergent is tried, up to max_attempts convergents in all.

    Args:
        tau: Irrational coefficient of u
        mu: Inhomogeneous term
        A: Constant of the inequality, A > 0
        B: Base of the inequality, B > 1
        M: Upper bound for u
        mu_vanishes: True if mu is known symbolically to be 0
        max_attempts: Number of convergents to try
        precision: Starting precision in bits
        precision_cap: Largest precision the ladder may reach

    Returns:
        ReductionOutcome, or ReductionFailure if every attempt had epsilon <= 0

    Raises:
        MuDegenerate: If mu is 0, in which case legendre_bound applies
        PrecisionExhausted: If a quotient or a sign stays undecided at the cap
    """
    if not (A.lo > 0 and B.lo > 1 and M >= 1):
        raise DomainError(f"need A > 0, B > 1, M >= 1; got A={A}, B={B}, M={M}")
    mu_start = mu.at(precision)
    if mu_start.contains(0):
        if mu_vanishes:
            raise MuDegenerate(f"{mu.label} is zero")
    elif mu_vanishes:
        raise CertificationError(f"{mu.label} was declared zero but its enclosure is {mu_start}")

    expansion = ContinuedFraction(tau, precision, precision_cap)
    k = expansion.first_index_exceeding(6 * M)
    working = precision
    for attempt in range(1, max_attempts + 1):
        q = expansion.denominator(k)
        epsilon, working = _epsilon(tau, mu, q, M, max(working, expansion.precision), precision_cap)
        if epsilon is not None:
            _certify_convergent(expansion, k)
            with flint.ctx.workprec(working):
                numerator = rational_ball(A.hi) * q / rational_ball(epsilon.lo)
                new_bound = _log_ratio_floor(numerator, B, working)
            logger.debug(f"Baker-Davenport: k={k}, q={q}, epsilon >= {float(epsilon.lo):.6g}, bound {new_bound}")
            return ReductionOutcome(
                method=ReductionMethod.BAKER_DAVENPORT,
                convergent_index=k,
                q=q,
                new_bound=new_bound,
                M=M,
                epsilon=epsilon,
                attempts=attempt,
                precision=working,
            )
        logger.debug(f"Baker-Davenport: epsilon <= 0 at k={k}, advancing")
        k += 1

    logger.warning(f"Baker-Davenport failed after {max_attempts} convergents of {tau.label}")
    return ReductionFailure(ReductionFailure.EPSILON_NONPOSITIVE, max_attempts, k - 1, M)


def legendre_precondition(A: RealEnclosure, B: RealEnclosure, M: int, n_min: int,
                          precision: int = DEFAULT_PRECISION) -> bool:
    """
    Certify B^n / (2A) > M for every n > n_min

    Under this condition A / (l B^n) < 1 / (2 l^2) for all l <= M, so Legendre's
    criterion makes n/l a convergent of tau.
    """
    with flint.ctx.workprec(precision):
        left = rational_ball(B.lo) ** (n_min + 1) / (2 * rational_ball(A.hi))
        return bool(left > M)


def legendre_bound(
    tau: Refinable,
    A: RealEnclosure,
    B: RealEnclosure,
    M: int,
    precision: int = DEFAULT_PRECISION,
    precision_cap: int = PRECISION_CAP,
) -> ReductionOutcome:
    """
    Reduce the homogeneous inequality 0 < |l tau - n| < A B^-n with l <= M

    With N the first index where q_N > M and a(M) = max(a_0..a_N), every
    solution has n <= floor(log(A (a(M) + 2) M) / log B).

    Returns:
        ReductionOutcome recording N, q_N and a(M)

    Raises:
        PrecisionExhausted: If a quotient stays undecided at the cap
    """
    if not (A.lo > 0 and B.lo > 1 and M >= 1):
        raise DomainError(f"need A > 0, B > 1, M >= 1; got A={A}, B={B}, M={M}")
    expansion = ContinuedFraction(tau, precision, precision_cap)
    N = expansion.first_index_exceeding(M)
    _certify_convergent(expansion, N)
    a_max = max(expansion.quotients[: N + 1])
    with flint.ctx.workprec(expansion.precision):
        numerator = rational_ball(A.hi) * (a_max + 2) * M
        new_bound = _log_ratio_floor(numerator, B, expansion.precision)
    logger.debug(f"Legendre: N={N}, q_N={expansion.convergents[N][1]}, a(M)={a_max}, bound {new_bound}")
    return ReductionOutcome(
        method=ReductionMethod.LEGENDRE,
        convergent_index=N,
        q=expansion.convergents[N][1],
        new_bound=new_bound,
        M=M,
        a_max=a_max,
        precision=expansion.precision,
    )
