"""
Certified enclosures of the dominant roots, Binet coefficients and logarithmic
heights used by the solver.

Every irrational real is carried as a RealEnclosure: a closed interval with exact
rational endpoints. Logarithms, powers and square roots are evaluated with
python-flint arb balls and converted back through their outward endpoints, so an
enclosure always contains the number it stands for.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, Iterator, Optional, Sequence, Tuple, Union

import flint

from thabit_solver.errors import (
    CertificationError,
    NotBracketed,
    PrecisionExhausted,
    UnsupportedNumber,
)

if TYPE_CHECKING:
    from thabit_solver.sequences import SequenceSpec

logger = logging.getLogger("thabit_solver")

DEFAULT_PRECISION = 192
PRECISION_CAP = 1 << 16

# Integer polynomials are stored constant term first, as flint.fmpz_poly expects.
Polynomial = Tuple[int, ...]
Rational = Union[int, Fraction]

PLASTIC_CUBIC: Polynomial = (-1, -1, 0, 1)
SUPERGOLDEN_CUBIC: Polynomial = (-1, 0, -1, 1)
PADOVAN_COEFF_MINPOLY: Polynomial = (-1, 6, -23, 23)
NARAYANA_COEFF_MINPOLY: Polynomial = (-1, -3, 0, 31)
UNIT_MINPOLY: Polynomial = (-1, 1)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _fmpq(value: Fraction) -> flint.fmpq:
    return flint.fmpq(value.numerator, value.denominator)


def rational_ball(value: Rational) -> flint.arb:
    """Exact rational as an arb ball at the current context precision."""
    return flint.arb(_fmpq(_as_fraction(value)))


def _arb_endpoint(ball: flint.arb) -> Fraction:
    """Convert an exact arb (an endpoint) to a Fraction."""
    try:
        mantissa, exponent = ball.man_exp()
    except ValueError as e:
        raise PrecisionExhausted(f"enclosure is not finite: {ball}") from e
    mantissa, exponent = int(mantissa), int(exponent)
    if exponent >= 0:
        return Fraction(mantissa << exponent)
    return Fraction(mantissa, 1 << -exponent)


def format_polynomial(poly: Sequence[int]) -> str:
    """Render an integer polynomial as text, highest degree first."""
    terms = []
    for degree in range(len(poly) - 1, -1, -1):
        c = poly[degree]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        if degree == 0:
            body = str(magnitude)
        else:
            power = "x" if degree == 1 else f"x^{degree}"
            body = power if magnitude == 1 else f"{magnitude}{power}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class RealEnclosure:
    """A real number known to lie in [lo, hi]"""
    lo: Fraction
    hi: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"Empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: Rational, precision: int = DEFAULT_PRECISION) -> "RealEnclosure":
        value = _as_fraction(value)
        return cls(value, value, precision)

    @classmethod
    def from_arb(cls, ball: flint.arb, precision: int) -> "RealEnclosure":
        """
        Build an enclosure from an arb ball

        Args:
            ball: Ball to convert
            precision: Working precision the ball was computed at

        Returns:
            Enclosure whose endpoints are the ball's outward-rounded bounds

        Raises:
            PrecisionExhausted: If the ball is not finite
        """
        return cls(_arb_endpoint(ball.lower()), _arb_endpoint(ball.upper()), precision)

    def to_arb(self) -> flint.arb:
        """Return an arb ball containing the whole enclosure at the current context precision."""
        mid = (self.lo + self.hi) / 2
        rad = (self.hi - self.lo) / 2
        if rad == 0:
            return flint.arb(_fmpq(mid))
        return flint.arb(_fmpq(mid), _fmpq(rad))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Union[Rational, "RealEnclosure"]) -> bool:
        if isinstance(value, RealEnclosure):
            return self.lo <= value.lo and value.hi <= self.hi
        value = _as_fraction(value)
        return self.lo <= value <= self.hi

    def within(self, lower: Rational, upper: Rational) -> bool:
        """True if the enclosure lies inside the open interval (lower, upper)."""
        return _as_fraction(lower) < self.lo and self.hi < _as_fraction(upper)

    def overlaps(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "RealEnclosure") -> "RealEnclosure":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise CertificationError(f"Disjoint enclosures {self} and {other}")
        return RealEnclosure(lo, hi, max(self.precision, other.precision))

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_less(self, other: Union[Rational, "RealEnclosure"]) -> bool:
        bound = other.lo if isinstance(other, RealEnclosure) else _as_fraction(other)
        return self.hi < bound

    def _coerce(self, other) -> "RealEnclosure":
        if isinstance(other, RealEnclosure):
            return other
        return RealEnclosure.exact(other, self.precision)

    def __add__(self, other) -> "RealEnclosure":
        other = self._coerce(other)
        return RealEnclosure(self.lo + other.lo, self.hi + other.hi,
                             min(self.precision, other.precision))

    __radd__ = __add__

    def __neg__(self) -> "RealEnclosure":
        return RealEnclosure(-self.hi, -self.lo, self.precision)

    def __sub__(self, other) -> "RealEnclosure":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RealEnclosure":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RealEnclosure":
        other = self._coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RealEnclosure(min(products), max(products), min(self.precision, other.precision))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.is_exact:
            return f"[{float(self.lo):.12g}]"
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def precision_ladder(start: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP) -> Iterator[int]:
    """
    Yield working precisions, doubling from start while not above cap

    Args:
        start: First precision in bits
        cap: Largest precision allowed

    Yields:
        Precisions in bits
    """
    precision = start
    while precision <= cap:
        yield precision
        precision *= 2


def enclose(compute: Callable[[], flint.arb], precision: int) -> RealEnclosure:
    """Evaluate arb code at the given working precision and return its enclosure."""
    with flint.ctx.workprec(precision):
        return RealEnclosure.from_arb(compute(), precision)


class Refinable:
    """
    A real number that can be enclosed at any requested precision.

    Successive enclosures are intersected with the previous one, so a sequence of
    calls never leaves an earlier enclosure. Each instance has a single owner.
    """

    def __init__(self, compute: Callable[[int], RealEnclosure], label: str = "real"):
        self._compute = compute
        self.label = label
        self._last: Optional[RealEnclosure] = None

    @classmethod
    def from_arb(cls, compute: Callable[[int], flint.arb], label: str = "real") -> "Refinable":
        """Wrap arb code taking the working precision as its only argument."""
        return cls(lambda precision: enclose(lambda: compute(precision), precision), label)

    @classmethod
    def constant(cls, value: Rational, label: str = "rational") -> "Refinable":
        return cls(lambda precision: RealEnclosure.exact(value, precision), label)

    def at(self, precision: int) -> RealEnclosure:
        fresh = self._compute(precision)
        if self._last is not None:
            fresh = fresh.intersect(self._last)
        self._last = fresh
        return fresh

    def __repr__(self) -> str:
        return f"Refinable({self.label})"


def evaluate(poly: Sequence[int], x: Fraction) -> Fraction:
    """Exact Horner evaluation."""
    result = Fraction(0)
    for c in reversed(poly):
        result = result * x + c
    return result


def evaluate_arb(poly: Sequence[int], x: flint.arb) -> flint.arb:
    """Horner evaluation in ball arithmetic."""
    result = flint.arb(0)
    for c in reversed(poly):
        result = result * x + c
    return result


def power_ball(base: flint.arb, exponent: int) -> flint.arb:
    if exponent == 0:
        return flint.arb(1)
    if exponent < 0:
        return 1 / base ** (-exponent)
    return base ** exponent


def _round_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(round(x * (1 << bits)), 1 << bits)


def _bracket(poly: Polynomial) -> Tuple[Fraction, Fraction]:
    if len(poly) < 2 or poly[-1] <= 0:
        raise NotBracketed(f"{format_polynomial(poly)} needs a positive leading coefficient")
    lo = Fraction(1)
    if evaluate(poly, lo) >= 0:
        raise NotBracketed(f"{format_polynomial(poly)} has no sign change above 1")
    cauchy = 1 + max(abs(Fraction(c, poly[-1])) for c in poly[:-1])
    hi = Fraction(math.ceil(cauchy) + 1)
    if evaluate(poly, hi) <= 0:
        raise NotBracketed(f"{format_polynomial(poly)} has no sign change below {hi}")
    return lo, hi


@lru_cache(maxsize=None)
def _dominant_root(poly: Polynomial, precision: int) -> RealEnclosure:
    lo, hi = _bracket(poly)

    while hi - lo > Fraction(1, 16):
        mid = (lo + hi) / 2
        value = evaluate(poly, mid)
        if value == 0:
            return RealEnclosure.exact(mid, precision)
        if value < 0:
            lo = mid
        else:
            hi = mid

    # Newton from the right end of the bracket, rounded to dyadics
    derivative = tuple(k * c for k, c in enumerate(poly))[1:]
    scale = precision + 8
    x = hi
    for _ in range(4 * precision.bit_length() + 16):
        slope = evaluate(derivative, x)
        if slope == 0:
            break
        x_next = _round_dyadic(x - evaluate(poly, x) / slope, scale)
        converged = abs(x_next - x) <= Fraction(1, 1 << scale)
        x = x_next
        if converged:
            break

    if evaluate(poly, x) == 0:
        return RealEnclosure.exact(x, precision)
    radius = Fraction(1, 1 << precision)
    left, right = x - radius, x + radius
    if lo <= left and right <= hi and evaluate(poly, left) < 0 < evaluate(poly, right):
        return RealEnclosure(left, right, precision)

    logger.debug(f"Newton step left the bracket for {format_polynomial(poly)}, bisecting")
    target = Fraction(1, 1 << max(precision - 2, 0))
    while hi - lo > target:
        mid = (lo + hi) / 2
        value = evaluate(poly, mid)
        if value == 0:
            return RealEnclosure.exact(mid, precision)
        if value < 0:
            lo = mid
        else:
            hi = mid
    return RealEnclosure(lo, hi, precision)


def dominant_root(cubic: Sequence[int], precision: int = DEFAULT_PRECISION) -> RealEnclosure:
    """
    Enclose the unique real root greater than 1 of an integer polynomial

    The enclosure [lo, hi] is certified by exact sign evaluation:
    cubic(lo) < 0 < cubic(hi) in rational arithmetic.

    Args:
        cubic: Coefficients, constant term first
        precision: Requested precision; the width is at most 2^(2 - precision)

    Returns:
        Enclosure of the dominant root

    Raises:
        NotBracketed: If no sign change above 1 can be found
    """
    return _dominant_root(tuple(int(c) for c in cubic), precision)


def root_ball(cubic: Sequence[int], precision: int) -> flint.arb:
    """Dominant root as an arb ball; call inside a working-precision context."""
    return dominant_root(cubic, precision).to_arb()


def _check_minimal_polynomial(minpoly: Polynomial, value: RealEnclosure, what: str) -> None:
    residual = enclose(lambda: evaluate_arb(minpoly, value.to_arb()), value.precision)
    if not residual.contains(0):
        raise CertificationError(
            f"{what} enclosure {value} is not a root of {format_polynomial(minpoly)}"
        )


def binet_coefficient(spec: "SequenceSpec", root: RealEnclosure) -> RealEnclosure:
    """
    Evaluate the leading Binet coefficient of a sequence

    The closed form is the rational function numerator(root)/denominator(root)
    stored on the sequence spec, validated against the coefficient's minimal
    polynomial.

    Args:
        spec: Sequence description
        root: Enclosure of the sequence's dominant root

    Returns:
        Enclosure of the coefficient (exact when the closed form is constant)
    """
    numerator, denominator = spec.binet_coeff_numerator, spec.binet_coeff_denominator
    if len(numerator) == 1 and len(denominator) == 1:
        return RealEnclosure.exact(Fraction(numerator[0], denominator[0]), root.precision)

    def compute():
        x = root.to_arb()
        return evaluate_arb(numerator, x) / evaluate_arb(denominator, x)

    coeff = enclose(compute, root.precision)
    _check_minimal_polynomial(spec.binet_coeff_minpoly, coeff, f"{spec.name} Binet coefficient")
    return coeff


@dataclass(frozen=True)
class BinetData:
    """Dominant part of a Binet formula and the size of its conjugate part"""
    root: RealEnclosure
    coeff: RealEnclosure
    conj_modulus: RealEnclosure
    conj_coeff_modulus: RealEnclosure
    index_shift: int = 0

    @property
    def precision(self) -> int:
        return self.root.precision


def binet_data(spec: "SequenceSpec", precision: int = DEFAULT_PRECISION) -> BinetData:
    """
    Assemble the Binet data of a sequence at the given precision

    The complex conjugate roots are never computed: their common modulus is
    sqrt(product of roots / root), and the modulus of their coefficients is
    sqrt(norm of the coefficient / coefficient).

    Raises:
        CertificationError: If the conjugate modulus is not certified below 1
    """
    root = dominant_root(spec.char_poly, precision)
    coeff = binet_coefficient(spec, root)

    root_product = Fraction(-spec.char_poly[0], spec.char_poly[-1])
    conj_modulus = enclose(lambda: (flint.arb(_fmpq(root_product)) / root.to_arb()).sqrt(), precision)
    if not conj_modulus.certainly_less(1):
        raise CertificationError(f"{spec.name}: conjugate modulus {conj_modulus} not below 1")

    minpoly = spec.binet_coeff_minpoly
    if len(minpoly) == 2:
        conj_coeff_modulus = RealEnclosure.exact(1, precision)
    else:
        norm = Fraction(-minpoly[0], minpoly[-1])
        conj_coeff_modulus = enclose(
            lambda: (flint.arb(_fmpq(norm)) / coeff.to_arb()).sqrt(), precision
        )

    return BinetData(
        root=root,
        coeff=coeff,
        conj_modulus=conj_modulus,
        conj_coeff_modulus=conj_coeff_modulus,
        index_shift=spec.binet_index_shift,
    )


class NumberKind(Enum):
    INTEGER = "integer"
    DOMINANT_ROOT = "dominant_root"
    BINET_COEFFICIENT = "binet_coefficient"
    INVERSE = "inverse"
    PRODUCT = "product"


CATALOGUED_ROOTS = (PLASTIC_CUBIC, SUPERGOLDEN_CUBIC)
CATALOGUED_COEFFICIENTS = (PADOVAN_COEFF_MINPOLY, NARAYANA_COEFF_MINPOLY, UNIT_MINPOLY)


@dataclass(frozen=True)
class NumberDescriptor:
    """Names one of the algebraic numbers whose height the solver needs"""
    kind: NumberKind
    value: int = 0
    polynomial: Polynomial = ()
    factors: Tuple["NumberDescriptor", ...] = ()

    @classmethod
    def integer(cls, m: int) -> "NumberDescriptor":
        return cls(NumberKind.INTEGER, value=m)

    @classmethod
    def root(cls, char_poly: Sequence[int]) -> "NumberDescriptor":
        return cls(NumberKind.DOMINANT_ROOT, polynomial=tuple(char_poly))

    @classmethod
    def coefficient(cls, minpoly: Sequence[int]) -> "NumberDescriptor":
        return cls(NumberKind.BINET_COEFFICIENT, polynomial=tuple(minpoly))

    @classmethod
    def inverse(cls, number: "NumberDescriptor") -> "NumberDescriptor":
        return cls(NumberKind.INVERSE, factors=(number,))

    @classmethod
    def product(cls, *numbers: "NumberDescriptor") -> "NumberDescriptor":
        return cls(NumberKind.PRODUCT, factors=tuple(numbers))

    def describe(self) -> str:
        if self.kind is NumberKind.INTEGER:
            return str(self.value)
        if self.kind is NumberKind.DOMINANT_ROOT:
            return f"root({format_polynomial(self.polynomial)})"
        if self.kind is NumberKind.BINET_COEFFICIENT:
            return f"coeff({format_polynomial(self.polynomial)})"
        if self.kind is NumberKind.INVERSE:
            return f"1/{self.factors[0].describe()}"
        return " * ".join(f.describe() for f in self.factors)


@dataclass(frozen=True)
class HeightValue:
    """Logarithmic height (or an upper bound for it) of a catalogued number"""
    value: RealEnclosure
    description: str


def _height(number: NumberDescriptor, precision: int) -> RealEnclosure:
    if number.kind is NumberKind.INTEGER:
        if number.value < 1:
            raise UnsupportedNumber(f"height of integer {number.value} is not catalogued")
        return enclose(lambda: flint.arb(number.value).log(), precision)

    if number.kind is NumberKind.DOMINANT_ROOT:
        if number.polynomial not in CATALOGUED_ROOTS:
            raise UnsupportedNumber(f"root of {format_polynomial(number.polynomial)} is not catalogued")
        return enclose(lambda: root_ball(number.polynomial, precision).log() / 3, precision)

    if number.kind is NumberKind.BINET_COEFFICIENT:
        if number.polynomial not in CATALOGUED_COEFFICIENTS:
            raise UnsupportedNumber(
                f"coefficient with minimal polynomial {format_polynomial(number.polynomial)} is not catalogued"
            )
        if number.polynomial == UNIT_MINPOLY:
            return RealEnclosure.exact(0, precision)
        # every conjugate lies inside the unit circle, only the leading coefficient counts
        leading = number.polynomial[-1]
        degree = len(number.polynomial) - 1
        return enclose(lambda: flint.arb(leading).log() / degree, precision)

    if number.kind is NumberKind.INVERSE:
        return _height(number.factors[0], precision)

    if number.kind is NumberKind.PRODUCT and number.factors:
        total = RealEnclosure.exact(0, precision)
        for factor in number.factors:
            total = total + _height(factor, precision)
        return total

    raise UnsupportedNumber(f"cannot compute the height of {number.describe()}")


def log_height(number: Union[int, NumberDescriptor], precision: int = DEFAULT_PRECISION) -> HeightValue:
    """
    Logarithmic height of a catalogued algebraic number

    Products are bounded with h(xy) <= h(x) + h(y), so the value for a product is
    an upper bound rather than the height itself.

    Args:
        number: A positive integer or a NumberDescriptor
        precision: Working precision in bits

    Returns:
        HeightValue with a non-negative enclosure

    Raises:
        UnsupportedNumber: If the number is outside the catalogue
    """
    if isinstance(number, bool) or not isinstance(number, (int, NumberDescriptor)):
        raise UnsupportedNumber(f"unsupported height descriptor: {number!r}")
    if isinstance(number, int):
        number = NumberDescriptor.integer(number)
    value = _height(number, precision)
    prefix = "h <= " if number.kind is NumberKind.PRODUCT else "h = "
    return HeightValue(value=value, description=prefix + number.describe())
