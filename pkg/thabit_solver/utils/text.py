"""
Text helpers for certificate files and summaries
"""
import re
import json
import hashlib
from fractions import Fraction
from typing import Any, Dict, Iterable


def slugify(title):
    """
    Convert a title to a file-name friendly slug

    Args:
        title: The title to convert

    Returns:
        A slug-friendly string
    """
    return re.sub(r'[^\w\-]', '-', title.strip().lower())[:60]


def canonical_json(payload: Dict[str, Any]) -> str:
    """Serialize a certificate payload the same way on every run."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def payload_hash(payload):
    """
    Hash a certificate payload

    Args:
        payload: JSON-compatible dict, or its canonical text

    Returns:
        SHA-256 hex digest of the canonical text
    """
    text = payload if isinstance(payload, str) else canonical_json(payload)
    return hashlib.sha256(text.encode()).hexdigest()


def format_decimal(value: Fraction, digits: int = 20) -> str:
    """
    Scientific decimal string of an exact rational, truncated toward zero

    For the positive lower endpoints written to certificates this rounds down.

    Args:
        value: Exact rational
        digits: Significant digits kept

    Returns:
        A string such as "2.4999e-01"
    """
    value = Fraction(value)
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    magnitude = abs(value)
    exponent = len(str(magnitude.numerator)) - len(str(magnitude.denominator))
    while Fraction(10) ** exponent > magnitude:
        exponent -= 1
    while Fraction(10) ** (exponent + 1) <= magnitude:
        exponent += 1
    scaled = str(int(magnitude * Fraction(10) ** (digits - 1 - exponent)))
    fraction_digits = scaled[1:].rstrip("0")
    mantissa = f"{scaled[0]}.{fraction_digits}" if fraction_digits else scaled[0]
    return f"{sign}{mantissa}e{exponent:+03d}"


def render_summary(reports: Iterable[Any]) -> str:
    """
    Plain-text table of the solutions found for each family

    Args:
        reports: PipelineReport objects

    Returns:
        The summary text
    """
    lines = []
    for report in reports:
        family = report.family
        lines.append(f"{family.label}: {family.equation}, {report.b_min} <= b <= {report.b_max}")
        triples = ", ".join(str(s.triple) for s in report.solutions)
        values = sorted({s.value for s in report.solutions})
        lines.append(f"  solutions (n, b, l): {triples if triples else 'none'}")
        if values:
            lines.append(f"  values: {', '.join(str(v) for v in values)}")
        bounds = [r.reduction.new_bound for r in report.records if r.reduction is not None]
        methods = sorted({r.reduction.method.value for r in report.records if r.reduction is not None})
        if bounds:
            lines.append(f"  reduced bound: n <= {max(bounds)} ({', '.join(methods)})")
        cutoffs = [r.search_cutoff for r in report.records]
        if cutoffs:
            lines.append(f"  searched: 0 <= n <= {max(cutoffs)}")
        flagged = [s.triple for s in report.solutions if not s.l_below_n]
        if flagged:
            lines.append(f"  with l >= n: {', '.join(str(t) for t in flagged)}")
        lines.append(f"  status: {report.status}")
        lines.append("")
    return "\n".join(lines)
