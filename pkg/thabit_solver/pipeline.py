"""
Per-family workflow: bound -> reduce -> search -> verify, and the certificates
it produces.
"""
import os
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from thabit_solver import __version__
from thabit_solver.config import SolverConfig
from thabit_solver.errors import CertificationError, ConfigurationError, MuDegenerate, PrecisionExhausted
from thabit_solver.linear_forms import (
    FAMILY_CONSTANTS,
    family_bound,
    reduction_inputs,
    theorem_bound,
    verify_lambda_cap,
)
from thabit_solver.reduction import (
    ReductionFailure,
    ReductionOutcome,
    baker_davenport,
    legendre_bound,
    legendre_precondition,
)
from thabit_solver.search import (
    EquationFamily,
    Solution,
    all_families,
    enumerate_solutions,
    verify_no_solutions_between,
)
from thabit_solver.sequences import SequenceId, terms_up_to
from thabit_solver.utils.performance import execute_in_parallel
from thabit_solver.utils.text import canonical_json, format_decimal, render_summary, slugify

logger = logging.getLogger("thabit_solver")

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_REDUCTION_FAILURE = 3
EXIT_TABLE_MISMATCH = 4

# Largest base covered by the published solution tables
PUBLISHED_MAX_BASE = 10

Triples = FrozenSet[Tuple[int, int, int]]

PUBLISHED_SOLUTIONS: Dict[Tuple[SequenceId, str, str], Triples] = {
    (SequenceId.PADOVAN, "thabit", "first"): frozenset({(7, 2, 1)}),
    (SequenceId.PADOVAN, "thabit", "second"): frozenset({
        (8, 2, 1), (12, 4, 1), (14, 3, 2), (15, 2, 4), (19, 5, 2),
    }),
    (SequenceId.PADOVAN, "williams", "first"): frozenset({
        (0, 2, 1), (1, 2, 1), (2, 2, 1), (5, 2, 2), (7, 3, 1), (8, 2, 3),
    }),
    (SequenceId.PADOVAN, "williams", "second"): frozenset({
        (5, 2, 1), (7, 2, 2), (8, 3, 1), (9, 2, 3), (12, 5, 1), (15, 4, 2), (16, 2, 6), (26, 6, 3),
    }),
    (SequenceId.PERRIN, "thabit", "first"): frozenset({(5, 2, 1), (6, 2, 1), (12, 5, 1)}),
    (SequenceId.PERRIN, "thabit", "second"): frozenset({(7, 2, 1)}),
    (SequenceId.PERRIN, "williams", "first"): frozenset({
        (0, 2, 2), (3, 2, 2), (5, 3, 1), (6, 3, 1), (7, 2, 3), (10, 3, 2), (12, 6, 1),
    }),
    (SequenceId.PERRIN, "williams", "second"): frozenset({
        (0, 2, 1), (3, 2, 1), (5, 2, 2), (6, 2, 2), (7, 3, 1), (10, 2, 4),
    }),
    (SequenceId.NARAYANA, "thabit", "first"): frozenset({(9, 4, 1), (11, 6, 1)}),
    (SequenceId.NARAYANA, "thabit", "second"): frozenset({(8, 2, 2), (8, 3, 1), (22, 7, 3)}),
    (SequenceId.NARAYANA, "williams", "first"): frozenset({
        (0, 2, 1), (1, 2, 1), (2, 2, 1), (4, 2, 2), (9, 5, 1), (11, 7, 1),
    }),
    (SequenceId.NARAYANA, "williams", "second"): frozenset({
        (4, 2, 1), (7, 2, 3), (8, 4, 1), (9, 3, 2), (14, 2, 7),
    }),
}


def expected_solutions(family: EquationFamily, b_min: int = 2, b_max: int = PUBLISHED_MAX_BASE) -> Triples:
    """Published triples of a family restricted to b_min <= b <= b_max."""
    table = PUBLISHED_SOLUTIONS[(family.sequence, family.form, family.kind)]
    return frozenset(t for t in table if b_min <= t[1] <= b_max)


@dataclass
class BaseRecord:
    """Everything computed for one base b"""
    b: int
    matveev_bound: Optional[int]
    reduction: Optional[ReductionOutcome]
    search_cutoff: int
    solutions: List[Solution] = field(default_factory=list)
    gap_verified: bool = False
    failure: Optional[ReductionFailure] = None
    error: Optional[str] = None

    def reduction_dict(self) -> Optional[Dict[str, Any]]:
        outcome = self.reduction
        if outcome is None:
            return None
        return {
            "method": outcome.method.value,
            "convergent_index": outcome.convergent_index,
            "q": str(outcome.q),
            "epsilon_lo": format_decimal(outcome.epsilon.lo) if outcome.epsilon is not None else None,
            "a_max": outcome.a_max,
            "new_bound": outcome.new_bound,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "b": self.b,
            "matveev_bound": str(self.matveev_bound) if self.matveev_bound is not None else None,
            "reduction": self.reduction_dict(),
            "search_cutoff": self.search_cutoff,
            "solutions": [s.to_dict() for s in self.solutions],
            "gap_verified": self.gap_verified,
            "error": self.error,
        }


@dataclass
class PipelineReport:
    """Certificate for one family over a range of bases"""
    family: EquationFamily
    b_min: int
    b_max: int
    records: List[BaseRecord] = field(default_factory=list)
    tool_version: str = __version__
    expected_match: Optional[bool] = None

    @property
    def solutions(self) -> List[Solution]:
        found = [s for record in self.records for s in record.solutions]
        return sorted(found, key=lambda s: (s.b, s.n, s.l))

    @property
    def precision_bits(self) -> int:
        bits = [r.reduction.precision for r in self.records if r.reduction is not None]
        return max(bits, default=0)

    @property
    def reduction_failed(self) -> bool:
        return any(r.reduction is None for r in self.records)

    @property
    def gap_failed(self) -> bool:
        return any(not r.gap_verified for r in self.records)

    @property
    def status(self) -> str:
        if self.reduction_failed:
            return "reduction_failed"
        if self.gap_failed:
            return "gap_failed"
        if self.expected_match is False:
            return "mismatch"
        return "ok"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.to_dict(),
            "per_b": [record.to_dict() for record in self.records],
            "tool_version": self.tool_version,
            "precision_bits": self.precision_bits,
            "paper_check": self.expected_match,
            "status": self.status,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def save(self, path: str) -> str:
        """
        Write the certificate as JSON

        Args:
            path: Output file

        Returns:
            The path written
        """
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())
        logger.info(f"Certificate saved to {path}")
        return path


def _check_range(b_min: int, b_max: int) -> None:
    if b_min < 2 or b_min > b_max:
        raise ConfigurationError(f"invalid base range [{b_min}, {b_max}]")
    if b_max > PUBLISHED_MAX_BASE:
        logger.warning(f"b_max={b_max} exceeds {PUBLISHED_MAX_BASE}: no published tables to compare with")


def reduce_base(family: EquationFamily, b: int, M: int,
                config: Optional[SolverConfig] = None) -> Union[ReductionOutcome, ReductionFailure]:
    """
    Reduce the bound M for one base

    Tries Baker-Davenport first and switches to the Legendre criterion when mu
    vanishes symbolically.

    Args:
        family: Equation family
        b: Base
        M: Absolute bound from family_bound
        config: Run configuration

    Returns:
        ReductionOutcome, or ReductionFailure when every convergent failed
    """
    config = config or SolverConfig()
    inputs = reduction_inputs(family, b, config.precision)
    try:
        return baker_davenport(
            inputs.tau, inputs.mu, inputs.A, inputs.B, M,
            mu_vanishes=inputs.mu_vanishes,
            max_attempts=config.max_attempts,
            precision=config.precision,
            precision_cap=config.precision_cap,
        )
    except MuDegenerate:
        logger.info(f"{family.label}, b={b}: mu = 0, using the Legendre criterion")
    cutoff = FAMILY_CONSTANTS[family.sequence].search_cutoff
    if not legendre_precondition(inputs.A, inputs.B, M, cutoff, config.precision):
        raise CertificationError(f"{family.label}, b={b}: Legendre precondition fails for n > {cutoff}")
    return legendre_bound(inputs.tau, inputs.A, inputs.B, M,
                          precision=config.precision, precision_cap=config.precision_cap)


def within_theorem_bound(family: EquationFamily, b: int, M: int, precision: int) -> bool:
    """True unless M certainly exceeds the closed-form bound for this sequence and base."""
    return M <= theorem_bound(family.sequence, b, precision).hi


def _run_base(family: EquationFamily, b: int, requested_cutoff: int, config: SolverConfig) -> BaseRecord:
    analytic_cutoff = FAMILY_CONSTANTS[family.sequence].search_cutoff
    M: Optional[int] = None
    outcome: Optional[ReductionOutcome] = None
    failure: Optional[ReductionFailure] = None
    error: Optional[str] = None

    try:
        M = family_bound(family, b, config.precision)
        if M < analytic_cutoff:
            logger.warning(f"{family.label}, b={b}: absolute bound {M} is below the cutoff {analytic_cutoff}")
        if not within_theorem_bound(family, b, M, config.precision):
            logger.warning(f"{family.label}, b={b}: absolute bound {M} exceeds the closed-form bound")
        result = reduce_base(family, b, M, config)
        if isinstance(result, ReductionFailure):
            failure = result
            error = f"reduction failed: {result.reason} after {result.attempts} convergents"
        else:
            outcome = result
    except PrecisionExhausted as e:
        failure = ReductionFailure(ReductionFailure.PRECISION_EXHAUSTED, 0, -1, M or 0)
        error = f"precision exhausted: {e}"
    except CertificationError as e:
        error = f"certification failed: {e}"

    if error:
        logger.warning(f"{family.label}, b={b}: {error}")

    cutoff = requested_cutoff if outcome is None else max(requested_cutoff, outcome.new_bound + 1)
    # the reduced bound only holds for n above the analytic cutoff, so the gap
    # must reach it even when the listed range stops earlier
    gap_top = max(cutoff, analytic_cutoff)
    if outcome is not None and cutoff < analytic_cutoff:
        logger.warning(
            f"{family.label}, b={b}: listing solutions up to n={cutoff}, "
            f"gap still checked up to the cutoff {analytic_cutoff}"
        )
    terms = terms_up_to(family.spec, gap_top if outcome is not None else cutoff)
    solutions = enumerate_solutions(family, (b, b), cutoff, terms)

    gap_verified = False
    if outcome is not None:
        gap = verify_no_solutions_between(family, (b, b), outcome.new_bound, gap_top, terms)
        gap_verified = gap.empty
        logger.info(
            f"{family.label}, b={b}: M={M}, {outcome.method.value} bound {outcome.new_bound}, "
            f"{len(solutions)} solutions up to n={cutoff}"
        )

    return BaseRecord(
        b=b,
        matveev_bound=M,
        reduction=outcome,
        search_cutoff=cutoff,
        solutions=solutions,
        gap_verified=gap_verified,
        failure=failure,
        error=error,
    )


def compare_with_published(report: PipelineReport) -> Optional[bool]:
    """
    Compare found triples with the published table

    Returns:
        True/False for the bases the tables cover, None if none are covered
    """
    b_max = min(report.b_max, PUBLISHED_MAX_BASE)
    if report.b_min > b_max:
        return None
    expected = expected_solutions(report.family, report.b_min, b_max)
    found = frozenset(s.triple for s in report.solutions if s.b <= b_max)
    if found != expected:
        logger.warning(
            f"{report.family.label}: missing {sorted(expected - found)}, unexpected {sorted(found - expected)}"
        )
        return False
    return True


def run_family(family: EquationFamily, b_min: int, b_max: int,
               config: Optional[SolverConfig] = None) -> PipelineReport:
    """
    Run the full pipeline for one family

    Failures for one base are recorded on its record without stopping the others.

    Args:
        family: Equation family
        b_min: Smallest base
        b_max: Largest base
        config: Run configuration

    Returns:
        PipelineReport

    Raises:
        ConfigurationError: If the base range is empty or starts below 2
    """
    config = config or SolverConfig()
    _check_range(b_min, b_max)
    spec = family.spec
    requested_cutoff = config.search_cutoff(spec.id.value)
    logger.info(f"Solving {family.label} for {b_min} <= b <= {b_max}")

    analytic_cutoff = FAMILY_CONSTANTS[spec.id].search_cutoff
    if not verify_lambda_cap(spec, analytic_cutoff + 1, config.precision):
        logger.warning(f"{spec.name}: Lambda cap could not be re-derived at n={analytic_cutoff + 1}")

    report = PipelineReport(family=family, b_min=b_min, b_max=b_max)
    for b in tqdm(range(b_min, b_max + 1), desc=family.label, disable=not config.show_progress):
        report.records.append(_run_base(family, b, requested_cutoff, config))

    if config.check_paper:
        report.expected_match = compare_with_published(report)
    logger.info(f"Finished {family.label}: {len(report.solutions)} solutions, status {report.status}")
    return report


def _run_family_job(job: Tuple[EquationFamily, int, int, SolverConfig]) -> PipelineReport:
    family, b_min, b_max, config = job
    return run_family(family, b_min, b_max, config)


def run_all(b_min: int, b_max: int, config: Optional[SolverConfig] = None) -> List[PipelineReport]:
    """
    Run the pipeline for all twelve families

    Args:
        b_min: Smallest base
        b_max: Largest base
        config: Run configuration

    Returns:
        Reports in the fixed family order, however they were executed
    """
    config = config or SolverConfig()
    _check_range(b_min, b_max)
    families = all_families()

    if config.parallel_processing:
        logger.info(f"Using parallel processing with {config.max_workers} workers")
        worker_config = replace(config, show_progress=False)
        jobs = [(family, b_min, b_max, worker_config) for family in families]
        return execute_in_parallel(_run_family_job, jobs, max_workers=config.max_workers,
                                   desc="Solving families")

    return [
        run_family(family, b_min, b_max, replace(config, show_progress=False))
        for family in tqdm(families, desc="Families", disable=not config.show_progress)
    ]


def exit_status(reports: Sequence[PipelineReport]) -> int:
    """Process exit code for a set of reports."""
    if any(r.reduction_failed or r.gap_failed for r in reports):
        return EXIT_REDUCTION_FAILURE
    if any(r.expected_match is False for r in reports):
        return EXIT_TABLE_MISMATCH
    return EXIT_OK


def write_reports(reports: Sequence[PipelineReport], output_dir: str) -> List[str]:
    """
    Write one JSON certificate per family plus summary.txt

    Returns:
        Paths written
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = [r.save(os.path.join(output_dir, f"{slugify(r.family.slug)}.json")) for r in reports]
    summary_path = os.path.join(output_dir, "summary.txt")
    with open(summary_path, "w", encoding="utf-8") as f:
        f.write(render_summary(reports))
    paths.append(summary_path)
    return paths
