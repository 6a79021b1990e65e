"""
Statistics tracking for ThabitSolver runs
"""
import os
import time
import json
import logging
from datetime import datetime
from typing import Dict, List, Any, Optional
from pathlib import Path

from thabit_solver.utils.text import payload_hash

logger = logging.getLogger("thabit_solver")


class RunStats:
    """Track and report statistics about a solver run"""

    def __init__(self):
        self.start_time = time.time()
        self.end_time: Optional[float] = None

        # Counts
        self.families = 0
        self.bases = 0
        self.solutions = 0

        # Reductions by method name
        self.reductions: Dict[str, int] = {}
        self.reduction_failures = 0
        self.gap_failures = 0
        self.mismatched_families: List[str] = []

        # Precision
        self.max_precision = 0

        # sha256 of each certificate, by family slug
        self.certificate_hashes: Dict[str, str] = {}

    def record_report(self, report):
        """
        Record a finished family report

        Args:
            report: PipelineReport
        """
        self.families += 1
        self.solutions += len(report.solutions)
        for record in report.records:
            self.bases += 1
            if record.reduction is not None:
                method = record.reduction.method.value
                self.reductions[method] = self.reductions.get(method, 0) + 1
            else:
                self.reduction_failures += 1
            if not record.gap_verified:
                self.gap_failures += 1
        self.max_precision = max(self.max_precision, report.precision_bits)
        self.certificate_hashes[report.family.slug] = payload_hash(report.to_dict())
        if report.expected_match is False:
            self.mismatched_families.append(report.family.slug)

    def finish(self):
        """Mark the end of processing"""
        self.end_time = time.time()

    @property
    def duration(self) -> float:
        """Get the total processing duration in seconds"""
        end = self.end_time or time.time()
        return end - self.start_time

    def to_dict(self) -> Dict[str, Any]:
        """Convert stats to a dictionary"""
        return {
            'timestamp': datetime.now().isoformat(),
            'duration_seconds': self.duration,
            'families': self.families,
            'bases': self.bases,
            'solutions': self.solutions,
            'reductions': self.reductions,
            'reduction_failures': self.reduction_failures,
            'gap_failures': self.gap_failures,
            'mismatched_families': self.mismatched_families,
            'max_precision_bits': self.max_precision,
            'certificate_hashes': dict(sorted(self.certificate_hashes.items())),
        }

    def save_report(self, output_dir: str) -> str:
        """
        Save statistics report to a JSON file

        Args:
            output_dir: Directory to save the report

        Returns:
            Path to the saved report
        """
        stats_dir = Path(output_dir) / ".stats"
        os.makedirs(stats_dir, exist_ok=True)

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        report_path = stats_dir / f"run_stats_{timestamp}.json"

        try:
            with open(report_path, 'w') as f:
                json.dump(self.to_dict(), f, indent=2)

            logger.info(f"Statistics report saved to {report_path}")
            return str(report_path)
        except Exception as e:
            logger.error(f"Failed to save statistics report: {e}")
            return ""

    def print_summary(self):
        """Print a summary of the statistics"""
        methods = ', '.join(f'{name} ({count})' for name, count in sorted(self.reductions.items()))
        summary = [
            f"Run completed in {self.duration:.2f} seconds",
            f"Processed {self.families} families over {self.bases} bases",
            f"Reductions: {methods if methods else 'none'}",
            f"Reduction failures: {self.reduction_failures}, gap failures: {self.gap_failures}",
            f"Solutions found: {self.solutions}",
            f"Largest working precision: {self.max_precision} bits",
        ]
        if self.mismatched_families:
            summary.append(f"Expected-table mismatches: {', '.join(self.mismatched_families)}")

        print("\n=== Run Summary ===")
        for line in summary:
            print(line)
        print("===================")
