"""
Experiment coordinator

Runs the repetitions of one suite in a worker pool and writes the records as
CSV in index order, whatever order the workers finish in.
"""

import csv
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, TextIO

from mixdisc.config import get_thread_count
from mixdisc.exceptions import MixdiscError, UnknownSuite
from mixdisc.experiments.suites import SUITES, run_row
from mixdisc.models.suite import INFORMATIONAL_SUITES, SuiteEnum
from mixdisc.schemas import CSV_COLUMNS, ExperimentRecord, SolverConfig

logger = logging.getLogger(__name__)


def parse_suite(name: str) -> SuiteEnum:
    try:
        return SuiteEnum(name)
    except ValueError:
        choices = ", ".join(suite.value for suite in SUITES)
        raise UnknownSuite(f"unknown suite {name!r}; choose one of {choices}")


class ExperimentCoordinator:
    def __init__(self, suite: SuiteEnum, reps: int, seed: int, n: Optional[int] = None,
                 cfg: Optional[SolverConfig] = None, workers: Optional[int] = None):
        if reps < 0:
            raise ValueError(f"reps must be non-negative, got {reps}")
        self.suite = suite
        self.reps = reps
        self.seed = seed
        self.n = n
        self.cfg = cfg or SolverConfig()
        self.workers = workers or get_thread_count()

    def _failed_record(self, index: int, residual: Optional[float] = None) -> ExperimentRecord:
        return ExperimentRecord(
            index=index, suite=self.suite.value, n=self.n or 0, alpha_input=math.nan,
            log_lower=math.nan, log_upper=math.nan, residual=residual or math.nan,
            passed=False,
        )

    def _run_one(self, index: int) -> ExperimentRecord:
        try:
            return run_row(self.suite, index, self.seed, self.n, self.cfg)
        except MixdiscError as e:
            logger.error(f"Row {index} of {self.suite.value} failed: {e}")
            return self._failed_record(index, getattr(e, "residual", None))
        except (ArithmeticError, TypeError, ValueError) as e:
            logger.exception(f"Row {index} of {self.suite.value} raised {type(e).__name__}: {e}")
            return self._failed_record(index)

    def run(self) -> List[ExperimentRecord]:
        """All repetitions, in index order."""
        logger.info(f"Running {self.reps} repetitions of {self.suite.value} on {self.workers} workers")
        if self.workers <= 1 or self.reps <= 1:
            return [self._run_one(index) for index in range(self.reps)]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(self._run_one, range(self.reps)))

    def all_passed(self, records: List[ExperimentRecord]) -> bool:
        if self.suite in INFORMATIONAL_SUITES:
            return True
        return all(record.passed for record in records)


def write_csv(records: List[ExperimentRecord], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow(record.csv_row())


def summarize(suite: SuiteEnum, records: List[ExperimentRecord], stream: Optional[TextIO] = None) -> str:
    passed = sum(1 for record in records if record.passed)
    line = f"suite={suite.value} rows={len(records)} passed={passed} failed={len(records) - passed}"
    print(line, file=stream or sys.stderr)
    return line
