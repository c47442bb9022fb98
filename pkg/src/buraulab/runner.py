import json
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any
from uuid import uuid4

import polars as pl

from .claims.base import ReportStatus, RunContext, VerificationReport, Workbench
from .claims.registry import ClaimInvocation
from .logging.base import RunLogger

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class StatusChange:
    """A claim whose status differs from the one recorded by an earlier run."""

    claim: str
    params: Mapping[str, Any]
    previous: ReportStatus
    current: ReportStatus


@dataclass(slots=True)
class SuiteReport:
    run_id: str
    suite_name: str
    reports: list[VerificationReport]
    changes: list[StatusChange] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    @property
    def refuted(self) -> list[VerificationReport]:
        return self._with_status(ReportStatus.REFUTED)

    @property
    def skipped(self) -> list[VerificationReport]:
        return self._with_status(ReportStatus.SKIPPED)

    def _with_status(self, status: ReportStatus) -> list[VerificationReport]:
        return [report for report in self.reports if report.status is status]

    def to_frame(self) -> pl.DataFrame:
        """One row per report; structured fields are JSON-encoded strings."""
        rows = [report.to_json_dict() for report in self.reports]
        return pl.DataFrame(
            {
                "claim": [row["claim"] for row in rows],
                "params": [json.dumps(row["params"], sort_keys=True) for row in rows],
                "predicted": [
                    json.dumps(row["predicted"], default=str) for row in rows
                ],
                "observed": [json.dumps(row["observed"], default=str) for row in rows],
                "status": [row["status"] for row in rows],
                "elapsed_ms": [row["elapsed_ms"] for row in rows],
            },
            schema={
                "claim": pl.Utf8,
                "params": pl.Utf8,
                "predicted": pl.Utf8,
                "observed": pl.Utf8,
                "status": pl.Utf8,
                "elapsed_ms": pl.Int64,
            },
        )


class VerificationRunner:
    """Runs claim invocations in order and logs every report."""

    def __init__(
        self,
        claims: Iterable[ClaimInvocation] | None = None,
        bench: Workbench | None = None,
        logger: RunLogger | None = None,
        fail_fast: bool = False,
    ) -> None:
        self._claims: list[ClaimInvocation] = list(claims or [])
        self._bench = bench or Workbench()
        self._logger = logger
        self._fail_fast = fail_fast

    @property
    def claims(self) -> list[ClaimInvocation]:
        return list(self._claims)

    def add_claims(self, *claims: ClaimInvocation) -> None:
        self._claims.extend(claims)

    def run(self, suite_name: str, run_id: str | None = None) -> SuiteReport:
        run_id = run_id or str(uuid4())
        context = RunContext(suite_name=suite_name, run_id=run_id)
        reports: list[VerificationReport] = []
        changes: list[StatusChange] = []

        if self._logger:
            self._logger.log_run_started(context)

        for claim in self._claims:
            report = claim.evaluate(self._bench)
            reports.append(report)
            if self._logger:
                change = _compare_with_history(self._logger, report)
                if change:
                    changes.append(change)
                self._logger.log_report(context, report)
            if self._fail_fast and report.status is ReportStatus.REFUTED:
                break

        if self._logger:
            self._logger.log_run_completed(context, reports)

        return SuiteReport(
            run_id=run_id, suite_name=suite_name, reports=reports, changes=changes
        )


def _compare_with_history(
    history: RunLogger, report: VerificationReport
) -> StatusChange | None:
    previous = history.previous_status(report.claim, report.params)
    if previous is None or previous is report.status:
        return None
    logger.warning(
        "%s %s changed from %s to %s",
        report.claim,
        dict(report.params),
        previous.value,
        report.status.value,
    )
    return StatusChange(report.claim, report.params, previous, report.status)
