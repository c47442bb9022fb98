from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from typing import Any

from ..claims.base import ReportStatus, RunContext, VerificationReport


class RunLogger(ABC):
    """Interface for persisting suite runs and their verification reports."""

    @abstractmethod
    def log_run_started(self, context: RunContext) -> None:
        """Persist metadata that a run has started."""
        ...  # pragma: no cover - interface

    @abstractmethod
    def log_report(self, context: RunContext, report: VerificationReport) -> None:
        """Persist the outcome of a single claim check."""
        ...  # pragma: no cover - interface

    @abstractmethod
    def log_run_completed(
        self,
        context: RunContext,
        reports: Iterable[VerificationReport],
    ) -> None:
        """Persist that a run finished, including summary counts."""
        ...  # pragma: no cover

    def previous_status(
        self, claim: str, params: Mapping[str, Any]
    ) -> ReportStatus | None:
        """Status most recently recorded for the same claim and parameters."""
        return None
