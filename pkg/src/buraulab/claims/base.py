from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from datetime import UTC, datetime
from enum import StrEnum
from typing import Any

from .. import __version__
from ..groups.cache import GroupCache
from ..groups.engine import ModMatrix
from ..matrices import IntMatrix


class ReportStatus(StrEnum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    SKIPPED = "skipped"
    FINDING = "finding"


Witness = IntMatrix | ModMatrix


def _witness_json(matrix: Witness) -> dict[str, Any]:
    if isinstance(matrix, ModMatrix):
        payload = matrix.lift().to_json_dict()
        payload["modulus"] = matrix.modulus
        return payload
    return matrix.to_json_dict()


@dataclass(slots=True)
class VerificationReport:
    """Outcome of one claim check; predicted/observed are ints or JSON descriptors."""

    claim: str
    params: Mapping[str, Any]
    predicted: Any
    observed: Any
    status: ReportStatus
    witness: Sequence[Witness] | None = None
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status is not ReportStatus.REFUTED

    @classmethod
    def skipped(
        cls, claim: str, params: Mapping[str, Any], reason: str, elapsed_ms: int = 0
    ) -> VerificationReport:
        return cls(
            claim=claim,
            params=dict(params),
            predicted=None,
            observed={"reason": reason},
            status=ReportStatus.SKIPPED,
            elapsed_ms=elapsed_ms,
        )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "tool_version": __version__,
            "claim": self.claim,
            "params": dict(self.params),
            "predicted": self.predicted,
            "observed": self.observed,
            "status": self.status.value,
            "witness": (
                None
                if self.witness is None
                else [_witness_json(m) for m in self.witness]
            ),
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass(slots=True)
class Workbench:
    """Shared state for claim checks: the group cache and the size policy."""

    store: GroupCache = field(default_factory=GroupCache)
    allow_big: bool = False


@dataclass(slots=True)
class RunContext:
    suite_name: str
    run_id: str
    executed_at: datetime = field(default_factory=lambda: datetime.now(tz=UTC))
