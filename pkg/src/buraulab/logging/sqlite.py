import json
import sqlite3
import time
from collections import Counter
from collections.abc import Callable, Iterable, Mapping
from datetime import UTC, datetime
from pathlib import Path
from typing import Any, TypeVar

from .. import __version__
from ..claims.base import ReportStatus, RunContext, VerificationReport
from .base import RunLogger

T = TypeVar("T")

_STATUS_COLUMNS = tuple(status.value for status in ReportStatus)


def params_key(params: Mapping[str, Any]) -> str:
    """Canonical text of a parameter mapping, used to match claims across runs."""
    return json.dumps(dict(params), sort_keys=True)


class SQLiteRunLogger(RunLogger):
    """Stores suite runs and full report documents in SQLite.

    Reports are keyed by claim name and canonical parameters so a later run
    can ask what the same check concluded before.
    """

    def __init__(
        self,
        db_path: str | Path = "burau_runs.db",
        *,
        retries: int = 2,
        retry_delay: float = 0.1,
    ) -> None:
        self.db_path = Path(db_path)
        self._retries = retries
        self._retry_delay = retry_delay
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._ensure_schema()

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.db_path)
        conn.execute("PRAGMA journal_mode=WAL;")
        return conn

    def _ensure_schema(self) -> None:
        counts = ",\n".join(
            f"                    {column} INTEGER DEFAULT 0"
            for column in _STATUS_COLUMNS
        )

        def action(conn: sqlite3.Connection) -> None:
            conn.execute(f"""
                CREATE TABLE IF NOT EXISTS runs
                (
                    run_id       TEXT PRIMARY KEY,
                    suite_name   TEXT NOT NULL,
                    tool_version TEXT NOT NULL,
                    started_at   TEXT NOT NULL,
                    finished_at  TEXT,
{counts}
                )
                """)
            conn.execute("""
                CREATE TABLE IF NOT EXISTS reports
                (
                    id          INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id      TEXT NOT NULL,
                    claim       TEXT NOT NULL,
                    params_key  TEXT NOT NULL,
                    status      TEXT NOT NULL,
                    document    TEXT NOT NULL,
                    recorded_at TEXT NOT NULL,
                    FOREIGN KEY (run_id) REFERENCES runs (run_id)
                )
                """)
            conn.execute(
                "CREATE INDEX IF NOT EXISTS reports_by_claim "
                "ON reports (claim, params_key)"
            )

        self._with_retry(action)

    def log_run_started(self, context: RunContext) -> None:
        def action(conn: sqlite3.Connection) -> None:
            conn.execute(
                """
                INSERT OR REPLACE INTO runs
                    (run_id, suite_name, tool_version, started_at)
                VALUES (?, ?, ?, ?)
                """,
                (
                    context.run_id,
                    context.suite_name,
                    __version__,
                    context.executed_at.isoformat(),
                ),
            )

        self._with_retry(action)

    def log_report(self, context: RunContext, report: VerificationReport) -> None:
        document = json.dumps(report.to_json_dict(), default=str)

        def action(conn: sqlite3.Connection) -> None:
            conn.execute(
                """
                INSERT INTO reports(
                    run_id, claim, params_key, status, document, recorded_at
                )
                VALUES (?, ?, ?, ?, ?, ?)
                """,
                (
                    context.run_id,
                    report.claim,
                    params_key(report.params),
                    report.status.value,
                    document,
                    datetime.now(tz=UTC).isoformat(),
                ),
            )

        self._with_retry(action)

    def log_run_completed(
        self,
        context: RunContext,
        reports: Iterable[VerificationReport],
    ) -> None:
        tally = Counter(report.status.value for report in reports)
        assignments = ", ".join(f"{column} = ?" for column in _STATUS_COLUMNS)

        def action(conn: sqlite3.Connection) -> None:
            conn.execute(
                f"UPDATE runs SET finished_at = ?, {assignments} WHERE run_id = ?",
                (
                    datetime.now(tz=UTC).isoformat(),
                    *(tally[column] for column in _STATUS_COLUMNS),
                    context.run_id,
                ),
            )

        self._with_retry(action)

    def previous_status(
        self, claim: str, params: Mapping[str, Any]
    ) -> ReportStatus | None:
        def action(conn: sqlite3.Connection) -> tuple[str] | None:
            return conn.execute(
                """
                SELECT status FROM reports
                WHERE claim = ? AND params_key = ?
                ORDER BY id DESC
                LIMIT 1
                """,
                (claim, params_key(params)),
            ).fetchone()

        row = self._with_retry(action)
        return ReportStatus(row[0]) if row else None

    def load_reports(self, run_id: str) -> list[dict[str, Any]]:
        """Report documents of one run, in the order they were logged."""

        def action(conn: sqlite3.Connection) -> list[tuple[str]]:
            return conn.execute(
                "SELECT document FROM reports WHERE run_id = ? ORDER BY id",
                (run_id,),
            ).fetchall()

        return [json.loads(document) for (document,) in self._with_retry(action)]

    def _with_retry(self, action: Callable[[sqlite3.Connection], T]) -> T:
        attempt = 0
        while True:
            try:
                with self._connect() as conn:
                    result = action(conn)
                    conn.commit()
                return result
            except sqlite3.OperationalError:
                attempt += 1
                if attempt > self._retries:
                    raise
                time.sleep(self._retry_delay)
