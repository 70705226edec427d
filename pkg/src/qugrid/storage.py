"""Append-only attempt log backed by sqlite.

Every submission is kept: graders re-run, statistics aggregate, nothing
is updated or deleted after the fact. The store serializes access with
one lock because sqlite connections are cheap to share but not to race.
"""
from __future__ import annotations

import json
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime, timezone

_SCHEMA = """
CREATE TABLE IF NOT EXISTS attempts (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    task_id TEXT NOT NULL,
    user_id TEXT NOT NULL,
    submitted_at TEXT NOT NULL,
    circuit TEXT NOT NULL,
    result TEXT NOT NULL,
    correct INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS attempts_by_task ON attempts (task_id, id);
"""


@dataclass(frozen=True)
class Attempt:
    id: int
    task_id: str
    user_id: str
    submitted_at: str
    circuit: dict
    result: dict
    correct: bool


@dataclass(frozen=True)
class TaskStats:
    attempt_count: int
    average_attempts_to_correct: float | None


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class AttemptStore:
    """Attempt log; ``path`` may be ":memory:" for tests and dev servers."""

    def __init__(self, path: str = ":memory:"):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def add(
        self,
        task_id: str,
        user_id: str,
        circuit: dict,
        result: dict,
        correct: bool,
        submitted_at: str | None = None,
    ) -> Attempt:
        """Append one attempt and return it with its assigned id."""
        stamp = submitted_at if submitted_at is not None else _now()
        with self._lock:
            cursor = self._conn.execute(
                "INSERT INTO attempts (task_id, user_id, submitted_at, circuit, result, correct)"
                " VALUES (?, ?, ?, ?, ?, ?)",
                (task_id, user_id, stamp, json.dumps(circuit), json.dumps(result), int(correct)),
            )
            self._conn.commit()
            row_id = cursor.lastrowid
        return Attempt(
            id=row_id,
            task_id=task_id,
            user_id=user_id,
            submitted_at=stamp,
            circuit=circuit,
            result=result,
            correct=correct,
        )

    def for_task(self, task_id: str, user_id: str | None = None) -> list[Attempt]:
        """Attempts for one task in submission order, optionally one user's."""
        query = (
            "SELECT id, task_id, user_id, submitted_at, circuit, result, correct"
            " FROM attempts WHERE task_id = ?"
        )
        params: tuple = (task_id,)
        if user_id is not None:
            query += " AND user_id = ?"
            params = (task_id, user_id)
        query += " ORDER BY id"
        with self._lock:
            rows = self._conn.execute(query, params).fetchall()
        return [
            Attempt(
                id=row[0],
                task_id=row[1],
                user_id=row[2],
                submitted_at=row[3],
                circuit=json.loads(row[4]),
                result=json.loads(row[5]),
                correct=bool(row[6]),
            )
            for row in rows
        ]

    def stats(self, task_id: str) -> TaskStats:
        """Total attempts, and the mean 1-based index of each user's first
        correct attempt (users who never succeeded are left out)."""
        attempts = self.for_task(task_id)
        ordinal: dict[str, int] = {}
        first_correct: dict[str, int] = {}
        for attempt in attempts:
            ordinal[attempt.user_id] = ordinal.get(attempt.user_id, 0) + 1
            if attempt.correct and attempt.user_id not in first_correct:
                first_correct[attempt.user_id] = ordinal[attempt.user_id]
        average = None
        if first_correct:
            average = sum(first_correct.values()) / len(first_correct)
        return TaskStats(attempt_count=len(attempts), average_attempts_to_correct=average)
