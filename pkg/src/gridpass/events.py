"""Append-only JSON-lines event log with startup replay.

One line per event, schema-versioned with a ``v`` field. Appends funnel
through a single lock and timestamps never decrease within a log, so replay
order is the write order. Corrupt lines are skipped (with a warning), never
fatal: an operator must always be able to analyze a partially damaged log.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

logger = logging.getLogger(__name__)

LOG_VERSION = 1

KIND_REGISTERED = "registered"
KIND_CHALLENGE_ISSUED = "challenge_issued"
KIND_LOGIN_ATTEMPT = "login_attempt"
EVENT_KINDS = (KIND_REGISTERED, KIND_CHALLENGE_ISSUED, KIND_LOGIN_ATTEMPT)


@dataclass(frozen=True)
class EventRecord:
    kind: str
    timestamp: float
    payload: Mapping[str, Any]

    def __post_init__(self) -> None:
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        object.__setattr__(self, "payload", dict(self.payload))

    def to_json(self) -> str:
        return json.dumps(
            {"v": LOG_VERSION, "kind": self.kind, "ts": self.timestamp, "payload": dict(self.payload)},
            sort_keys=True,
        )


def read_event_log(path: str | Path) -> tuple[list[EventRecord], int]:
    """Replay a log file, returning (records, corrupt-line count)."""
    records: list[EventRecord] = []
    skipped = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                records.append(
                    EventRecord(
                        kind=doc["kind"],
                        timestamp=float(doc["ts"]),
                        payload=doc.get("payload", {}),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                skipped += 1
                logger.warning("skipping corrupt event at %s:%d: %s", path, lineno, exc)
    return records, skipped


class EventLog:
    """In-memory event sequence, optionally mirrored to a JSON-lines file."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._records: list[EventRecord] = []
        self._lock = threading.Lock()
        self._last_ts = 0.0
        if self._path is not None and self._path.exists():
            self._records, _ = read_event_log(self._path)
            if self._records:
                self._last_ts = max(r.timestamp for r in self._records)

    def append(
        self,
        kind: str,
        payload: Mapping[str, Any],
        timestamp: float | None = None,
    ) -> EventRecord:
        with self._lock:
            now = time.time() if timestamp is None else timestamp
            # Wall clocks can step backwards; log order must not.
            now = max(now, self._last_ts)
            record = EventRecord(kind=kind, timestamp=now, payload=payload)
            if self._path is not None:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(record.to_json() + "\n")
                    fh.flush()
            self._records.append(record)
            self._last_ts = now
        return record

    def records(self) -> tuple[EventRecord, ...]:
        with self._lock:
            return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)
