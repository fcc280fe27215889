"""Append-only, tab-separated record of every arrowing decision the CLI makes."""

from __future__ import annotations

import csv
import io
import threading
from dataclasses import astuple, dataclass, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

HEADER = "# ordramsey results ledger v1"
NO_WITNESS = "-"

ARROWS = "arrows"
AVOIDS = "avoids"
UNKNOWN = "unknown"


class LedgerFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class LedgerRecord:
    timestamp: str
    red: str
    blue: str
    N: int
    verdict: str  # arrows | avoids | unknown
    seconds: float
    witness: str  # path of the avoiding coloring, or "-"
    version: str
    backend: str
    seed: int

    def to_line(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, delimiter="\t", lineterminator="\n").writerow(astuple(self))
        return buf.getvalue()

    @classmethod
    def from_fields(cls, row: list[str], line: int = 0) -> "LedgerRecord":
        names = [f.name for f in fields(cls)]
        if len(row) != len(names):
            raise LedgerFormatError(line, f"expected {len(names)} fields, got {len(row)}")
        try:
            return cls(row[0], row[1], row[2], int(row[3]), row[4], float(row[5]), row[6], row[7], row[8], int(row[9]))
        except ValueError as exc:
            raise LedgerFormatError(line, str(exc)) from None

    @property
    def witness_path(self) -> Optional[Path]:
        return None if self.witness == NO_WITNESS else Path(self.witness)


def now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class ResultsLedger:
    """Records are only ever appended; appends from worker threads are serialized."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record: LedgerRecord) -> None:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self.path.exists() or self.path.stat().st_size == 0
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write((HEADER + "\n" if fresh else "") + record.to_line())

    def records(self) -> Iterator[LedgerRecord]:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8", newline="") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.startswith("#") or not line.strip():
                    continue
                row = next(csv.reader([line.rstrip("\n")], delimiter="\t"))
                yield LedgerRecord.from_fields(row, lineno)
