"""JSON reports written by every workbench command."""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .config import generate_file_name

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INVALID = 3


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def plain(value: Any) -> Any:
    """JSON-ready copy: string keys, lists for tuples, sorted lists for sets."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((plain(v) for v in value), key=str)
    return value


@dataclass
class JsonReport:
    """Records of one command run; ``to_json`` is deterministic.

    Every record has an ``id``, a ``status`` in the vocabulary of the
    check that produced it and an ``outcome`` in pass/fail/inconclusive,
    which alone decides the exit code.
    """

    command: str
    input_digest: str = ""
    seed: Optional[int] = None
    budgets: Dict[str, int] = field(default_factory=dict)
    records: List[Dict[str, Any]] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None

    def add(self, record_id: str, status: str, outcome: str, witness: Optional[Any] = None, **extra: Any) -> None:
        record: Dict[str, Any] = {"id": record_id, "status": status, "outcome": outcome}
        if witness:
            record["witness"] = plain(witness)
        record.update(plain(extra))
        self.records.append(record)

    def fail_input(self, kind: str, message: str, **position: Any) -> None:
        """Mark the input as invalid."""
        self.error = {"kind": kind, "message": message, **{k: v for k, v in position.items() if v is not None}}

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_INVALID
        outcomes = {r["outcome"] for r in self.records}
        if FAIL in outcomes:
            return EXIT_FAIL
        if INCONCLUSIVE in outcomes:
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    def summary(self) -> Dict[str, Any]:
        counts = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
        for record in self.records:
            counts[record["outcome"]] += 1
        return {**counts, "exit_code": self.exit_code}

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "budgets": self.budgets,
            "records": sorted(self.records, key=lambda r: r["id"]),
            "summary": self.summary(),
        }
        if self.error is not None:
            result["error"] = self.error
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False, default=str)

    def save(self, reports_dir: Union[str, Path], params: Dict[str, Any]) -> Path:
        """Write the report under ``reports_dir``; the file name carries the run parameters."""
        reports_dir = Path(reports_dir)
        reports_dir.mkdir(parents=True, exist_ok=True)
        path = reports_dir / generate_file_name({"command": self.command, **params}, "report", "json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())
        logger.info("Report saved to: %s", path)
        return path
