"""
The versioned report of a certificate run and its JSON and CSV writers.

JSON reports are written with sorted keys and without timing unless it was
requested, so the same scenario and tool version give identical bytes.
"""

import csv
import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

from pydantic import BaseModel, ConfigDict, Field

from ..tools.utils import to_plain

logger = logging.getLogger(__name__)

SCHEMA = "bergman-cert-report/1"
TOOL_VERSION = "0.1.0"


class CertificateStatus(str, Enum):
    COMPLETE = "complete"
    INCONCLUSIVE = "inconclusive"


class CertificateEntry(BaseModel):
    """One certificate: its JSON payload and the table written to CSV."""

    command: str
    status: CertificateStatus
    verdict: Optional[str] = None
    payload: Dict[str, Any]
    columns: List[str] = Field(default_factory=list)
    rows: List[List[Any]] = Field(default_factory=list)
    seconds: Optional[float] = Field(None, description="Wall time; set only with --timing")


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_id: str = Field(SCHEMA, alias="schema")
    tool_version: str = TOOL_VERSION
    scenario: Optional[Dict[str, Any]] = Field(None, description="Echo of the validated scenario")
    seed: Optional[int] = None
    certificates: List[CertificateEntry] = Field(default_factory=list)
    seconds: Optional[float] = None

    @property
    def inconclusive(self) -> bool:
        return any(c.status == CertificateStatus.INCONCLUSIVE for c in self.certificates)

    @property
    def exit_code(self) -> int:
        return 2 if self.inconclusive else 0

    @property
    def name(self) -> str:
        if self.scenario and self.scenario.get("name"):
            return str(self.scenario["name"])
        return "report"

    def to_json(self) -> str:
        data = to_plain(self.model_dump(mode="python", by_alias=True))
        return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate_json(text)


def _cell(value: Any) -> Any:
    return "" if value is None else value


def write_table(entry: CertificateEntry, stream: TextIO) -> None:
    """RFC-4180 table: header row, CRLF line ends, minimal quoting."""
    writer = csv.writer(stream, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(entry.columns)
    for row in entry.rows:
        writer.writerow([_cell(value) for value in row])


def table_names(report: Report) -> List[str]:
    """File names of the CSV tables, numbered when a command appears twice."""
    names: List[str] = []
    for entry in report.certificates:
        base = f"{report.name}.{entry.command}"
        name = f"{base}.csv"
        k = 2
        while name in names:
            name = f"{base}-{k}.csv"
            k += 1
        names.append(name)
    return names


def emit(
    report: Report, format: str = "json", out: Optional[Union[str, Path]] = None
) -> List[Path]:
    """
    Write a report.

    Args:
        report: The report
        format: "json" for the full report, "csv" for one table per certificate
        out: JSON file (default stdout) or CSV directory (default the working directory)

    Returns:
        The files written
    """
    if format == "json":
        text = report.to_json()
        if out is None:
            sys.stdout.write(text)
            return []
        path = Path(out)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Report written to {path}")
        return [path]
    if format != "csv":
        raise ValueError(f"Invalid format: {format}")

    directory = Path(out) if out is not None else Path.cwd()
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for entry, name in zip(report.certificates, table_names(report)):
        path = directory / name
        with path.open("w", encoding="utf-8", newline="") as stream:
            write_table(entry, stream)
        written.append(path)
        logger.info(f"Table for {entry.command} written to {path} ({len(entry.rows)} rows)")
    return written
