"""
Output targets for tabular reports.

Reports are written as UTF-8 CSV (no BOM, ``\\n`` line endings) either to a stream or to
a file. Numbers are formatted with 15 significant digits.
"""

import csv
import io
import json
import logging
import sys
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 15


def format_value(value: Any) -> str:
    """Render numbers with SIGNIFICANT_DIGITS significant digits, everything else via str."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, float)):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text for ``header`` and ``rows``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


class ReportTarget(ABC):
    """Destination for rendered reports."""

    @abstractmethod
    def write_text(self, text: str) -> None:
        """Write already rendered text."""
        pass

    def write_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        self.write_text(render_csv(header, rows))

    def write_json(self, payload: Any) -> None:
        self.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


class StreamTarget(ReportTarget):
    """Writes to a text stream, stdout by default."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream

    def write_text(self, text: str) -> None:
        stream = self.stream or sys.stdout
        stream.write(text)
        stream.flush()


class FileTarget(ReportTarget):
    """Writes to a file, creating parent directories as needed."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def write_text(self, text: str) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"Report written to {self.path}")


def open_target(path: Optional[Path] = None, stream: Optional[TextIO] = None) -> ReportTarget:
    """FileTarget for ``path`` if given, otherwise a StreamTarget."""
    if path is not None:
        return FileTarget(path)
    return StreamTarget(stream)
