"""
CSV Output Handler

Writes sweep and oracle tables as CSV files. Writes are serialized with a
file lock and go through a temporary file that atomically replaces the
target, so a reader never sees a half-written table.
"""

import csv
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from filelock import FileLock, Timeout

from .errors import OutputError

try:
    from ..utils.helpers import format_float
except ImportError:
    from utils.helpers import format_float


def format_cell(value: Any) -> str:
    """
    Render one CSV cell

    Floats use 17 significant digits, None becomes ``nan``, booleans
    ``true``/``false`` and lists are joined with ``;``.
    """
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return ";".join(str(item) for item in value)
    try:
        return format_float(float(value))
    except (TypeError, ValueError):
        return str(value)


class CSVStore:
    """
    Locked, atomic CSV writer

    Features:
    - Single header row, comma separator, ``\\n`` line endings, UTF-8
    - Byte-identical output for identical rows
    - File lock around every read and write
    """

    def __init__(self, lock_timeout: float = 10):
        """
        Initialize CSV store

        Args:
            lock_timeout: Seconds to wait for the file lock
        """
        self.lock_timeout = lock_timeout

    def _get_lock_path(self, file_path: Path) -> Path:
        """Get lock file path for a data file"""
        return file_path.parent / f"{file_path.name}.lock"

    def write_rows(self, file_path: str, columns: Sequence[str],
                   rows: Iterable[Dict[str, Any]]) -> Path:
        """
        Write a table to a CSV file

        Args:
            file_path: Target path (parent directories are created)
            columns: Column order of the header
            rows: Row dictionaries; missing keys are written as ``nan``

        Returns:
            Path of the written file

        Raises:
            OutputError: the file could not be written
        """
        path = Path(file_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            lock = FileLock(str(self._get_lock_path(path)), timeout=self.lock_timeout)
            with lock:
                # Write to temporary file first
                temp_path = path.with_suffix(path.suffix + '.tmp')
                with open(temp_path, 'w', encoding='utf-8', newline='') as f:
                    writer = csv.writer(f, lineterminator='\n')
                    writer.writerow(columns)
                    for row in rows:
                        writer.writerow([format_cell(row.get(column)) for column in columns])

                # Atomically replace original file
                temp_path.replace(path)
        except Timeout as e:
            raise OutputError(f"Timed out waiting for the lock on {path}: {e}")
        except OSError as e:
            raise OutputError(f"Cannot write {path}: {e}")

        return path

    def read_rows(self, file_path: str) -> List[Dict[str, str]]:
        """
        Read a CSV table back as string dictionaries

        Args:
            file_path: Path to the CSV file

        Returns:
            List of rows keyed by header
        """
        path = Path(file_path)
        lock = FileLock(str(self._get_lock_path(path)), timeout=self.lock_timeout)
        with lock:
            with open(path, 'r', encoding='utf-8', newline='') as f:
                return list(csv.DictReader(f))


def parse_cell(text: str) -> float:
    """Inverse of ``format_cell`` for numeric cells"""
    if text == "nan":
        return math.nan
    return float(text)
