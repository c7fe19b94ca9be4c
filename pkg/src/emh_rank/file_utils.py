"""
File operation utilities.

Reading text inputs with an encoding fallback, JSON loading with defaults and
atomic CSV / JSON writers used for every output file.
"""

import copy
import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence


def read_file(file_path: str | Path, encoding: Optional[str] = "utf-8-sig") -> str:
    """
    Read the contents of a file with automatic encoding fallback.

    Args:
        file_path: Path to the file to read
        encoding: Initial encoding to try (defaults to utf-8, dropping a
            leading byte order mark)

    Returns:
        The contents of the file as a string

    Raises:
        FileNotFoundError: If the file does not exist
        PermissionError: If access to the file is denied
    """
    try:
        with open(file_path, "r", encoding=encoding, newline="") as f:
            return f.read()
    except UnicodeDecodeError:
        # Try with a different encoding if UTF-8 fails
        with open(file_path, "r", encoding="latin-1", newline="") as f:
            return f.read()


def load_json(path: Path, default: Any = None) -> Any:
    """Load a JSON document, returning a copy of ``default`` if it is absent.

    Args:
        path: File to read
        default: Value returned when the file does not exist

    Returns:
        Parsed JSON content

    Raises:
        json.JSONDecodeError: If the file exists but is not valid JSON
    """
    if not path.exists():
        return copy.deepcopy(default)

    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = path.with_suffix(path.suffix + ".tmp")

    try:
        with open(temp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        temp_path.replace(path)
    except Exception:
        if temp_path.exists():
            temp_path.unlink()
        raise


def save_json(path: Path, data: Any) -> None:
    """Save JSON with atomic write and proper formatting.

    Args:
        path: Path to save the document to
        data: JSON-serialisable content
    """
    _atomic_write_text(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def save_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Save rows as CSV (``\\n`` line endings) with an atomic write.

    Args:
        path: Path to save the table to
        header: Column names
        rows: Row values, already formatted as needed
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write_text(path, buffer.getvalue())


def format_float(value: float, digits: int = 6) -> str:
    """Fixed-point rendering used in all CSV outputs."""
    text = f"{value:.{digits}f}"
    # avoid "-0.000000"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text
