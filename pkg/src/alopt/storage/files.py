"""Local file access with atomic writes."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import polars as pl

from alopt.exceptions import DocumentError, StorageError


def _temp_path(path: Path) -> Path:
    return path.with_name(path.name + ".tmp")


def write_text(path: str | Path, text: str) -> Path:
    """Write text atomically: temp file in the same directory, then replace."""
    target = Path(path).expanduser()
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        temp = _temp_path(target)
        with open(temp, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        temp.replace(target)
    except OSError as e:
        raise StorageError("write", str(target), e) from e
    return target


def read_text(path: str | Path) -> str:
    target = Path(path).expanduser()
    try:
        with open(target, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise StorageError("read", str(target), e) from e


def dump_json(document: Any) -> str:
    """Canonical JSON text: two-space indent, trailing newline."""
    return json.dumps(document, indent=2) + "\n"


def write_json(path: str | Path, document: Any) -> Path:
    return write_text(path, dump_json(document))


def read_json(path: str | Path) -> Any:
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError("$", f"not valid JSON ({e.msg} at line {e.lineno})") from e


def write_csv(path: str | Path, frame: pl.DataFrame) -> Path:
    target = Path(path).expanduser()
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        temp = _temp_path(target)
        frame.write_csv(temp)
        temp.replace(target)
    except OSError as e:
        raise StorageError("write_csv", str(target), e) from e
    return target


def read_csv(path: str | Path, schema: dict[str, Any] | None = None) -> pl.DataFrame:
    target = Path(path).expanduser()
    try:
        return pl.read_csv(target, schema=schema)
    except (OSError, pl.exceptions.PolarsError) as e:
        raise StorageError("read_csv", str(target), e) from e
