"""MPS export and import of constraint systems.

The writer emits fixed-column MPS (minimization, all rows ``L``, binary
columns between INTORG/INTEND markers with ``BV`` bounds). Numeric fields use
12 significant digits. The reader splits on whitespace, so it also accepts
free-format files with long names.
"""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

from alopt.exceptions import DimensionError, ModelFormatError
from alopt.model.constraints import CG_WINDOW_SUFFIX, ROW_PREFIX, ConstraintSystem, Row
from alopt.model.variables import VariableMap
from alopt.storage.files import read_text, write_text
from alopt.types import Container, RowTag

OBJECTIVE_ROW = "OBJ"
RHS_SET = "RHS"
BOUND_SET = "BND"

_COLUMN_NAME = re.compile(r"^Y(\d+)_(\d+)$")
_TAG_BY_PREFIX = {prefix: tag for tag, prefix in ROW_PREFIX.items()}
_WINDOW_INDEX = {suffix: index for index, suffix in CG_WINDOW_SUFFIX.items()}


def format_number(value: Fraction) -> str:
    text = f"{float(value):.12g}"
    return "0" if text == "-0" else text


def column_name(k: int, j: int) -> str:
    return f"Y{k}_{j}"


def _line(field1: str, field2: str, field3: str = "", field4: str = "") -> str:
    # fields start at columns 2, 5, 15 and 25
    text = f" {field1:<2} {field2:<8}  {field3:<8}  {field4}"
    return text.rstrip()


def write_mps(system: ConstraintSystem, name: str = "ALOPT") -> str:
    """Serialize a system to MPS text.

    Raises:
        ModelFormatError: If the system has no columns
    """
    variables = system.variables
    if len(variables) == 0:
        raise ModelFormatError("System has no binary columns; nothing to export")

    entries: dict[int, list[tuple[str, Fraction]]] = defaultdict(list)
    for i, cost in enumerate(system.objective):
        if cost:
            entries[i].append((OBJECTIVE_ROW, Fraction(cost)))
    for row in system.rows:
        for column, coefficient in zip(row.columns, row.coefficients, strict=True):
            entries[column].append((row.name, coefficient))

    lines = [f"NAME          {name}", "ROWS", _line("N", OBJECTIVE_ROW)]
    lines.extend(_line("L", row.name) for row in system.rows)
    lines.append("COLUMNS")
    lines.append("    MARKER                 'MARKER'                 'INTORG'")
    for i in range(len(variables)):
        column = column_name(*variables.pair(i))
        for row_name, value in entries[i]:
            lines.append(_line("", column, row_name, format_number(value)))
    lines.append("    MARKER                 'MARKER'                 'INTEND'")
    lines.append("RHS")
    lines.extend(_line("", RHS_SET, row.name, format_number(row.rhs)) for row in system.rows)
    lines.append("BOUNDS")
    for i in range(len(variables)):
        lines.append(_line("BV", BOUND_SET, column_name(*variables.pair(i))))
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def parse_row_name(name: str) -> tuple[RowTag, int]:
    if "_" in name:
        prefix, _, index = name.partition("_")
        if prefix in _TAG_BY_PREFIX and index.isdigit():
            return _TAG_BY_PREFIX[prefix], int(index)
    elif name in _TAG_BY_PREFIX:
        return _TAG_BY_PREFIX[name], 0
    elif name[:-1] == ROW_PREFIX["cg_window"] and name[-1] in _WINDOW_INDEX:
        return "cg_window", _WINDOW_INDEX[name[-1]]
    raise ModelFormatError(f"Unrecognized row name {name!r}")


def _number(token: str, where: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as e:
        raise ModelFormatError(f"{where}: bad number {token!r}") from e


def parse_mps(text: str) -> ConstraintSystem:
    """Rebuild a system from MPS text written by :func:`write_mps`.

    Container sizes are recovered from the bin rows (coefficient 1/2 marks
    size 2, membership in two bin rows marks size 3) and masses from the
    weight row.

    Raises:
        ModelFormatError: On unknown sections, rows or columns, or a system
            without columns
    """
    section = ""
    row_names: list[str] = []
    coefficients: dict[str, dict[str, Fraction]] = defaultdict(dict)
    objective: dict[str, Fraction] = {}
    rhs: dict[str, Fraction] = {}
    column_order: list[str] = []
    seen_columns: set[str] = set()

    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("*"):
            continue
        tokens = raw.split()
        if not raw[0].isspace():
            section = tokens[0]
            if section == "ENDATA":
                break
            if section not in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS"):
                raise ModelFormatError(f"line {number}: unsupported section {section}")
            continue
        where = f"line {number}"
        if section == "ROWS":
            if len(tokens) != 2:
                raise ModelFormatError(f"{where}: expected '<type> <name>'")
            kind, row_name = tokens
            if kind == "N":
                continue
            if kind != "L":
                raise ModelFormatError(f"{where}: only L rows are supported, got {kind}")
            row_names.append(row_name)
        elif section == "COLUMNS":
            if "'MARKER'" in tokens:
                continue
            column, pairs = tokens[0], tokens[1:]
            if not pairs or len(pairs) % 2:
                raise ModelFormatError(f"{where}: expected row/value pairs")
            if column not in seen_columns:
                seen_columns.add(column)
                column_order.append(column)
            for row_name, token in zip(pairs[::2], pairs[1::2], strict=True):
                value = _number(token, where)
                if row_name == OBJECTIVE_ROW:
                    objective[column] = value
                else:
                    coefficients[row_name][column] = value
        elif section == "RHS":
            pairs = tokens[1:]
            for row_name, token in zip(pairs[::2], pairs[1::2], strict=True):
                rhs[row_name] = _number(token, where)
        elif section == "BOUNDS":
            if tokens[0] != "BV":
                raise ModelFormatError(f"{where}: only BV bounds are supported")

    if not column_order:
        raise ModelFormatError("MPS has no columns")

    tags = {row_name: parse_row_name(row_name) for row_name in row_names}
    for row_name in coefficients:
        if row_name not in tags:
            raise ModelFormatError(f"Column entry for undeclared row {row_name!r}")
    bin_rows = [n for n in row_names if tags[n][0] == "bin"]
    weight_rows = [n for n in row_names if tags[n][0] == "weight"]
    if not bin_rows or len(weight_rows) != 1:
        raise ModelFormatError("MPS needs the bin rows and one weight row to recover containers")
    bin_count = len(bin_rows)

    containers: list[Container] = []
    placed: dict[int, list[str]] = {}
    for column in column_order:
        match = _COLUMN_NAME.match(column)
        if match is None:
            raise ModelFormatError(f"Unrecognized column name {column!r}")
        k = int(match.group(1))
        if k not in placed:
            placed[k] = []
            bins = [coefficients[n].get(column) for n in bin_rows]
            hits = [c for c in bins if c is not None]
            size = 3 if len(hits) == 2 else 2 if hits == [Fraction(1, 2)] else 1
            mass = coefficients[weight_rows[0]].get(column)
            if mass is None or mass.denominator != 1:
                raise ModelFormatError(f"Column {column} has no integer weight coefficient")
            containers.append(Container(k, size, int(mass)))  # type: ignore[arg-type]
        placed[k].append(column)

    variables = VariableMap(containers, bin_count)
    index_of: dict[str, int] = {}
    for column in column_order:
        match = _COLUMN_NAME.match(column)
        assert match is not None
        try:
            index_of[column] = variables.index(int(match.group(1)), int(match.group(2)))
        except DimensionError as e:
            raise ModelFormatError(f"Column {column} does not fit {bin_count} bins") from e

    rows: list[Row] = []
    for row_name in row_names:
        tag, index = tags[row_name]
        entries = sorted((index_of[c], v) for c, v in coefficients[row_name].items())
        rows.append(
            Row.from_fractions(
                tag,
                index,
                [c for c, _ in entries],
                [v for _, v in entries],
                rhs.get(row_name, Fraction(0)),
            )
        )
    costs = [0] * len(variables)
    for column, value in objective.items():
        if value.denominator != 1:
            raise ModelFormatError(f"Objective coefficient of {column} is not an integer")
        costs[index_of[column]] = int(value)
    return ConstraintSystem(variables=variables, rows=tuple(rows), objective=tuple(costs))


def save_mps(path: str | Path, system: ConstraintSystem, name: str = "ALOPT") -> Path:
    return write_text(path, write_mps(system, name))


def load_mps(path: str | Path) -> ConstraintSystem:
    return parse_mps(read_text(path))
