"""Versioned JSON documents for instances, solutions and constraint systems.

Every document carries a ``schema`` key. Readers reject unknown and missing
fields and report the JSON path of the first problem found.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from alopt.data.generator import GeneratorConfig, ModeMixture
from alopt.data.instance import Instance, Provenance
from alopt.exceptions import ALOError, DocumentError
from alopt.model.constraints import ROW_PREFIX, ConstraintSystem, Row
from alopt.model.physics import center_of_gravity, shear_profile, total_mass
from alopt.model.variables import VariableMap
from alopt.storage.files import read_json, write_json
from alopt.types import (
    SIZES,
    AircraftSpec,
    Assignment,
    Container,
    Payload,
    ShearLimit,
)

INSTANCE_SCHEMA = "alopt.instance/1"
SOLUTION_SCHEMA = "alopt.solution/1"
SYSTEM_SCHEMA = "alopt.system/1"


# --- readers -----------------------------------------------------------------


def _object(value: Any, path: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise DocumentError(path, f"expected an object, got {type(value).__name__}")
    return value


def _fields(
    value: Any, path: str, required: Iterable[str], optional: Iterable[str] = ()
) -> dict[str, Any]:
    obj = _object(value, path)
    required = tuple(required)
    allowed = set(required) | set(optional)
    for key in obj:
        if key not in allowed:
            raise DocumentError(_join(path, key), "unknown field")
    for key in required:
        if key not in obj:
            raise DocumentError(_join(path, key), "missing field")
    return obj


def _join(path: str, key: str) -> str:
    return key if path == "$" else f"{path}.{key}"


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, f"expected an integer, got {value!r}")
    return value


def _number(value: Any, path: str) -> int | float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(path, f"expected a number, got {value!r}")
    return value


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise DocumentError(path, f"expected a string, got {value!r}")
    return value


def _list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise DocumentError(path, f"expected an array, got {type(value).__name__}")
    return value


def _schema(obj: Mapping[str, Any], expected: str) -> None:
    found = obj.get("schema")
    if found != expected:
        raise DocumentError("schema", f"expected {expected!r}, got {found!r}")


# --- instances ---------------------------------------------------------------


def _aircraft_document(spec: AircraftSpec) -> dict[str, Any]:
    shear: dict[str, Any] = {"peak": spec.shear_limit.peak, "shape": spec.shear_limit.shape}
    if spec.shear_limit.shape == "table":
        shear["left"] = list(spec.shear_limit.left)
        shear["right"] = list(spec.shear_limit.right)
    return {
        "bin_count": spec.bin_count,
        "max_payload": spec.max_payload,
        "empty_mass": spec.empty_mass,
        "empty_cg": spec.empty_cg,
        "cg_min": spec.cg_min,
        "cg_max": spec.cg_max,
        "cg_target": spec.cg_target,
        "shear_limit": shear,
    }


def _parse_aircraft(value: Any, path: str) -> AircraftSpec:
    obj = _fields(
        value,
        path,
        ("bin_count", "max_payload", "empty_mass", "empty_cg", "cg_min", "cg_max", "cg_target", "shear_limit"),
    )
    shear_path = _join(path, "shear_limit")
    shear = _fields(obj["shear_limit"], shear_path, ("peak", "shape"), ("left", "right"))
    try:
        limit = ShearLimit(
            peak=_number(shear["peak"], _join(shear_path, "peak")),
            shape=_str(shear["shape"], _join(shear_path, "shape")),  # type: ignore[arg-type]
            left=tuple(
                _number(v, f"{shear_path}.left[{i}]")
                for i, v in enumerate(_list(shear.get("left", []), _join(shear_path, "left")))
            ),
            right=tuple(
                _number(v, f"{shear_path}.right[{i}]")
                for i, v in enumerate(_list(shear.get("right", []), _join(shear_path, "right")))
            ),
        )
        return AircraftSpec(
            bin_count=_int(obj["bin_count"], _join(path, "bin_count")),
            max_payload=_int(obj["max_payload"], _join(path, "max_payload")),
            empty_mass=_int(obj["empty_mass"], _join(path, "empty_mass")),
            empty_cg=_number(obj["empty_cg"], _join(path, "empty_cg")),
            cg_min=_number(obj["cg_min"], _join(path, "cg_min")),
            cg_max=_number(obj["cg_max"], _join(path, "cg_max")),
            cg_target=_number(obj["cg_target"], _join(path, "cg_target")),
            shear_limit=limit,
        )
    except DocumentError:
        raise
    except ALOError as e:
        raise DocumentError(path, str(e)) from e


def _parse_containers(value: Any, path: str) -> Payload:
    containers: list[Container] = []
    for i, item in enumerate(_list(value, path)):
        item_path = f"{path}[{i}]"
        obj = _fields(item, item_path, ("id", "size", "mass"))
        try:
            containers.append(
                Container(
                    id=_int(obj["id"], f"{item_path}.id"),
                    size=_int(obj["size"], f"{item_path}.size"),  # type: ignore[arg-type]
                    mass=_int(obj["mass"], f"{item_path}.mass"),
                )
            )
        except DocumentError:
            raise
        except ALOError as e:
            raise DocumentError(item_path, str(e)) from e
    try:
        return Payload(tuple(containers))
    except ALOError as e:
        raise DocumentError(path, str(e)) from e


def _generator_document(config: GeneratorConfig) -> dict[str, Any]:
    return {
        "n1": config.n1,
        "n2": config.n2,
        "n3": config.n3,
        "bin_count": config.bin_count,
        "oversample": config.oversample,
        "max_extra_draws": config.max_extra_draws,
        "mixtures": {
            str(size): [m.low_mode, m.high_mode, m.window_low, m.window_high]
            for size, m in sorted(config.mixtures.items())
        },
    }


def _parse_generator(value: Any, path: str, seed: int) -> GeneratorConfig:
    obj = _fields(
        value, path, ("n1", "n2", "n3", "bin_count", "oversample", "max_extra_draws", "mixtures")
    )
    mixtures_path = _join(path, "mixtures")
    raw = _fields(obj["mixtures"], mixtures_path, [str(s) for s in SIZES])
    mixtures: dict[Any, ModeMixture] = {}
    try:
        for size in SIZES:
            entry_path = f"{mixtures_path}.{size}"
            entry = _list(raw[str(size)], entry_path)
            if len(entry) != 4:
                raise DocumentError(entry_path, "expected [low_mode, high_mode, window_low, window_high]")
            mixtures[size] = ModeMixture(*(_number(v, f"{entry_path}[{i}]") for i, v in enumerate(entry)))
        return GeneratorConfig(
            n1=_int(obj["n1"], _join(path, "n1")),
            n2=_int(obj["n2"], _join(path, "n2")),
            n3=_int(obj["n3"], _join(path, "n3")),
            bin_count=_int(obj["bin_count"], _join(path, "bin_count")),
            seed=seed,
            mixtures=mixtures,
            oversample=_int(obj["oversample"], _join(path, "oversample")),
            max_extra_draws=_int(obj["max_extra_draws"], _join(path, "max_extra_draws")),
        )
    except DocumentError:
        raise
    except ALOError as e:
        raise DocumentError(path, str(e)) from e


def _provenance_document(provenance: Provenance) -> dict[str, Any]:
    document: dict[str, Any] = {"kind": provenance.kind}
    if provenance.kind == "generated":
        assert provenance.config is not None
        document["seed"] = provenance.seed
        document["generator"] = _generator_document(provenance.config)
    elif provenance.kind == "file" and provenance.path is not None:
        document["path"] = provenance.path
    return document


def _parse_provenance(value: Any, path: str) -> Provenance:
    obj = _fields(value, path, ("kind",), ("seed", "generator", "path"))
    kind = _str(obj["kind"], _join(path, "kind"))
    if kind == "generated":
        obj = _fields(value, path, ("kind", "seed", "generator"))
        seed = _int(obj["seed"], _join(path, "seed"))
        config = _parse_generator(obj["generator"], _join(path, "generator"), seed)
        return Provenance("generated", seed=seed, config=config)
    if kind == "reference":
        _fields(value, path, ("kind",))
        return Provenance("reference")
    if kind == "file":
        _fields(value, path, ("kind",), ("path",))
        file_path = obj.get("path")
        return Provenance("file", path=None if file_path is None else _str(file_path, _join(path, "path")))
    raise DocumentError(_join(path, "kind"), f"unknown provenance {kind!r}")


def save_instance(instance: Instance) -> dict[str, Any]:
    """Instance as a JSON-ready document."""
    return {
        "schema": INSTANCE_SCHEMA,
        "aircraft": _aircraft_document(instance.spec),
        "containers": [
            {"id": c.id, "size": c.size, "mass": c.mass} for c in instance.payload.containers
        ],
        "provenance": _provenance_document(instance.provenance),
    }


def load_instance(document: Any) -> Instance:
    """Parse an instance document.

    Raises:
        DocumentError: On any schema violation, naming the offending path
    """
    obj = _fields(document, "$", ("schema", "aircraft", "containers", "provenance"))
    _schema(obj, INSTANCE_SCHEMA)
    spec = _parse_aircraft(obj["aircraft"], "aircraft")
    payload = _parse_containers(obj["containers"], "containers")
    provenance = _parse_provenance(obj["provenance"], "provenance")
    return Instance(spec, payload, provenance)


def instance_digest(instance: Instance) -> str:
    """Short content hash tying solutions to the instance they solve."""
    canonical = json.dumps(save_instance(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def write_instance(path: str | Path, instance: Instance) -> Path:
    return write_json(path, save_instance(instance))


def read_instance(path: str | Path) -> Instance:
    return load_instance(read_json(path))


# --- solutions ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SolutionDocument:
    """The parts of a solution document needed to re-check it."""

    digest: str
    status: str
    assignment: Assignment
    mass: int


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def save_solution(
    instance: Instance,
    assignment: Assignment,
    *,
    status: str,
    trace: Sequence[tuple[float, int]] = (),
    n_l: int | None = None,
    wall_time: float | None = None,
    instance_path: str | None = None,
    extra: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """Solution document with placements and the derived loading physics."""
    cg = center_of_gravity(assignment, instance.spec, instance.payload)
    document: dict[str, Any] = {
        "schema": SOLUTION_SCHEMA,
        "instance": {"digest": instance_digest(instance), "path": instance_path},
        "status": status,
        "placements": [[k, j] for k, j in assignment.sorted_pairs()],
        "mass": total_mass(assignment, instance.payload),
        "cg": float(cg),
        "cg_exact": _fraction_text(cg),
        "shear": [
            {"j": p.j, "side": p.side, "load": float(p.load), "limit": float(p.limit)}
            for p in shear_profile(assignment, instance.spec, instance.payload)
        ],
        "trace": [[round(t, 6), mass] for t, mass in trace],
        "n_l": n_l,
        "wall_time": None if wall_time is None else round(wall_time, 6),
    }
    if extra:
        document.update(extra)
    return document


def load_solution(document: Any) -> SolutionDocument:
    """Read back the placements of a solution document.

    Derived fields (cg, shear) are not trusted; callers re-validate.
    """
    obj = _object(document, "$")
    _schema(obj, SOLUTION_SCHEMA)
    for key in ("instance", "status", "placements", "mass"):
        if key not in obj:
            raise DocumentError(key, "missing field")
    ref = _fields(obj["instance"], "instance", ("digest",), ("path",))
    pairs: list[tuple[int, int]] = []
    for i, item in enumerate(_list(obj["placements"], "placements")):
        pair = _list(item, f"placements[{i}]")
        if len(pair) != 2:
            raise DocumentError(f"placements[{i}]", "expected [k, j]")
        pairs.append((_int(pair[0], f"placements[{i}][0]"), _int(pair[1], f"placements[{i}][1]")))
    return SolutionDocument(
        digest=_str(ref["digest"], "instance.digest"),
        status=_str(obj["status"], "status"),
        assignment=Assignment.from_pairs(pairs),
        mass=_int(obj["mass"], "mass"),
    )


# --- constraint systems ------------------------------------------------------


def save_system(system: ConstraintSystem) -> dict[str, Any]:
    """Exact system document: integer numerators over per-row denominators."""
    return {
        "schema": SYSTEM_SCHEMA,
        "bin_count": system.variables.bin_count,
        "containers": [
            {"id": c.id, "size": c.size, "mass": c.mass} for c in system.variables.containers
        ],
        "rows": [
            {
                "tag": row.tag,
                "index": row.index,
                "name": row.name,
                "denominator": row.denominator,
                "rhs": row.rhs_numerator,
                "columns": list(row.columns),
                "coefficients": list(row.numerators),
            }
            for row in system.rows
        ],
        "objective": list(system.objective),
    }


def load_system(document: Any) -> ConstraintSystem:
    obj = _fields(document, "$", ("schema", "bin_count", "containers", "rows", "objective"))
    _schema(obj, SYSTEM_SCHEMA)
    payload = _parse_containers(obj["containers"], "containers")
    variables = VariableMap(payload.containers, _int(obj["bin_count"], "bin_count"))
    rows: list[Row] = []
    for i, item in enumerate(_list(obj["rows"], "rows")):
        path = f"rows[{i}]"
        raw = _fields(item, path, ("tag", "index", "denominator", "rhs", "columns", "coefficients"), ("name",))
        columns = tuple(_int(c, f"{path}.columns[{n}]") for n, c in enumerate(_list(raw["columns"], f"{path}.columns")))
        tag = _str(raw["tag"], f"{path}.tag")
        if tag not in ROW_PREFIX:
            raise DocumentError(f"{path}.tag", f"unknown row tag {tag!r}")
        for n, c in enumerate(columns):
            if not 0 <= c < len(variables):
                raise DocumentError(f"{path}.columns[{n}]", f"column {c} out of range")
        try:
            rows.append(
                Row(
                    tag=tag,  # type: ignore[arg-type]
                    index=_int(raw["index"], f"{path}.index"),
                    columns=columns,
                    numerators=tuple(
                        _int(c, f"{path}.coefficients[{n}]")
                        for n, c in enumerate(_list(raw["coefficients"], f"{path}.coefficients"))
                    ),
                    rhs_numerator=_int(raw["rhs"], f"{path}.rhs"),
                    denominator=_int(raw["denominator"], f"{path}.denominator"),
                )
            )
        except DocumentError:
            raise
        except ALOError as e:
            raise DocumentError(path, str(e)) from e
    objective = tuple(_int(v, f"objective[{n}]") for n, v in enumerate(_list(obj["objective"], "objective")))
    try:
        return ConstraintSystem(variables=variables, rows=tuple(rows), objective=objective)
    except ALOError as e:
        raise DocumentError("objective", str(e)) from e
