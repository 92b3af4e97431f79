"""File formats: JSON documents, MPS and atomic local writes."""

from alopt.storage.documents import (
    INSTANCE_SCHEMA,
    SOLUTION_SCHEMA,
    SYSTEM_SCHEMA,
    SolutionDocument,
    instance_digest,
    load_instance,
    load_solution,
    load_system,
    read_instance,
    save_instance,
    save_solution,
    save_system,
    write_instance,
)
from alopt.storage.files import read_csv, read_json, read_text, write_csv, write_json, write_text
from alopt.storage.mps import load_mps, parse_mps, save_mps, write_mps

__all__ = [
    # Documents
    "INSTANCE_SCHEMA",
    "SOLUTION_SCHEMA",
    "SYSTEM_SCHEMA",
    "SolutionDocument",
    "instance_digest",
    "load_instance",
    "load_solution",
    "load_system",
    "read_instance",
    "save_instance",
    "save_solution",
    "save_system",
    "write_instance",
    # MPS
    "load_mps",
    "parse_mps",
    "save_mps",
    "write_mps",
    # Files
    "read_csv",
    "read_json",
    "read_text",
    "write_csv",
    "write_json",
    "write_text",
]
