"""alopt - aircraft loading optimization.

Formulates cargo loading as a binary integer program, generates benchmark
instances, solves them exactly or with a dynamic-threshold heuristic,
moves the center of gravity toward a target and measures runtime scaling.

Example:
    ```python
    from alopt import SolveConfig, airbus_reference_instance, build_constraints, solve, validate

    instance = airbus_reference_instance()
    system = build_constraints(instance.spec, instance.payload)
    report = solve(system, instance.payload, instance.spec, SolveConfig(mode="threshold_descent"))

    assert validate(report.incumbent, instance.spec, instance.payload).feasible
    print(report.status, report.mass)
    ```
"""

from alopt.cgopt import CgOptConfig, CgOptReport, optimize_cg
from alopt.data import Instance, airbus_reference_instance, generate_instance, generate_sized_instance
from alopt.exceptions import (
    ALOError,
    BinIndexError,
    DimensionError,
    DocumentError,
    FitError,
    GenerationError,
    ModelFormatError,
    SearchSpaceError,
    SpecError,
    StorageError,
)
from alopt.model import ConstraintSystem, build_constraints, count_nonzeros, validate
from alopt.solver import SolveConfig, SolveReport, solve
from alopt.types import AircraftSpec, Assignment, Container, Payload, ShearLimit

__version__ = "0.1.0"

__all__ = [
    # Domain types
    "AircraftSpec",
    "Assignment",
    "Container",
    "Instance",
    "Payload",
    "ShearLimit",
    # Model and solvers
    "ConstraintSystem",
    "build_constraints",
    "count_nonzeros",
    "validate",
    "SolveConfig",
    "SolveReport",
    "solve",
    "CgOptConfig",
    "CgOptReport",
    "optimize_cg",
    # Instances
    "airbus_reference_instance",
    "generate_instance",
    "generate_sized_instance",
    # Exceptions
    "ALOError",
    "SpecError",
    "BinIndexError",
    "DimensionError",
    "GenerationError",
    "DocumentError",
    "ModelFormatError",
    "SearchSpaceError",
    "FitError",
    "StorageError",
]
