"""Binary IP model of the loading problem.

Example:
    ```python
    from alopt.data import airbus_reference_instance
    from alopt.model import build_constraints, count_nonzeros

    instance = airbus_reference_instance()
    system = build_constraints(instance.spec, instance.payload)
    count_nonzeros(system)  # 6300
    ```
"""

from alopt.model.constraints import (
    ConstraintSystem,
    Row,
    Violation,
    build_constraints,
    count_nonzeros,
)
from alopt.model.geometry import bin_domain, signed_distance
from alopt.model.physics import (
    ShearPoint,
    center_of_gravity,
    cg_deviation,
    shear_profile,
    total_mass,
)
from alopt.model.validation import PackingResult, ValidationReport, simulate_packing, validate
from alopt.model.variables import VariableMap

__all__ = [
    # Geometry
    "bin_domain",
    "signed_distance",
    # Constraint system
    "ConstraintSystem",
    "Row",
    "VariableMap",
    "Violation",
    "build_constraints",
    "count_nonzeros",
    # Physics
    "ShearPoint",
    "center_of_gravity",
    "cg_deviation",
    "shear_profile",
    "total_mass",
    # Validation
    "PackingResult",
    "ValidationReport",
    "simulate_packing",
    "validate",
]
