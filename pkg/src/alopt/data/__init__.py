"""Reference data set, instance generator and instance bundle."""

from alopt.data.generator import (
    DEFAULT_MIXTURES,
    GeneratorConfig,
    ModeMixture,
    generate_masses,
    round_half_away,
    sample_masses,
    split_sizes,
)
from alopt.data.instance import (
    Instance,
    Provenance,
    airbus_reference_instance,
    generate_instance,
    generate_sized_instance,
)
from alopt.data.reference import reference_aircraft, reference_payload

__all__ = [
    # Generator
    "DEFAULT_MIXTURES",
    "GeneratorConfig",
    "ModeMixture",
    "generate_masses",
    "round_half_away",
    "sample_masses",
    "split_sizes",
    # Instances
    "Instance",
    "Provenance",
    "airbus_reference_instance",
    "generate_instance",
    "generate_sized_instance",
    "reference_aircraft",
    "reference_payload",
]
