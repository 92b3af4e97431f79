"""Center-of-gravity optimization after the mass objective."""

from alopt.cgopt.optimize import (
    CgMethod,
    CgOptConfig,
    CgOptReport,
    CgStage,
    optimize_cg,
    optimize_cg_direct,
    optimize_cg_sequence,
    resolve_w_max,
)
from alopt.cgopt.rows import mass_floor_row, remap_cg_objective
from alopt.model.physics import cg_deviation

__all__ = [
    "CgMethod",
    "CgOptConfig",
    "CgOptReport",
    "CgStage",
    "cg_deviation",
    "mass_floor_row",
    "optimize_cg",
    "optimize_cg_direct",
    "optimize_cg_sequence",
    "remap_cg_objective",
    "resolve_w_max",
]
