from .diagnostics import check_monotone_convergence, section_monotone_history
from .equi_attraction import equi_attraction_rate, uniform_equi_attraction_rate
from .models import (
    EquiAttractionError,
    EquiAttractionReport,
    MonotoneCheck,
    ParameterGrid,
    SweepError,
    SweepResult,
)
from .sweep import continuity_modulus, semicontinuity_split, sweep_pullback, sweep_uniform

__all__ = [
    "EquiAttractionError",
    "EquiAttractionReport",
    "MonotoneCheck",
    "ParameterGrid",
    "SweepError",
    "SweepResult",
    "check_monotone_convergence",
    "continuity_modulus",
    "equi_attraction_rate",
    "section_monotone_history",
    "semicontinuity_split",
    "sweep_pullback",
    "sweep_uniform",
    "uniform_equi_attraction_rate",
]
