from .process import (
    BlowUpError,
    EvolvedPoints,
    IntegrationError,
    IntegratorConfig,
    ParameterPoint,
    ProcessDef,
    StiffnessError,
    evolve,
    evolve_cloud,
    evolve_points,
    sample_trajectory,
)

__all__ = [
    "BlowUpError",
    "EvolvedPoints",
    "IntegrationError",
    "IntegratorConfig",
    "ParameterPoint",
    "ProcessDef",
    "StiffnessError",
    "evolve",
    "evolve_cloud",
    "evolve_points",
    "sample_trajectory",
]
