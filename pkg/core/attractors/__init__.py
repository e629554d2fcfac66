from .models import (
    AttractorSection,
    ContainmentReport,
    PullbackError,
    PullbackSchedule,
    UniformAttractorApprox,
)
from .pullback import SeedSet, interpolate_section, invariance_residual, pullback_section, seed_at
from .sampling import sample_ball, sample_interval
from .uniform import containment_check, period_multiple, s_grid_for_period, uniform_attractor

__all__ = [
    "AttractorSection",
    "ContainmentReport",
    "PullbackError",
    "PullbackSchedule",
    "SeedSet",
    "UniformAttractorApprox",
    "containment_check",
    "interpolate_section",
    "invariance_residual",
    "period_multiple",
    "pullback_section",
    "s_grid_for_period",
    "sample_ball",
    "sample_interval",
    "seed_at",
    "uniform_attractor",
]
