from .benchmarks import (
    SINE_FORCING,
    linear_benchmark_field,
    linear_particular_solution,
    linear_process,
    linear_range_radius,
    pitchfork_equilibria,
    pitchfork_field,
    pitchfork_process,
)
from .forcing import ForcingR, SinusoidTerm
from .lorenz import (
    BoxBounds,
    LorenzBounds,
    LorenzParams,
    absorbing_radius,
    compute_bounds,
    compute_box_bounds,
    from_w_coords,
    lorenz_absorbing_ball,
    lorenz_field,
    lorenz_nonauto_field,
    lorenz_nonauto_process,
    lorenz_process,
    lorenz_uniform_ball,
    lorenz_w_field,
    run_bound_trials,
    to_w_coords,
    verify_absorbing_bound,
    verify_difference_bound,
)
from .navier_stokes import (
    GalerkinBasis,
    GalerkinForcing,
    GalerkinState,
    NseParams,
    ScaledForcing,
    energy_transfer,
    enstrophy_bound,
    grashof,
    nse_process,
    read_snapshot,
    rescale_section,
    section_time_holder,
    time_holder_study,
    verify_energy_transfer,
    verify_energy_estimates,
    viscosity_rescale_check,
    write_snapshot,
)
from .reports import BoundCheck, BoundReport

__all__ = [
    "SINE_FORCING",
    "BoundCheck",
    "BoundReport",
    "BoxBounds",
    "ForcingR",
    "GalerkinBasis",
    "GalerkinForcing",
    "GalerkinState",
    "LorenzBounds",
    "LorenzParams",
    "NseParams",
    "ScaledForcing",
    "SinusoidTerm",
    "absorbing_radius",
    "compute_bounds",
    "compute_box_bounds",
    "energy_transfer",
    "enstrophy_bound",
    "from_w_coords",
    "grashof",
    "linear_benchmark_field",
    "linear_particular_solution",
    "linear_process",
    "linear_range_radius",
    "lorenz_absorbing_ball",
    "lorenz_field",
    "lorenz_nonauto_field",
    "lorenz_nonauto_process",
    "lorenz_process",
    "lorenz_uniform_ball",
    "lorenz_w_field",
    "nse_process",
    "pitchfork_equilibria",
    "pitchfork_field",
    "pitchfork_process",
    "read_snapshot",
    "rescale_section",
    "run_bound_trials",
    "section_time_holder",
    "time_holder_study",
    "to_w_coords",
    "verify_absorbing_bound",
    "verify_difference_bound",
    "verify_energy_estimates",
    "verify_energy_transfer",
    "viscosity_rescale_check",
    "write_snapshot",
]
