from enum import Enum


class SystemKind(Enum):
    """Dynamical systems the command line can drive."""
    LORENZ_AUTO = "lorenz_auto"
    LORENZ_NONAUTO = "lorenz_nonauto"
    LINEAR_BENCHMARK = "linear_benchmark"
    PITCHFORK_BENCHMARK = "pitchfork_benchmark"
    NSE_GALERKIN = "nse_galerkin"

    @property
    def is_lorenz(self) -> bool:
        return self in (SystemKind.LORENZ_AUTO, SystemKind.LORENZ_NONAUTO)
