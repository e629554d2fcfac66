"""
Spectral Galerkin truncation of the 2D incompressible Navier-Stokes equations
on the 2*pi-periodic torus.

The retained wavevectors are 0 < |k|_inf <= kmax. Only the half plane
(ky > 0, or ky == 0 and kx > 0) is stored; the other half follows from
conjugate symmetry. Each mode carries one complex amplitude a(k) along the
unit vector e(k) = (-ky, kx) / |k|, so every state is divergence free by
construction. States are packed into the real vector
y = sqrt(2) * (Re a, Im a), whose Euclidean norm is the H norm (mean-square
velocity). The first Stokes eigenvalue on this torus is 1.

The quadratic term is evaluated pseudo-spectrally on a (3 kmax + 1)^2 grid,
which removes all aliasing from products of retained modes, so the
truncated nonlinearity conserves energy to round-off.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
import pandas as pd

from core.attractors.models import AttractorSection, PullbackSchedule
from core.attractors.pullback import SeedSet, pullback_section
from core.geometry.point_cloud import PointCloud, hausdorff
from core.process.process import IntegratorConfig, ParameterPoint, ProcessDef, sample_trajectory
from core.systems.reports import SLACK_FACTOR, BoundCheck, BoundReport
from core.util.logger import Logger

DEFAULT_KMAX = 8
DIVERGENCE_TOL = 1e-12
# The energy identity accumulates integrator error over the whole horizon.
IDENTITY_SLACK_FACTOR = 100.0
SNAPSHOT_COLUMNS = ["kx", "ky", "re_u1", "im_u1", "re_u2", "im_u2"]


class GalerkinBasis:
    """Half-plane wavevector set, unit directions and the dealiased FFT grid."""

    def __init__(self, kmax: int = DEFAULT_KMAX):
        if int(kmax) <= 0:
            raise ValueError(f"kmax must be positive, got {kmax!r}")
        self.kmax = int(kmax)
        modes = sorted(
            (kx, ky)
            for kx in range(-self.kmax, self.kmax + 1)
            for ky in range(0, self.kmax + 1)
            if ky > 0 or kx > 0
        )
        self.modes = np.array(modes, dtype=np.int64)
        self.size = int(self.modes.shape[0])
        self.dim = 2 * self.size
        kx = self.modes[:, 0].astype(np.float64)
        ky = self.modes[:, 1].astype(np.float64)
        self.k_sq = kx * kx + ky * ky
        self.unit = np.stack((-ky, kx), axis=1) / np.sqrt(self.k_sq)[:, None]

        self.grid_size = 3 * self.kmax + 1
        n = self.grid_size
        self._ix = self.modes[:, 0] % n
        self._iy = self.modes[:, 1] % n
        self._cix = (-self.modes[:, 0]) % n
        self._ciy = (-self.modes[:, 1]) % n
        wavenumbers = np.fft.fftfreq(n, d=1.0 / n)
        self._kx_grid = np.broadcast_to(wavenumbers[:, None], (n, n))
        self._ky_grid = np.broadcast_to(wavenumbers[None, :], (n, n))
        self._index = {(int(a), int(b)): i for i, (a, b) in enumerate(self.modes)}

    def __repr__(self) -> str:
        return f"GalerkinBasis(kmax={self.kmax}, modes={self.size})"

    def index_of(self, kx: int, ky: int) -> int:
        """Position of a stored (half-plane) wavevector."""
        try:
            return self._index[(int(kx), int(ky))]
        except KeyError:
            raise ValueError(f"wavevector ({kx}, {ky}) is not a stored half-plane mode with |k|_inf <= {self.kmax}")

    # ---------------------------
    # Packing
    # ---------------------------
    def unpack(self, y: np.ndarray) -> np.ndarray:
        """Packed real state(s) (..., 2M) to complex amplitudes (..., M)."""
        y = np.asarray(y, dtype=np.float64)
        return (y[..., : self.size] + 1j * y[..., self.size:]) / np.sqrt(2.0)

    def pack(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.complex128)
        return np.sqrt(2.0) * np.concatenate((a.real, a.imag), axis=-1)

    # ---------------------------
    # Transforms
    # ---------------------------
    def _spectral_velocity(self, a: np.ndarray) -> np.ndarray:
        n = self.grid_size
        coeffs = a[..., :, None] * self.unit
        full = np.zeros(a.shape[:-1] + (2, n, n), dtype=np.complex128)
        for j in range(2):
            full[..., j, self._ix, self._iy] = coeffs[..., j]
            full[..., j, self._cix, self._ciy] = np.conj(coeffs[..., j])
        return full

    def _to_physical(self, spectral: np.ndarray) -> np.ndarray:
        n = self.grid_size
        return np.fft.ifft2(spectral, axes=(-2, -1)).real * (n * n)

    def nonlinear_term(self, a: np.ndarray) -> np.ndarray:
        """
        Amplitudes along e(k) of the Fourier coefficients of (u . grad) u.

        Projecting on e(k) is the Leray projection in two dimensions.
        """
        n = self.grid_size
        uh = self._spectral_velocity(np.asarray(a, dtype=np.complex128))
        u = self._to_physical(uh)
        dx = self._to_physical(1j * self._kx_grid * uh)
        dy = self._to_physical(1j * self._ky_grid * uh)
        advection = u[..., 0:1, :, :] * dx + u[..., 1:2, :, :] * dy
        bh = np.fft.fft2(advection, axes=(-2, -1)) / (n * n)
        bx = bh[..., 0, self._ix, self._iy]
        by = bh[..., 1, self._ix, self._iy]
        return self.unit[:, 0] * bx + self.unit[:, 1] * by


def h_norm(y: np.ndarray) -> np.ndarray:
    """H norm of packed state(s)."""
    y = np.asarray(y, dtype=np.float64)
    return np.sqrt(np.sum(y * y, axis=-1))


def v_norm_sq(basis: GalerkinBasis, y: np.ndarray) -> np.ndarray:
    """Squared V norm ||grad u||^2 of packed state(s)."""
    y = np.asarray(y, dtype=np.float64)
    re, im = y[..., : basis.size], y[..., basis.size:]
    return np.sum(basis.k_sq * (re * re + im * im), axis=-1)


def v_norm(basis: GalerkinBasis, y: np.ndarray) -> np.ndarray:
    return np.sqrt(v_norm_sq(basis, y))


def energy_transfer(basis: GalerkinBasis, y: np.ndarray) -> np.ndarray:
    """Re <B(u, u), u>; zero up to round-off for every state."""
    a = basis.unpack(y)
    return 2.0 * np.sum((basis.nonlinear_term(a) * np.conj(a)).real, axis=-1)


@dataclass(slots=True)
class GalerkinState:
    """
    Velocity Fourier coefficients u_hat(k) (shape (M, 2), complex) on the
    stored half plane of ``basis``.
    """

    basis: GalerkinBasis
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.basis.size, 2):
            raise ValueError(f"expected coefficients of shape ({self.basis.size}, 2), got {coeffs.shape}")
        self.coeffs = coeffs
        residual = self.divergence_residual()
        magnitude = np.linalg.norm(coeffs, axis=1)
        if np.any(residual > DIVERGENCE_TOL * np.maximum(magnitude, np.finfo(np.float64).tiny)):
            raise ValueError("state is not divergence free")

    @classmethod
    def from_amplitudes(cls, basis: GalerkinBasis, a: np.ndarray) -> GalerkinState:
        return cls(basis, np.asarray(a, dtype=np.complex128)[:, None] * basis.unit)

    @classmethod
    def from_packed(cls, basis: GalerkinBasis, y: np.ndarray) -> GalerkinState:
        return cls.from_amplitudes(basis, basis.unpack(y))

    @classmethod
    def zero(cls, basis: GalerkinBasis) -> GalerkinState:
        return cls.from_amplitudes(basis, np.zeros(basis.size))

    @classmethod
    def random(cls, basis: GalerkinBasis, norm: float, kcut: int = 2, seed: int = 0) -> GalerkinState:
        """Random state supported on |k|_inf <= kcut, scaled to the given H norm."""
        rng = np.random.default_rng(seed)
        mask = np.max(np.abs(basis.modes), axis=1) <= kcut
        a = np.zeros(basis.size, dtype=np.complex128)
        a[mask] = rng.normal(size=mask.sum()) + 1j * rng.normal(size=mask.sum())
        y = basis.pack(a)
        current = float(h_norm(y))
        if current > 0.0:
            y = y * (norm / current)
        return cls.from_packed(basis, y)

    def divergence_residual(self) -> np.ndarray:
        """|k . u_hat(k)| per mode."""
        return np.abs(self.coeffs[:, 0] * self.basis.modes[:, 0] + self.coeffs[:, 1] * self.basis.modes[:, 1])

    @property
    def amplitudes(self) -> np.ndarray:
        return self.coeffs[:, 0] * self.basis.unit[:, 0] + self.coeffs[:, 1] * self.basis.unit[:, 1]

    def packed(self) -> np.ndarray:
        return self.basis.pack(self.amplitudes)

    def h_norm(self) -> float:
        return float(h_norm(self.packed()))

    def v_norm(self) -> float:
        return float(v_norm(self.basis, self.packed()))


# ---------------------------
# Forcing
# ---------------------------

@dataclass(frozen=True, slots=True)
class ForcingMode:
    kx: int
    ky: int
    amplitude: complex


@dataclass(frozen=True, slots=True)
class GalerkinForcing:
    """
    Body force sum_k amp_k e(k) e^{ik.x} (+ conjugates), modulated in time by
    1 + modulation * sin(frequency * t + phase).
    """

    modes: tuple[ForcingMode, ...] = ()
    modulation: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        keys = [(mode.kx, mode.ky) for mode in self.modes]
        if len(set(keys)) != len(keys):
            raise ValueError("forcing modes must be distinct")
        for kx, ky in keys:
            if not (ky > 0 or (ky == 0 and kx > 0)):
                raise ValueError(f"forcing mode ({kx}, {ky}) is not in the stored half plane")

    @classmethod
    def single_mode(cls, kx: int, ky: int, amplitude: complex, **modulation) -> GalerkinForcing:
        return cls((ForcingMode(kx, ky, complex(amplitude)),), **modulation)

    def factor(self, t: float) -> float:
        return 1.0 + self.modulation * np.sin(self.frequency * t + self.phase)

    def _base_norm(self) -> float:
        return float(np.sqrt(2.0 * sum(abs(mode.amplitude) ** 2 for mode in self.modes)))

    def amplitudes(self, basis: GalerkinBasis, t: float) -> np.ndarray:
        out = np.zeros(basis.size, dtype=np.complex128)
        if not self.modes:
            return out
        scale = self.factor(t)
        for mode in self.modes:
            out[basis.index_of(mode.kx, mode.ky)] = mode.amplitude * scale
        return out

    def norm_at(self, t: float) -> float:
        """||f(t)|| in H."""
        return abs(self.factor(t)) * self._base_norm()

    def sup_norm(self) -> float:
        """Bound on ess-sup ||f(t)||; exact when the modulation attains its extremes."""
        return (1.0 + abs(self.modulation)) * self._base_norm()

    @property
    def is_zero(self) -> bool:
        return all(mode.amplitude == 0 for mode in self.modes)

    @property
    def is_autonomous(self) -> bool:
        return self.modulation == 0.0 or self.frequency == 0.0

    def to_dict(self) -> dict:
        return {
            "modes": [
                {"kx": m.kx, "ky": m.ky, "re": m.amplitude.real, "im": m.amplitude.imag} for m in self.modes
            ],
            "modulation": self.modulation,
            "frequency": self.frequency,
            "phase": self.phase,
        }


@dataclass(frozen=True, slots=True)
class ScaledForcing:
    """f(t) = amplitude_scale * base(time_scale * t)."""

    base: GalerkinForcing
    amplitude_scale: float = 1.0
    time_scale: float = 1.0

    def amplitudes(self, basis: GalerkinBasis, t: float) -> np.ndarray:
        return self.amplitude_scale * self.base.amplitudes(basis, self.time_scale * t)

    def norm_at(self, t: float) -> float:
        return abs(self.amplitude_scale) * self.base.norm_at(self.time_scale * t)

    def sup_norm(self) -> float:
        return abs(self.amplitude_scale) * self.base.sup_norm()

    @property
    def is_zero(self) -> bool:
        return self.amplitude_scale == 0.0 or self.base.is_zero


# ---------------------------
# Parameters and field
# ---------------------------

def grashof(nu: float, lambda1: float, f_sup: float) -> float:
    """G = f_sup / (lambda1 nu^2)."""
    if not nu > 0.0 or not lambda1 > 0.0:
        raise ValueError("nu and lambda1 must be positive")
    if f_sup < 0.0:
        raise ValueError("f_sup must be non-negative")
    return float(f_sup / (lambda1 * nu * nu))


@dataclass(frozen=True, slots=True)
class NseParams:
    nu: float
    f_sup: float
    lambda1: float = 1.0

    def __post_init__(self):
        grashof(self.nu, self.lambda1, self.f_sup)

    @property
    def G(self) -> float:
        return grashof(self.nu, self.lambda1, self.f_sup)

    @property
    def rho0(self) -> float:
        """Radius nu * G of the H-absorbing estimate."""
        return self.nu * self.G

    def to_dict(self) -> dict[str, float]:
        return {"nu": self.nu, "lambda1": self.lambda1, "f_sup": self.f_sup, "G": self.G, "rho0": self.rho0}


def galerkin_rhs(basis: GalerkinBasis, nu: float, y: np.ndarray, forcing_amplitudes: np.ndarray) -> np.ndarray:
    """d/dt of packed state(s): -nu |k|^2 a - P B(u, u) + f, repacked."""
    a = basis.unpack(y)
    da = -nu * basis.k_sq * a - basis.nonlinear_term(a) + forcing_amplitudes
    return basis.pack(da)


def galerkin_field(params: NseParams | float, forcing, t: float, state, basis: GalerkinBasis | None = None):
    """
    Time derivative of a state. Accepts a :class:`GalerkinState` (returns a
    GalerkinState of derivatives) or packed arrays (returns packed arrays).
    """
    nu = params.nu if isinstance(params, NseParams) else float(params)
    if isinstance(state, GalerkinState):
        basis = state.basis
        return GalerkinState.from_packed(basis, galerkin_rhs(basis, nu, state.packed(), forcing.amplitudes(basis, t)))
    if basis is None:
        raise ValueError("packed states need the basis")
    return galerkin_rhs(basis, nu, state, forcing.amplitudes(basis, t))


def nse_process(
    basis: GalerkinBasis, forcing, integrator: IntegratorConfig = IntegratorConfig(), guard_radius: float = 1e6
) -> ProcessDef:
    """Galerkin process on packed states; parameter ``nu``."""

    def rhs(t, y, lam):
        return galerkin_rhs(basis, lam["nu"], y, forcing.amplitudes(basis, t))

    return ProcessDef(basis.dim, rhs, guard_radius, integrator, "nse_galerkin")


def energy_process(
    basis: GalerkinBasis, forcing, integrator: IntegratorConfig = IntegratorConfig(), guard_radius: float = 1e6
) -> ProcessDef:
    """Galerkin process with one extra coordinate accumulating the integral of ||grad u||^2."""

    def rhs(t, z, lam):
        y = z[..., : basis.dim]
        dy = galerkin_rhs(basis, lam["nu"], y, forcing.amplitudes(basis, t))
        return np.concatenate((dy, v_norm_sq(basis, y)[..., None]), axis=-1)

    return ProcessDef(basis.dim + 1, rhs, guard_radius, integrator, "nse_galerkin_energy")


def _packed(basis: GalerkinBasis, u0) -> np.ndarray:
    if isinstance(u0, GalerkinState):
        return u0.packed()
    y = np.asarray(u0, dtype=np.float64)
    if y.shape != (basis.dim,):
        raise ValueError(f"expected a packed state of length {basis.dim}, got shape {y.shape}")
    return y


# ---------------------------
# Estimates
# ---------------------------

def verify_energy_estimates(
    nu: float,
    forcing,
    u0,
    horizon: float,
    *,
    basis: GalerkinBasis,
    integrator: IntegratorConfig = IntegratorConfig(),
    samples: int = 2001,
    lambda1: float = 1.0,
) -> BoundReport:
    """
    Integrate from u0 at t = 0 and check, at every sample time:

    - the Gronwall envelope ||u||^2 <= ||u0||^2 e^{-nu l1 t} + rho0^2 (1 - e^{-nu l1 t}),
    - the dissipation integral nu int ||grad u||^2 <= ||u0||^2 + t nu^3 l1 G^2,
    - the differential inequality d/dt ||u||^2 + nu ||grad u||^2 <= ||f(t)||^2 / (nu l1),
    - ||u||^2 <= 2 rho0^2 after the predicted entry time ln(||u0||^2 / rho0^2) / (nu l1),
    - with zero forcing, the energy identity ||u||^2 + 2 nu int ||grad u||^2 = ||u0||^2.
    """
    if horizon <= 0.0 or samples < 2:
        raise ValueError("horizon must be positive and samples >= 2")
    y0 = _packed(basis, u0)
    params = NseParams(nu, forcing.sup_norm(), lambda1)
    times = np.linspace(0.0, horizon, samples)

    trajectory = sample_trajectory(
        energy_process(basis, forcing, integrator), ParameterPoint.of(nu=nu), times, np.append(y0, 0.0)
    )
    y, integral = trajectory[:, : basis.dim], trajectory[:, basis.dim]
    energy = np.sum(y * y, axis=1)
    u0_sq = float(energy[0])
    rho0_sq = params.rho0**2
    rate = nu * lambda1
    decay = np.exp(-rate * times)
    rel_tol = integrator.rel_tol

    forcing_table = np.stack([forcing.amplitudes(basis, t) for t in times])
    dy = galerkin_rhs(basis, nu, y, forcing_table)
    dissipation = v_norm_sq(basis, y)
    forcing_norm_sq = np.array([forcing.norm_at(t) ** 2 for t in times])

    report = BoundReport(constants={**params.to_dict(), "u0_norm": float(np.sqrt(u0_sq)), "horizon": horizon})
    report.checks.append(
        BoundCheck.evaluate("gronwall_envelope", times, energy, u0_sq * decay + rho0_sq * (1.0 - decay), rel_tol)
    )
    report.checks.append(
        BoundCheck.evaluate("dissipation_integral", times, nu * integral, u0_sq + times * nu**3 * lambda1 * params.G**2, rel_tol)
    )
    report.checks.append(
        BoundCheck.evaluate(
            "energy_inequality",
            times,
            2.0 * np.sum(y * dy, axis=1) + nu * dissipation,
            forcing_norm_sq / rate,
            rel_tol,
        )
    )

    inside = energy <= 2.0 * rho0_sq
    outside_after = np.flip(np.cumsum(np.flip(~inside))) > 0
    entered = np.flatnonzero(~outside_after)
    report.constants["entry_time_observed"] = float(times[entered[0]]) if entered.size else None
    if rho0_sq > 0.0:
        predicted = max(0.0, float(np.log(u0_sq / rho0_sq)) / rate) if u0_sq > 0.0 else 0.0
        report.constants["entry_time_predicted"] = predicted
        late = times >= predicted
        if late.any():
            report.checks.append(
                BoundCheck.evaluate("absorbing_ball", times[late], energy[late], 2.0 * rho0_sq, rel_tol)
            )
    else:
        report.constants["entry_time_predicted"] = None

    if forcing.is_zero:
        residual = np.abs(energy + 2.0 * nu * integral - u0_sq) / max(1.0, u0_sq)
        report.checks.append(
            BoundCheck.evaluate("energy_identity", times, residual, 0.0, rel_tol, slack_factor=IDENTITY_SLACK_FACTOR)
        )
    return report


def viscosity_rescale_check(
    nu: float,
    f0: GalerkinForcing,
    u0,
    horizon: float,
    *,
    basis: GalerkinBasis,
    integrator: IntegratorConfig = IntegratorConfig(),
    samples: int = 201,
) -> BoundReport:
    """
    Compare u(t) (viscosity nu, forcing f0) with nu * v(nu t), where v solves
    the unit-viscosity system with forcing nu^-2 f0(tau / nu) from v0 = u0 / nu.
    """
    if not nu > 0.0:
        raise ValueError(f"nu must be positive, got {nu!r}")
    y0 = _packed(basis, u0)
    times = np.linspace(0.0, horizon, samples)

    u = sample_trajectory(nse_process(basis, f0, integrator), ParameterPoint.of(nu=nu), times, y0)
    rescaled = ScaledForcing(f0, amplitude_scale=nu**-2, time_scale=1.0 / nu)
    v = sample_trajectory(nse_process(basis, rescaled, integrator), ParameterPoint.of(nu=1.0), nu * times, y0 / nu)

    discrepancy = h_norm(u - nu * v)
    report = BoundReport(constants={"nu": nu, "horizon": horizon})
    report.checks.append(
        BoundCheck.evaluate("viscosity_rescaling", times, discrepancy, SLACK_FACTOR * integrator.rel_tol * h_norm(u), integrator.rel_tol)
    )
    return report


@dataclass(frozen=True, slots=True)
class EnstrophyBound:
    """V-norm absorbing constants; ``c0`` is user supplied, so these are reported, not verified."""

    rho0: float
    rho0_prime: float
    m1: float
    m2: float
    m3: float
    rho_G: float
    t1: float

    def to_dict(self) -> dict[str, float]:
        return {
            "rho0": self.rho0,
            "rho0_prime": self.rho0_prime,
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "rho_G": self.rho_G,
            "t1": self.t1,
        }


def enstrophy_bound(nu: float, lambda1: float, G: float, c0: float, R: float) -> EnstrophyBound:
    """
    rho0' = rho0 + 1, m1 = l1 rho0^2 + rho0'^2 / nu, m2 = 2 nu l1^2 rho0^2,
    m3 = 2 c0 rho0'^2 m1 / nu^3, rho(G) = (m1 + m2) e^{m3},
    t1(R) = 1 + log(R^2 / (2 rho0 + 1)) / (nu l1), for R > rho0'.
    """
    if not nu > 0.0 or not lambda1 > 0.0 or c0 <= 0.0 or G < 0.0:
        raise ValueError("nu, lambda1, c0 must be positive and G non-negative")
    rho0 = nu * G
    rho0_prime = rho0 + 1.0
    if not R > rho0_prime:
        raise ValueError(f"R must exceed rho0 + 1 = {rho0_prime:g}, got {R!r}")
    m1 = lambda1 * rho0**2 + rho0_prime**2 / nu
    m2 = 2.0 * nu * lambda1**2 * rho0**2
    m3 = 2.0 * c0 * rho0_prime**2 * m1 / nu**3
    with np.errstate(over="ignore"):
        rho_G = float((m1 + m2) * np.exp(m3))
    t1 = 1.0 + float(np.log(R * R / (2.0 * rho0 + 1.0))) / (nu * lambda1)
    return EnstrophyBound(rho0, rho0_prime, m1, m2, m3, rho_G, t1)


# ---------------------------
# Sections
# ---------------------------

def rescale_section(section: AttractorSection, nu: float) -> AttractorSection:
    """
    Map a section B(tau) of the unit-viscosity system to the section
    nu * B(tau) of the viscosity-nu system at time tau / nu.
    """
    if not nu > 0.0:
        raise ValueError(f"nu must be positive, got {nu!r}")
    return AttractorSection(
        t=section.t / nu,
        lam=section.lam.replace(nu=nu),
        cloud=PointCloud(section.cloud.points * nu, resolution=section.cloud.resolution * nu),
        s_converged=section.s_converged / nu,
        history=[(s / nu, delta * nu) for s, delta in section.history],
        converged=section.converged,
        to_final=[delta * nu for delta in section.to_final],
    )


def section_time_holder(first: AttractorSection, second: AttractorSection) -> float:
    """Delta_H(A(t2), A(t1)) / sqrt(t2 - t1) for sections with 0 < t2 - t1 < 1."""
    gap = second.t - first.t
    if gap <= 0.0:
        raise ValueError(f"sections must satisfy t1 < t2, got t1={first.t}, t2={second.t}")
    if gap >= 1.0:
        raise ValueError(f"time gap must be below 1, got {gap}")
    if first.lam != second.lam:
        raise ValueError("sections belong to different parameters")
    return hausdorff(second.cloud, first.cloud).symmetric / float(np.sqrt(gap))


@dataclass(slots=True)
class HolderStudy:
    t1: float
    gaps: list[float] = field(default_factory=list)
    distances: list[float] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def spread(self) -> float:
        """max / min ratio (inf when some ratio is 0 and another is not)."""
        if self.max_ratio == 0.0:
            return 1.0
        return self.max_ratio / self.min_ratio if self.min_ratio > 0.0 else float("inf")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"gap": self.gaps, "distance": self.distances, "ratio": self.ratios})


def time_holder_study(
    proc: ProcessDef,
    lam: ParameterPoint,
    seed_set: SeedSet,
    t1: float,
    gaps: Sequence[float],
    schedule_for: Callable[[float], PullbackSchedule],
    merge_radius: float | None = None,
) -> HolderStudy:
    """Pullback sections at t1 and t1 + gap for each gap, with their Hoelder-1/2 ratios."""
    if not gaps:
        raise ValueError("at least one time gap is required")
    base = pullback_section(proc, lam, t1, seed_set, schedule_for(t1), merge_radius)
    study = HolderStudy(t1=t1)
    for gap in gaps:
        later = pullback_section(proc, lam, t1 + gap, seed_set, schedule_for(t1 + gap), merge_radius)
        ratio = section_time_holder(base, later)
        study.gaps.append(float(gap))
        study.distances.append(ratio * float(np.sqrt(gap)))
        study.ratios.append(ratio)
        Logger.info(f"Time continuity gap={gap:g}: ratio={ratio:.6g}")
    return study


# ---------------------------
# Snapshots
# ---------------------------

def write_snapshot(state: GalerkinState, path: str | Path) -> Path:
    """Write u_hat per stored mode as ``kx, ky, re_u1, im_u1, re_u2, im_u2``."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {
            "kx": state.basis.modes[:, 0],
            "ky": state.basis.modes[:, 1],
            "re_u1": state.coeffs[:, 0].real,
            "im_u1": state.coeffs[:, 0].imag,
            "re_u2": state.coeffs[:, 1].real,
            "im_u2": state.coeffs[:, 1].imag,
        },
        columns=SNAPSHOT_COLUMNS,
    )
    frame.to_csv(target, index=False, float_format="%.17g", lineterminator="\n")
    return target


def read_snapshot(path: str | Path, basis: GalerkinBasis) -> GalerkinState:
    """Read a snapshot; modes missing from the file are zero."""
    frame = pd.read_csv(path, float_precision="round_trip")
    if list(frame.columns) != SNAPSHOT_COLUMNS:
        raise ValueError(f"{path}: unexpected snapshot header {list(frame.columns)}")
    coeffs = np.zeros((basis.size, 2), dtype=np.complex128)
    for row in frame.itertuples(index=False):
        index = basis.index_of(int(row.kx), int(row.ky))
        coeffs[index, 0] = complex(row.re_u1, row.im_u1)
        coeffs[index, 1] = complex(row.re_u2, row.im_u2)
    return GalerkinState(basis, coeffs)


def forcing_from_modes(entries: Iterable[dict], **modulation) -> GalerkinForcing:
    """Build forcing from ``{"kx", "ky", "re", "im"}`` mappings as found in run configs."""
    modes = tuple(
        ForcingMode(int(entry["kx"]), int(entry["ky"]), complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0))))
        for entry in entries
    )
    return GalerkinForcing(modes, **modulation)


def verify_energy_transfer(
    basis: GalerkinBasis, n_states: int, norm: float, *, seed: int = 0, kcut: int | None = None, rel_tol: float = 1e-9
) -> BoundCheck:
    """
    |<B(u, u), u>| / (||u||^2 ||grad u||) over random states spread across
    all retained modes; the dealiased nonlinearity makes this round-off.
    """
    if n_states <= 0:
        raise ValueError("n_states must be positive")
    cut = basis.kmax if kcut is None else kcut
    states = np.stack([GalerkinState.random(basis, norm, cut, seed + index).packed() for index in range(n_states)])
    scale = np.maximum(np.sum(states * states, axis=1) * v_norm(basis, states), np.finfo(np.float64).tiny)
    relative = np.abs(energy_transfer(basis, states)) / scale
    return BoundCheck.evaluate("energy_transfer", np.arange(n_states, dtype=np.float64), relative, 0.0, rel_tol)
