from __future__ import annotations

import math

import numpy as np
import pytest

from core.attractors.models import AttractorSection, PullbackSchedule
from core.attractors.sampling import sample_interval
from core.geometry.point_cloud import PointCloud
from core.process.process import IntegratorConfig, ParameterPoint, evolve
from core.systems.benchmarks import linear_particular_solution, linear_process
from core.systems.navier_stokes import (
    GalerkinBasis,
    GalerkinForcing,
    GalerkinState,
    NseParams,
    ScaledForcing,
    enstrophy_bound,
    energy_transfer,
    forcing_from_modes,
    galerkin_field,
    grashof,
    h_norm,
    nse_process,
    read_snapshot,
    rescale_section,
    section_time_holder,
    time_holder_study,
    v_norm_sq,
    verify_energy_estimates,
    verify_energy_transfer,
    viscosity_rescale_check,
    write_snapshot,
)

BASIS = GalerkinBasis(2)


def test_basis_stores_half_plane_modes():
    basis = GalerkinBasis(1)

    assert [tuple(mode) for mode in basis.modes] == [(-1, 1), (0, 1), (1, 0), (1, 1)]
    assert basis.dim == 8
    assert basis.grid_size == 4
    assert basis.index_of(1, 0) == 2


def test_basis_rejects_unstored_modes_and_bad_kmax():
    with pytest.raises(ValueError):
        BASIS.index_of(-1, 0)
    with pytest.raises(ValueError):
        BASIS.index_of(3, 0)
    with pytest.raises(ValueError):
        GalerkinBasis(0)


def test_pack_preserves_h_norm():
    a = np.zeros(BASIS.size, dtype=np.complex128)
    a[0] = 1.0 + 1.0j

    y = BASIS.pack(a)

    assert h_norm(y) == pytest.approx(2.0)
    assert BASIS.unpack(y) == pytest.approx(a)


def test_random_state_is_divergence_free_with_requested_norm():
    state = GalerkinState.random(BASIS, 3.0, kcut=2, seed=5)

    assert state.h_norm() == pytest.approx(3.0)
    assert np.max(state.divergence_residual()) < 1e-12
    assert state.v_norm() >= state.h_norm() - 1e-12


def test_state_rejects_divergent_coefficients():
    coeffs = np.zeros((BASIS.size, 2), dtype=np.complex128)
    kx, ky = BASIS.modes[0]
    coeffs[0] = (kx, ky)

    with pytest.raises(ValueError):
        GalerkinState(BASIS, coeffs)


def test_state_rejects_wrong_shape():
    with pytest.raises(ValueError):
        GalerkinState(BASIS, np.zeros((3, 2)))


def test_energy_transfer_vanishes_for_random_states():
    states = np.stack([GalerkinState.random(BASIS, 2.0, kcut=2, seed=seed).packed() for seed in range(4)])

    assert np.max(np.abs(energy_transfer(BASIS, states))) < 1e-10


def test_verify_energy_transfer_holds():
    check = verify_energy_transfer(GalerkinBasis(3), 5, 4.0, seed=1)

    assert check.name == "energy_transfer"
    assert check.held
    assert check.samples == 5


def test_forcing_validates_modes():
    with pytest.raises(ValueError):
        GalerkinForcing.single_mode(-1, 0, 1.0)
    with pytest.raises(ValueError):
        forcing_from_modes([{"kx": 1, "ky": 0, "re": 1.0}, {"kx": 1, "ky": 0, "im": 1.0}])


def test_forcing_norms_and_modulation():
    forcing = GalerkinForcing.single_mode(1, 0, 0.5, modulation=0.5, frequency=2.0)

    assert forcing.norm_at(0.0) == pytest.approx(math.sqrt(0.5))
    assert forcing.sup_norm() == pytest.approx(1.5 * math.sqrt(0.5))
    assert forcing.is_autonomous is False
    assert forcing.amplitudes(BASIS, 0.0)[BASIS.index_of(1, 0)] == pytest.approx(0.5)
    assert GalerkinForcing().is_zero
    assert forcing.to_dict()["modes"] == [{"kx": 1, "ky": 0, "re": 0.5, "im": 0.0}]


def test_scaled_forcing_rescales_time_and_amplitude():
    base = GalerkinForcing.single_mode(1, 1, 1.0, modulation=1.0, frequency=1.0)
    scaled = ScaledForcing(base, amplitude_scale=4.0, time_scale=0.5)

    assert scaled.norm_at(2.0) == pytest.approx(4.0 * base.norm_at(1.0))
    assert scaled.sup_norm() == pytest.approx(4.0 * base.sup_norm())


def test_grashof_and_absorbing_radius():
    params = NseParams(nu=0.5, f_sup=2.0)

    assert grashof(0.5, 1.0, 2.0) == pytest.approx(8.0)
    assert params.G == pytest.approx(8.0)
    assert params.rho0 == pytest.approx(4.0)
    with pytest.raises(ValueError):
        NseParams(nu=0.0, f_sup=1.0)


def test_galerkin_field_accepts_states_and_packed_arrays():
    state = GalerkinState.random(BASIS, 1.0, seed=2)
    forcing = GalerkinForcing.single_mode(1, 0, 1.0)

    derivative = galerkin_field(1.0, forcing, 0.0, state)
    packed = galerkin_field(NseParams(1.0, 1.0), forcing, 0.0, state.packed(), BASIS)

    assert derivative.packed() == pytest.approx(packed)
    with pytest.raises(ValueError):
        galerkin_field(1.0, forcing, 0.0, state.packed())


def test_unforced_energy_decays_at_least_at_viscous_rate():
    state = GalerkinState.random(BASIS, 2.0, seed=3)
    proc = nse_process(BASIS, GalerkinForcing())

    y = evolve(proc, ParameterPoint.of(nu=1.0), 0.0, 1.0, state.packed())

    assert h_norm(y) <= 2.0 * math.exp(-1.0) + 1e-8
    assert v_norm_sq(BASIS, y) > 0.0


def test_energy_estimates_hold_without_forcing():
    u0 = GalerkinState.random(BASIS, 2.0, seed=7)

    report = verify_energy_estimates(1.0, GalerkinForcing(), u0, 1.0, basis=BASIS, samples=51)

    assert report.held
    assert report.check("energy_identity").held
    assert report.constants["entry_time_predicted"] is None


def test_energy_estimates_hold_with_forcing_and_enter_absorbing_ball():
    forcing = GalerkinForcing.single_mode(1, 0, 0.5)
    u0 = GalerkinState.random(BASIS, 2.0, seed=11)

    report = verify_energy_estimates(1.0, forcing, u0, 5.0, basis=BASIS, samples=201)

    names = {check.name for check in report.checks}
    assert report.held
    assert names == {"gronwall_envelope", "dissipation_integral", "energy_inequality", "absorbing_ball"}
    assert report.constants["entry_time_predicted"] == pytest.approx(math.log(4.0 / 0.5))


def test_viscosity_rescaling_is_exact_at_unit_viscosity():
    forcing = GalerkinForcing.single_mode(1, 0, 1.0)
    u0 = GalerkinState.random(BASIS, 1.0, seed=1)

    report = viscosity_rescale_check(1.0, forcing, u0, 1.0, basis=BASIS, samples=11)

    assert report.check("viscosity_rescaling").observed_max == 0.0


def test_viscosity_rescaling_agrees_to_integrator_accuracy():
    forcing = GalerkinForcing.single_mode(1, 0, 1.0, modulation=0.5, frequency=1.0)
    u0 = GalerkinState.random(BASIS, 1.0, seed=1)

    report = viscosity_rescale_check(0.5, forcing, u0, 1.0, basis=BASIS, samples=11)

    assert report.check("viscosity_rescaling").observed_max < 1e-6


def test_enstrophy_bound_closed_form():
    bound = enstrophy_bound(1.0, 1.0, 1.0, 0.5, 3.0)

    assert bound.rho0_prime == pytest.approx(2.0)
    assert bound.m1 == pytest.approx(5.0)
    assert bound.m2 == pytest.approx(2.0)
    assert bound.m3 == pytest.approx(20.0)
    assert bound.rho_G == pytest.approx(7.0 * math.exp(20.0))
    assert bound.t1 == pytest.approx(1.0 + math.log(3.0))


def test_enstrophy_bound_requires_radius_above_absorbing_radius():
    with pytest.raises(ValueError):
        enstrophy_bound(1.0, 1.0, 1.0, 0.5, 2.0)


def test_snapshot_preserves_coefficients(tmp_path):
    state = GalerkinState.random(BASIS, 1.5, seed=9)

    loaded = read_snapshot(write_snapshot(state, tmp_path / "snap.csv"), BASIS)

    assert np.array_equal(loaded.coeffs, state.coeffs)


def test_snapshot_rejects_unknown_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("kx,ky\n1,0\n", encoding="utf-8")

    with pytest.raises(ValueError):
        read_snapshot(path, BASIS)


def _section(t: float, value: float, lam: ParameterPoint = ParameterPoint.of(nu=1.0)) -> AttractorSection:
    return AttractorSection(t, lam, PointCloud([[value, 0.0]], resolution=0.01), t - 5.0, [(t - 5.0, 0.2)], True, [0.2])


def test_rescale_section_scales_space_and_time():
    scaled = rescale_section(_section(2.0, 4.0), 0.5)

    assert scaled.t == pytest.approx(4.0)
    assert scaled.lam["nu"] == 0.5
    assert scaled.cloud.points[0].tolist() == [2.0, 0.0]
    assert scaled.cloud.resolution == pytest.approx(0.005)
    assert scaled.history == [(pytest.approx(-6.0), pytest.approx(0.1))]


def test_section_time_holder_ratio():
    ratio = section_time_holder(_section(0.0, 0.0), _section(0.25, 0.5))

    assert ratio == pytest.approx(1.0)


@pytest.mark.parametrize(
    ("first", "second"),
    [
        (_section(1.0, 0.0), _section(0.5, 0.0)),
        (_section(0.0, 0.0), _section(1.5, 0.0)),
        (_section(0.0, 0.0), _section(0.5, 0.0, ParameterPoint.of(nu=2.0))),
    ],
)
def test_section_time_holder_rejects_bad_pairs(first, second):
    with pytest.raises(ValueError):
        section_time_holder(first, second)


def test_time_holder_study_on_linear_benchmark():
    lam = ParameterPoint.of(rate=1.0)

    study = time_holder_study(
        linear_process(),
        lam,
        sample_interval(-2.0, 2.0, 9),
        0.0,
        [0.25, 0.5],
        lambda t: PullbackSchedule.geometric(t, 1e-6, depth=5),
    )

    expected = abs(linear_particular_solution(1.0, 0.25) - linear_particular_solution(1.0, 0.0))
    assert study.gaps == [0.25, 0.5]
    assert study.distances[0] == pytest.approx(expected, abs=1e-5)
    assert study.spread >= 1.0
    assert list(study.to_frame().columns) == ["gap", "distance", "ratio"]


def test_integrator_config_is_used_by_energy_process():
    u0 = GalerkinState.random(BASIS, 1.0, seed=4)

    report = verify_energy_estimates(
        1.0, GalerkinForcing(), u0, 0.5, basis=BASIS, integrator=IntegratorConfig("RK45", 1e-8, 1e-11), samples=11
    )

    assert report.held


def test_time_holder_ratios_stay_bounded_for_galerkin_flow():
    forcing = GalerkinForcing.single_mode(1, 1, 0.5, modulation=0.5, frequency=1.0)
    seeds = PointCloud(np.stack([GalerkinState.random(BASIS, 1.0, seed=i).packed() for i in range(4)]))

    study = time_holder_study(
        nse_process(BASIS, forcing),
        ParameterPoint.of(nu=1.0),
        seeds,
        0.0,
        [0.04, 0.16, 0.64],
        lambda t: PullbackSchedule.geometric(t, 1e-6, depth=5),
    )

    assert study.gaps == [0.04, 0.16, 0.64]
    assert all(math.isfinite(ratio) and ratio > 0.0 for ratio in study.ratios)
    assert 1.0 <= study.spread < 10.0
