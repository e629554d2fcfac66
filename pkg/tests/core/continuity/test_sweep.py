from __future__ import annotations

import math

import pytest

from core.attractors.models import PullbackSchedule
from core.attractors.sampling import sample_ball, sample_interval
from core.attractors.uniform import s_grid_for_period
from core.continuity.models import ParameterGrid, SweepError
from core.continuity.sweep import continuity_modulus, semicontinuity_split, sweep_pullback, sweep_uniform
from core.process.process import ParameterPoint, ProcessDef
from core.systems.benchmarks import linear_particular_solution, linear_process, pitchfork_process
from core.systems.lorenz import lorenz_process

SEEDS = sample_interval(-2.0, 2.0, 9)
SCHEDULE = PullbackSchedule.geometric(0.0, 1e-6, depth=5)


def _explosive_process() -> ProcessDef:
    return ProcessDef(1, lambda t, x, lam: lam["a"] * x * x - x, guard_radius=100.0, name="explosive")


def test_sweep_pullback_computes_sections_and_adjacent_distances():
    grid = ParameterGrid.of(rate=[1.0, 2.0, 3.0])

    sweep = sweep_pullback(linear_process(), grid, 0.0, SEEDS, SCHEDULE)

    assert sorted(sweep.sections) == [0, 1, 2]
    assert sorted(sweep.pairwise) == [(0, 1), (1, 2)]
    expected = abs(linear_particular_solution(1.0, 0.0) - linear_particular_solution(2.0, 0.0))
    assert sweep.pairwise[(0, 1)].symmetric == pytest.approx(expected, abs=1e-6)
    frame = sweep.summary_frame()
    assert list(frame.columns) == ["rate_a", "rate_b", "forward", "backward", "symmetric"]
    assert frame["rate_a"].tolist() == [1.0, 2.0]


def test_sweep_full_matrix_covers_every_pair():
    grid = ParameterGrid.of(rate=[1.0, 2.0, 3.0])

    sweep = sweep_pullback(linear_process(), grid, 0.0, SEEDS, SCHEDULE, full_matrix=True)

    assert sorted(sweep.pairwise) == [(0, 1), (0, 2), (1, 2)]


def test_sweep_records_failures_and_continues():
    grid = ParameterGrid.of(a=[0.0, 1.0])

    sweep = sweep_pullback(_explosive_process(), grid, 0.0, SEEDS, SCHEDULE)

    assert list(sweep.sections) == [0]
    assert list(sweep.failures) == [1]
    assert "blow_up" in sweep.failures[1]
    assert sweep.pairwise == {}
    with pytest.raises(ValueError):
        sweep.require(ParameterPoint.of(a=1.0))


def test_sweep_raises_when_every_point_fails():
    grid = ParameterGrid.of(a=[1.0, 2.0])

    with pytest.raises(SweepError) as exc_info:
        sweep_pullback(_explosive_process(), grid, 0.0, SEEDS, SCHEDULE)

    assert exc_info.value.code == "all_failed"


def test_continuity_modulus_is_non_decreasing():
    grid = ParameterGrid.of(rate=[1.0, 2.0, 3.0])
    sweep = sweep_pullback(linear_process(), grid, 0.0, SEEDS, SCHEDULE)

    table = continuity_modulus(sweep, ParameterPoint.of(rate=1.0))

    assert [radius for radius, _ in table] == pytest.approx([0.0, 1.0, 2.0])
    assert table[0][1] == 0.0
    values = [value for _, value in table]
    assert values == sorted(values)
    expected = abs(linear_particular_solution(1.0, 0.0) - linear_particular_solution(3.0, 0.0))
    assert table[-1][1] == pytest.approx(expected, abs=1e-6)


def test_continuity_modulus_with_explicit_radii():
    grid = ParameterGrid.of(rate=[1.0, 2.0, 3.0])
    sweep = sweep_pullback(linear_process(), grid, 0.0, SEEDS, SCHEDULE)

    table = continuity_modulus(sweep, ParameterPoint.of(rate=1.0), deltas=[1.5, 0.5])

    assert [radius for radius, _ in table] == [0.5, 1.5]
    assert table[0][1] == 0.0
    with pytest.raises(ValueError):
        continuity_modulus(sweep, ParameterPoint.of(rate=1.0), deltas=[-1.0])


def test_semicontinuity_split_reports_both_directions():
    grid = ParameterGrid.of(rate=[1.0, 2.0])
    sweep = sweep_pullback(linear_process(), grid, 0.0, SEEDS, SCHEDULE)

    rows = semicontinuity_split(sweep, ParameterPoint.of(rate=2.0))

    assert [point["rate"] for point, _ in rows] == [1.0, 2.0]
    assert rows[1][1].symmetric == 0.0
    assert rows[0][1].forward == pytest.approx(rows[0][1].backward)


def test_sweep_uniform_builds_one_approximation_per_point():
    grid = ParameterGrid.of(rate=[1.0, 2.0])
    period = 2.0 * math.pi

    sweep = sweep_uniform(linear_process(), grid, SEEDS, 2.0 * period, s_grid_for_period(period, 4), 1e-4, 1e-3)

    assert sweep.t is None
    assert all(approx.converged for approx in sweep.sections.values())
    assert sorted(sweep.pairwise) == [(0, 1)]


def test_pitchfork_sections_across_bifurcation_only_implode():
    grid = ParameterGrid.of(mu=[-1.0, -0.25, 0.25, 1.0])
    schedule = PullbackSchedule.geometric(0.0, 1e-5, depth=6, consecutive_required=1)

    sweep = sweep_pullback(pitchfork_process(), grid, 0.0, sample_interval(-2.0, 2.0, 17), schedule)
    rows = {point["mu"]: pair for point, pair in semicontinuity_split(sweep, ParameterPoint.of(mu=0.25))}

    assert all(section.converged for section in sweep.sections.values())
    # below zero the attractor is {0}, inside A_0.25 = {-0.5, 0, 0.5}: no explosion
    for mu in (-1.0, -0.25):
        assert rows[mu].forward == pytest.approx(0.0, abs=1e-4)
        assert rows[mu].backward == pytest.approx(0.5, abs=1e-4)
    assert rows[0.25].symmetric == 0.0
    assert rows[1.0].forward == pytest.approx(0.5, abs=1e-4)
    assert rows[1.0].backward == pytest.approx(0.5, abs=1e-4)


def test_lorenz_sigma_sweep_is_finite_and_repeatable():
    grid = ParameterGrid.of({"b": 8.0 / 3.0, "r": 28.0}, sigma=[9.9, 10.0, 10.1])
    seeds = sample_ball(3, 5.0, 8, seed=1, center=[0.0, 0.0, 27.0])
    schedule = PullbackSchedule.geometric(0.0, 1e-3, T0=1.0, depth=2)

    first = sweep_pullback(lorenz_process(), grid, 0.0, seeds, schedule).summary_frame()
    second = sweep_pullback(lorenz_process(), grid, 0.0, seeds, schedule).summary_frame()

    assert first["sigma_a"].tolist() == pytest.approx([9.9, 10.0])
    assert first[["forward", "backward", "symmetric"]].map(math.isfinite).all().all()
    assert first.equals(second)
