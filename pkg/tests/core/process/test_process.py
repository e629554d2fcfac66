from __future__ import annotations

import math

import numpy as np
import pytest

from core.enums.blowup_policy import BlowUpPolicy
from core.geometry.point_cloud import PointCloud
from core.process.process import (
    BlowUpError,
    IntegratorConfig,
    ParameterPoint,
    ProcessDef,
    evolve,
    evolve_cloud,
    evolve_points,
    sample_trajectory,
)
from core.systems.benchmarks import linear_process, pitchfork_process
from core.systems.forcing import ForcingR
from core.systems.lorenz import lorenz_nonauto_process, lorenz_process


def _decay_field(t, x, lam):
    return -lam["rate"] * x


def _square_field(t, x, lam):
    return x * x


DECAY = ProcessDef(1, _decay_field, name="decay")
RATE_ONE = ParameterPoint.of(rate=1.0)


def test_parameter_point_keeps_order_and_lookup():
    lam = ParameterPoint.of(sigma=10.0, b=8.0 / 3.0)

    assert lam.names == ("sigma", "b")
    assert lam["sigma"] == 10.0
    assert "b" in lam
    assert lam.get("r") is None
    assert lam.replace(r=28.0).names == ("sigma", "b", "r")
    assert lam.label() == "sigma=10,b=2.66666666667"


def test_parameter_point_rejects_duplicates_and_non_finite_values():
    with pytest.raises(ValueError):
        ParameterPoint((("a", 1.0), ("a", 2.0)))
    with pytest.raises(ValueError):
        ParameterPoint.of(a=math.nan)


def test_parameter_distance_requires_same_names():
    assert ParameterPoint.of(a=0.0, b=0.0).distance(ParameterPoint.of(a=3.0, b=4.0)) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        ParameterPoint.of(a=0.0).distance(ParameterPoint.of(b=0.0))


@pytest.mark.parametrize(
    "kwargs",
    [{"method": "Euler"}, {"rel_tol": 0.0}, {"abs_tol": 1.5}, {"max_step": 0.0}],
)
def test_integrator_config_validates_settings(kwargs):
    with pytest.raises(ValueError):
        IntegratorConfig(**kwargs)


def test_evolve_matches_exponential_decay():
    result = evolve(DECAY, RATE_ONE, 0.0, 2.0, [1.5])

    assert result[0] == pytest.approx(1.5 * math.exp(-2.0), rel=1e-8)


def test_evolve_same_time_returns_copy():
    x0 = np.array([0.25])

    result = evolve(DECAY, RATE_ONE, 1.0, 1.0, x0)

    assert result.tolist() == [0.25]
    assert result is not x0


def test_evolve_rejects_backward_time():
    with pytest.raises(ValueError):
        evolve(DECAY, RATE_ONE, 1.0, 0.0, [1.0])


def test_evolve_rejects_wrong_dimension_and_guard_violation():
    with pytest.raises(ValueError):
        evolve(DECAY, RATE_ONE, 0.0, 1.0, [1.0, 2.0])
    guarded = ProcessDef(1, _decay_field, guard_radius=1.0)
    with pytest.raises(ValueError):
        evolve(guarded, RATE_ONE, 0.0, 1.0, [2.0])


def test_evolve_composes_across_intermediate_time():
    direct = evolve(DECAY, RATE_ONE, 0.0, 3.0, [1.0])
    split = evolve(DECAY, RATE_ONE, 1.0, 3.0, evolve(DECAY, RATE_ONE, 0.0, 1.0, [1.0]))

    assert split[0] == pytest.approx(direct[0], rel=1e-8)


COMPOSITION_SYSTEMS = {
    # name: (process, parameters, longest sub-interval, centre and half-width of initial states)
    "linear": (linear_process(), ParameterPoint.of(rate=1.0), 5.0, [0.0], 2.0),
    "pitchfork": (pitchfork_process(), ParameterPoint.of(mu=1.0, eps=0.5), 3.0, [0.0], 2.0),
    "forced_lorenz": (
        lorenz_nonauto_process(ForcingR.sinusoids([(1.0, 1.0, 0.0)], offset=28.0), IntegratorConfig(rel_tol=1e-8)),
        ParameterPoint.of(sigma=10.0, b=8.0 / 3.0),
        0.2,
        [0.0, 0.0, 27.0],
        10.0,
    ),
}


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("system", sorted(COMPOSITION_SYSTEMS))
def test_evolve_composes_on_random_triples(system, seed):
    proc, lam, span, centre, half_width = COMPOSITION_SYSTEMS[system]
    rng = np.random.default_rng(seed)
    s = float(rng.uniform(-5.0, 5.0))
    tau = s + float(rng.uniform(0.0, span))
    t = tau + float(rng.uniform(0.0, span))
    x0 = np.asarray(centre) + rng.uniform(-half_width, half_width, size=len(centre))

    direct = evolve(proc, lam, s, t, x0)
    split = evolve(proc, lam, tau, t, evolve(proc, lam, s, tau, x0))

    bound = 10.0 * proc.integrator.rel_tol * (1.0 + np.linalg.norm(x0))
    assert np.linalg.norm(split - direct) <= bound


@pytest.mark.parametrize("delta", [1e-1, 1e-2, 1e-3])
def test_linear_state_dependence_is_contracting(delta):
    proc = linear_process()
    base = evolve(proc, RATE_ONE, 0.0, 2.0, [0.5])
    moved = evolve(proc, RATE_ONE, 0.0, 2.0, [0.5 + delta])

    assert (moved[0] - base[0]) / delta == pytest.approx(math.exp(-2.0), rel=1e-5)


def _difference_ratios(evolve_with, deltas):
    base = evolve_with(0.0)
    return [float(np.linalg.norm(evolve_with(delta) - base)) / delta for delta in deltas]


@pytest.mark.parametrize("perturbed", ["state", "sigma"])
def test_lorenz_dependence_is_lipschitz_over_short_times(perturbed):
    proc = lorenz_process()
    x0 = np.array([1.0, 1.0, 20.0])

    def evolve_with(delta):
        if perturbed == "state":
            return evolve(proc, ParameterPoint.of(sigma=10.0, b=8.0 / 3.0, r=28.0), 0.0, 0.5, x0 + delta)
        return evolve(proc, ParameterPoint.of(sigma=10.0 + delta, b=8.0 / 3.0, r=28.0), 0.0, 0.5, x0)

    ratios = _difference_ratios(evolve_with, [1e-3, 1e-4, 1e-5])

    assert all(math.isfinite(ratio) and ratio > 0.0 for ratio in ratios)
    assert max(ratios) <= 1.5 * min(ratios)


def test_blow_up_is_reported_with_exit_time():
    proc = ProcessDef(1, _square_field, guard_radius=100.0, name="square")

    with pytest.raises(BlowUpError) as exc_info:
        evolve(proc, ParameterPoint(), 0.0, 2.0, [1.0])

    assert exc_info.value.code == "blow_up"
    assert exc_info.value.time == pytest.approx(0.99, abs=1e-3)


def test_sample_trajectory_returns_every_sample_time():
    times = [0.0, 0.5, 1.0]

    states = sample_trajectory(DECAY, RATE_ONE, times, [1.0])

    assert states.shape == (3, 1)
    assert states[:, 0] == pytest.approx(np.exp(-np.array(times)), rel=1e-8)


def test_sample_trajectory_requires_increasing_times():
    with pytest.raises(ValueError):
        sample_trajectory(DECAY, RATE_ONE, [0.0, 0.0], [1.0])


def test_evolve_points_is_independent_of_thread_count():
    points = np.linspace(-1.0, 1.0, 37).reshape(-1, 1)

    serial = evolve_points(DECAY, RATE_ONE, 0.0, 1.0, points, batch_size=5, threads=1)
    threaded = evolve_points(DECAY, RATE_ONE, 0.0, 1.0, points, batch_size=5, threads=4)

    assert np.array_equal(serial.points, threaded.points)
    assert serial.dropped == threaded.dropped == 0


def test_evolve_points_drop_policy_counts_failures():
    proc = ProcessDef(1, _square_field, guard_radius=100.0)
    points = np.array([[1.0], [-0.5], [0.1]])

    evolved = evolve_points(proc, ParameterPoint(), 0.0, 2.0, points, policy=BlowUpPolicy.DROP)

    assert evolved.dropped == 1
    assert evolved.points.shape == (2, 1)


def test_evolve_points_abort_policy_raises():
    proc = ProcessDef(1, _square_field, guard_radius=100.0)

    with pytest.raises(BlowUpError):
        evolve_points(proc, ParameterPoint(), 0.0, 2.0, [[1.0], [0.1]])


def test_evolve_cloud_raises_when_every_point_is_dropped():
    proc = ProcessDef(1, _square_field, guard_radius=100.0)

    with pytest.raises(BlowUpError):
        evolve_cloud(proc, ParameterPoint(), 0.0, 2.0, PointCloud([[1.0], [2.0]]), policy=BlowUpPolicy.DROP)


def test_evolve_cloud_contracts_and_merges():
    cloud = PointCloud(np.linspace(-1.0, 1.0, 21))

    image = evolve_cloud(DECAY, ParameterPoint.of(rate=5.0), 0.0, 4.0, cloud, merge_radius=1e-6)

    assert len(image) == 1
    assert image.resolution == 1e-6
    assert abs(image.points[0, 0]) < 1e-6


def test_evolve_cloud_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        evolve_cloud(DECAY, RATE_ONE, 0.0, 1.0, PointCloud([[0.0, 0.0]]))
