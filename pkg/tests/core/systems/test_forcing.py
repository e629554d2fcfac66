from __future__ import annotations

import math

import numpy as np
import pytest

from core.systems.forcing import ForcingR, SinusoidTerm


def test_sinusoid_forcing_evaluates_value_and_derivative():
    forcing = ForcingR.sinusoids([(2.0, 3.0, 0.5)], offset=1.0)

    assert forcing.r_fn(0.2) == pytest.approx(1.0 + 2.0 * math.sin(0.6 + 0.5))
    assert forcing.r_prime_fn(0.2) == pytest.approx(6.0 * math.cos(0.6 + 0.5))


def test_sinusoid_forcing_accepts_arrays():
    forcing = ForcingR.sinusoids([SinusoidTerm(1.0, 1.0)])
    times = np.array([0.0, math.pi / 2.0])

    assert forcing.r_fn(times) == pytest.approx([0.0, 1.0])


def test_computed_bound_covers_value_and_derivative():
    forcing = ForcingR.sinusoids([(1.0, 2.0), (0.5, 0.5)], offset=-0.25)

    assert forcing.R0 == pytest.approx(0.25 + 2.0 + 0.5)
    assert forcing.check_on_grid(0.0, 20.0)


def test_explicit_bound_that_is_too_small_fails_grid_check():
    forcing = ForcingR.sinusoids([(1.0, 1.0)], R0=0.5)

    assert forcing.check_on_grid(0.0, 10.0) is False


def test_negative_bound_is_rejected():
    with pytest.raises(ValueError):
        ForcingR.constant(1.0).__class__(lambda t: t, lambda t: t, -1.0)


def test_constant_forcing_has_no_period():
    forcing = ForcingR.constant(28.0)

    assert forcing.r_fn(5.0) == pytest.approx(28.0)
    assert forcing.r_prime_fn(5.0) == pytest.approx(0.0)
    assert forcing.common_period() is None


def test_common_period_of_commensurate_terms():
    forcing = ForcingR.sinusoids([(1.0, 1.0), (1.0, 2.0)])

    assert forcing.common_period() == pytest.approx(2.0 * math.pi)


def test_common_period_of_incommensurate_terms_is_infinite():
    forcing = ForcingR.sinusoids([(1.0, 1.0), (1.0, math.sqrt(2.0))])

    assert forcing.common_period() == math.inf


def test_to_dict_lists_terms():
    data = ForcingR.sinusoids([(1.0, 2.0, 0.0)], offset=0.5).to_dict()

    assert data["offset"] == 0.5
    assert data["terms"] == [{"amplitude": 1.0, "frequency": 2.0, "phase": 0.0}]
