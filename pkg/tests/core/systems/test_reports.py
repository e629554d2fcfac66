from __future__ import annotations

import numpy as np
import pytest

from core.systems.reports import BOUND_COLUMNS, BoundCheck, BoundReport


def test_evaluate_counts_violations_beyond_slack():
    times = np.array([0.0, 1.0, 2.0])

    check = BoundCheck.evaluate("demo", times, np.array([0.5, 1.0, 1.5]), 1.0, rel_tol=1e-9)

    assert check.held is False
    assert check.violations == 1
    assert check.tight == 1
    assert check.first_violation_time == 2.0
    assert check.min_margin == pytest.approx(-0.5)


def test_evaluate_treats_integrator_noise_as_tight():
    check = BoundCheck.evaluate("noise", np.array([0.0]), np.array([1.0 + 1e-10]), 1.0, rel_tol=1e-9)

    assert check.held
    assert check.tight == 1


def test_evaluate_counts_nan_as_violation():
    check = BoundCheck.evaluate("nan", np.array([0.0, 1.0]), np.array([0.0, np.nan]), 1.0, rel_tol=1e-9)

    assert check.violations == 1


def test_evaluate_requires_samples():
    with pytest.raises(ValueError):
        BoundCheck.evaluate("empty", np.array([]), np.array([]), 1.0, rel_tol=1e-9)


def test_report_extend_prefixes_names_and_constants():
    inner = BoundReport(constants={"R1": 2.0})
    inner.checks.append(BoundCheck.evaluate("a", np.array([0.0]), np.array([0.0]), 1.0, 1e-9))

    outer = BoundReport().extend(inner, prefix="trial/")

    assert outer.check("trial/a").held
    assert outer.constants == {"trial/R1": 2.0}
    assert list(outer.to_frame().columns) == BOUND_COLUMNS
    with pytest.raises(KeyError):
        outer.check("a")
