import numpy as np
import pytest

from shuttlesim.dynamics.tuning import optimize_pulse


def test_quadratic_minimum():
    res = optimize_pulse(lambda p: (p[0] - 3.0) ** 2, [0.0], budget=200)
    assert res.params[0] == pytest.approx(3.0, abs=1e-4)
    assert res.improved


def test_already_at_optimum_returns_start():
    res = optimize_pulse(lambda p: p[0] ** 2, [0.0], budget=100)
    assert abs(res.params[0]) < 1e-6


def test_no_improvement_flagged():
    # objective is flat: nothing can improve on the start
    res = optimize_pulse(lambda p: 1.0, [0.5], budget=30)
    assert not res.improved
    assert res.params[0] == 0.5


def test_best_so_far_trace_monotone():
    rng = np.random.default_rng(0)

    def bumpy(p):
        return float(np.sin(5 * p[0]) + 0.1 * p[0] ** 2)

    res = optimize_pulse(bumpy, [rng.uniform(-2, 2)], budget=150)
    assert np.all(np.diff(res.trace) <= 1e-15)


def test_bounds_clipped():
    seen = []

    def obj(p):
        seen.append(p.copy())
        return (p[0] - 10.0) ** 2

    res = optimize_pulse(obj, [0.0], bounds=[(-1.0, 2.0)], budget=100)
    assert all(-1.0 <= p[0] <= 2.0 for p in seen)
    assert res.params[0] == pytest.approx(2.0, abs=1e-3)


def test_budget_respected():
    count = {"n": 0}

    def obj(p):
        count["n"] += 1
        return (p[0] - 1.0) ** 2

    optimize_pulse(obj, [0.0], budget=25)
    assert count["n"] <= 25


def test_two_parameter_convergence():
    res = optimize_pulse(lambda p: (p[0] - 1) ** 2 + (p[1] + 2) ** 2, [0.0, 0.0], budget=400)
    assert res.params == pytest.approx([1.0, -2.0], abs=1e-3)
