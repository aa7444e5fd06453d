import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nscs.optimizer import OptimizerConfig, best_run, maximize, nelder_mead, run_all


def test_quadratic():
    cfg = OptimizerConfig(starts=[(0.0, 0.0, 0.0)])
    res = maximize(lambda x: -float(np.sum((x - np.array([1.0, 2.0, 3.0])) ** 2)), cfg)
    assert np.allclose(res.point, (1, 2, 3), atol=1e-6)
    assert res.value == pytest.approx(0.0, abs=1e-6)
    assert res.converged


def test_constant_objective():
    res = maximize(lambda x: 0.7, OptimizerConfig(starts=[(0.3, -1.0, 2.0)]))
    assert res.value == 0.7
    assert res.converged


def test_sine_sum_with_grid_starts():
    grid = [0.5, 2.5, 4.5]
    starts = [(a, b, c) for a in grid for b in grid for c in grid]
    res = maximize(lambda x: float(np.sin(x).sum()), OptimizerConfig(starts=starts))
    assert res.value == pytest.approx(3.0, abs=1e-6)
    assert np.allclose(np.mod(res.point, 2 * math.pi), math.pi / 2, atol=1e-3)


def test_non_convergence_is_flagged():
    cfg = OptimizerConfig(starts=[(5.0, 5.0)], max_iterations=3)
    res = maximize(lambda x: -float(x @ x), cfg)
    assert not res.converged


def test_iteration_cap_and_counts():
    run = nelder_mead(lambda x: -float(x @ x), (1.0, 1.0), max_iterations=10)
    assert run.iterations == 10
    assert run.evaluations >= 13


@settings(max_examples=25, deadline=None)
@given(
    center=st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
    start=st.tuples(st.floats(-3, 3), st.floats(-3, 3)),
)
def test_monotone_history_and_start_dominance(center, start):
    c = np.array(center)

    def f(x):
        d = x - c
        return float(np.cos(d[0]) * np.cos(d[1]) - 0.1 * d @ d)

    run = nelder_mead(f, start, record=True)
    history = np.array(run.best_history)
    assert np.all(np.diff(history) >= 0)
    assert run.value >= f(np.array(start))
    assert run.value == f(np.array(run.point))


def test_determinism():
    cfg = OptimizerConfig(starts=[(0.1, 0.2), (1.0, -1.0)])

    def f(x):
        return float(np.sin(3 * x[0]) * np.cos(2 * x[1]) - 0.01 * x @ x)

    assert maximize(f, cfg) == maximize(f, cfg)


def test_ties_break_to_smallest_point():
    runs = run_all(lambda x: 1.0, OptimizerConfig(starts=[(2.0,), (1.0,), (3.0,)]))
    assert best_run(runs).point[0] == pytest.approx(1.0, abs=1e-9) or best_run(runs).point < runs[0].point


def test_best_run_custom_key():
    runs = run_all(lambda x: 1.0, OptimizerConfig(starts=[(2.0,), (-1.0,)]))
    assert best_run(runs, key=lambda r: (abs(r.point[0]),)).start == (-1.0,)


def test_non_finite_objective():
    with pytest.raises(FloatingPointError):
        maximize(lambda x: math.nan, OptimizerConfig(starts=[(0.0,)]))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(starts=[]),
        dict(starts=[(0.0,), (0.0, 1.0)]),
        dict(starts=[tuple(range(9))]),
        dict(starts=[(0.0,)], simplex_scale=0.0),
        dict(starts=[(0.0,)], tolerance=0.0),
        dict(starts=[(0.0,)], max_iterations=0),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        OptimizerConfig(**kwargs)
