import math

import numpy as np
import pytest

from cfor.exact import ExactSolutionSpec, error_norms
from cfor.grid import Field, Grid
from cfor.solver import (
    INVISCID,
    BlowUpError,
    ProblemSpec,
    RunTrace,
    SolverState,
    initial_condition,
    rhs,
    rk4_step,
    run,
)


def test_initial_condition_examples():
    assert initial_condition(Grid(3)).values.tolist() == [0.0, 1.0, 0.0]
    u = initial_condition(Grid(41))
    assert u.values[10] == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    for n in (4, 41, 64, 101):
        v = initial_condition(Grid(n))
        assert v.values.max() <= 1.0
        assert abs(v.x[np.argmax(v.values)] - 0.5) <= 0.5 * v.grid.spacing + 1e-15


def test_problem_validation():
    with pytest.raises(ValueError):
        ProblemSpec(reynolds=-1)
    with pytest.raises(ValueError):
        ProblemSpec(dt=0)
    with pytest.raises(ValueError):
        ProblemSpec(t_final=-1)
    assert ProblemSpec(reynolds=INVISCID).inviscid
    assert ProblemSpec(t_final=0.4, dt=0.01).n_steps == 40


def test_rhs_zero():
    p = ProblemSpec()
    out = rhs(SolverState(0.0, Field(p.grid, np.zeros(41))), p)
    assert np.all(out.values == 0.0)


@pytest.mark.parametrize("re", [INVISCID, 100.0])
def test_rhs_of_sine(re):
    p = ProblemSpec(reynolds=re)
    x = p.grid.x
    out = rhs(SolverState(0.0, initial_condition(p.grid)), p).values
    want = -0.5 * np.pi * np.sin(2 * np.pi * x)
    if math.isfinite(re):
        want = want - np.pi**2 / re * np.sin(np.pi * x)
    assert np.max(np.abs(out - want)) <= 1e-8


def test_conservative_rhs_agrees_for_smooth_data():
    p = ProblemSpec(reynolds=100.0, conservative=True)
    state = SolverState(0.0, initial_condition(p.grid))
    out = rhs(state, p).values
    want = -0.5 * np.pi * np.sin(2 * np.pi * p.grid.x) - np.pi**2 / 100 * np.sin(np.pi * p.grid.x)
    assert np.max(np.abs(out - want)) <= 1e-7


def test_rk4_fixed_point():
    p = ProblemSpec()
    s = rk4_step(SolverState(0.0, Field(p.grid, np.zeros(41))), p)
    assert np.all(s.u == 0.0)
    assert s.t == pytest.approx(0.01)


def test_rk4_linear_order():
    # tiny amplitude: the lowest mode decays as exp(-pi^2 t / Re)
    re = 100.0
    lam = -np.pi**2 / re
    errs = []
    for dt in (0.4, 0.2):
        p = ProblemSpec(reynolds=re, dt=dt)
        u0 = 1e-9 * initial_condition(p.grid).values
        s = rk4_step(SolverState(0.0, Field(p.grid, u0)), p)
        errs.append(abs(s.u[20] / u0[20] - math.exp(lam * dt)))
    # local error of RK4 is O(dt^5)
    assert errs[0] / errs[1] == pytest.approx(32, rel=0.15)


def test_boundaries_pinned_each_step():
    p = ProblemSpec(reynolds=1e5, grid=Grid(64), dt=0.001, t_final=0.05)
    s = SolverState(0.0, initial_condition(p.grid))
    for _ in range(50):
        s = rk4_step(s, p)
        assert s.u[0] == 0.0 and s.u[-1] == 0.0


def test_late_time_decay_rate():
    from cfor.exact import cole_exact

    p = ProblemSpec(reynolds=100.0, t_final=90.0)
    tr = run(p, snapshot_times=(10.0, 20.0, 60.0, 90.0))

    def rate(t0, t1, values):
        return -math.log(values(t1) / values(t0)) / (t1 - t0)

    num = lambda t: tr.snapshot(t).values[20]  # noqa: E731
    exact = lambda t: cole_exact(0.5, t)  # noqa: E731
    # nonlinear coupling still shifts the rate at t~10; match the exact one
    assert rate(10, 20, num) == pytest.approx(rate(10, 20, exact), rel=1e-6)
    # once the amplitude is small the linear rate pi^2/Re takes over
    assert rate(60, 90, num) == pytest.approx(np.pi**2 / 100, rel=1e-3)


def test_run_t_final_zero():
    p = ProblemSpec(t_final=0.0)
    tr = run(p, snapshot_times=(0.0,))
    assert tr.completed
    assert tr.final.t == 0.0
    assert np.array_equal(tr.final.u, initial_condition(p.grid).values)
    assert list(tr.snapshots) == [0.0]


def test_run_rejects_snapshot_outside_range():
    with pytest.raises(ValueError):
        run(ProblemSpec(t_final=0.1), snapshot_times=(0.2,))


def test_table1_first_row_order_of_magnitude():
    p = ProblemSpec(t_final=0.4)
    tr = run(p, snapshot_times=(0.4,))
    rep = error_norms(tr.snapshot(0.4), 0.4, ExactSolutionSpec(100))
    assert 2.4e-3 / 5 <= rep.l_inf <= 2.4e-3 * 5


def test_determinism():
    p = ProblemSpec(reynolds=1e5, grid=Grid(64), dt=0.001, t_final=0.1)
    a = run(p).final.u
    b = run(p).final.u
    assert np.array_equal(a, b)


def test_max_norm_non_increasing_after_half():
    p = ProblemSpec(reynolds=100.0, t_final=3.0)
    times = np.round(np.arange(0.5, 3.0001, 0.1), 10)
    tr = run(p, snapshot_times=tuple(times))
    peaks = [np.abs(tr.snapshot(t).values).max() for t in times]
    assert all(b <= a + 1e-12 for a, b in zip(peaks, peaks[1:]))


def test_time_step_halving_order():
    sols = []
    for dt in (0.01, 0.005, 0.0025):
        sols.append(run(ProblemSpec(reynolds=100.0, dt=dt, t_final=1.0)).final.u)
    e1 = np.max(np.abs(sols[0] - sols[1]))
    e2 = np.max(np.abs(sols[1] - sols[2]))
    assert math.log2(e1 / e2) >= 3.5


def test_blowup_carries_partial_trace():
    # far too large a step for the diffusion term
    p = ProblemSpec(reynolds=100.0, grid=Grid(64), dt=0.01, t_final=1.0)
    with pytest.raises(BlowUpError) as err:
        run(p, snapshot_times=(0.1,))
    tr = err.value.trace
    assert isinstance(tr, RunTrace)
    assert not tr.completed
    assert 0.1 in tr.snapshots
    assert err.value.t is not None and err.value.t < 1.0


def test_summary_and_write(tmp_path):
    from cfor.io import read_keyvalue

    tr = run(ProblemSpec(t_final=0.1), snapshot_times=(0.05, 0.1))
    tr.write(tmp_path)
    kv = read_keyvalue(tmp_path / "summary.txt")
    assert kv["completed"] == "true"
    assert (tmp_path / "snapshot_t0.05.csv").exists()
    assert (tmp_path / "events.csv").read_text().startswith("t,measure_before,measure_after")
    assert tr.peak_abs == pytest.approx(1.0, abs=1e-3)
