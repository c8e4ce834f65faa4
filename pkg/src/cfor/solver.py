"""Method-of-lines Burgers solver with classical RK4 time stepping.

Solves ``u_t + u u_x = (1/Re) u_xx`` on ``[0, 1]`` with ``u(x, 0) = sin(pi x)``
and homogeneous Dirichlet data. Spatial derivatives are DSC high-pass
filters applied over the odd extension of the field.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .grid import Field, Grid, NonFiniteError, apply_taps
from .kernels import FilterTaps, KernelSpec, build_taps

if TYPE_CHECKING:
    from .controller import CforController

__all__ = [
    "INVISCID",
    "BLOWUP_THRESHOLD",
    "BlowUpError",
    "ProblemSpec",
    "SolverState",
    "RunTrace",
    "initial_condition",
    "rhs",
    "rk4_step",
    "run",
]

log = logging.getLogger(__name__)

#: Marker for the inviscid equation (diffusion term dropped).
INVISCID = math.inf

#: Any ``|u|`` above this aborts the run.
BLOWUP_THRESHOLD = 1e3


class BlowUpError(NonFiniteError):
    """Raised when the solution becomes non-finite or exceeds
    ``BLOWUP_THRESHOLD``. Carries the time, node index and, when raised
    from :func:`run`, the partial trace."""

    def __init__(self, message, t=None, index=None, trace=None):
        super().__init__(message, index=index)
        self.t = t
        self.trace = trace


@dataclass(frozen=True)
class ProblemSpec:
    """One Burgers run.

    ``reynolds=INVISCID`` (``math.inf``) selects the inviscid equation.
    Both derivative filters share ``half_width`` and ``sigma_ratio``.
    """

    reynolds: float = 100.0
    grid: Grid = field(default_factory=lambda: Grid(41))
    dt: float = 0.01
    t_final: float = 1.0
    half_width: int = 35
    sigma_ratio: float = 4.5
    conservative: bool = False

    def __post_init__(self):
        if not self.reynolds > 0:
            raise ValueError(f"Reynolds number must be positive, got {self.reynolds!r}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")

    @property
    def inviscid(self) -> bool:
        return math.isinf(self.reynolds)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @property
    def deriv_spec_1(self) -> KernelSpec:
        return KernelSpec(self.grid.spacing, self.sigma_ratio, self.half_width, 1)

    @property
    def deriv_spec_2(self) -> KernelSpec:
        return KernelSpec(self.grid.spacing, self.sigma_ratio, self.half_width, 2)

    def taps(self) -> tuple[FilterTaps, Optional[FilterTaps]]:
        return _taps(self.deriv_spec_1, None if self.inviscid else self.deriv_spec_2)


_TAPS_CACHE: dict = {}


def _taps(spec1, spec2):
    key = (spec1, spec2)
    if key not in _TAPS_CACHE:
        _TAPS_CACHE[key] = (build_taps(spec1), build_taps(spec2) if spec2 else None)
    return _TAPS_CACHE[key]


@dataclass(frozen=True)
class SolverState:
    t: float
    field: Field

    @property
    def u(self) -> np.ndarray:
        return self.field.values


@dataclass
class RunTrace:
    """Everything recorded during one run.

    ``snapshots`` maps requested time -> (actual step time, Field).
    ``measures``/``measure_times`` are the per-step high-pass measures
    when a controller is attached; ``events`` are its trigger records
    ``(t, measure_before, measure_after)``. ``peak_abs`` is the largest
    ``|u|`` seen at any completed step, reached at ``peak_time``.
    """

    problem: ProblemSpec
    snapshots: dict = field(default_factory=dict)
    measure_times: list = field(default_factory=list)
    measures: list = field(default_factory=list)
    events: list = field(default_factory=list)
    final: Optional[SolverState] = None
    completed: bool = False
    failure: Optional[str] = None
    peak_abs: float = 0.0
    peak_time: float = 0.0

    def snapshot(self, t: float) -> Field:
        """Field recorded for the requested time ``t``."""
        for key, (_, fld) in self.snapshots.items():
            if math.isclose(key, t, rel_tol=0, abs_tol=1e-12):
                return fld
        raise KeyError(f"no snapshot requested at t={t}")

    def summary(self) -> dict:
        p = self.problem
        out = {
            "reynolds": "inf" if p.inviscid else p.reynolds,
            "n_points": p.grid.n_points,
            "dt": p.dt,
            "t_final": p.t_final,
            "w": p.half_width,
            "sigma_deriv": p.sigma_ratio,
            "conservative": p.conservative,
            "completed": self.completed,
            "n_events": len(self.events),
            "trigger_times": [float(f"{e[0]:.12g}") for e in self.events],
            "snapshot_times": [v[0] for v in self.snapshots.values()],
            "peak_max_abs": self.peak_abs,
            "peak_time": self.peak_time,
        }
        if self.final is not None:
            u = self.final.u
            out["t_reached"] = self.final.t
            out["final_max_abs"] = float(np.max(np.abs(u)))
            out["final_l2"] = float(np.sqrt(np.mean(u**2)))
            out["final_total_variation"] = float(np.sum(np.abs(np.diff(u))))
        if self.failure:
            out["failure"] = self.failure
        return out

    def write(self, out_dir, prefix="snapshot") -> list:
        """Write one ``x,u`` CSV per snapshot, the summary and the event log."""
        from pathlib import Path

        from .io import write_csv, write_keyvalue

        out_dir = Path(out_dir)
        paths = []
        for t_req, (_, fld) in sorted(self.snapshots.items()):
            paths.append(write_csv(out_dir / f"{prefix}_t{t_req:g}.csv", ["x", "u"],
                                   [fld.x, fld.values]))
        paths.append(write_keyvalue(out_dir / "summary.txt", self.summary()))
        ev = np.array(self.events, dtype=float).reshape(-1, 3)
        paths.append(write_csv(out_dir / "events.csv", ["t", "measure_before", "measure_after"],
                               ev.T if len(ev) else [[], [], []]))
        return paths


def initial_condition(grid: Grid) -> Field:
    """``sin(pi x)`` at the nodes, with exact zeros at both ends."""
    u = np.sin(np.pi * grid.x)
    u[0] = 0.0
    u[-1] = 0.0
    return Field(grid, u)


def _rhs_values(u, t, problem, taps1, taps2):
    fld = Field(problem.grid, u)
    if problem.conservative:
        # the flux of an odd field is even about each boundary
        ux_term = apply_taps(Field(problem.grid, 0.5 * u * u), taps1, "even").values
    else:
        ux_term = u * apply_taps(fld, taps1).values
    out = -ux_term
    if taps2 is not None:
        out = out + apply_taps(fld, taps2).values / problem.reynolds
    bad = ~np.isfinite(out)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise BlowUpError(f"non-finite right-hand side at t={t}, node {idx}", t=t, index=idx)
    return out


def rhs(state: SolverState, problem: ProblemSpec) -> Field:
    """``-u D1 u + (1/Re) D2 u`` (or ``-D1(u^2/2) + ...`` in conservative form)."""
    taps1, taps2 = problem.taps()
    try:
        values = _rhs_values(state.u, state.t, problem, taps1, taps2)
    except NonFiniteError as exc:
        if isinstance(exc, BlowUpError):
            raise
        raise BlowUpError(f"non-finite field at t={state.t}", t=state.t, index=exc.index) from exc
    return Field(problem.grid, values)


def rk4_step(state: SolverState, problem: ProblemSpec) -> SolverState:
    """One classical four-stage Runge-Kutta step; boundary nodes re-pinned to 0."""
    taps1, taps2 = problem.taps()
    dt = problem.dt
    t = state.t
    u = state.u
    try:
        k1 = _rhs_values(u, t, problem, taps1, taps2)
        k2 = _rhs_values(u + 0.5 * dt * k1, t + 0.5 * dt, problem, taps1, taps2)
        k3 = _rhs_values(u + 0.5 * dt * k2, t + 0.5 * dt, problem, taps1, taps2)
        k4 = _rhs_values(u + dt * k3, t + dt, problem, taps1, taps2)
    except BlowUpError:
        raise
    except NonFiniteError as exc:
        raise BlowUpError(f"non-finite stage value near t={t}", t=t, index=exc.index) from exc
    new = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    new[0] = 0.0
    new[-1] = 0.0
    _check_blowup(new, t + dt)
    return SolverState(t + dt, Field(problem.grid, new))


def _check_blowup(u, t):
    bad = ~np.isfinite(u) | (np.abs(u) > BLOWUP_THRESHOLD)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise BlowUpError(f"solution blew up at t={t:.6g}, node {idx} (u={u[idx]!r})",
                          t=t, index=idx)


def run(problem: ProblemSpec, controller: "Optional[CforController]" = None,
        snapshot_times: Sequence[float] = (), initial: Optional[Field] = None) -> RunTrace:
    """Integrate from ``t=0`` to ``problem.t_final``.

    The controller, if given, is reset and then consulted after every
    step. Snapshots are taken at the completed step nearest to each
    requested time. On blow-up the :class:`BlowUpError` carries the
    partial trace in its ``trace`` attribute.
    """
    n_steps = problem.n_steps
    targets = {}
    for t_req in snapshot_times:
        if t_req < -1e-12 or t_req > problem.t_final + 1e-12:
            raise ValueError(f"snapshot time {t_req} outside [0, {problem.t_final}]")
        targets.setdefault(int(round(t_req / problem.dt)), []).append(float(t_req))

    trace = RunTrace(problem)
    fld = initial if initial is not None else initial_condition(problem.grid)
    state = SolverState(0.0, fld)

    def record(step, st):
        peak = float(np.max(np.abs(st.u)))
        if peak > trace.peak_abs:
            trace.peak_abs, trace.peak_time = peak, st.t
        for t_req in targets.get(step, ()):
            trace.snapshots[t_req] = (st.t, st.field)

    if controller is not None:
        controller.reset()
        m0 = controller.observe(state)
        trace.measure_times.append(0.0)
        trace.measures.append(m0)
    record(0, state)

    for step in range(1, n_steps + 1):
        try:
            new = rk4_step(state, problem)
            # t from the step count keeps snapshot times free of drift
            new = SolverState(step * problem.dt, new.field)
            if controller is not None:
                new, _ = controller.check_and_filter(new)
                trace.measure_times.append(new.t)
                trace.measures.append(controller.last_measure)
        except BlowUpError as exc:
            trace.final = state
            trace.failure = str(exc)
            if controller is not None:
                trace.events = list(controller.event_log)
            exc.trace = trace
            log.warning("run aborted: %s", exc)
            raise
        state = new
        record(step, state)

    trace.final = state
    trace.completed = True
    if controller is not None:
        trace.events = list(controller.event_log)
    return trace
