"""Adaptive oscillation control: watch the wavelet high-pass measure and
apply the conjugated low-pass filter when it jumps.

After every time step the measure of the new field is compared with the
measure of the previous one. An increase of at least ``eta`` triggers one
pass of :func:`~cfor.grid.conjugate_lowpass` over the whole field.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .grid import Field, conjugate_lowpass
from .kernels import KernelSpec
from .solver import ProblemSpec, SolverState, run
from .wavelets import CDF97, WaveletFilterBank, highpass_measure

__all__ = [
    "CforController",
    "CalibrationError",
    "check_and_filter",
    "step_increments",
    "calibrate_eta",
    "DEFAULT_SAFETY_FACTOR",
]

log = logging.getLogger(__name__)

DEFAULT_SAFETY_FACTOR = 5.0


class CalibrationError(ValueError):
    pass


@dataclass
class CforController:
    """Stateful trigger for one run.

    Parameters
    ----------
    eta : float
        Alarm threshold on the step-to-step increase of the measure.
    lowpass_spec : KernelSpec
        Order-0 kernel for the smoothing filter; its ``delta`` must match
        the run's grid spacing.
    max_applications : int
        Filter passes per triggered step (1 = filter once).
    """

    eta: float
    lowpass_spec: KernelSpec
    bank: WaveletFilterBank = CDF97
    scales: int = 3
    max_applications: int = 1
    last_measure: Optional[float] = None
    event_log: list = field(default_factory=list)

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta!r}")
        if self.lowpass_spec.order != 0:
            raise ValueError("the smoothing filter must be an order-0 kernel")
        if self.max_applications < 1:
            raise ValueError("max_applications must be >= 1")

    @classmethod
    def for_grid(cls, eta: float, delta: float, sigma_ratio: float = 3.2,
                 half_width: int = 35, **kwargs) -> "CforController":
        return cls(eta, KernelSpec(delta, sigma_ratio, half_width, 0), **kwargs)

    def reset(self) -> None:
        self.last_measure = None
        self.event_log = []

    def measure(self, fld: Field) -> float:
        return highpass_measure(fld, self.bank, self.scales).total

    def observe(self, state: SolverState) -> float:
        """Record the measure of ``state`` without filtering."""
        self.last_measure = self.measure(state.field)
        return self.last_measure

    def check_and_filter(self, state: SolverState) -> tuple[SolverState, bool]:
        current = self.measure(state.field)
        previous = self.last_measure
        if previous is None or current - previous < self.eta:
            self.last_measure = current
            return state, False

        fld = state.field
        for _ in range(self.max_applications):
            fld = conjugate_lowpass(fld, self.lowpass_spec)
        after = self.measure(fld)
        self.event_log.append((state.t, current, after))
        self.last_measure = after
        log.debug("filter triggered at t=%.6g: measure %.4g -> %.4g", state.t, current, after)
        return SolverState(state.t, fld), True


def check_and_filter(state: SolverState, controller: CforController
                     ) -> tuple[SolverState, bool]:
    return controller.check_and_filter(state)


def step_increments(problem: ProblemSpec, controller: CforController,
                    initial: Optional[Field] = None) -> list:
    """Per-step measure increments of an unfiltered run of ``problem``."""
    probe = replace(controller, eta=math.inf, last_measure=None, event_log=[])
    trace = run(problem, probe, initial=initial)
    m = trace.measures
    return [b - a for a, b in zip(m[:-1], m[1:])]


def calibrate_eta(problem: ProblemSpec, controller_template: CforController,
                  smooth_reference: ProblemSpec | None = None,
                  safety_factor: float = DEFAULT_SAFETY_FACTOR,
                  initial: Optional[Field] = None) -> float:
    """Alarm threshold from a resolvable reference run.

    The reference (by default ``problem`` at Re=100) is run without
    filtering; the largest per-step increase of the measure, times
    ``safety_factor``, is returned. ``initial`` overrides the reference
    run's initial field.
    """
    if smooth_reference is None:
        smooth_reference = replace(problem, reynolds=100.0)
    if smooth_reference.grid != problem.grid:
        log.warning("calibrating on a different grid than the target problem")
    incs = step_increments(smooth_reference, controller_template, initial)
    delta_max = max(incs, default=0.0)
    if not delta_max > 0:
        raise CalibrationError(
            "reference run never increased the high-pass measure; cannot calibrate eta")
    return safety_factor * delta_max
