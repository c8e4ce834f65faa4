"""Burgers' equation with conjugated DSC filters and wavelet-triggered
oscillation control."""

from .controller import CforController, CalibrationError, calibrate_eta, check_and_filter
from .diagnostics import fourier_image, total_variation
from .exact import ErrorReport, ExactSolutionSpec, cole_exact, error_norms, inviscid_exact
from .grid import Field, Grid, NonFiniteError, apply_taps, conjugate_lowpass, extend_odd
from .kernels import FilterTaps, FrequencyResponse, KernelSpec, build_taps, eval_kernel, frequency_response
from .solver import (
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
from .wavelets import (
    CDF97,
    HighPassMeasure,
    MultiscaleDecomposition,
    WaveletFilterBank,
    dwt_forward,
    dwt_inverse,
    highpass_measure,
)

__version__ = "0.1.0"

__all__ = [
    "CforController",
    "CalibrationError",
    "calibrate_eta",
    "check_and_filter",
    "fourier_image",
    "total_variation",
    "ErrorReport",
    "ExactSolutionSpec",
    "cole_exact",
    "error_norms",
    "inviscid_exact",
    "Field",
    "Grid",
    "NonFiniteError",
    "apply_taps",
    "conjugate_lowpass",
    "extend_odd",
    "FilterTaps",
    "FrequencyResponse",
    "KernelSpec",
    "build_taps",
    "eval_kernel",
    "frequency_response",
    "INVISCID",
    "BlowUpError",
    "ProblemSpec",
    "RunTrace",
    "SolverState",
    "initial_condition",
    "rhs",
    "rk4_step",
    "run",
    "CDF97",
    "HighPassMeasure",
    "MultiscaleDecomposition",
    "WaveletFilterBank",
    "dwt_forward",
    "dwt_inverse",
    "highpass_measure",
]
