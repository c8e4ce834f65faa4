"""Scalar and spectral diagnostics for Burgers fields."""

from __future__ import annotations

import numpy as np

from .grid import Field
from .kernels import FrequencyResponse


def total_variation(field) -> float:
    u = np.asarray(field.values if isinstance(field, Field) else field)
    return float(np.sum(np.abs(np.diff(u))))


def fourier_image(field: Field, normalize: bool = True) -> FrequencyResponse:
    """Discrete Fourier magnitude of the antisymmetric extension onto ``[0, 2]``.

    The extension has period ``2(N-1)`` samples, so bin ``k`` sits at
    ``omega = k / (N-1)`` in units of ``pi/delta`` and the last bin is
    the Nyquist frequency. ``sin(pi x)`` lands entirely in bin 1.
    """
    u = np.asarray(field.values, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("field has non-finite values")
    n = len(u)
    periodic = np.concatenate([u, -u[-2:0:-1]])
    mag = np.abs(np.fft.rfft(periodic))
    omega = np.arange(len(mag)) / (n - 1)
    if normalize and mag.max() > 0:
        mag = mag / mag.max()
    return FrequencyResponse(omega, mag, normalize, field.grid.spacing)


def band_peak(image: FrequencyResponse, lo: float, hi: float = 1.0) -> float:
    """Largest magnitude with ``lo <= omega <= hi`` (``omega`` in units of pi/delta)."""
    sel = (image.omega >= lo) & (image.omega <= hi)
    return float(image.magnitude[sel].max())


def steepest_descent_location(field: Field) -> float:
    """Midpoint of the cell with the most negative slope (the shock)."""
    u = field.values
    k = int(np.argmin(np.diff(u)))
    return float(0.5 * (field.x[k] + field.x[k + 1]))
