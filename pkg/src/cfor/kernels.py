"""Regularized Shannon (DSC) kernels and their sampled filter taps.

The low-pass kernel is a sinc of bandwidth ``pi/delta`` damped by a
Gaussian of width ``sigma``; the first- and second-order high-pass
kernels are its exact derivatives. All three share one generating
function, so they share regularity and effective bandwidth.

Everything is evaluated in the scaled variable ``r = x / delta`` so that
grid points map to integers and the sinc zeros come out exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "KernelSpec",
    "FilterTaps",
    "FrequencyResponse",
    "eval_kernel",
    "build_taps",
    "frequency_response",
    "SERIES_RADIUS",
]

#: Below ``|x| < SERIES_RADIUS * delta`` the sinc factor and its
#: derivatives come from their power series. The closed-form derivatives
#: lose ``~eps / r^n`` relative accuracy near the origin, so the switch
#: sits well above the point where that loss becomes visible.
SERIES_RADIUS = 0.15

Centering = Literal["on_grid", "half_grid"]


@dataclass(frozen=True)
class KernelSpec:
    """Parameters of one conjugated filter.

    Parameters
    ----------
    delta : float
        Grid spacing.
    sigma_ratio : float
        Regularization width in grid cells, ``sigma / delta``. Must be >= 1.
    half_width : int
        Stencil half-width ``W``; taps run over offsets ``-W..W``.
    order : int
        Derivative order: 0 (low-pass), 1 or 2 (high-pass).
    """

    delta: float
    sigma_ratio: float = 4.5
    half_width: int = 35
    order: int = 0

    def __post_init__(self):
        if not (self.delta > 0 and np.isfinite(self.delta)):
            raise ValueError(f"delta must be positive, got {self.delta!r}")
        if not np.isfinite(self.sigma_ratio) or self.sigma_ratio < 1:
            raise ValueError(f"sigma/delta must be >= 1, got {self.sigma_ratio!r}")
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise ValueError(f"half_width must be a positive integer, got {self.half_width!r}")
        if self.order not in (0, 1, 2):
            raise ValueError(f"order must be 0, 1 or 2, got {self.order!r}")
        object.__setattr__(self, "half_width", int(self.half_width))

    @property
    def sigma(self) -> float:
        return self.sigma_ratio * self.delta

    def with_order(self, order: int) -> "KernelSpec":
        return KernelSpec(self.delta, self.sigma_ratio, self.half_width, order)


@dataclass(frozen=True)
class FilterTaps:
    """Sampled kernel weights.

    ``offsets`` are in units of grid cells: integers for on-grid taps,
    half-integers for the midpoint (half-grid) low-pass variant.
    """

    order: int
    offsets: np.ndarray
    weights: np.ndarray
    delta: float
    centering: Centering = "on_grid"

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if offsets.shape != weights.shape or offsets.ndim != 1:
            raise ValueError("offsets and weights must be 1-D arrays of equal length")
        offsets.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "weights", weights)

    @property
    def half_width(self) -> int:
        return (len(self.weights) - 1) // 2

    def to_csv(self, path) -> None:
        """Write ``offset,weight`` rows with round-trip precision."""
        from .io import write_csv

        write_csv(path, ["offset", "weight"], [self.offsets, self.weights])


@dataclass(frozen=True)
class FrequencyResponse:
    omega: np.ndarray
    magnitude: np.ndarray
    normalized: bool = False
    delta: float = 1.0

    def to_csv(self, path) -> None:
        from .io import write_csv

        write_csv(path, ["omega", "magnitude"], [self.omega, self.magnitude])


def _sincos_pi(r):
    """``sin(pi r)`` and ``cos(pi r)`` with exact zeros at integer ``r``.

    Arguments within a few ulps of an integer (as produced by
    ``(m * delta) / delta``) are snapped to it.
    """
    n = np.rint(r)
    f = r - n
    f = np.where(np.abs(f) <= 4 * np.finfo(float).eps * np.maximum(np.abs(r), 1.0), 0.0, f)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    return sign * np.sin(np.pi * f), sign * np.cos(np.pi * f)


def _sinc_series(z):
    # sin(z)/z and its first two z-derivatives; 12 terms suffice for |z| < 0.5
    k = np.arange(12)
    c = (-1.0) ** k / np.array([math.factorial(2 * j + 1) for j in k])
    z2 = z[..., None] ** 2
    p0 = np.sum(c * z2**k, axis=-1)
    p1 = np.sum((c * 2 * k)[1:] * z[..., None] ** (2 * k[1:] - 1), axis=-1)
    p2 = np.sum((c * 2 * k * (2 * k - 1))[1:] * z2 ** (k[1:] - 1), axis=-1)
    return p0, p1, p2


def _sinc_direct(z, sn, cs):
    # sin(z)/z and derivatives from the closed forms; z away from 0
    s0 = sn / z
    s1 = cs / z - sn / z**2
    s2 = -sn / z - 2.0 * cs / z**2 + 2.0 * sn / z**3
    return s0, s1, s2


def eval_kernel(spec: KernelSpec, x):
    """Evaluate the order-``spec.order`` DSC kernel at offset ``x``.

    The kernel is ``sinc(pi x/delta) * exp(-x^2/2 sigma^2)``; its
    derivatives are formed by the product rule from exact derivatives of
    both factors. Near ``x = 0`` the sinc factor is summed from its power
    series, which avoids the cancellation of the closed forms there.

    Accepts scalars or arrays; returns the same shape.
    """
    x = np.asarray(x, dtype=float)
    d = spec.delta
    s = spec.sigma_ratio  # sigma in grid units
    r = x / d
    a = np.pi

    small = np.abs(r) < SERIES_RADIUS
    rs = np.where(small, 1.0, r)  # keeps the masked closed form finite
    sn, cs = _sincos_pi(rs)
    direct = _sinc_direct(a * rs, sn, cs)
    series = _sinc_series(a * np.where(small, r, 0.0))
    # derivatives with respect to r of sinc(pi r)
    f0, f1, f2 = (np.where(small, ser, dir_) * a**j
                  for j, (ser, dir_) in enumerate(zip(series, direct)))

    g = np.exp(-0.5 * (r / s) ** 2)
    if spec.order == 0:
        out = f0 * g
    elif spec.order == 1:
        out = (f1 - f0 * r / s**2) * g / d
    else:
        out = (f2 - 2.0 * f1 * r / s**2 + f0 * (r**2 / s**4 - 1.0 / s**2)) * g / d**2
    return out[()] if out.ndim == 0 else out


def build_taps(spec: KernelSpec, centering: Centering = "on_grid") -> FilterTaps:
    """Sample the kernel at ``m*delta`` (on_grid) or ``(m + 1/2)*delta``
    (half_grid) for ``m = -W..W``.

    Half-grid taps map node values to the midpoint to the *right* of each
    node: ``u(x_i + delta/2) ~= sum_m w[m] u(x_{i-m})`` with
    ``w[m] = phi((m + 1/2) delta)``. The 2W+1 samples are then
    asymmetric about zero, which is intended: an even number of nodes
    straddles each midpoint and the outermost sample carries a
    negligible Gaussian weight.
    """
    if centering not in ("on_grid", "half_grid"):
        raise ValueError(f"unknown centering {centering!r}")
    m = np.arange(-spec.half_width, spec.half_width + 1, dtype=float)
    offsets = m if centering == "on_grid" else m + 0.5
    weights = eval_kernel(spec, offsets * spec.delta)
    if centering == "on_grid":
        # enforce the symmetry that the sampled formula satisfies analytically
        half = 0.5 * (weights + (-1) ** spec.order * weights[::-1])
        weights = half
    return FilterTaps(spec.order, offsets, weights, spec.delta, centering)


def frequency_response(taps: FilterTaps, n_samples: int = 512,
                       normalize: bool = False) -> FrequencyResponse:
    """Magnitude of the taps' transfer function on ``[0, pi/delta]``.

    ``|sum_m w[m] exp(-i omega offset[m] delta)|``; ``omega`` carries
    units of inverse length.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    omega = np.linspace(0.0, np.pi / taps.delta, n_samples)
    phase = np.outer(omega, taps.offsets * taps.delta)
    mag = np.abs(np.exp(-1j * phase) @ taps.weights)
    if normalize:
        peak = mag.max()
        if peak > 0:
            mag = mag / peak
    return FrequencyResponse(omega, mag, normalize, taps.delta)
