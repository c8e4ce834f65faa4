"""Uniform grids, odd boundary extension and FIR application of DSC taps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import FilterTaps, KernelSpec, build_taps

__all__ = [
    "Grid",
    "Field",
    "NonFiniteError",
    "extend_odd",
    "apply_taps",
    "conjugate_lowpass",
]


class NonFiniteError(FloatingPointError):
    """A field picked up NaN or Inf values; the integration has blown up."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Grid:
    n_points: int
    x_min: float = 0.0
    x_max: float = 1.0

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError(f"need at least 3 grid points, got {self.n_points!r}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.n_points)


@dataclass(frozen=True)
class Field:
    """Nodal values ``u(x_k)`` on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} values, got shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def check_finite(self) -> "Field":
        _check_finite(self.values)
        return self

    def to_csv(self, path) -> None:
        from .io import write_csv

        write_csv(path, ["x", "u"], [self.x, self.values])


def _check_finite(values):
    bad = ~np.isfinite(values)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise NonFiniteError(f"non-finite value at node {idx}", index=idx)


def _odd_pad(values: np.ndarray, left: int, right: int) -> np.ndarray:
    # whole-point odd reflection about the end nodes: u(-s) = -u(s)
    n = len(values)
    if left >= n or right >= n:
        raise ValueError(f"pad ({max(left, right)}) must be smaller than the field length ({n})")
    lo = -values[left:0:-1]
    hi = -values[n - 2:n - 2 - right:-1] if right else values[:0]
    return np.concatenate([lo, values, hi])


def _even_pad(values: np.ndarray, left: int, right: int) -> np.ndarray:
    # whole-point even reflection: u(-s) = u(s)
    n = len(values)
    if left >= n or right >= n:
        raise ValueError(f"pad ({max(left, right)}) must be smaller than the field length ({n})")
    return np.pad(values, (left, right), mode="reflect")


def _odd_pad_half(values: np.ndarray, left: int, right: int) -> np.ndarray:
    # half-sample odd reflection for midpoint values: v(-1-k) = -v(k)
    n = len(values)
    if left > n or right > n:
        raise ValueError(f"pad ({max(left, right)}) exceeds the midpoint count ({n})")
    lo = -values[left - 1::-1] if left else values[:0]
    hi = -values[n - 1:n - 1 - right:-1] if right else values[:0]
    return np.concatenate([lo, values, hi])


def extend_odd(field: Field, pad: int) -> np.ndarray:
    """Extend ``field`` by ``pad`` nodes on each side by antisymmetric
    reflection about the boundary nodes.

    >>> g = Grid(3)
    >>> extend_odd(Field(g, [0.0, 1.0, 0.0]), 1).tolist()
    [-1.0, 0.0, 1.0, 0.0, -1.0]
    """
    if pad < 0:
        raise ValueError("pad must be non-negative")
    return _odd_pad(np.asarray(field.values), pad, pad)


def _convolve_valid(ext: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # out[i] = sum_m w[m] ext[i + W - m], m = -W..W
    return np.convolve(ext, weights, mode="valid")


def apply_taps(field: Field, taps: FilterTaps, parity: str = "odd") -> Field:
    """Discrete convolution ``sum_m w[m] u(x_i - m delta)`` over the
    odd-extended field.

    With order-n high-pass taps this is the n-th derivative at every node.
    ``parity="even"`` reflects symmetrically instead, which is the right
    continuation for quantities like ``u^2`` when ``u`` itself is odd.
    """
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    if taps.centering != "on_grid":
        raise ValueError("apply_taps needs on-grid taps")
    _check_delta(field.grid, taps.delta)
    _check_finite(field.values)
    pad = _odd_pad if parity == "odd" else _even_pad
    ext = pad(field.values, taps.half_width, taps.half_width)
    return Field(field.grid, _convolve_valid(ext, taps.weights))


def _check_delta(grid: Grid, delta: float):
    if not np.isclose(grid.spacing, delta, rtol=1e-12, atol=0):
        raise ValueError(f"taps built for delta={delta}, grid spacing is {grid.spacing}")


def conjugate_lowpass(field: Field, spec: KernelSpec) -> Field:
    """Smooth ``field`` with the conjugated low-pass kernel.

    On-grid samples of the low-pass kernel are the identity (the sinc
    vanishes at every other node), so the filter is realized as a round
    trip: nodes -> midpoints -> nodes, each leg a half-grid sinc
    interpolation. The combined response is roughly ``|H(omega)|^2``,
    flat in the pass band and zero at the Nyquist frequency. Boundary
    nodes are reset to zero afterwards.
    """
    if spec.order != 0:
        raise ValueError("conjugate_lowpass needs an order-0 kernel")
    grid = field.grid
    _check_delta(grid, spec.delta)
    _check_finite(field.values)
    taps = build_taps(spec, "half_grid")
    w = taps.weights
    W = taps.half_width
    n = grid.n_points

    # leg 1: v[i] = u(x_i + delta/2) = sum_m w[m] u[i - m], i = 0..n-2
    ext = _odd_pad(field.values, W, W)
    mid = _convolve_valid(ext, w)[: n - 1]

    # leg 2: u[j] = sum_m w[m] v[j - 1 - m], j = 0..n-1
    ext = _odd_pad_half(mid, W + 1, W)
    out = _convolve_valid(ext, w)
    out[0] = 0.0
    out[-1] = 0.0
    return Field(grid, out)
