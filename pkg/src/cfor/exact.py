"""Cole's exact solution of the sine-initial-data Burgers problem and the
L-infinity / L1 error norms used to score numerical runs.

The Cole-Hopf substitution ``u = -2 nu theta_x / theta`` turns the problem
into the heat equation for ``theta`` with Neumann data and initial value
``exp(-(1 - cos(pi x)) / (2 pi nu))``. Two equivalent evaluations are used:

* the cosine series ``theta = a0 + sum a_n exp(-n^2 pi^2 nu t) cos(n pi x)``,
  which is cheap and exact to rounding once ``theta`` no longer varies
  over many decades across the domain;
* the heat-kernel integral of the (even, 2-periodic) initial value,
  evaluated with log-scaled composite Gauss-Legendre quadrature. At early times
  and high Re the series denominator cancels catastrophically near the
  front, and this form takes over.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import Field

__all__ = [
    "ExactSolutionSpec",
    "ErrorReport",
    "SeriesConvergenceError",
    "cosine_coefficients",
    "cole_exact",
    "error_norms",
    "TABLE1_TIMES",
    "inviscid_exact",
]

#: Snapshot times of the Re=100 accuracy table.
TABLE1_TIMES = (0.4, 0.8, 1.2, 3.0, 10.0, 30.0, 60.0, 90.0)

# series conditioning above which the heat-kernel integral is used instead
_MAX_SERIES_CONDITION = 10.0


class SeriesConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExactSolutionSpec:
    reynolds: float = 100.0
    series_terms: int = 200
    quadrature_points: int = 64

    def __post_init__(self):
        if not (math.isfinite(self.reynolds) and self.reynolds > 0):
            raise ValueError("exact solution needs a finite positive Reynolds number")
        if self.reynolds > 500:
            warnings.warn(
                f"Re={self.reynolds:g}: the exact series is only practical up to Re~100; "
                "expect slow or failed evaluation", RuntimeWarning, stacklevel=2)

    @property
    def nu(self) -> float:
        return 1.0 / self.reynolds


@dataclass(frozen=True)
class ErrorReport:
    t: float
    l_inf: float
    l_1: float
    l_1_sum: float = float("nan")


def _theta0_log(x, nu):
    return -(1.0 - np.cos(np.pi * x)) / (2.0 * np.pi * nu)


@lru_cache(maxsize=16)
def cosine_coefficients(reynolds: float, n_terms: int = 200, start_points: int = 64,
                        tol: float = 1e-15) -> np.ndarray:
    """Cosine-series coefficients of the transformed initial value.

    ``a0 = int_0^1 theta0 dx``, ``a_n = 2 int_0^1 theta0 cos(n pi x) dx``.
    The integrand is even and 2-periodic, so the trapezoidal rule on
    ``[0, 1]`` converges geometrically; the panel count starts above
    twice the highest mode and is doubled until the coefficients change
    by less than ``tol`` (relative to ``a0``, floored at rounding level).
    """
    nu = 1.0 / reynolds
    n = np.arange(n_terms)
    npts = max(start_points, 1 << int(math.ceil(math.log2(2 * n_terms + 2))))
    prev = None
    while npts <= 1 << 16:
        xg = np.linspace(0.0, 1.0, npts + 1)
        wg = np.full(npts + 1, 1.0 / npts)
        wg[[0, -1]] *= 0.5
        theta = np.exp(_theta0_log(xg, nu)) * wg
        coef = np.cos(np.pi * np.outer(n, xg)) @ theta
        coef[1:] *= 2.0
        # floor at a few ulps: rounding in the sum itself is ~eps
        limit = max(tol * abs(coef[0]), 4 * np.finfo(float).eps)
        if prev is not None and np.max(np.abs(coef - prev)) <= limit:
            coef.flags.writeable = False
            return coef
        prev = coef
        npts *= 2
    raise SeriesConvergenceError("coefficient quadrature did not converge")


def _series(x, t, spec):
    a = cosine_coefficients(spec.reynolds, spec.series_terms, spec.quadrature_points)
    nu = spec.nu
    n = np.arange(len(a))
    e = a * np.exp(-(n * np.pi) ** 2 * nu * t)
    keep = np.abs(e) >= 1e-16 * abs(e[0])
    last = int(np.flatnonzero(keep)[-1])
    if last == len(a) - 1 and len(a) > 1:
        raise SeriesConvergenceError(
            f"series not converged at t={t} with {len(a)} terms; "
            "the series is only practical for Re <= ~100")
    e, n = e[: last + 1], n[: last + 1]
    phase = np.pi * np.outer(x, n)
    den_terms = e * np.cos(phase)
    num_terms = (n * e) * np.sin(phase)
    den = den_terms.sum(axis=1)
    num = num_terms.sum(axis=1)
    cond = np.abs(den_terms).sum(axis=1) / np.abs(den)
    return 2.0 * np.pi * nu * num / den, cond


_GL16 = np.polynomial.legendre.leggauss(16)


def _composite_gauss(a, b, panels):
    nodes, weights = _GL16
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return s, w


def _heat_kernel(x, t, nu, panels=None):
    """``u = (h/t) <s>`` with weight ``exp(-s^2) theta0(x - h s)``, ``h = 2 sqrt(nu t)``.

    ``theta0 <= 1``, so the weight is bounded by ``exp(-s^2)``, while its
    maximum is at least its value at ``s = 0``. Everything beyond
    ``|s| = sqrt(40 - log theta0(x))`` is then below ``e^-40`` of the peak.
    At high Re that window can be far wider than the Gaussian alone.
    """
    h = 2.0 * math.sqrt(nu * t)
    L = float(np.sqrt(40.0 - _theta0_log(x, nu).min()))
    # theta0 features have width ~sqrt(nu) in x, i.e. sqrt(nu)/h in s
    width = min(1.0, math.sqrt(nu) / h)
    if panels is None:
        panels = int(max(16, math.ceil(2 * L / width)))
    s, w = _composite_gauss(-L, L, panels)
    xi = x[:, None] - h * s[None, :]
    lg = -s[None, :] ** 2 + _theta0_log(xi, nu)
    lg -= lg.max(axis=1, keepdims=True)
    f = np.exp(lg) * w
    return h / t * (f @ s) / f.sum(axis=1)


def cole_exact(x, t: float, spec: ExactSolutionSpec = ExactSolutionSpec()):
    """Exact ``u(x, t)`` for ``u(x, 0) = sin(pi x)``, ``u(0, t) = u(1, t) = 0``.

    ``x`` may be a scalar or an array in ``[0, 1]``.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if t < 0:
        raise ValueError("t must be non-negative")
    if np.any((xa < 0) | (xa > 1)):
        raise ValueError("x must lie in [0, 1]")
    if t == 0:
        out = np.sin(np.pi * xa)
    else:
        try:
            out, cond = _series(xa, t, spec)
        except SeriesConvergenceError:
            # too early for the series to converge; the integral is exact
            out, cond = np.empty_like(xa), np.full(xa.shape, np.inf)
        bad = cond > _MAX_SERIES_CONDITION
        if bad.any():
            out[bad] = _heat_kernel(xa[bad], t, spec.nu)
    out[(xa == 0) | (xa == 1)] = 0.0
    return out if np.ndim(x) else float(out[0])


def error_norms(numeric: Field, t: float, spec: ExactSolutionSpec = ExactSolutionSpec()
                ) -> ErrorReport:
    """``l_inf = max |err|``; ``l_1 = mean |err|`` (``l_1_sum`` is the plain sum)."""
    err = np.abs(numeric.values - cole_exact(numeric.x, t, spec))
    return ErrorReport(float(t), float(err.max()), float(err.mean()), float(err.sum()))


def inviscid_exact(x, t: float):
    """Entropy solution of the inviscid problem.

    Characteristics ``x = x0 + t sin(pi x0)`` are traced back from each
    node; after breaking (``t > 1/pi``) the shock sits at ``x = 1`` and
    only the monotone branch of the characteristic map is used.
    """
    from scipy.optimize import brentq

    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if t < 0:
        raise ValueError("t must be non-negative")
    x0_max = 1.0 if math.pi * t <= 1 else math.acos(-1.0 / (math.pi * t)) / math.pi
    out = np.zeros_like(xa)
    for i, xi in enumerate(xa):
        if 0 < xi < 1:
            x0 = brentq(lambda s: s + t * math.sin(math.pi * s) - xi, 0.0, x0_max, xtol=1e-15)
            out[i] = math.sin(math.pi * x0)
    return out if np.ndim(x) else float(out[0])
