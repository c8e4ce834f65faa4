# %% [markdown]
# # Conjugated DSC filters
#
# The regularized Shannon kernel gives one family of filters: the kernel
# itself is a low-pass filter and its first and second derivatives are
# high-pass differentiators. This script builds the taps on a 41-point
# grid and looks at how they act on a smooth profile.

# %%
import numpy as np

from cfor import Field, Grid, KernelSpec, apply_taps, build_taps, frequency_response

grid = Grid(41)
delta = grid.spacing
low = build_taps(KernelSpec(delta, 3.2, 35, 0), "half_grid")
d1 = build_taps(KernelSpec(delta, 4.5, 35, 1))
d2 = build_taps(KernelSpec(delta, 4.5, 35, 2))
print(f"grid spacing {delta:.4f}; {len(low.weights)} taps per filter")

# %% [markdown]
# Differentiate sin(pi x). The odd extension across both walls keeps the
# stencil accurate right up to the boundary nodes.

# %%
u = Field(grid, np.sin(np.pi * grid.x))
err1 = np.abs(apply_taps(u, d1).values - np.pi * np.cos(np.pi * grid.x)).max()
err2 = np.abs(apply_taps(u, d2).values + np.pi**2 * np.sin(np.pi * grid.x)).max()
print(f"max error of first derivative  {err1:.2e}")
print(f"max error of second derivative {err2:.2e}")

# %% [markdown]
# Frequency responses on [0, pi/delta]. Sampled on the grid itself the
# low-pass kernel is the identity, so it is sampled at midpoints instead.
# It stays flat over most of the band and drops at the Nyquist end. The
# derivative filters track omega and omega**2.

# %%
for name, taps in (("low-pass", low), ("first derivative", d1), ("second derivative", d2)):
    resp = frequency_response(taps, 9)
    cells = "  ".join(f"{m:8.3f}" for m in resp.magnitude)
    print(f"{name:>18}: {cells}")
w = frequency_response(d1, 9).omega
print(f"{'omega':>18}: " + "  ".join(f"{v:8.3f}" for v in w))

# %% [markdown]
# Smoothing is a round trip through the midpoints. A sawtooth at the grid
# scale is wiped out while the smooth mode passes almost untouched.

# %%
from cfor import conjugate_lowpass

saw = Field(grid, np.sin(np.pi * grid.x) * (1 + 0.2 * (-1.0) ** np.arange(41)))
smooth = conjugate_lowpass(saw, KernelSpec(delta, 3.2, 35, 0))
print(f"residual sawtooth after smoothing {np.abs(smooth.values - u.values).max():.2e}")
