import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cfor.grid import (
    Field,
    Grid,
    NonFiniteError,
    apply_taps,
    conjugate_lowpass,
    extend_odd,
)
from cfor.kernels import KernelSpec, build_taps, frequency_response
from oracles import spectral_lowpass


def sine(n):
    g = Grid(n)
    return Field(g, np.sin(np.pi * g.x))


def test_grid_basics():
    g = Grid(41)
    assert g.spacing == pytest.approx(0.025)
    assert g.x[0] == 0.0 and g.x[-1] == 1.0
    with pytest.raises(ValueError):
        Grid(2)
    with pytest.raises(ValueError):
        Grid(10, 1.0, 0.0)


def test_field_is_read_only_and_shape_checked():
    f = sine(11)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(ValueError):
        Field(Grid(5), np.zeros(4))


def test_field_nonfinite_detection():
    v = np.zeros(7)
    v[3] = np.nan
    with pytest.raises(NonFiniteError) as err:
        Field(Grid(7), v).check_finite()
    assert err.value.index == 3


def test_extension_of_sine_is_sine():
    f = sine(41)
    ext = extend_odd(f, 5)
    xs = np.arange(-5, 46) * f.grid.spacing
    assert np.allclose(ext, np.sin(np.pi * xs), atol=1e-15)


def test_extension_small_example():
    ext = extend_odd(Field(Grid(3), [0.0, 1.0, 0.0]), 1)
    assert ext.tolist() == [-1.0, 0.0, 1.0, 0.0, -1.0]


def test_extension_of_zero_and_bad_pad():
    assert np.all(extend_odd(Field(Grid(9), np.zeros(9)), 4) == 0)
    with pytest.raises(ValueError):
        extend_odd(sine(5), 5)
    with pytest.raises(ValueError):
        extend_odd(sine(5), -1)


def test_constant_has_zero_derivative():
    # the odd extension is not constant, so use interior-only stencils
    g = Grid(201)
    taps = build_taps(KernelSpec(g.spacing, 4.5, 35, 1))
    d = apply_taps(Field(g, np.full(201, 2.5)), taps).values
    assert np.all(np.abs(d[36:-36]) < 1e-12)


def test_first_derivative_of_sine():
    f = sine(41)
    taps = build_taps(KernelSpec(f.grid.spacing, 4.5, 35, 1))
    d = apply_taps(f, taps).values
    assert np.max(np.abs(d - np.pi * np.cos(np.pi * f.x))) <= 1e-8


def test_second_derivative_of_sine():
    f = sine(41)
    taps = build_taps(KernelSpec(f.grid.spacing, 4.5, 35, 2))
    d = apply_taps(f, taps).values
    assert np.max(np.abs(d + np.pi**2 * np.sin(np.pi * f.x))) <= 1e-6


def test_derivative_sign_on_a_ramp_interior():
    # u = x near the center: the derivative must be +1, not -1
    g = Grid(101)
    taps = build_taps(KernelSpec(g.spacing, 4.5, 35, 1))
    d = apply_taps(Field(g, np.sin(np.pi * g.x / 8)), taps).values
    assert d[50] == pytest.approx(np.pi / 8 * np.cos(np.pi * 0.5 / 8), rel=1e-8)


def test_derivative_of_odd_field_is_even_at_boundaries():
    f = sine(41)
    taps = build_taps(KernelSpec(f.grid.spacing, 4.5, 35, 1))
    d = apply_taps(f, taps).values
    # d/dx sin(pi x) at x=0 and x=1 is +pi and -pi
    assert d[0] == pytest.approx(np.pi, rel=1e-9)
    assert d[-1] == pytest.approx(-np.pi, rel=1e-9)


def test_apply_taps_rejects_mismatches():
    f = sine(41)
    with pytest.raises(ValueError):
        apply_taps(f, build_taps(KernelSpec(0.01, 4.5, 35, 1)))
    with pytest.raises(ValueError):
        apply_taps(f, build_taps(KernelSpec(f.grid.spacing), "half_grid"))
    bad = np.sin(np.pi * f.x)
    bad[7] = np.inf
    with pytest.raises(NonFiniteError):
        apply_taps(Field(f.grid, bad), build_taps(KernelSpec(f.grid.spacing, 4.5, 35, 1)))


@settings(max_examples=30, deadline=None)
@given(arrays(float, 41, elements=st.floats(-10, 10)),
       arrays(float, 41, elements=st.floats(-10, 10)),
       st.floats(-3, 3), st.floats(-3, 3))
def test_apply_taps_is_linear(u, v, a, b):
    g = Grid(41)
    taps = build_taps(KernelSpec(g.spacing, 4.5, 35, 2))
    lhs = apply_taps(Field(g, a * u + b * v), taps).values
    rhs = a * apply_taps(Field(g, u), taps).values + b * apply_taps(Field(g, v), taps).values
    scale = np.abs(taps.weights).sum() * (abs(a) + abs(b) + 1) * 10
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * scale


@settings(max_examples=30, deadline=None)
@given(arrays(float, 41, elements=st.floats(-10, 10)),
       arrays(float, 41, elements=st.floats(-10, 10)),
       st.floats(-3, 3))
def test_lowpass_is_linear(u, v, a):
    g = Grid(41)
    spec = KernelSpec(g.spacing, 3.2)
    lhs = conjugate_lowpass(Field(g, a * u + v), spec).values
    rhs = a * conjugate_lowpass(Field(g, u), spec).values + conjugate_lowpass(Field(g, v), spec).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_lowpass_zero_field():
    g = Grid(41)
    out = conjugate_lowpass(Field(g, np.zeros(41)), KernelSpec(g.spacing, 3.2))
    assert np.all(out.values == 0.0)


@pytest.mark.parametrize("n", [41, 64, 101, 257])
def test_lowpass_matches_spectral_oracle(n):
    g = Grid(n)
    rng = np.random.default_rng(n)
    u = rng.standard_normal(n)
    u[0] = u[-1] = 0.0
    spec = KernelSpec(g.spacing, 3.2)
    ours = conjugate_lowpass(Field(g, u), spec).values
    ref = spectral_lowpass(u, build_taps(spec, "half_grid"))
    assert np.max(np.abs(ours - ref)) <= 1e-13


def test_lowpass_nyquist_mode_is_removed():
    # (-1)^k sin(pi x_k) sits one lowest-mode spacing below Nyquist; its
    # attenuation is |H(pi/delta - pi)|^2, below 1e-3 once N >= ~256
    g = Grid(401)
    spec = KernelSpec(g.spacing, 3.2)
    u = (-1.0) ** np.arange(g.n_points) * np.sin(np.pi * g.x)
    out = conjugate_lowpass(Field(g, u), spec).values
    ratio = np.max(np.abs(out)) / np.max(np.abs(u))
    taps = build_taps(spec, "half_grid")
    w = np.pi / g.spacing - np.pi
    h = abs(np.exp(-1j * w * taps.offsets * g.spacing) @ taps.weights)
    assert ratio <= 1e-3
    assert ratio == pytest.approx(h**2, rel=0.05)


@pytest.mark.parametrize("n, bound", [(41, 0.05), (101, 0.01)])
def test_lowpass_nyquist_mode_coarse_grids(n, bound):
    g = Grid(n)
    u = (-1.0) ** np.arange(n) * np.sin(np.pi * g.x)
    out = conjugate_lowpass(Field(g, u), KernelSpec(g.spacing, 3.2)).values
    assert np.max(np.abs(out)) <= bound


def test_lowpass_passband_is_flat():
    f = sine(101)
    out = conjugate_lowpass(f, KernelSpec(f.grid.spacing, 3.2))
    assert np.max(np.abs(out.values - f.values)) <= 1e-4
    assert out.values[0] == 0.0 and out.values[-1] == 0.0


def test_repeated_lowpass_damps_more():
    g = Grid(64)
    rng = np.random.default_rng(0)
    u = rng.standard_normal(64)
    spec = KernelSpec(g.spacing, 3.2)
    once = conjugate_lowpass(Field(g, u), spec)
    twice = conjugate_lowpass(once, spec)

    def top_band(v):
        mag = np.abs(np.fft.rfft(np.concatenate([v, -v[-2:0:-1]])))
        return mag[int(0.8 * len(mag)):].max()

    assert top_band(twice.values) <= top_band(once.values) <= top_band(u)


def test_lowpass_response_matches_frequency_response():
    # the round trip multiplies each mode by roughly |H|^2
    g = Grid(201)
    spec = KernelSpec(g.spacing, 3.2)
    taps = build_taps(spec, "half_grid")
    resp = frequency_response(taps, 512)
    for k in (5, 50, 150):
        u = np.sin(k * np.pi * g.x)
        out = conjugate_lowpass(Field(g, u), spec).values
        gain = np.dot(out, u) / np.dot(u, u)
        h = np.interp(k * np.pi, resp.omega, resp.magnitude)
        assert gain == pytest.approx(h**2, abs=2e-3)


def test_lowpass_requires_order_zero_and_matching_grid():
    f = sine(41)
    with pytest.raises(ValueError):
        conjugate_lowpass(f, KernelSpec(f.grid.spacing, 3.2, order=1))
    with pytest.raises(ValueError):
        conjugate_lowpass(f, KernelSpec(0.5 * f.grid.spacing, 3.2))


def test_field_csv(tmp_path):
    from cfor.io import read_csv

    f = sine(11)
    f.to_csv(tmp_path / "f.csv")
    data = read_csv(tmp_path / "f.csv")
    assert np.array_equal(data["u"], f.values)
    assert math.isclose(data["x"][3], 0.3)
