"""Kernel constants, lattice discretization, and the periodic symbol."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from nldiff import (
    ResolutionError,
    discretize,
    fourier_symbol,
    make_kernel,
    rescale,
    second_moment,
)


def test_moment_constants_match_quadrature_1d():
    # Independent oracle: integrate z^2 J(z) over the support directly.
    expected = {"uniform": 1.0 / 3.0, "triangle": 1.0 / 6.0, "bump": 1.0 / 7.0}
    for profile, c in expected.items():
        k = make_kernel(profile, 1, 1.0)
        mass, _ = quad(k, -1.0, 1.0, epsabs=1e-12)
        mom, _ = quad(lambda s, k=k: s * s * k(s), -1.0, 1.0, epsabs=1e-12)
        assert abs(mass - 1.0) < 1e-10
        assert abs(mom - c) < 1e-10
        assert math.isclose(k.second_moment, c, rel_tol=1e-15)
        assert math.isclose(second_moment(k), c, rel_tol=1e-15)


def test_moment_constants_match_quadrature_2d():
    # Polar reduction: int z1^2 J = pi * int_0^rho r^3 J(r) dr.
    for profile, c_unit in [("uniform", 0.25), ("bump", 0.125)]:
        rho = 0.7
        k = make_kernel(profile, 2, rho)

        def radial(r, k=k):
            return float(k(np.array([[r, 0.0]]))[0])

        mass, _ = quad(lambda r: 2.0 * math.pi * r * radial(r), 0.0, rho, epsabs=1e-12)
        mom, _ = quad(lambda r: math.pi * r**3 * radial(r), 0.0, rho, epsabs=1e-12)
        assert abs(mass - 1.0) < 1e-9
        assert abs(mom - c_unit * rho**2) < 1e-9
        assert math.isclose(k.second_moment, c_unit * rho**2, rel_tol=1e-14)


def test_radius_scaling_of_moment():
    # C scales like rho^2 at fixed profile.
    k1 = make_kernel("uniform", 1, 1.0)
    k2 = make_kernel("uniform", 1, 2.0)
    assert math.isclose(k2.second_moment, 4.0 * k1.second_moment, rel_tol=1e-15)


def test_unknown_profile_and_missing_2d_triangle():
    with pytest.raises(ValueError):
        make_kernel("gaussianish", 1, 1.0)
    with pytest.raises(ValueError):
        make_kernel("triangle", 2, 1.0)


def test_rescale_shrinks_support_and_moment():
    k = make_kernel("uniform", 1, 1.0)
    ke = rescale(k, 0.5)
    assert ke.radius == 0.5
    assert ke.mass == 1.0
    assert math.isclose(ke.second_moment, 0.25 / 3.0, rel_tol=1e-15)
    # eps^{-1} J(z/eps) keeps unit mass under quadrature as well.
    mass, _ = quad(ke, -0.5, 0.5, epsabs=1e-12)
    assert abs(mass - 1.0) < 1e-10
    mom, _ = quad(lambda s: s * s * ke(s), -0.5, 0.5, epsabs=1e-12)
    assert abs(mom - 0.5**2 / 3.0) < 1e-10


def test_raw_discretization_uniform_quarter_spacing():
    # h = 1/4, radius 1: nine offsets, each weight exactly h * 1/2 = 0.125.
    # All quantities are dyadic, so the comparisons are exact.
    dk = discretize(make_kernel("uniform", 1, 1.0), 0.25, mode="raw")
    assert dk.offsets.shape == (9, 1)
    assert np.all(dk.weights == 0.125)
    assert dk.mass == 1.125
    assert dk.second_moment == 0.46875
    assert dk.radius_cells == 4
    assert dk.mode == "raw"


def test_mass_mode_has_bit_exact_unit_mass():
    for profile in ("uniform", "triangle", "bump"):
        for h in (0.25, 0.125, 0.1):
            dk = discretize(make_kernel(profile, 1, 1.0), h, mode="mass")
            assert dk.mass == 1.0
            assert float(np.sum(dk.weights)) == 1.0


def test_uniform_discrete_moment_closed_form():
    # Riemann sum of z^2 over 2m+1 midpoints gives C_h = (1 + h)/3 exactly
    # when the weights are renormalized to unit mass.
    for h in (0.25, 0.125, 0.0625):
        dk = discretize(make_kernel("uniform", 1, 1.0), h, mode="mass")
        assert abs(dk.second_moment - (1.0 + h) / 3.0) < 1e-14


def test_triangle_discrete_moment_closed_form():
    # Trapezoid of the hat is exact in mass; the moment defect is -h^2/6.
    for h in (0.25, 0.125):
        dk = discretize(make_kernel("triangle", 1, 1.0), h, mode="mass")
        assert abs(dk.second_moment - (1.0 - h * h) / 6.0) < 1e-14


def test_discrete_moment_convergence_orders():
    # uniform converges at first order (jump at the support edge), triangle at
    # second, bump at fourth (z^2 J has two vanishing odd derivatives at the
    # endpoints, so the h^2 Euler-Maclaurin term drops too).
    def err(profile, h, c):
        dk = discretize(make_kernel(profile, 1, 1.0), h, mode="mass")
        return abs(dk.second_moment - c)

    h1, h2 = 0.0625, 0.03125
    order_u = math.log2(err("uniform", h1, 1 / 3) / err("uniform", h2, 1 / 3))
    order_t = math.log2(err("triangle", h1, 1 / 6) / err("triangle", h2, 1 / 6))
    order_b = math.log2(err("bump", h1, 1 / 7) / err("bump", h2, 1 / 7))
    assert 0.9 < order_u < 1.1
    assert 1.8 < order_t < 2.2
    assert 3.6 < order_b < 4.4


def test_mass_and_mass_moment_modes_share_weights():
    # The third mode is a label for which moment downstream scaling uses; the
    # lattice weights themselves are identical.
    k = make_kernel("uniform", 1, 1.0)
    a = discretize(k, 0.125, mode="mass")
    b = discretize(k, 0.125, mode="mass+moment")
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.offsets, b.offsets)
    assert a.second_moment == b.second_moment
    assert b.mode == "mass+moment"


def test_resolution_rule_requires_four_cells():
    k = make_kernel("uniform", 1, 1.0)
    with pytest.raises(ResolutionError) as exc:
        discretize(k, 0.3)
    assert "need at least 4" in str(exc.value)
    # The boundary case radius/h == 4 passes despite roundoff.
    dk = discretize(make_kernel("uniform", 1, 0.2), 0.05)
    assert dk.radius_cells == 4


def test_rescaled_discretization_moment_tracks_eps_squared():
    k = make_kernel("uniform", 1, 1.0)
    for eps in (0.5, 0.25):
        dk = discretize(rescale(k, eps), eps / 8.0, mode="mass")
        target = eps**2 * (1.0 + 1.0 / 8.0) / 3.0  # (eps^2/3)(1 + h/(eps rho))
        assert abs(dk.second_moment - target) < 1e-13


def test_discretize_2d_offsets_within_disc():
    dk = discretize(make_kernel("uniform", 2, 1.0), 0.25, mode="mass")
    r = np.sqrt(np.sum((0.25 * dk.offsets.astype(float)) ** 2, axis=1))
    assert np.all(r <= 1.0 + 1e-12)
    assert dk.mass == 1.0
    assert dk.dim == 2
    # x- and y-moments agree by symmetry of the offset set.
    z = 0.25 * dk.offsets.astype(float)
    mx = float(np.sum(dk.weights * z[:, 0] ** 2))
    my = float(np.sum(dk.weights * z[:, 1] ** 2))
    assert abs(mx - my) < 1e-15


def test_symbol_zero_frequency_is_mass_bitwise():
    dk = discretize(make_kernel("uniform", 1, 1.0), 0.25, mode="mass")
    s = fourier_symbol(dk, 64)
    assert s[0] == dk.mass
    assert np.all(np.abs(s) <= s[0] + 1e-15)
    assert s.dtype == np.float64


def test_symbol_matches_fft_of_scattered_stencil():
    dk = discretize(make_kernel("bump", 1, 1.0), 0.125, mode="mass")
    n = 128
    a = np.zeros(n)
    for off, w in zip(dk.offsets[:, 0], dk.weights):
        a[off % n] += w
    oracle = np.fft.fft(a).real
    assert np.max(np.abs(fourier_symbol(dk, n) - oracle)) < 1e-12


def test_symbol_small_frequency_expansion():
    # J_hat(xi) = mass - (C_h/2) xi^2 + O(xi^4) at the lowest nonzero mode.
    dk = discretize(make_kernel("uniform", 1, 1.0), 0.25, mode="mass")
    n = 4096
    s = fourier_symbol(dk, n)
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=0.25)[1]
    curvature = (dk.mass - s[1]) / xi**2
    assert abs(curvature - 0.5 * dk.second_moment) < 1e-3 * dk.second_moment


def test_symbol_2d_grid_shape_and_bound():
    dk = discretize(make_kernel("uniform", 2, 1.0), 0.25, mode="mass")
    s = fourier_symbol(dk, 32)
    assert s.shape == (32, 32)
    assert s[0, 0] == dk.mass
    assert np.all(np.abs(s) <= dk.mass + 1e-15)


def test_symbol_rejects_grid_smaller_than_stencil():
    dk = discretize(make_kernel("uniform", 1, 1.0), 0.25, mode="mass")
    with pytest.raises(ValueError):
        fourier_symbol(dk, 5)


def test_stencil_csv_roundtrip(tmp_path):
    dk = discretize(make_kernel("triangle", 1, 1.0), 0.25, mode="mass")
    path = tmp_path / "stencil.csv"
    dk.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].split(",")[0] == "offset0"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == dk.offsets.shape[0]
    weights = np.array([float(r[-1]) for r in rows])
    assert np.array_equal(weights, dk.weights)  # %.17g survives the roundtrip
