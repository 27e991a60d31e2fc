import numpy as np
import pytest

from sphfir import so3
from sphfir.filtering import apply, fir_transfer, tap
from sphfir.harmonics import norm_const_0
from sphfir.sphere import random_rotation
from sphfir.spectrum import delta_spectrum, random_spectrum
from sphfir.transform import synthesize, synthesize_points
from sphfir.wigner import wigner_D_batch


def _random_coeffs(rng, L):
    return [rng.normal(size=(2 * l + 1, 2 * l + 1)) + 1j * rng.normal(size=(2 * l + 1, 2 * l + 1)) for l in range(L)]


def test_grid_weights_have_unit_mass():
    grid = so3.make_so3_grid(4)
    assert grid.shape == (8, 8, 8)
    assert grid.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert grid.max_bandwidth >= 4


def test_lift_examples():
    L = 3
    out = so3.lift_spectrum(np.array([1.0]))
    np.testing.assert_allclose(out, [[1.0 / (4 * np.pi * norm_const_0(1)[0])]])
    F = np.array([0.0, 2.0, 0.0])
    lifted = so3.lift_spectrum(F)
    assert np.all(lifted[[0, 2]] == 0)
    np.testing.assert_allclose(lifted[1], F / (4 * np.pi * norm_const_0(L)[1]))


def test_analyze_constant_and_single_entry():
    grid = so3.make_so3_grid(3)
    coeffs = so3.so3_analyze_bruteforce(np.ones(grid.size), grid, 3)
    np.testing.assert_allclose(coeffs[0], [[1.0]], atol=1e-13)
    assert max(np.abs(c).max() for c in coeffs[1:]) < 1e-13
    # f = D_1^{00}: coefficient is 1/3 at that entry only
    D1 = wigner_D_batch(2, grid.angles())[1]
    coeffs = so3.so3_analyze_bruteforce(D1[:, 1, 1], grid, 3)
    expected = np.zeros((3, 3))
    expected[1, 1] = 1.0 / 3.0
    np.testing.assert_allclose(coeffs[1], expected, atol=1e-13)


def test_synthesize_analyze_round_trip():
    rng = np.random.default_rng(0)
    L = 4
    grid = so3.make_so3_grid(L)
    C = _random_coeffs(rng, L)
    back = so3.so3_analyze_bruteforce(so3.so3_synthesize(C, grid.angles()), grid, L)
    for a, b in zip(back, C):
        np.testing.assert_allclose(a, b, atol=1e-12)


def test_lift_matches_sampled_lift():
    rng = np.random.default_rng(1)
    L = 4
    grid = so3.make_so3_grid(L)
    F = random_spectrum(L, rng)
    sampled = so3.sample_on_grid(so3.lifted_sampler(F), grid)
    got = so3.so3_analyze_bruteforce(sampled, grid, L)
    for a, b in zip(got, so3.lift_coefficients(F)):
        np.testing.assert_allclose(a, b, atol=1e-12)
    # the lift is constant in gamma and equals f at (alpha, beta)
    vals = sampled.reshape(grid.shape)
    assert np.abs(vals - vals[:, :, :1]).max() < 1e-12
    np.testing.assert_allclose(vals[:, :, 0], synthesize(F, grid.sphere).values, atol=1e-12)


def test_projection_examples():
    grid = so3.make_so3_grid(3)
    ang = grid.angles()
    assert np.abs(so3.project_to_sphere(np.exp(-1j * ang[:, 2]), grid).values).max() < 1e-14
    proj = so3.project_to_sphere(np.full(grid.size, 2.5), grid)
    np.testing.assert_allclose(proj.values, 2.5)


def test_projection_inverts_lift():
    rng = np.random.default_rng(2)
    grid = so3.make_so3_grid(4)
    F = random_spectrum(4, rng)
    lifted = so3.sample_on_grid(so3.lifted_sampler(F), grid)
    np.testing.assert_allclose(so3.project_to_sphere(lifted, grid).values, synthesize(F, grid.sphere).values, atol=1e-12)


def test_convolution_with_identity_kernel_approximates_input():
    # h = sum_l (2l+1) tr(D_l) is the band-limited identity on SO(3)
    L = 4
    grid = so3.make_so3_grid(L)
    rng = np.random.default_rng(3)
    C = _random_coeffs(rng, L)
    ident = [np.eye(2 * l + 1) for l in range(L)]
    h = so3.so3_synthesize(ident, grid.angles())
    g = so3.so3_convolve_bruteforce(h, so3.coefficient_sampler(C), grid)
    np.testing.assert_allclose(g, so3.so3_synthesize(C, grid.angles()), atol=1e-10)


def test_convolution_product_rule():
    rng = np.random.default_rng(4)
    L = 3
    grid = so3.make_so3_grid(L)
    Fc, Hc = _random_coeffs(rng, L), _random_coeffs(rng, L)
    h = so3.so3_synthesize(Hc, grid.angles())
    g = so3.so3_convolve_bruteforce(h, so3.coefficient_sampler(Fc), grid)
    got = so3.so3_analyze_bruteforce(g, grid, L)
    for a, f, hh in zip(got, Fc, Hc):
        np.testing.assert_allclose(a, f @ hh, atol=1e-10)


def test_convolution_commutes_with_right_translation():
    # translating the input by a rotation S translates the output the same way
    rng = np.random.default_rng(5)
    L = 3
    grid = so3.make_so3_grid(L)
    Fc, Hc = _random_coeffs(rng, L), _random_coeffs(rng, L)
    S = random_rotation(rng).matrix
    h = so3.so3_synthesize(Hc, grid.angles())
    f = so3.coefficient_sampler(Fc)
    g = so3.so3_convolve_bruteforce(h, f, grid)
    g_shift = so3.so3_convolve_bruteforce(h, lambda m: f(m @ S), grid)
    expected = so3.coefficient_sampler(so3.so3_analyze_bruteforce(g, grid, L))(grid.matrices() @ S)
    np.testing.assert_allclose(g_shift, expected, atol=1e-9)


def test_projected_convolution_equals_transfer_product():
    rng = np.random.default_rng(6)
    L = 4
    grid = so3.make_so3_grid(L)
    F = random_spectrum(L, rng)
    H = fir_transfer([tap(rng.normal(), *rng.uniform(0, 3, 3)) for _ in range(3)], L)
    h = so3.so3_synthesize(list(H.matrices), grid.angles())
    g = so3.so3_convolve_bruteforce(h, so3.lifted_sampler(F), grid)
    proj = so3.project_to_sphere(g, grid)
    np.testing.assert_allclose(proj.values, synthesize(apply(H, F), grid.sphere).values, atol=1e-9)


def test_rotation_correlation_of_delta_with_itself():
    # g(R) = int delta(u) delta(R u) du peaks at the identity
    L = 4
    grid = so3.make_so3_grid(L)
    D = delta_spectrum(L)
    g = so3.rotation_correlate_bruteforce(D, D, grid)
    coeffs = so3.so3_analyze_bruteforce(g, grid, L)
    for ell in range(L):
        np.testing.assert_allclose(coeffs[ell], np.outer(D[ell], D[ell]) / (2 * ell + 1), atol=1e-10)


def test_coefficient_sampler_matches_synthesize():
    rng = np.random.default_rng(7)
    C = _random_coeffs(rng, 3)
    R = random_rotation(rng)
    val = so3.coefficient_sampler(C)(R.matrix[None])[0]
    assert val == pytest.approx(so3.so3_synthesize(C, np.array([R.to_euler().as_tuple()]))[0], abs=1e-12)


def test_lifted_sampler_value():
    rng = np.random.default_rng(8)
    F = random_spectrum(5, rng)
    R = random_rotation(rng)
    n = R.matrix[:, 2]
    beta = np.arccos(np.clip(n[2], -1, 1))
    alpha = np.arctan2(n[1], n[0]) % (2 * np.pi)
    assert so3.lifted_sampler(F)(R.matrix) == pytest.approx(synthesize_points(F, beta, alpha), abs=1e-12)
