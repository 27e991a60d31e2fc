from fractions import Fraction
from math import factorial, pi, sqrt

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from scipy.special import lpmv

from sphfir.harmonics import (
    assoc_legendre,
    eval_Y,
    eval_Y_column,
    harmonic_columns,
    legendre_table,
    norm_const,
    norm_const_0,
)
from sphfir.sphere import DomainError, make_grid, unit_vector
from sphfir.wigner import wigner_D

C00 = 0.28209479177387814


def test_assoc_legendre_examples():
    x = np.linspace(-1, 1, 7)
    np.testing.assert_array_equal(assoc_legendre(0, 0, x), 1.0)
    for ell in range(8):
        assert assoc_legendre(ell, 0, 1.0) == pytest.approx(1.0, abs=1e-15)
        for m in range(1, ell + 1):
            assert assoc_legendre(ell, m, 1.0) == 0.0
    assert assoc_legendre(2, 1, 0.5) == pytest.approx(-3 * 0.5 * sqrt(1 - 0.25), abs=1e-15)


def test_assoc_legendre_rodrigues_oracle():
    # P_l^m(x) = (-1)^m (1-x^2)^{m/2} d^m/dx^m P_l(x) with P_l from Rodrigues' formula
    t = sympy.symbols("t")
    for ell in range(6):
        pl = sympy.diff((t**2 - 1) ** ell, t, ell) / (2**ell * sympy.factorial(ell))
        for m in range(ell + 1):
            expr = (-1) ** m * (1 - t**2) ** sympy.Rational(m, 2) * sympy.diff(pl, t, m)
            for x in (-0.9, -0.2, 0.35, 0.8):
                assert assoc_legendre(ell, m, x) == pytest.approx(float(expr.subs(t, x)), abs=1e-12)


def test_assoc_legendre_matches_scipy():
    x = np.linspace(-1, 1, 41)
    for ell in (5, 20, 60):
        for m in (0, 1, ell // 2, ell):
            np.testing.assert_allclose(assoc_legendre(ell, m, x), lpmv(m, ell, x), rtol=1e-10, atol=1e-12)


def test_assoc_legendre_errors():
    with pytest.raises(DomainError):
        assoc_legendre(2, 3, 0.0)
    with pytest.raises(DomainError):
        assoc_legendre(2, -1, 0.0)
    with pytest.raises(DomainError):
        assoc_legendre(2, 1, 1.5)


def test_norm_const_examples():
    assert norm_const(0, 0) == pytest.approx(C00, abs=1e-15)
    for ell in range(20):
        assert norm_const(ell, 0) == pytest.approx(sqrt((2 * ell + 1) / (4 * pi)), rel=1e-14)
    np.testing.assert_allclose(norm_const_0(20), [norm_const(ell, 0) for ell in range(20)], rtol=1e-14)
    # exact rational factorial ratio for c_10^10
    ratio = Fraction(factorial(0), factorial(20))
    oracle = sqrt(21 / (4 * pi) * float(ratio))
    assert norm_const(10, 10) == pytest.approx(oracle, rel=1e-13)
    with pytest.raises(DomainError):
        norm_const(3, 4)


def test_norm_const_large_degree_finite():
    for m in (0, 64, 128):
        v = norm_const(128, m)
        assert np.isfinite(v) and v > 0


def test_eval_Y_examples():
    assert eval_Y(0, 0, 0.7, 1.9) == pytest.approx(C00, abs=1e-15)
    assert eval_Y(1, 0, 0.0, 0.0) == pytest.approx(0.48860251190291992, abs=1e-15)
    for ell in range(1, 6):
        for m in range(-ell, ell + 1):
            if m:
                assert eval_Y(ell, m, 0.0, 0.0) == 0.0


def test_eval_Y_column_examples():
    np.testing.assert_allclose(eval_Y_column(0, beta=0.3, alpha=0.2), [C00])
    np.testing.assert_allclose(eval_Y_column(1, unit_vector(0.0, 0.0)), [0, sqrt(3 / (4 * pi)), 0], atol=1e-15)


@given(st.floats(0, 2 * np.pi), st.floats(0, np.pi), st.integers(0, 30))
def test_column_norm_addition_theorem(alpha, beta, ell):
    col = eval_Y_column(ell, beta=beta, alpha=alpha)
    assert col.shape == (2 * ell + 1,)
    assert np.linalg.norm(col) ** 2 == pytest.approx((2 * ell + 1) / (4 * pi), rel=1e-10)


def test_conjugate_symmetry():
    rng = np.random.default_rng(0)
    b = rng.uniform(0, np.pi, 100)
    a = rng.uniform(0, 2 * np.pi, 100)
    for ell in range(8):
        for m in range(ell + 1):
            np.testing.assert_allclose(eval_Y(ell, -m, b, a), (-1) ** m * np.conj(eval_Y(ell, m, b, a)), atol=1e-12)


def test_orthonormality_L24():
    L = 25
    g = make_grid(L)
    b, a = g.mesh()
    Y = harmonic_columns(L, b, a)
    mask = np.abs(np.arange(-(L - 1), L))[None, :] <= np.arange(L)[:, None]
    Y = Y[mask].reshape(-1, b.size)
    gram = (Y * g.weights.ravel()) @ Y.conj().T
    assert np.abs(gram - np.eye(L * L)).max() < 1e-8


def test_middle_column_is_harmonic():
    rng = np.random.default_rng(1)
    for _ in range(10):
        beta, alpha = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        for ell in range(10):
            D = wigner_D(ell, (alpha, beta, 0.0))
            np.testing.assert_allclose(eval_Y_column(ell, beta=beta, alpha=alpha), norm_const(ell, 0) * D[:, ell], atol=1e-10)


def test_legendre_table_stable_at_high_degree():
    x = np.cos(np.linspace(0, np.pi, 33))
    T = legendre_table(129, x)
    assert np.all(np.isfinite(T))
    # normalized values for m = 0 stay bounded by c_l^0
    assert np.all(np.abs(T[:, 0]) <= norm_const_0(129)[:, None] + 1e-12)
    np.testing.assert_allclose(T[128, 3], norm_const(128, 3) * lpmv(3, 128, x), rtol=1e-8, atol=1e-12)


def test_harmonic_columns_shape_and_zero_padding():
    cols = harmonic_columns(4, np.array([0.3, 0.5]), np.array([0.1, 0.2]))
    assert cols.shape == (4, 7, 2)
    assert np.all(cols[0, :3] == 0) and np.all(cols[1, :2] == 0)
