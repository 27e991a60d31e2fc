"""Associated Legendre functions and spherical harmonics.

Conventions:

* ``P_l^m`` carries the Condon-Shortley phase ``(-1)^m``.
* ``Y_l^m(beta, alpha) = c_l^m P_l^m(cos beta) exp(-1j m alpha)``; note the
  *negative* exponent. Negative orders follow
  ``Y_l^{-m} = (-1)^m conj(Y_l^m)``.
* Vectors over order run ``m = -l, ..., l``; order ``m`` sits at index
  ``m + l``.
"""

from __future__ import annotations

from math import lgamma, log, pi, sqrt

import numpy as np

from .sphere import DomainError, _check_beta, to_angles


def _check_degree_order(ell: int, m: int, signed: bool):
    if ell < 0:
        raise DomainError(f"degree must be non-negative, got {ell}")
    lo = -ell if signed else 0
    if not lo <= m <= ell:
        raise DomainError(f"order m={m} outside [{lo}, {ell}]")


def assoc_legendre(ell: int, m: int, x):
    """Unnormalized associated Legendre function ``P_l^m(x)``, ``0 <= m <= l``.

    Upward recurrence in degree at fixed order, seeded by
    ``P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}``.
    """
    _check_degree_order(ell, m, signed=False)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("argument must lie in [-1, 1]")
    s = np.sqrt((1.0 - x) * (1.0 + x))
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm = -(2 * k - 1) * s * pmm
    if ell == m:
        return pmm
    prev, cur = pmm, (2 * m + 1) * x * pmm
    for n in range(m + 2, ell + 1):
        prev, cur = cur, ((2 * n - 1) * x * cur - (n + m - 1) * prev) / (n - m)
    return cur


def norm_const(ell: int, m: int) -> float:
    """``c_l^m = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!)``, evaluated through log-gamma."""
    _check_degree_order(ell, m, signed=True)
    logc = 0.5 * (log(2 * ell + 1) - log(4 * pi) + lgamma(ell - m + 1) - lgamma(ell + m + 1))
    return float(np.exp(logc))


def norm_const_0(L: int) -> np.ndarray:
    """``c_l^0`` for ``l = 0, ..., L-1``."""
    ell = np.arange(L)
    return np.sqrt((2 * ell + 1) / (4 * pi))


def legendre_table(L: int, x) -> np.ndarray:
    """Normalized values ``c_l^m P_l^m(x)`` for ``0 <= m <= l < L``.

    Returns an array of shape ``(L, L) + x.shape`` indexed ``[l, m]``; entries
    with ``m > l`` are zero. Uses the standard orthonormal three-term
    recurrence, so nothing overflows for large degree.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((L, L) + x.shape)
    if L == 0:
        return out
    s = np.sqrt(np.clip((1.0 - x) * (1.0 + x), 0.0, None))
    out[0, 0] = 1.0 / sqrt(4 * pi)
    for m in range(1, L):
        out[m, m] = -sqrt((2 * m + 1) / (2 * m)) * s * out[m - 1, m - 1]
    for m in range(L - 1):
        out[m + 1, m] = sqrt(2 * m + 3) * x * out[m, m]
        for ell in range(m + 2, L):
            a = sqrt((4 * ell * ell - 1) / (ell * ell - m * m))
            b = sqrt(((ell - 1) ** 2 - m * m) / (4 * (ell - 1) ** 2 - 1))
            out[ell, m] = a * (x * out[ell - 1, m] - b * out[ell - 2, m])
    return out


def eval_Y(ell: int, m: int, beta, alpha):
    """Spherical harmonic ``Y_l^m(beta, alpha)``; broadcasts over angle arrays."""
    _check_degree_order(ell, m, signed=True)
    beta = _check_beta(beta)
    alpha = np.asarray(alpha, dtype=float)
    am = abs(m)
    p = legendre_table(ell + 1, np.cos(beta))[ell, am]
    y = p * np.exp(-1j * am * alpha)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y


def harmonic_columns(L: int, beta, alpha) -> np.ndarray:
    """All harmonics of degree < L at the given points.

    Returns shape ``(L, 2L-1) + point_shape``: row ``l`` holds
    ``Y_l^m`` at column ``m + L - 1`` (zero where ``|m| > l``).
    """
    beta = _check_beta(beta)
    alpha = np.asarray(alpha, dtype=float)
    beta, alpha = np.broadcast_arrays(beta, alpha)
    table = legendre_table(L, np.cos(beta))
    out = np.zeros((L, 2 * L - 1) + beta.shape, dtype=complex)
    for m in range(L):
        ph = np.exp(-1j * m * alpha)
        pos = table[m:, m] * ph
        out[m:, L - 1 + m] = pos
        if m:
            out[m:, L - 1 - m] = (-1) ** m * np.conj(pos)
    return out


def eval_Y_column(ell: int, u=None, *, beta=None, alpha=None) -> np.ndarray:
    """Column vector ``[Y_l^{-l}, ..., Y_l^{l}]`` at a point.

    The point is either a unit 3-vector ``u`` or the angles ``beta, alpha``.
    """
    if u is not None:
        beta, alpha = to_angles(np.asarray(u, dtype=float))
    if beta is None or alpha is None:
        raise DomainError("give either a unit vector or both beta and alpha")
    cols = harmonic_columns(ell + 1, beta, alpha)
    return cols[ell, : 2 * ell + 1]
