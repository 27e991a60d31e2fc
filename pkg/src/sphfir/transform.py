"""Forward and inverse spherical harmonic transforms on tensor grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .harmonics import harmonic_columns, legendre_table
from .sphere import DomainError, SphereGrid, _check_beta
from .spectrum import Spectrum


class UndersampledGridError(DomainError):
    """The grid cannot integrate the requested bandwidth exactly."""


class RankDeficientError(DomainError):
    """A least-squares design matrix is numerically singular."""


@dataclass(frozen=True, eq=False)
class SampledField:
    """Samples of a function on every node of a :class:`SphereGrid`."""

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.grid.shape:
            raise DomainError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values) or bool(np.all(self.values.imag == 0))

    @property
    def real(self) -> SampledField:
        return SampledField(self.grid, np.real(self.values))


def _signed_table(L: int, beta: np.ndarray) -> np.ndarray:
    """``c_l^|m| P_l^|m|(cos beta)`` times the negative-order sign, shape ``(L, 2L-1, n)``."""
    table = legendre_table(L, np.cos(beta))
    c = L - 1
    out = np.zeros((L, 2 * L - 1, len(beta)))
    for m in range(L):
        out[:, c + m] = table[:, m]
        if m:
            out[:, c - m] = (-1) ** m * table[:, m]
    return out


def _orders(L: int) -> np.ndarray:
    return np.arange(-(L - 1), L)


def synthesize(F: Spectrum, grid: SphereGrid) -> SampledField:
    """Evaluate ``f(u) = sum_l F_l Y_l(u)`` at every grid node."""
    L = F.L
    if L == 0:
        return SampledField(grid, np.zeros(grid.shape, dtype=complex))
    T = _signed_table(L, grid.beta_nodes)
    S = np.einsum("lm,lmi->im", F.data, T)
    E = np.exp(-1j * np.outer(_orders(L), grid.alpha_nodes))
    values = S @ E
    if F.real:
        values = values.real
    return SampledField(grid, values)


def synthesize_points(F: Spectrum, beta, alpha) -> np.ndarray:
    """Evaluate the expansion at arbitrary points (broadcast over ``beta``, ``alpha``)."""
    beta = _check_beta(beta)
    Y = harmonic_columns(F.L, beta, alpha)
    out = np.einsum("lm,lm...->...", F.data, Y)
    return out.real if F.real else out


def _alpha_projections(values: np.ndarray, grid: SphereGrid, L: int) -> np.ndarray:
    """``sum_j (2 pi / n_alpha) f(beta_i, alpha_j) exp(+1j m alpha_j)``, shape ``(n_beta, 2L-1)``."""
    E = np.exp(1j * np.outer(grid.alpha_nodes, _orders(L)))
    return (values @ E) * (2.0 * np.pi / grid.n_alpha)


def analyze_quadrature(f: SampledField, L: int) -> Spectrum:
    """Coefficients ``F_l^m = sum_nodes w f conj(Y_l^m)`` for ``l < L``.

    Raises :class:`UndersampledGridError` when the grid cannot integrate
    products of degree-<L harmonics exactly.
    """
    grid = f.grid
    if L < 1:
        raise DomainError(f"bandwidth must be >= 1, got {L}")
    if L > grid.max_bandwidth:
        raise UndersampledGridError(
            f"{grid.scheme} grid {grid.shape} supports bandwidth <= {grid.max_bandwidth}, requested {L}"
        )
    T = _signed_table(L, grid.beta_nodes)
    A = _alpha_projections(np.asarray(f.values, dtype=complex), grid, L)
    data = np.einsum("i,lmi,im->lm", grid.beta_weights, T, A)
    mask = np.abs(_orders(L))[None, :] <= np.arange(L)[:, None]
    data = np.where(mask, data, 0.0)
    return Spectrum(data, real=f.is_real)


def heat_kernel_window(L: int, sigma: float) -> np.ndarray:
    """Per-degree damping ``exp(-l (l+1) sigma)``, a heat-kernel smoothing window."""
    ell = np.arange(L)
    return np.exp(-ell * (ell + 1) * sigma)


def analyze_irf(
    f: SampledField,
    L: int,
    window=None,
    weighting: str = "quadrature",
    regularize: bool = False,
) -> Spectrum:
    """Iterative residual fitting.

    For ``l = 0, 1, ..., L-1`` fit the degree-``l`` harmonics to the current
    residual by least squares, store ``window[l]`` times the fitted
    coefficients, and subtract that weighted component from the residual.

    Parameters
    ----------
    window : array_like, optional
        Per-degree weights; defaults to ones, in which case an exact grid
        reproduces :func:`analyze_quadrature`.
    weighting : {"quadrature", "uniform"}
        Residual norm used in each fit: the grid's quadrature weights
        (a discretized L2 norm on the sphere) or plain sample counting.
    regularize : bool
        Add a 1e-10 ridge to a rank-deficient normal matrix instead of raising
        :class:`RankDeficientError`.
    """
    grid = f.grid
    n_nodes = grid.n_beta * grid.n_alpha
    if n_nodes < (L + 1) ** 2:
        raise DomainError(f"IRF needs at least {(L + 1) ** 2} nodes for bandwidth {L}, grid has {n_nodes}")
    window = np.ones(L) if window is None else np.asarray(window, dtype=float)
    if window.shape != (L,):
        raise DomainError(f"window must have length {L}")
    if weighting == "quadrature":
        wb = grid.beta_weights
        wa = 2.0 * np.pi / grid.n_alpha
    elif weighting == "uniform":
        wb = np.ones(grid.n_beta)
        wa = 1.0
    else:
        raise DomainError(f"unknown weighting {weighting!r}")

    T = _signed_table(L, grid.beta_nodes)
    alpha = grid.alpha_nodes
    resid = np.array(f.values, dtype=complex)
    c = L - 1
    data = np.zeros((L, 2 * L - 1), dtype=complex)
    for ell in range(L):
        ms = np.arange(-ell, ell + 1)
        Tl = T[ell, c - ell : c + ell + 1]  # (2l+1, n_beta)
        E = np.exp(-1j * np.outer(ms, alpha))  # Y phase per order
        # sum_j exp(1j (m - m') alpha_j) is n_alpha where m = m' mod n_alpha, else 0
        alias = ((ms[:, None] - ms[None, :]) % grid.n_alpha == 0) * (wa * grid.n_alpha)
        gram = (Tl * wb) @ Tl.T * alias
        rhs = np.einsum("mi,i,ij,mj->m", Tl, wb, resid, np.conj(E)) * wa
        evals = np.linalg.eigvalsh(gram)
        if evals[0] <= 1e-12 * max(evals[-1], 1e-300):
            if not regularize:
                raise RankDeficientError(f"degree {ell} design is rank deficient (min eigenvalue {evals[0]:.3g})")
            gram = gram + 1e-10 * np.eye(len(ms))
        x = np.linalg.solve(gram, rhs) * window[ell]
        data[ell, c - ell : c + ell + 1] = x
        resid -= (Tl.T * x) @ E
    return Spectrum(data, real=f.is_real)
