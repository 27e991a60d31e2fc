"""Brute-force Fourier analysis on SO(3).

Everything here works by direct quadrature over a tensor grid in the Euler
angles and is meant for small bandwidths (``L <= 6``). These routines are
the independent spatial-domain oracles for the product formulas in
:mod:`sphfir.filtering`.

Measure: ``dR = sin(beta) d(alpha) d(beta) d(gamma) / (8 pi^2)``, total mass 1.
Transform: ``F(l) = int f(R) D_l(R)^H dR``; inverse
``f(R) = sum_l (2l+1) trace(F(l) D_l(R))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .harmonics import norm_const_0
from .sphere import SphereGrid, euler_from_matrices, grid_from_counts, matrices_from_euler, to_angles
from .spectrum import Spectrum
from .transform import SampledField, synthesize_points
from .wigner import wigner_D_batch

MAX_ORACLE_BANDWIDTH = 6


@dataclass(frozen=True, eq=False)
class So3Grid:
    """Gauss-Legendre in cos(beta) times uniform alpha and gamma.

    Node arrays are flattened in C order over ``(beta, alpha, gamma)``.
    """

    sphere: SphereGrid
    n_gamma: int

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.sphere.n_beta, self.sphere.n_alpha, self.n_gamma)

    @property
    def gamma_nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_gamma) / self.n_gamma

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def angles(self) -> np.ndarray:
        """Euler angles ``(alpha, beta, gamma)`` per node, shape ``(size, 3)``."""
        b, a, g = np.meshgrid(self.sphere.beta_nodes, self.sphere.alpha_nodes, self.gamma_nodes, indexing="ij")
        return np.stack([a.ravel(), b.ravel(), g.ravel()], axis=-1)

    def matrices(self) -> np.ndarray:
        return matrices_from_euler(self.angles())

    @property
    def weights(self) -> np.ndarray:
        w = self.sphere.weights[:, :, None] * (2.0 * np.pi / self.n_gamma) / (8.0 * np.pi**2)
        return np.broadcast_to(w, self.shape).ravel()

    @property
    def max_bandwidth(self) -> int:
        """Largest L for which products of D-matrix entries of degree < L integrate exactly."""
        return min(self.sphere.max_bandwidth, (self.n_gamma + 1) // 2)


def make_so3_grid(L: int) -> So3Grid:
    """``2L`` nodes per Euler angle; exact for products of two bandwidth-``L`` functions."""
    return So3Grid(grid_from_counts(2 * L, 2 * L, "gl"), 2 * L)


# --------------------------------------------------------------------------
# lifting


def lift_spectrum(F: np.ndarray) -> np.ndarray:
    """SO(3) coefficient of the lifted function ``R -> f(R n)`` at one degree.

    Only the middle row is nonzero and it equals ``F_l / (4 pi c_l^0)``.
    """
    F = np.asarray(F, dtype=complex)
    ell = (F.size - 1) // 2
    out = np.zeros((F.size, F.size), dtype=complex)
    out[ell] = F / (4.0 * np.pi * norm_const_0(ell + 1)[ell])
    return out


def lift_coefficients(F: Spectrum) -> list[np.ndarray]:
    return [lift_spectrum(F[ell]) for ell in range(F.L)]


def lifted_sampler(F: Spectrum) -> Callable[[np.ndarray], np.ndarray]:
    """Function on rotation matrices ``(..., 3, 3)`` returning ``f(R n)``."""

    def sample(mats: np.ndarray) -> np.ndarray:
        beta, alpha = to_angles(np.asarray(mats)[..., :, 2])
        return synthesize_points(F, beta, alpha)

    return sample


def coefficient_sampler(coeffs: list[np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    """Function on rotation matrices evaluating the inverse SO(3) transform of ``coeffs``."""

    def sample(mats: np.ndarray) -> np.ndarray:
        mats = np.asarray(mats)
        flat = mats.reshape(-1, 3, 3)
        return so3_synthesize(coeffs, euler_from_matrices(flat)).reshape(mats.shape[:-2])

    return sample


def sample_on_grid(func: Callable[[np.ndarray], np.ndarray], grid: So3Grid) -> np.ndarray:
    return np.asarray(func(grid.matrices()))


# --------------------------------------------------------------------------
# transforms


def so3_analyze_bruteforce(g: np.ndarray, grid: So3Grid, L: int) -> list[np.ndarray]:
    """``F(l) = sum_nodes w g(R) D_l(R)^H`` for ``l < L``."""
    g = np.asarray(g).ravel()
    w = grid.weights * g
    Ds = wigner_D_batch(L, grid.angles())
    return [np.einsum("k,kab->ba", w, np.conj(D)) for D in Ds]


def so3_synthesize(coeffs: list[np.ndarray], angles: np.ndarray) -> np.ndarray:
    """``f(R) = sum_l (2l+1) trace(F(l) D_l(R))`` at rotations given by Euler angle rows."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    Ds = wigner_D_batch(len(coeffs), angles)
    out = np.zeros(len(angles), dtype=complex)
    for ell, (Fl, D) in enumerate(zip(coeffs, Ds)):
        out += (2 * ell + 1) * np.einsum("ab,kba->k", Fl, D)
    return out


def project_to_sphere(g: np.ndarray, grid: So3Grid) -> SampledField:
    """Average over the third Euler angle: ``(1/2pi) int g(alpha, beta, gamma) d(gamma)``."""
    g = np.asarray(g).reshape(grid.shape)
    return SampledField(grid.sphere, g.mean(axis=2))


def so3_convolve_bruteforce(
    h: np.ndarray,
    f: np.ndarray | Callable[[np.ndarray], np.ndarray],
    grid: So3Grid,
) -> np.ndarray:
    """``g(V) = sum_R w_R h(R) f(R^{-1} V)`` at every grid node ``V``.

    ``h`` is sampled on the grid. ``f`` must be evaluated off-grid, so it is
    either a callable on rotation matrices or grid samples, which are first
    expanded with :func:`so3_analyze_bruteforce` at the grid's bandwidth.
    """
    if not callable(f):
        f = coefficient_sampler(so3_analyze_bruteforce(f, grid, grid.max_bandwidth))
    h = np.asarray(h).ravel()
    wh = grid.weights * h
    mats = grid.matrices()
    inv = np.transpose(mats, (0, 2, 1))
    out = np.empty(grid.size, dtype=complex)
    for k, V in enumerate(mats):
        out[k] = np.dot(wh, f(inv @ V))
    return out


def rotation_correlate_bruteforce(F: Spectrum, H: Spectrum, grid: So3Grid, sphere: SphereGrid | None = None) -> np.ndarray:
    """``g(R) = int conj(f(u)) h(R u) du`` at every node of ``grid``, by sphere quadrature."""
    if sphere is None:
        sphere = grid_from_counts(2 * max(F.L, H.L), 2 * max(F.L, H.L), "gl")
    pts = sphere.points().reshape(-1, 3)
    b, a = sphere.mesh()
    fconj = np.conj(synthesize_points(F, b, a)).ravel() * sphere.weights.ravel()
    out = np.empty(grid.size, dtype=complex)
    for k, R in enumerate(grid.matrices()):
        beta, alpha = to_angles(pts @ R.T)
        out[k] = np.dot(fconj, synthesize_points(H, beta, alpha))
    return out
