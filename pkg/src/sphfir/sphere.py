"""Angles, rotations and sampling grids on the sphere.

Rotations use the z-y-z Euler convention throughout:
``R(alpha, beta, gamma) = Rz(alpha) @ Ry(beta) @ Rz(gamma)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi
NORTH_POLE = np.array([0.0, 0.0, 1.0])

_ANGLE_TOL = 1e-12


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def _check_beta(beta):
    beta = np.asarray(beta, dtype=float)
    if np.any(beta < -_ANGLE_TOL) or np.any(beta > np.pi + _ANGLE_TOL):
        raise DomainError(f"colatitude beta must lie in [0, pi], got {beta}")
    return np.clip(beta, 0.0, np.pi)


@dataclass(frozen=True)
class EulerAngles:
    """z-y-z Euler angles. ``alpha`` and ``gamma`` are reduced mod 2*pi;
    ``beta`` outside [0, pi] is rejected rather than wrapped."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)
        object.__setattr__(self, "gamma", float(self.gamma) % TWO_PI)
        object.__setattr__(self, "beta", float(_check_beta(self.beta)))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _polar_orthonormalize(m: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(m)
    return u @ vt


@dataclass(frozen=True, eq=False)
class Rotation:
    """A proper rotation of R^3 stored as its 3x3 matrix.

    ``euler`` caches the angles the rotation was built from, which lets
    :func:`sphfir.wigner.wigner_D_from_rotation` skip angle extraction.
    """

    matrix: np.ndarray
    euler: EulerAngles | None = field(default=None)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise DomainError(f"rotation matrix must be 3x3, got {m.shape}")
        if np.max(np.abs(m @ m.T - np.eye(3))) > 1e-9 or abs(np.linalg.det(m) - 1.0) > 1e-9:
            raise DomainError("matrix is not a proper rotation")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> Rotation:
        return cls(np.eye(3), EulerAngles())

    def inverse(self) -> Rotation:
        return Rotation(self.matrix.T)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Rotate points stored along the last axis (shape ``(..., 3)``)."""
        return np.asarray(points) @ self.matrix.T

    def to_euler(self) -> EulerAngles:
        if self.euler is not None:
            return self.euler
        return euler_from_matrix(self.matrix)

    def __matmul__(self, other: Rotation) -> Rotation:
        return compose(self, other)


def rotation_from_euler(e: EulerAngles | tuple[float, float, float]) -> Rotation:
    """Rotation matrix ``Rz(alpha) Ry(beta) Rz(gamma)``."""
    if not isinstance(e, EulerAngles):
        e = EulerAngles(*e)
    m = rot_z(e.alpha) @ rot_y(e.beta) @ rot_z(e.gamma)
    return Rotation(m, e)


def euler_from_matrix(m: np.ndarray) -> EulerAngles:
    """Recover z-y-z angles. At gimbal lock (beta in {0, pi}) gamma is set to 0."""
    m = np.asarray(m, dtype=float)
    sin_beta = np.hypot(m[0, 2], m[1, 2])
    beta = np.arctan2(sin_beta, m[2, 2])
    if sin_beta < 1e-12:
        if m[2, 2] > 0:
            return EulerAngles(np.arctan2(m[1, 0], m[0, 0]), 0.0, 0.0)
        return EulerAngles(np.arctan2(-m[0, 1], m[1, 1]), np.pi, 0.0)
    alpha = np.arctan2(m[1, 2], m[0, 2])
    gamma = np.arctan2(m[2, 1], -m[2, 0])
    return EulerAngles(alpha, beta, gamma)


def euler_from_matrices(ms: np.ndarray) -> np.ndarray:
    """Vectorized :func:`euler_from_matrix` for a stack ``(..., 3, 3)``; returns ``(..., 3)``."""
    ms = np.asarray(ms, dtype=float)
    sin_beta = np.hypot(ms[..., 0, 2], ms[..., 1, 2])
    beta = np.arctan2(sin_beta, ms[..., 2, 2])
    alpha = np.arctan2(ms[..., 1, 2], ms[..., 0, 2])
    gamma = np.arctan2(ms[..., 2, 1], -ms[..., 2, 0])
    lock = sin_beta < 1e-12
    north = lock & (ms[..., 2, 2] > 0)
    south = lock & ~north
    alpha = np.where(north, np.arctan2(ms[..., 1, 0], ms[..., 0, 0]), alpha)
    alpha = np.where(south, np.arctan2(-ms[..., 0, 1], ms[..., 1, 1]), alpha)
    gamma = np.where(lock, 0.0, gamma)
    return np.stack([alpha % TWO_PI, beta, gamma % TWO_PI], axis=-1)


def matrices_from_euler(angles: np.ndarray) -> np.ndarray:
    """Stack of ``Rz(a) Ry(b) Rz(g)`` for angle rows ``(..., 3)``."""
    a, b, g = np.moveaxis(np.asarray(angles, dtype=float), -1, 0)
    ca, sa, cb, sb, cg, sg = np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(g), np.sin(g)
    m = np.empty(a.shape + (3, 3))
    m[..., 0, 0] = ca * cb * cg - sa * sg
    m[..., 0, 1] = -ca * cb * sg - sa * cg
    m[..., 0, 2] = ca * sb
    m[..., 1, 0] = sa * cb * cg + ca * sg
    m[..., 1, 1] = -sa * cb * sg + ca * cg
    m[..., 1, 2] = sa * sb
    m[..., 2, 0] = -sb * cg
    m[..., 2, 1] = sb * sg
    m[..., 2, 2] = cb
    return m


def compose(r: Rotation, s: Rotation) -> Rotation:
    """Matrix product ``r @ s``; re-orthonormalized if round-off drift exceeds 1e-12."""
    m = r.matrix @ s.matrix
    if np.max(np.abs(m @ m.T - np.eye(3))) > 1e-12:
        m = _polar_orthonormalize(m)
    return Rotation(m)


def random_rotation(rng: np.random.Generator) -> Rotation:
    """Haar-uniform random rotation."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    m = np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )
    return Rotation(m)


def unit_vector(alpha, beta) -> np.ndarray:
    """Point on S^2 at longitude ``alpha`` and colatitude ``beta``.

    Broadcasts over array inputs; the Cartesian components are stacked on
    the last axis.
    """
    beta = _check_beta(beta)
    alpha = np.asarray(alpha, dtype=float)
    sb = np.sin(beta)
    return np.stack(np.broadcast_arrays(np.cos(alpha) * sb, np.sin(alpha) * sb, np.cos(beta)), axis=-1)


def to_angles(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`unit_vector`: returns ``(beta, alpha)`` with alpha in [0, 2*pi)."""
    p = np.asarray(points, dtype=float)
    beta = np.arctan2(np.hypot(p[..., 0], p[..., 1]), p[..., 2])
    alpha = np.arctan2(p[..., 1], p[..., 0]) % TWO_PI
    return beta, alpha


# --------------------------------------------------------------------------
# grids

SCHEMES = ("gl", "equiangular")


def _fejer_weights(n: int) -> np.ndarray:
    """Fejer's first rule on midpoint nodes cos(pi (j + 1/2) / n); integrates
    polynomials in cos(beta) of degree < n exactly against sin(beta) d(beta)."""
    theta = np.pi * (np.arange(n) + 0.5) / n
    k = np.arange(1, n // 2 + 1)
    s = np.cos(2.0 * np.outer(theta, k)) / (4.0 * k**2 - 1.0)
    return (2.0 / n) * (1.0 - 2.0 * s.sum(axis=1))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Tensor-product grid in (beta, alpha).

    ``beta_weights`` integrate ``g(beta) sin(beta) d(beta)`` over [0, pi];
    alpha nodes are uniform with weight ``2*pi / n_alpha`` each.
    """

    beta_nodes: np.ndarray
    beta_weights: np.ndarray
    n_alpha: int
    scheme: str

    def __post_init__(self):
        for name in ("beta_nodes", "beta_weights"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if np.any(np.diff(self.beta_nodes) <= 0):
            raise DomainError("beta nodes must be strictly increasing")

    @property
    def n_beta(self) -> int:
        return len(self.beta_nodes)

    @property
    def alpha_nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_alpha) / self.n_alpha

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_beta, self.n_alpha)

    @property
    def weights(self) -> np.ndarray:
        """Per-node weights, shape ``(n_beta, n_alpha)``; they sum to 4*pi."""
        return np.outer(self.beta_weights, np.full(self.n_alpha, TWO_PI / self.n_alpha))

    @property
    def max_bandwidth(self) -> int:
        """Largest L for which products of harmonics of degree < L integrate exactly."""
        if self.scheme == "gl":
            lb = self.n_beta
        else:
            lb = (self.n_beta + 1) // 2
        return max(0, min(lb, (self.n_alpha + 1) // 2))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(beta, alpha)`` arrays of shape :attr:`shape`."""
        return np.meshgrid(self.beta_nodes, self.alpha_nodes, indexing="ij")

    def points(self) -> np.ndarray:
        b, a = self.mesh()
        return unit_vector(a, b)

    def integrate(self, values: np.ndarray) -> complex | float:
        return np.sum(self.weights * values)

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        """Discrete version of the integral of ``f * conj(g)`` over the sphere."""
        return self.integrate(f * np.conj(g))


def grid_from_counts(n_beta: int, n_alpha: int, scheme: str = "gl") -> SphereGrid:
    if n_beta < 1 or n_alpha < 1:
        raise DomainError("grid sizes must be positive")
    if scheme == "gl":
        x, w = np.polynomial.legendre.leggauss(n_beta)
        # ascending beta means descending cos(beta)
        beta = np.arccos(x[::-1])
        weights = w[::-1]
    elif scheme == "equiangular":
        beta = np.pi * (np.arange(n_beta) + 0.5) / n_beta
        weights = _fejer_weights(n_beta)
    else:
        raise DomainError(f"unknown grid scheme {scheme!r}; expected one of {SCHEMES}")
    return SphereGrid(beta, weights, int(n_alpha), scheme)


def make_grid(L: int, oversample: int = 2, scheme: str = "gl") -> SphereGrid:
    """Grid sized for bandwidth ``L``: ``oversample * L`` nodes in each angle.

    The default Gauss-Legendre scheme integrates every product of harmonics
    of degree < L exactly. The equiangular scheme (Fejer midpoints) needs
    ``oversample >= 2`` for the same guarantee.
    """
    if L < 1:
        raise DomainError(f"bandwidth must be >= 1, got {L}")
    if oversample < 2:
        raise DomainError(f"oversample must be >= 2, got {oversample}")
    return grid_from_counts(oversample * L, oversample * L, scheme)
