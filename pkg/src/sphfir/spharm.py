"""Filtering closed genus-zero surfaces through their coordinate spectra.

A surface parameterized by the sphere, ``u -> (x(u), y(u), z(u))``, is
expanded coordinate by coordinate. Degree ``l`` then carries a
``3 x (2l+1)`` block whose rows are the x, y, z coefficient vectors, and any
sphere filter acts on it by the same right multiplication ``block @ H(l)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filtering import TransferFunction, apply
from .sphere import DomainError, SphereGrid, unit_vector
from .spectrum import Spectrum, random_spectrum
from .transform import SampledField, analyze_irf, analyze_quadrature, synthesize, synthesize_points


@dataclass(frozen=True, eq=False)
class SpharmSpectrum:
    """Coefficient spectra of the three coordinate functions."""

    x: Spectrum
    y: Spectrum
    z: Spectrum

    def __post_init__(self):
        if not self.x.L == self.y.L == self.z.L:
            raise DomainError("coordinate spectra must share a bandwidth")

    @property
    def L(self) -> int:
        return self.x.L

    @property
    def rows(self) -> tuple[Spectrum, Spectrum, Spectrum]:
        return (self.x, self.y, self.z)

    def block(self, ell: int) -> np.ndarray:
        """The ``3 x (2l+1)`` coefficient matrix at degree ``ell``."""
        return np.vstack([s[ell] for s in self.rows])

    @classmethod
    def from_blocks(cls, blocks) -> SpharmSpectrum:
        blocks = [np.asarray(b) for b in blocks]
        return cls(*(Spectrum.from_vectors([b[i] for b in blocks], real=True) for i in range(3)))


def spharm_analyze(
    fx: SampledField, fy: SampledField, fz: SampledField, L: int, method: str = "quadrature", **irf_options
) -> SpharmSpectrum:
    """Expand each coordinate field; ``method`` is ``"quadrature"`` or ``"irf"``."""
    if not (fx.grid is fy.grid is fz.grid) and not (fx.grid.shape == fy.grid.shape == fz.grid.shape):
        raise DomainError("coordinate fields must share a grid")
    if method == "quadrature":
        rows = [analyze_quadrature(f, L) for f in (fx, fy, fz)]
    elif method == "irf":
        rows = [analyze_irf(f, L, **irf_options) for f in (fx, fy, fz)]
    else:
        raise DomainError(f"unknown analysis method {method!r}")
    return SpharmSpectrum(*rows)


def spharm_filter(S: SpharmSpectrum, H: TransferFunction) -> SpharmSpectrum:
    """``G_l = F_l @ H(l)`` with ``F_l`` the 3-row coefficient block."""
    if H.L < S.L:
        raise DomainError(f"transfer function bandwidth {H.L} is below the surface bandwidth {S.L}")
    return SpharmSpectrum.from_blocks([S.block(ell) @ H[ell] for ell in range(S.L)])


def spharm_filter_rowwise(S: SpharmSpectrum, H: TransferFunction) -> SpharmSpectrum:
    """Same result as :func:`spharm_filter`, computed one coordinate at a time."""
    return SpharmSpectrum(*(apply(H, s) for s in S.rows))


@dataclass(frozen=True, eq=False)
class SurfaceSamples:
    """Coordinate fields of a surface on a sphere grid."""

    x: SampledField
    y: SampledField
    z: SampledField

    @property
    def grid(self) -> SphereGrid:
        return self.x.grid

    @property
    def points(self) -> np.ndarray:
        """Vertices, shape ``(n_beta, n_alpha, 3)``."""
        return np.stack([np.real(f.values) for f in (self.x, self.y, self.z)], axis=-1)

    @property
    def degenerate(self) -> bool:
        """True when every vertex collapses to the origin (zero spectrum)."""
        return bool(np.all(self.points == 0.0))

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def spharm_synthesize(S: SpharmSpectrum, grid: SphereGrid) -> SurfaceSamples:
    """Sample the surface on ``grid``; imaginary round-off is dropped."""
    fields = [SampledField(grid, np.real(synthesize(s, grid).values)) for s in S.rows]
    return SurfaceSamples(*fields)


def pole_points(S: SpharmSpectrum) -> np.ndarray:
    """Surface points at the two poles, shape ``(2, 3)``: north then south."""
    beta = np.array([0.0, np.pi])
    alpha = np.zeros(2)
    return np.stack([np.real(synthesize_points(s, beta, alpha)) for s in S.rows], axis=-1)


# --------------------------------------------------------------------------
# synthetic surfaces


def unit_sphere_fields(grid: SphereGrid) -> SurfaceSamples:
    p = grid.points()
    return SurfaceSamples(*(SampledField(grid, p[..., i]) for i in range(3)))


def bumpy_sphere(
    grid: SphereGrid,
    rng: np.random.Generator,
    amplitude: float = 0.08,
    degrees: tuple[int, int] = (6, 16),
) -> SurfaceSamples:
    """Unit sphere with a random band-limited radial perturbation.

    The radius is ``1 + amplitude * p(u)`` where ``p`` is a real random
    expansion over degrees ``degrees[0] <= l < degrees[1]`` scaled to unit
    RMS. The stand-in for a cortical surface in smoothing experiments.
    """
    lo, hi = degrees
    spec = random_spectrum(hi, rng, real=True)
    data = spec.data.copy()
    data[:lo] = 0.0
    spec = Spectrum(data, real=True)
    b, a = grid.mesh()
    p = np.real(synthesize_points(spec, b, a))
    p /= np.sqrt(grid.integrate(p**2) / (4 * np.pi))
    r = 1.0 + amplitude * p
    u = unit_vector(a, b)
    return SurfaceSamples(*(SampledField(grid, r * u[..., i]) for i in range(3)))


# --------------------------------------------------------------------------
# measurements and export


def radial_variance(surface: SurfaceSamples) -> float:
    """Area-weighted (in parameter space) variance of distance from the centroid."""
    w = surface.grid.weights
    pts = surface.points
    centroid = np.tensordot(w, pts, axes=([0, 1], [0, 1])) / w.sum()
    r = np.linalg.norm(pts - centroid, axis=-1)
    mean = np.sum(w * r) / w.sum()
    return float(np.sum(w * (r - mean) ** 2) / w.sum())


def mesh_faces(n_beta: int, n_alpha: int) -> np.ndarray:
    """Triangles over the grid's quads, wrapping in alpha, plus pole fans.

    Vertex ``i * n_alpha + j`` is grid node ``(i, j)``; the north and south
    pole vertices are appended last.
    """
    north = n_beta * n_alpha
    south = north + 1
    faces = []
    for i in range(n_beta - 1):
        for j in range(n_alpha):
            a = i * n_alpha + j
            b = i * n_alpha + (j + 1) % n_alpha
            c = (i + 1) * n_alpha + j
            d = (i + 1) * n_alpha + (j + 1) % n_alpha
            faces.append((a, c, b))
            faces.append((b, c, d))
    for j in range(n_alpha):
        faces.append((north, j, (j + 1) % n_alpha))
        base = (n_beta - 1) * n_alpha
        faces.append((south, base + (j + 1) % n_alpha, base + j))
    return np.array(faces, dtype=np.int64)


def mesh_vertices(surface: SurfaceSamples, poles: np.ndarray) -> np.ndarray:
    return np.vstack([surface.points.reshape(-1, 3), poles])


def triangle_area(vertices: np.ndarray, faces: np.ndarray) -> float:
    a, b, c = (vertices[faces[:, k]] for k in range(3))
    return float(0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1).sum())


def surface_area(S: SpharmSpectrum, grid: SphereGrid) -> float:
    """Area of the triangulated surface sampled on ``grid``."""
    surf = spharm_synthesize(S, grid)
    verts = mesh_vertices(surf, pole_points(S))
    return triangle_area(verts, mesh_faces(grid.n_beta, grid.n_alpha))
