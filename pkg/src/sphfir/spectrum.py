"""Coefficient vectors, magnitude/phase, and analytic spectra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .harmonics import harmonic_columns, norm_const_0
from .sphere import DomainError, Rotation, grid_from_counts
from .wigner import wigner_D_all

ZERO_NORM = 1e-14


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Coefficients ``F_l^m`` for ``l < L``, packed as an ``(L, 2L-1)`` array.

    Row ``l`` stores order ``m`` at column ``m + L - 1``; entries with
    ``|m| > l`` are unused and kept at zero. ``spec[l]`` returns the
    length ``2l+1`` row vector ``F_l``.
    """

    data: np.ndarray
    real: bool = False

    def __post_init__(self):
        d = np.array(self.data, dtype=complex)
        if d.ndim != 2 or d.shape[1] != max(2 * d.shape[0] - 1, 0):
            raise DomainError(f"packed spectrum must have shape (L, 2L-1), got {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "data", d)

    @property
    def L(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, ell: int) -> np.ndarray:
        c = self.L - 1
        return self.data[ell, c - ell : c + ell + 1]

    def __len__(self) -> int:
        return self.L

    def __iter__(self):
        return (self[ell] for ell in range(self.L))

    @classmethod
    def zeros(cls, L: int, real: bool = False) -> Spectrum:
        return cls(np.zeros((L, max(2 * L - 1, 0)), dtype=complex), real)

    @classmethod
    def from_vectors(cls, vectors, real: bool = False) -> Spectrum:
        vectors = list(vectors)
        L = len(vectors)
        data = np.zeros((L, max(2 * L - 1, 0)), dtype=complex)
        for ell, v in enumerate(vectors):
            v = np.asarray(v)
            if v.shape != (2 * ell + 1,):
                raise DomainError(f"degree {ell} vector must have length {2 * ell + 1}, got {v.shape}")
            data[ell, L - 1 - ell : L + ell] = v
        return cls(data, real)

    def norms(self) -> np.ndarray:
        """Magnitude spectrum ``||F_l||``."""
        return np.linalg.norm(self.data, axis=1)

    def truncate(self, L: int) -> Spectrum:
        if L > self.L:
            raise DomainError(f"cannot truncate bandwidth {self.L} to {L}")
        return Spectrum.from_vectors([self[ell] for ell in range(L)], self.real)

    def conjugate_symmetry_error(self) -> float:
        """Max of ``|F_l^{-m} - (-1)^m conj(F_l^m)|``; zero for real functions."""
        c = self.L - 1
        m = np.arange(-c, c + 1)
        flipped = (-1.0) ** np.abs(m) * np.conj(self.data[:, ::-1])
        return float(np.max(np.abs(self.data - flipped), initial=0.0))

    def __add__(self, other: Spectrum) -> Spectrum:
        if other.L != self.L:
            raise DomainError("bandwidth mismatch")
        return Spectrum(self.data + other.data, self.real and other.real)

    def __sub__(self, other: Spectrum) -> Spectrum:
        return self + other * -1.0

    def __mul__(self, scalar) -> Spectrum:
        return Spectrum(self.data * scalar, self.real and np.isreal(scalar))

    __rmul__ = __mul__


def center_selector(ell: int) -> np.ndarray:
    """Row vector ``Q_l`` with a single 1 at order ``m = 0``."""
    q = np.zeros(2 * ell + 1, dtype=complex)
    q[ell] = 1.0
    return q


def magnitude_phase(F: np.ndarray) -> tuple[float, np.ndarray]:
    """Split a degree vector into ``(||F||, F / ||F||)``.

    A vector with norm below 1e-14 gets magnitude 0 and phase ``Q_l``.
    """
    F = np.asarray(F, dtype=complex)
    ell = (F.size - 1) // 2
    mag = float(np.linalg.norm(F))
    if mag < ZERO_NORM:
        return 0.0, center_selector(ell)
    return mag, F / mag


def delta_spectrum(L: int) -> Spectrum:
    """Coefficients of the unit impulse at the north pole: ``c_l^0`` at ``m = 0``."""
    if L < 1:
        raise DomainError(f"bandwidth must be >= 1, got {L}")
    data = np.zeros((L, 2 * L - 1), dtype=complex)
    data[:, L - 1] = norm_const_0(L)
    return Spectrum(data, real=True)


def is_axisymmetric(F: Spectrum, tol: float = 1e-10) -> bool:
    off = F.data.copy()
    off[:, F.L - 1] = 0.0
    return bool(np.max(np.abs(off), initial=0.0) <= tol)


def magnitude_only_spectrum(F: Spectrum) -> Spectrum:
    """Replace every ``F_l`` with ``||F_l|| Q_l``, discarding phase."""
    data = np.zeros_like(F.data)
    data[:, F.L - 1] = F.norms()
    return Spectrum(data, real=True)


def phase_swap(F: Spectrum, G: Spectrum) -> Spectrum:
    """Magnitudes of ``F`` combined with the phase vectors of ``G``."""
    if F.L != G.L:
        raise DomainError(f"bandwidth mismatch: {F.L} != {G.L}")
    out = []
    for ell in range(F.L):
        g = G[ell]
        gn = np.linalg.norm(g)
        if gn < ZERO_NORM:
            out.append(np.linalg.norm(F[ell]) * center_selector(ell))
        else:
            # scale G directly so that phase_swap(F, F) reproduces F exactly
            out.append((np.linalg.norm(F[ell]) / gn) * g)
    return Spectrum.from_vectors(out, real=F.real and G.real)


def rotate_spectrum(F: Spectrum, R: Rotation) -> Spectrum:
    """Spectrum of ``u -> f(R u)``: each ``F_l`` right-multiplied by ``D_l(R)``."""
    Ds = wigner_D_all(F.L, R)
    return Spectrum.from_vectors([F[ell] @ Ds[ell] for ell in range(F.L)], F.real)


def random_spectrum(L: int, rng: np.random.Generator, real: bool = True, decay: float = 0.0) -> Spectrum:
    """Gaussian random coefficients, optionally damped by ``(l+1)^-decay``.

    With ``real=True`` the result obeys conjugate symmetry, so it
    synthesizes to a real function.
    """
    data = np.zeros((L, 2 * L - 1), dtype=complex)
    c = L - 1
    for ell in range(L):
        scale = (ell + 1.0) ** -decay
        v = rng.normal(size=2 * ell + 1) + 1j * rng.normal(size=2 * ell + 1)
        if real:
            v[ell] = v[ell].real * np.sqrt(2.0)
            for m in range(1, ell + 1):
                v[ell - m] = (-1) ** m * np.conj(v[ell + m])
        data[ell, c - ell : c + ell + 1] = scale * v / np.sqrt(2.0)
    return Spectrum(data, real)


# --------------------------------------------------------------------------
# Fisher-von Mises


def fisher_von_mises_density(kappa: float, beta) -> np.ndarray:
    """Density ``kappa / (4 pi sinh kappa) exp(kappa cos beta)`` about the north pole.

    Written as ``kappa / (2 pi (1 - exp(-2 kappa))) exp(kappa (cos beta - 1))``
    so that large ``kappa`` does not overflow.
    """
    if kappa <= 0:
        raise DomainError(f"concentration must be positive, got {kappa}")
    pref = kappa / (2.0 * np.pi * -np.expm1(-2.0 * kappa))
    return pref * np.exp(kappa * (np.cos(beta) - 1.0))


def bessel_ratio(kappa: float, L: int) -> np.ndarray:
    """``I_{l+1/2}(kappa) / I_{1/2}(kappa)`` for ``l = 0, ..., L-1``.

    Consecutive ratios ``I_nu / I_{nu-1}`` come from the backward recurrence
    ``r_nu = 1 / (2 nu / kappa + r_{nu+1})`` started far above ``L``, which
    is stable for every ``kappa > 0``.
    """
    if kappa <= 0:
        raise DomainError(f"concentration must be positive, got {kappa}")
    top = L + 64 + int(4 * kappa)
    r = 0.0
    ratios = np.zeros(top + 1)
    for k in range(top, 0, -1):
        nu = k + 0.5
        r = 1.0 / (2.0 * nu / kappa + r)
        ratios[k] = r
    out = np.ones(L)
    out[1:] = np.cumprod(ratios[1:L])
    return out


def fisher_von_mises_spectrum(kappa: float, L: int, n_beta: int | None = None) -> Spectrum:
    """Spherical harmonic coefficients of the Fisher-von Mises density.

    Computed by direct Gauss-Legendre quadrature of the density against
    every ``Y_l^m``. The result is axisymmetric and equals
    ``c_l^0 * bessel_ratio(kappa, L)`` at ``m = 0``: the Legendre-series
    ratio alone omits the ``c_l^0`` factor from the harmonic normalization.
    """
    if kappa <= 0:
        raise DomainError(f"concentration must be positive, got {kappa}")
    if n_beta is None:
        n_beta = 2 * L + 2 * int(np.ceil(kappa)) + 64
    grid = grid_from_counts(n_beta, 2 * L, "gl")
    beta, alpha = grid.mesh()
    f = fisher_von_mises_density(kappa, beta)
    Y = harmonic_columns(L, grid.beta_nodes[:, None], grid.alpha_nodes[None, :])
    data = np.einsum("ij,lmij->lm", grid.weights * f, np.conj(Y))
    return Spectrum(data, real=True)


# --------------------------------------------------------------------------
# degrees of freedom


class DofCounts(NamedTuple):
    total: int
    magnitude_constrained: int
    phase_constrained: int
    percent: Fraction


def dof_counts(L: int, real_valued: bool = True) -> DofCounts:
    """Real degrees of freedom fixed by magnitude vs phase up to max degree ``L``.

    For a real function there are ``(L+1)^2`` in total, ``L+1`` of which
    the magnitudes fix; phase holds ``100 L / (L+1)`` percent. For a
    complex function the total doubles while magnitudes still fix ``L+1``.
    """
    if L < 0:
        raise DomainError(f"max degree must be non-negative, got {L}")
    total = (L + 1) ** 2 * (1 if real_valued else 2)
    mag = L + 1
    phase = total - mag
    return DofCounts(total, mag, phase, Fraction(100 * phase, total))
