"""Projected-convolution filters on the sphere.

A filter is described by its transfer function: one square matrix ``H(l)``
of size ``2l+1`` per degree. Spectra are row vectors, so filtering is
``G_l = F_l @ H(l)`` and ``cascade(H1, H2)`` applies ``H1`` first.

An FIR filter ``g(u) = sum_k b_k f(R_k u)`` has ``H(l) = sum_k b_k D_l(R_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .harmonics import norm_const_0
from .sphere import DomainError, EulerAngles, Rotation, SphereGrid, rotation_from_euler
from .spectrum import Spectrum, delta_spectrum, is_axisymmetric
from .transform import SampledField, synthesize
from .wigner import rotation_angles, wigner_D_batch

AXISYMMETRY_TOL = 1e-10
_TAP_CHUNK = 16


@dataclass(frozen=True, eq=False)
class TransferFunction:
    """Per-degree matrices ``H(0), ..., H(L-1)``."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = []
        for ell, H in enumerate(self.matrices):
            H = np.array(H, dtype=complex)
            if H.shape != (2 * ell + 1, 2 * ell + 1):
                raise DomainError(f"H({ell}) must be {2 * ell + 1}x{2 * ell + 1}, got {H.shape}")
            if not np.all(np.isfinite(H)):
                raise DomainError(f"H({ell}) has non-finite entries")
            H.setflags(write=False)
            mats.append(H)
        object.__setattr__(self, "matrices", tuple(mats))

    @property
    def L(self) -> int:
        return len(self.matrices)

    def __getitem__(self, ell: int) -> np.ndarray:
        return self.matrices[ell]

    def __len__(self) -> int:
        return self.L

    @classmethod
    def identity(cls, L: int) -> TransferFunction:
        return cls(tuple(np.eye(2 * ell + 1) for ell in range(L)))

    def truncate(self, L: int) -> TransferFunction:
        return TransferFunction(self.matrices[:L])


@dataclass(frozen=True)
class FirTap:
    weight: complex
    rotation: Rotation


def tap(weight, alpha: float = 0.0, beta: float = 0.0, gamma: float = 0.0) -> FirTap:
    """Shorthand for a tap with rotation given by z-y-z Euler angles."""
    return FirTap(weight, rotation_from_euler(EulerAngles(alpha, beta, gamma)))


def fir_transfer(taps: Sequence[FirTap], L: int) -> TransferFunction:
    """``H(l) = sum_k b_k D_l(R_k)`` for ``l < L``."""
    taps = list(taps)
    if not taps:
        raise DomainError("an FIR filter needs at least one tap")
    weights = np.array([t.weight for t in taps], dtype=complex)
    angles = rotation_angles(t.rotation for t in taps)
    acc = [np.zeros((2 * ell + 1, 2 * ell + 1), dtype=complex) for ell in range(L)]
    # chunked so memory stays bounded for large tap sets
    for s in range(0, len(taps), _TAP_CHUNK):
        Ds = wigner_D_batch(L, angles[s : s + _TAP_CHUNK])
        for ell, D in enumerate(Ds):
            acc[ell] += np.einsum("k,kab->ab", weights[s : s + _TAP_CHUNK], D)
    return TransferFunction(tuple(acc))


def axisym_transfer(h0, L: int) -> TransferFunction:
    """Transfer function of an axially symmetric kernel.

    ``h0[l]`` is the kernel's central coefficient ``H_l^0``; the result is
    ``(2 pi / c_l^0) H_l^0 I``. The ``2 pi / c_l^0`` scale is that of the
    left convolution with the unnormalized rotation measure (total mass
    ``8 pi^2``).
    """
    h0 = np.asarray(h0, dtype=complex)
    if h0.shape != (L,):
        raise DomainError(f"need {L} central coefficients, got shape {h0.shape}")
    scale = 2.0 * np.pi / norm_const_0(L) * h0
    return TransferFunction(tuple(scale[ell] * np.eye(2 * ell + 1) for ell in range(L)))


def apply(H: TransferFunction, F: Spectrum) -> Spectrum:
    """``G_l = F_l @ H(l)`` for every degree both operands have."""
    L = min(H.L, F.L)
    return _with_realness(Spectrum.from_vectors([F[ell] @ H[ell] for ell in range(L)]), F.real)


def _with_realness(G: Spectrum, candidate: bool) -> Spectrum:
    if not candidate:
        return G
    scale = max(1.0, float(np.max(np.abs(G.data), initial=0.0)))
    return Spectrum(G.data, real=G.conjugate_symmetry_error() <= 1e-10 * scale)


def cascade(H1: TransferFunction, H2: TransferFunction) -> TransferFunction:
    """Transfer function of ``H1`` followed by ``H2``: ``H1(l) @ H2(l)``."""
    if H1.L != H2.L:
        raise DomainError(f"bandwidth mismatch: {H1.L} != {H2.L}")
    return TransferFunction(tuple(a @ b for a, b in zip(H1.matrices, H2.matrices)))


def left_convolve(F: Spectrum, H: Spectrum) -> Spectrum:
    """Convolution with an axially symmetric kernel: ``G_l = (2 pi / c_l^0) F_l H_l^0``."""
    if not is_axisymmetric(H, AXISYMMETRY_TOL):
        raise DomainError("left convolution requires an axially symmetric kernel")
    L = min(F.L, H.L)
    scale = 2.0 * np.pi / norm_const_0(L) * H.data[:L, H.L - 1]
    return Spectrum.from_vectors([scale[ell] * F[ell] for ell in range(L)], real=False)


def rotation_convolve(F: Spectrum, H: Spectrum) -> list[np.ndarray]:
    """SO(3) coefficients of ``g(R) = int conj(f(u)) h(R u) du``: ``F_l^H H_l / (2l+1)``."""
    if F.L != H.L:
        raise DomainError(f"bandwidth mismatch: {F.L} != {H.L}")
    return [np.outer(np.conj(F[ell]), H[ell]) / (2 * ell + 1) for ell in range(F.L)]


# --------------------------------------------------------------------------
# concrete filters


def three_point_taps(beta0: float) -> list[FirTap]:
    """Average of ``f`` with its copies shifted by ``beta0`` along the alpha=0 meridian."""
    r = rotation_from_euler(EulerAngles(0.0, beta0, 0.0))
    return [FirTap(0.5, Rotation.identity()), FirTap(0.25, r), FirTap(0.25, r.inverse())]


def five_point_taps(beta0: float = np.pi / 32) -> list[FirTap]:
    r1 = rotation_from_euler(EulerAngles(0.0, beta0, 0.0))
    r2 = rotation_from_euler(EulerAngles(np.pi / 2, beta0, -np.pi / 2))
    return [
        FirTap(0.5, Rotation.identity()),
        FirTap(0.125, r1),
        FirTap(0.125, r1.inverse()),
        FirTap(0.125, r2),
        FirTap(0.125, r2.inverse()),
    ]


def five_point_lowpass(L: int, beta0: float = np.pi / 32) -> TransferFunction:
    """5-tap local average: half the input plus four copies displaced by ``beta0``
    along the 0 and 90 degree meridians."""
    if L < 1:
        raise DomainError(f"bandwidth must be >= 1, got {L}")
    return fir_transfer(five_point_taps(beta0), L)


def butterfly_weight(beta, alpha, sigma: float, orientation: str = "x"):
    """Butterfly prototype ``tan(beta/2) cos(alpha) exp(-tan(beta/2)^2 / (2 sigma))``.

    ``orientation="y"`` uses ``sin(alpha)``, the prototype rotated by 90 degrees.
    """
    t = np.tan(np.asarray(beta) / 2.0)
    lobe = np.cos(alpha) if orientation == "x" else np.sin(alpha)
    return t * lobe * np.exp(-(t**2) / (2.0 * sigma))


def butterfly_taps(
    sigma: float = 0.05,
    lam: float = 1.0,
    n_beta: int = 12,
    n_alpha: int = 12,
    beta_max: float = np.pi / 2,
    orientation: str = "x",
) -> list[FirTap]:
    """FIR approximation of the butterfly filter on an ``n_beta x n_alpha`` angular grid.

    Nodes are ``beta_k`` uniform on ``(0, beta_max]`` and ``alpha_k`` uniform on
    ``[0, 2 pi)``; tap ``k`` has weight ``h(beta_k, alpha_k)`` and rotation
    ``(alpha_k, lam * beta_k, -alpha_k)``. So ``lam`` stretches the kernel
    away from the pole while keeping its sampled values, a true dilation.
    Weights are not renormalized.

    Scaling ``alpha_k`` as well is not done: for ``lam = 2`` it maps the
    nodes at ``alpha`` and ``alpha + pi`` onto the same rotation with
    opposite weights and the kernel cancels to zero.
    """
    if sigma <= 0 or lam <= 0:
        raise DomainError("sigma and lambda must be positive")
    if orientation not in ("x", "y"):
        raise DomainError(f"orientation must be 'x' or 'y', got {orientation!r}")
    if n_beta < 1 or n_alpha < 1:
        raise DomainError("tap grid needs at least one node per angle")
    betas = beta_max * np.arange(1, n_beta + 1) / n_beta
    alphas = 2.0 * np.pi * np.arange(n_alpha) / n_alpha
    if lam * betas[-1] > np.pi + 1e-12:
        raise DomainError(f"dilated colatitude {lam * betas[-1]:.4f} exceeds pi")
    taps = []
    for b in betas:
        bb = min(lam * b, np.pi)
        for a in alphas:
            w = butterfly_weight(b, a, sigma, orientation)
            taps.append(FirTap(float(w), rotation_from_euler(EulerAngles(a, bb, -a))))
    return taps


# --------------------------------------------------------------------------
# responses


def transfer_norms(H: TransferFunction, normalize_by: Spectrum | None = None) -> np.ndarray:
    """Per-degree size of a transfer function.

    Without a normalizer this is the Frobenius norm of ``H(l)``. With one,
    it is ``||N_l H(l)|| / ||N_l||``: the gain the filter applies to the
    normalizer's degree-``l`` vector. With the impulse spectrum as
    normalizer this is the impulse response's magnitude spectrum divided
    by the impulse's own.
    """
    if normalize_by is None:
        return np.array([np.linalg.norm(M) for M in H.matrices])
    L = min(H.L, normalize_by.L)
    out = np.empty(L)
    for ell in range(L):
        n = np.linalg.norm(normalize_by[ell])
        if n < 1e-14:
            raise DomainError(f"normalizer has zero magnitude at degree {ell}")
        out[ell] = np.linalg.norm(normalize_by[ell] @ H[ell]) / n
    return out


def impulse_response(H: TransferFunction, grid: SphereGrid) -> SampledField:
    """Filter output for the unit impulse at the north pole, sampled on ``grid``."""
    G = apply(H, delta_spectrum(H.L))
    field = synthesize(G, grid)
    return SampledField(grid, np.real_if_close(field.values, tol=1e6))
