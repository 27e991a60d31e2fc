"""Self-contained oracle suites.

Each check builds its own random inputs from a fixed seed, compares a fast
spectral formula with an independent computation and reports the maximum
error against a tolerance. ``quick`` runs in seconds; ``full`` adds the
brute-force SO(3) comparisons at L = 4.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from . import so3
from .filtering import apply, cascade, fir_transfer, axisym_transfer, left_convolve, rotation_convolve, tap
from .harmonics import harmonic_columns
from .sphere import grid_from_counts, make_grid, random_rotation, to_angles
from .spectrum import Spectrum, delta_spectrum, dof_counts, random_spectrum, rotate_spectrum
from .transform import SampledField, analyze_quadrature, synthesize, synthesize_points
from .wigner import wigner_D_all

Check = Callable[[np.random.Generator], float]


def _orthonormality(rng) -> float:
    L = 16
    g = make_grid(L)
    b, a = g.mesh()
    Y = harmonic_columns(L, b, a)
    mask = np.abs(np.arange(-(L - 1), L))[None, :] <= np.arange(L)[:, None]
    Y = Y[mask].reshape(-1, g.n_beta * g.n_alpha)
    gram = (Y * g.weights.ravel()) @ Y.conj().T
    return float(np.abs(gram - np.eye(len(Y))).max())


def _unitarity(rng) -> float:
    err = 0.0
    for _ in range(5):
        R, S = random_rotation(rng), random_rotation(rng)
        DR, DS, DRS = wigner_D_all(12, R), wigner_D_all(12, S), wigner_D_all(12, R @ S)
        for a, b, c in zip(DR, DS, DRS):
            err = max(err, np.abs(a @ a.conj().T - np.eye(len(a))).max(), np.abs(a @ b - c).max())
    return float(err)


def _rotation_theorem(rng) -> float:
    L = 8
    F = random_spectrum(L, rng)
    R = random_rotation(rng)
    g = make_grid(L)
    pts = g.points() @ R.matrix.T
    beta, alpha = to_angles(pts)
    rotated = analyze_quadrature(SampledField(g, synthesize_points(F, beta, alpha)), L)
    return float(np.abs(rotated.data - rotate_spectrum(F, R).data).max())


def _round_trip(rng) -> float:
    L = 12
    F = random_spectrum(L, rng, real=False)
    err = 0.0
    for scheme in ("gl", "equiangular"):
        g = grid_from_counts(2 * L, 2 * L, scheme)
        err = max(err, np.abs(analyze_quadrature(synthesize(F, g), L).data - F.data).max())
    return float(err)


def _delta(rng) -> float:
    D = delta_spectrum(64)
    ell = np.arange(64)
    return float(np.abs(D.norms() - np.sqrt((2 * ell + 1) / (4 * np.pi))).max())


def _dof(rng) -> float:
    d = dof_counts(10)
    return 0.0 if (d.total, float(d.percent)) == (121, 1000 / 11) else 1.0


def _associativity(rng) -> float:
    L = 10
    F = random_spectrum(L, rng)
    H1 = fir_transfer([tap(rng.normal(), *rng.uniform(0, 3, 3)) for _ in range(3)], L)
    H2 = fir_transfer([tap(rng.normal(), *rng.uniform(0, 3, 3)) for _ in range(3)], L)
    return float(np.abs(apply(H2, apply(H1, F)).data - apply(cascade(H1, H2), F).data).max())


def _left_equivalence(rng) -> float:
    L = 16
    F = random_spectrum(L, rng)
    d = np.zeros((L, 2 * L - 1), dtype=complex)
    d[:, L - 1] = rng.normal(size=L)
    H = Spectrum(d, real=True)
    return float(np.abs(left_convolve(F, H).data - apply(axisym_transfer(d[:, L - 1], L), F).data).max())


def _fir_spatial(rng) -> float:
    L = 8
    F = random_spectrum(L, rng)
    taps = [tap(rng.normal(), *rng.uniform(0, 3, 3)) for _ in range(3)]
    g = make_grid(L)
    out = 0.0
    for t in taps:
        beta, alpha = to_angles(g.points() @ t.rotation.matrix.T)
        out = out + t.weight * synthesize_points(F, beta, alpha)
    G = analyze_quadrature(SampledField(g, out), L)
    return float(np.abs(G.data - apply(fir_transfer(taps, L), F).data).max())


def _random_coeffs(rng, L):
    return [rng.normal(size=(2 * l + 1, 2 * l + 1)) + 1j * rng.normal(size=(2 * l + 1, 2 * l + 1)) for l in range(L)]


def _projected_convolution(rng) -> float:
    L = 4
    grid = so3.make_so3_grid(L)
    F = random_spectrum(L, rng)
    H = fir_transfer([tap(rng.normal(), *rng.uniform(0, 3, 3)) for _ in range(3)], L)
    h = so3.so3_synthesize(list(H.matrices), grid.angles())
    g = so3.so3_convolve_bruteforce(h, so3.lifted_sampler(F), grid)
    proj = so3.project_to_sphere(g, grid)
    expected = synthesize(apply(H, F), grid.sphere)
    return float(np.abs(proj.values - expected.values).max())


def _correlation_outer_product(rng) -> float:
    L = 4
    grid = so3.make_so3_grid(L)
    F, H = random_spectrum(L, rng), random_spectrum(L, rng, real=False)
    got = so3.so3_analyze_bruteforce(so3.rotation_correlate_bruteforce(F, H, grid), grid, L)
    return float(max(np.abs(a - b).max() for a, b in zip(got, rotation_convolve(F, H))))


def _so3_product(rng) -> float:
    L = 4
    grid = so3.make_so3_grid(L)
    Fc, Hc = _random_coeffs(rng, L), _random_coeffs(rng, L)
    h = so3.so3_synthesize(Hc, grid.angles())
    g = so3.so3_convolve_bruteforce(h, so3.coefficient_sampler(Fc), grid)
    got = so3.so3_analyze_bruteforce(g, grid, L)
    return float(max(np.abs(a - f @ hh).max() for a, f, hh in zip(got, Fc, Hc)))


QUICK: list[tuple[str, Check, float]] = [
    ("orthonormality_L16", _orthonormality, 1e-10),
    ("wigner_unitarity_homomorphism", _unitarity, 1e-10),
    ("rotation_theorem_L8", _rotation_theorem, 1e-10),
    ("analysis_round_trip", _round_trip, 1e-10),
    ("delta_magnitude", _delta, 1e-12),
    ("dof_counts_L10", _dof, 0.5),
    ("cascade_associativity", _associativity, 1e-10),
    ("left_vs_axisymmetric_transfer", _left_equivalence, 1e-12),
    ("fir_vs_spatial_rotations", _fir_spatial, 1e-9),
]

FULL: list[tuple[str, Check, float]] = QUICK + [
    ("projected_convolution_L4", _projected_convolution, 1e-8),
    ("rotation_correlation_outer_product_L4", _correlation_outer_product, 1e-8),
    ("so3_convolution_product_L4", _so3_product, 1e-8),
]


def run_suite(level: str = "quick", seed: int = 0) -> dict:
    """Run a suite and return a JSON-ready report."""
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    checks = []
    for name, fn, tol in QUICK if level == "quick" else FULL:
        t0 = time.perf_counter()
        try:
            err = fn(np.random.default_rng(seed))
            ok = bool(np.isfinite(err) and err <= tol)
            msg = None
        except Exception as exc:  # a crash is a failed check, not a crash of the suite
            err, ok, msg = float("nan"), False, f"{type(exc).__name__}: {exc}"
        entry = {"name": name, "passed": ok, "max_error": err, "tolerance": tol,
                 "seconds": round(time.perf_counter() - t0, 3)}
        if msg:
            entry["error"] = msg
        checks.append(entry)
    return {"level": level, "seed": seed, "passed": all(c["passed"] for c in checks), "checks": checks}
