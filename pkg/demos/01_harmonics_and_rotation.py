"""
Harmonics, Wigner matrices and the rotation theorem
===================================================

Rotating a function on the sphere mixes coefficients only within a degree:
the spectrum of ``u -> f(R u)`` is ``F_l @ D_l(R)``. The magnitude of each
``F_l`` is therefore rotation invariant, while its direction (the phase)
moves by a unitary matrix.
"""

import numpy as np

from sphfir import make_grid, random_rotation, rotate_spectrum, synthesize, wigner_D_from_rotation
from sphfir.harmonics import harmonic_columns
from sphfir.sphere import to_angles
from sphfir.spectrum import random_spectrum
from sphfir.transform import SampledField, analyze_quadrature, synthesize_points

from _common import save

rng = np.random.default_rng(1)

# Orthonormality on a Gauss-Legendre grid that is exact for degree < 16
L = 16
g = make_grid(L)
b, a = g.mesh()
Y = harmonic_columns(L, b, a)
keep = np.abs(np.arange(-(L - 1), L))[None, :] <= np.arange(L)[:, None]
Y = Y[keep].reshape(-1, b.size)
gram = (Y * g.weights.ravel()) @ Y.conj().T
print(f"orthonormality error for l < {L}: {np.abs(gram - np.eye(L * L)).max():.2e}")

# D_l(R) is unitary and a homomorphism
R, S = random_rotation(rng), random_rotation(rng)
for ell in (1, 5, 12):
    DR, DS, DRS = (wigner_D_from_rotation(ell, X) for X in (R, S, R @ S))
    print(f"l={ell:2d}: |D D^H - I| = {np.abs(DR @ DR.conj().T - np.eye(2 * ell + 1)).max():.1e}, "
          f"|D(R)D(S) - D(RS)| = {np.abs(DR @ DS - DRS).max():.1e}")

# Rotate a random band-limited field two ways
F = random_spectrum(L, rng, decay=1.0)
beta, alpha = to_angles(g.points() @ R.matrix.T)
spatial = analyze_quadrature(SampledField(g, synthesize_points(F, beta, alpha)), L)
spectral = rotate_spectrum(F, R)
print(f"rotation theorem, spatial vs spectral: {np.abs(spatial.data - spectral.data).max():.2e}")
print(f"magnitudes preserved: {np.abs(spectral.norms() - F.norms()).max():.2e}")

out = make_grid(48, scheme="equiangular")
save("rotation_before.png", synthesize(F, out).values)
save("rotation_after.png", synthesize(spectral, out).values)
