"""
Checking the product formulas by brute force on SO(3)
=====================================================

Lift ``f`` to the rotation group, convolve with a kernel ``h`` there, then
average out the third Euler angle. Done by direct quadrature over a
(2L)^3 grid of rotations, this matches the one-line spectral formula
``G_l = F_l @ H(l)``. The rotation correlation and the SO(3) convolution
are checked the same way.
"""

import time

import numpy as np

from sphfir import apply, fir_transfer, rotation_convolve, synthesize, tap
from sphfir import so3
from sphfir.spectrum import random_spectrum

rng = np.random.default_rng(5)
L = 4
grid = so3.make_so3_grid(L)
print(f"SO(3) grid {grid.shape}, {grid.size} rotations, weights sum to {grid.weights.sum():.15f}")

F = random_spectrum(L, rng)
H = fir_transfer([tap(rng.normal(), *rng.uniform(0, 3, 3)) for _ in range(4)], L)
t0 = time.perf_counter()
h = so3.so3_synthesize(list(H.matrices), grid.angles())
g = so3.so3_convolve_bruteforce(h, so3.lifted_sampler(F), grid)
brute = so3.project_to_sphere(g, grid).values
fast = synthesize(apply(H, F), grid.sphere).values
print(f"projected convolution: max difference {np.abs(brute - fast).max():.2e} "
      f"(brute force {time.perf_counter() - t0:.2f} s)")

Hs = random_spectrum(L, rng, real=False)
got = so3.so3_analyze_bruteforce(so3.rotation_correlate_bruteforce(F, Hs, grid), grid, L)
err = max(np.abs(a - b).max() for a, b in zip(got, rotation_convolve(F, Hs)))
print(f"rotation correlation vs F^H H / (2l+1): {err:.2e}")
