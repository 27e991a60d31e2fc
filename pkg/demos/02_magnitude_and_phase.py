"""
Where the information lives: magnitude versus phase
===================================================

Keeping only ``||F_l||`` per degree leaves an axially symmetric blob with
its peak at the north pole. Swapping magnitude and phase between two maps
shows that the phase carries the geography. Counting degrees of freedom
makes the same point: for L = 10 the phase holds 110 of 121.
"""

import numpy as np

from sphfir import dof_counts, magnitude_only_spectrum, phase_swap, synthesize
from sphfir.spectrum import delta_spectrum, is_axisymmetric
from sphfir.transform import analyze_quadrature

from _common import save, world_map

f = world_map()
L = 64
F = analyze_quadrature(f, L)
save("world_L63.png", synthesize(F, f.grid).values)

M = magnitude_only_spectrum(F)
v = np.real(synthesize(M, f.grid).values)
print(f"magnitude-only spectrum axisymmetric: {is_axisymmetric(M)}")
print(f"alpha variation of its synthesis: {np.max(np.ptp(v, axis=1)):.1e}, maximum in row {np.argmax(v.max(axis=1))}")
save("world_magnitude_only.png", v)

# magnitudes of an impulse with the phases of the world, and vice versa
D = delta_spectrum(L)
save("phase_of_world_magnitude_of_delta.png", synthesize(phase_swap(D, F), f.grid).values)
save("phase_of_delta_magnitude_of_world.png", synthesize(phase_swap(F, D), f.grid).values)

for n in (1, 10, 63):
    d = dof_counts(n)
    print(f"L={n:2d}: {d.total} real parameters, {d.phase_constrained} in the phase ({float(d.percent):.1f}%)")
