"""
A 5-tap FIR lowpass on the sphere
=================================

Half the input plus four copies displaced by pi/32 along two orthogonal
meridians. Its transfer function is ``0.5 I + 0.125 sum_k D_l(R_k)``. The
impulse response shows the central lobe and four sidelobes; the per-degree
gain, normalized by the impulse spectrum, trends downward.
"""

import numpy as np

from sphfir import apply, cascade, five_point_lowpass, impulse_response, synthesize, transfer_norms
from sphfir.sphere import grid_from_counts
from sphfir.spectrum import delta_spectrum
from sphfir.transform import analyze_quadrature

from _common import OUT, save, world_map

L = 64
H = five_point_lowpass(L)

# impulse response near the pole, on a fine polar cap grid
cap = grid_from_counts(512, 512, "equiangular")
h = impulse_response(H, cap).values[:40]
save("fivept_impulse_cap.png", h)

gain = transfer_norms(H, delta_spectrum(L))
slope = np.polyfit(np.arange(L), gain, 1)[0]
print(f"normalized gain: l=0 {gain[0]:.3f}, l=63 {gain[-1]:.3f}, minimum {gain.min():.3f} at l={gain.argmin()}")
print(f"least-squares slope {slope:.4f} per degree")
np.savetxt(OUT / "fivept_freqresp.csv", np.column_stack([np.arange(L), gain]), delimiter=",", header="l,norm",
           comments="", fmt=["%d", "%.10f"])

f = world_map()
F = analyze_quadrature(f, L)
save("world_fivept.png", synthesize(apply(H, F), f.grid).values, 0, 1)
save("world_fivept_x4.png", synthesize(apply(cascade(cascade(H, H), cascade(H, H)), F), f.grid).values, 0, 1)
