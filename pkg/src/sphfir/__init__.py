"""Phase-sensitive FIR filtering on the sphere.

Spectra are row vectors ``F_l`` of length ``2l+1`` per degree, filters are
per-degree matrices ``H(l)`` and filtering is ``G_l = F_l @ H(l)``.
"""

from .sphere import (
    DomainError,
    EulerAngles,
    Rotation,
    SphereGrid,
    compose,
    grid_from_counts,
    make_grid,
    random_rotation,
    rotation_from_euler,
    unit_vector,
)
from .harmonics import assoc_legendre, eval_Y, eval_Y_column, norm_const
from .wigner import little_d, wigner_D, wigner_D_from_rotation
from .spectrum import (
    Spectrum,
    delta_spectrum,
    dof_counts,
    fisher_von_mises_spectrum,
    magnitude_only_spectrum,
    magnitude_phase,
    phase_swap,
    rotate_spectrum,
)
from .transform import SampledField, analyze_irf, analyze_quadrature, synthesize
from .filtering import (
    FirTap,
    TransferFunction,
    apply,
    axisym_transfer,
    butterfly_taps,
    cascade,
    fir_transfer,
    five_point_lowpass,
    impulse_response,
    left_convolve,
    rotation_convolve,
    tap,
    transfer_norms,
)
from .spharm import SpharmSpectrum, spharm_analyze, spharm_filter, spharm_synthesize

__version__ = "0.1.0"
