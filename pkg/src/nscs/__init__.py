"""Binary discrimination of non-standard coherent states.

Modules: ``specfun`` (special functions), ``states`` (coherent-state
families in the Fock basis), ``discrimination`` (Helstrom bound and the
cat-basis projective measurement), ``jcmodel`` (Jaynes-Cummings indirect
measurement), ``optimizer`` (multi-start Nelder-Mead) and ``cli``.
"""

from .discrimination import (
    BinaryEnsemble,
    brute_force_optimum,
    cat_basis,
    helstrom_bound,
    make_bpsk,
    make_ook,
    optimal_projective_angles,
    projective_success,
    shot_noise_limit,
)
from .errors import DegenerateEnsembleError, DomainError, TruncationError, UnreachableTargetError
from .jcmodel import MeasurementAngles, ScanConfig, optimize, success_probability
from .states import (
    Family,
    FamilySpec,
    FockVector,
    TruncationPolicy,
    alpha_for_mean_n,
    fock_coefficients,
    mandel_q,
    mean_photon_number,
    overlap,
)

__version__ = "0.1.0"
