"""Kernel distances, two-point Pick interpolation and the sqrt(2) distortion
bound for holomorphic self-maps of the bidisk."""

from .extremal import ExtremalResult, estimate_mobius_distance, find_rho_obstruction, maximize_seto_ratio
from .holomaps import (
    BidiskAutomorphism,
    HoloMap2,
    bidisk_automorphism,
    eval1,
    eval2,
    random_selfmap_bidisk,
)
from .kernels import (
    BERGMAN,
    SZEGO,
    BiPoint,
    Hermitian2,
    SzegoPower,
    TensorSquare,
    gram2,
    kernel_eval,
    strict_positivity_check,
    szego_eval,
)
from .metrics import (
    caratheodory,
    dk,
    dk_power_closed,
    dk_tensor2,
    mobius_distance_bidisk,
    pseudo_hyperbolic,
    rho,
)
from .pick import (
    PickProblem1,
    PickProblem2,
    interpolant_two_point_bidisk,
    interpolant_two_point_disk,
    is_psd2,
    pick_matrix,
    solvable_two_point_bidisk,
    solvable_two_point_disk,
)
from .verify import PropertyCheck, VerifyConfig, run_all

__version__ = "0.1.0"
