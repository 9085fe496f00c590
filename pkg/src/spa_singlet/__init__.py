"""Entanglement detection and optimal singlet fraction through the SPA-PT channel."""

__version__ = "0.1.0"

from .linalg import hermitian_eigensystem, overlap, partial_trace, partial_transpose_b, tensor_product
from .states import DensityMatrix, StateVector, make_bell, make_werner, random_density, validate
from .spa import lim_decomposition, spa_pt, spa_pt_mixing_weight
from .witness import build_V, build_V_tilde, build_W_opt, min_eig_spa, verdict
from .singlet import f_opt_spa, singlet_fraction, teleportation_fidelity
from .homsim import estimate_all, estimate_favg, estimate_lambda_min
from .hybrid import amplitude_damping, f_opt_hybrid, hybrid_scan

__all__ = [
    "DensityMatrix", "StateVector", "validate", "make_bell", "make_werner", "random_density",
    "tensor_product", "partial_transpose_b", "partial_trace", "hermitian_eigensystem", "overlap",
    "spa_pt", "spa_pt_mixing_weight", "lim_decomposition",
    "min_eig_spa", "build_W_opt", "build_V", "build_V_tilde", "verdict",
    "singlet_fraction", "f_opt_spa", "teleportation_fidelity",
    "estimate_favg", "estimate_lambda_min", "estimate_all",
    "amplitude_damping", "f_opt_hybrid", "hybrid_scan",
]
