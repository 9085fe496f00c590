"""Witness operators built from the minimal eigenvector of SPA-PT.

``W_opt = (1/9) (|phi><phi|)^{T_B}`` acts on the raw state, ``V = |phi><phi| -
(2/9) I`` on the SPA-PT output, and ``V~ = (8/15) V + (7/15) I`` is the
positive operator whose overlap with SPA-PT is the measurable average fidelity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .linalg import (
    as_matrix,
    hermitian_eigensystem,
    hermiticity_defect,
    min_eigenvalue,
    overlap,
    partial_transpose_b,
)
from .spa import spa_pt
from .states import DensityMatrix, StateVector, as_density

THRESHOLD = 2 / 9
LAMBDA_FLOOR = 1 / 6
V_TILDE_WEIGHT = 8 / 15
V_TILDE_TRACE = 52 / 27
FAVG_AT_SINGLET = 59 / 135
FAVG_AT_THRESHOLD = 7 / 15
ENTANGLEMENT_TOL = 1e-12
ROUTE_TOL = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_LABELS = tuple(a + b for a, b in product("Ixyz", repeat=2))


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    matrix: np.ndarray
    source_vector: StateVector
    kind: str  # "W_opt", "V" or "V_tilde"

    def expectation(self, rho) -> float:
        return overlap(self.matrix, rho)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> DensityMatrix:
        """The operator divided by its trace; only meaningful for V_tilde."""
        if self.kind != "V_tilde":
            raise ValueError(f"{self.kind} is not positive and cannot be normalised to a state")
        return DensityMatrix(self.matrix / self.trace)


@dataclass(frozen=True)
class Verdict:
    lambda_min: float
    entangled: bool
    witness_value: float
    f_opt_singlet_fraction: float
    teleport_fidelity: float
    w_opt_value: float
    ppt_min_eigenvalue: float


def _vector(phi) -> StateVector:
    return phi if isinstance(phi, StateVector) else StateVector(phi)


def min_eig_spa(rho) -> tuple[float, StateVector]:
    """Smallest eigenvalue of SPA-PT(rho) and its phase-fixed eigenvector."""
    es = hermitian_eigensystem(spa_pt(rho).matrix)
    return es.min_value, StateVector(es.min_vector)


def build_W_opt(phi) -> WitnessOperator:
    phi = _vector(phi)
    return WitnessOperator(partial_transpose_b(phi.projector()) / 9, phi, "W_opt")


def build_V(phi) -> WitnessOperator:
    phi = _vector(phi)
    return WitnessOperator(phi.projector() - THRESHOLD * np.eye(4), phi, "V")


def build_V_tilde(v: WitnessOperator) -> WitnessOperator:
    """(8/15) V + (7/15) I, kept unnormalised (trace 52/27)."""
    if v.kind != "V":
        raise ValueError(f"V~ is built from a V witness, got {v.kind}")
    p = V_TILDE_WEIGHT
    return WitnessOperator(p * v.matrix + (1 - p) * np.eye(4), v.source_vector, "V_tilde")


def v_tilde_weight_slack() -> dict:
    """Range of weights p keeping p V + (1 - p) I positive, next to the adopted 8/15.

    V has spectrum {7/9, -2/9, -2/9, -2/9}, so positivity needs
    1 - 11 p / 9 >= 0.
    """
    p_max = Fraction(9, 11)
    return {"adopted": float(Fraction(8, 15)), "psd_max": float(p_max),
            "slack": float(p_max - Fraction(8, 15))}


def pauli_decompose(h) -> dict[str, float]:
    """Real coefficients c_ab with H = sum c_ab sigma_a ⊗ sigma_b."""
    h = as_matrix(h)
    if h.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got {h.shape}")
    if hermiticity_defect(h) > 1e-12:
        raise ValueError("Pauli decomposition with real coefficients needs a Hermitian operator")
    return {a + b: float(np.trace(h @ np.kron(PAULI[a], PAULI[b])).real / 4)
            for a, b in product("Ixyz", repeat=2)}


def pauli_reconstruct(coeffs: dict[str, float]) -> np.ndarray:
    return sum(c * np.kron(PAULI[k[0]], PAULI[k[1]]) for k, c in coeffs.items())


def printed_pauli_coefficients(alpha: float, beta: float) -> dict[str, float]:
    """Coefficients of V for alpha|00> + beta|11> as they appear in print.

    Kept to document the mismatch with :func:`pauli_decompose`.
    """
    k = 9 / 28
    c = dict.fromkeys(PAULI_LABELS, 0.0)
    c["II"] = k * 7 / 9
    c["Iz"] = c["zI"] = k * (alpha ** 2 - beta ** 2)
    c["xx"] = c["yy"] = k * 2 * alpha * beta
    c["zz"] = k
    return c


def lambda_from_favg(f_avg: float) -> float:
    """lambda_min = (15/8) F_avg - 47/72, over a common denominator to save roundings."""
    return (135 * f_avg - 47) / 72


def favg_from_lambda(lam: float) -> float:
    return (72 * lam + 47) / 135


def verdict(rho) -> Verdict:
    """Run the lambda_min pipeline and cross-check the W_opt and V routes."""
    # local import: singlet builds on this module
    from .singlet import f_opt_from_lambda, teleportation_fidelity

    rho = as_density(rho)
    if rho.dim != 4:
        raise ValueError("the verdict applies to two-qubit states")
    rho_t = spa_pt(rho)
    es = hermitian_eigensystem(rho_t.matrix)
    lam, phi = es.min_value, StateVector(es.min_vector)
    w_val = build_W_opt(phi).expectation(rho)
    v_val = build_V(phi).expectation(rho_t)
    if abs(w_val - v_val) > ROUTE_TOL or abs(v_val - (lam - THRESHOLD)) > ROUTE_TOL:
        raise ArithmeticError(
            f"witness routes disagree: W_opt {w_val!r}, V {v_val!r}, lambda-2/9 {lam - THRESHOLD!r}")
    f_opt = f_opt_from_lambda(lam)
    return Verdict(
        lambda_min=lam,
        entangled=lam < THRESHOLD - ENTANGLEMENT_TOL,
        witness_value=v_val,
        f_opt_singlet_fraction=f_opt,
        teleport_fidelity=teleportation_fidelity(f_opt),
        w_opt_value=w_val,
        ppt_min_eigenvalue=9 * (lam - THRESHOLD),
    )


def ppt_entangled(rho) -> bool:
    """Peres test on the raw state, with the threshold scaled to match :func:`verdict`."""
    return min_eigenvalue(partial_transpose_b(as_density(rho).matrix)) < -9 * ENTANGLEMENT_TOL
