"""Structural physical approximation of the (partial) transpose.

A non-physical positive map P is mixed with full depolarisation until the
mixture becomes completely positive. For two qubits and P = id ⊗ T this gives
the SPA-PT channel ``rho -> (1/9) rho^{T_B} + (2/9) I``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .linalg import (
    as_matrix,
    choi_matrix,
    dagger,
    min_eigenvalue,
    partial_trace,
    partial_transpose_b,
)
from .states import DensityMatrix, as_density, make_bell

CP_TOL = -1e-10
TP_TOL = 1e-10


class LinearMap:
    """A linear map on d x d matrices stored as its transfer matrix.

    ``transfer @ vec(X) = vec(map(X))`` with row-major ``vec``.
    """

    def __init__(self, transfer, dim: int, name: str = ""):
        transfer = as_matrix(transfer)
        if transfer.shape != (dim * dim, dim * dim):
            raise ValueError(f"transfer matrix for dim {dim} must be {dim * dim}x{dim * dim}")
        self.transfer = transfer
        self.dim = dim
        self.name = name

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], dim: int, name: str = ""):
        cols = []
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j] = 1.0
                cols.append(as_matrix(f(e)).reshape(-1))
        return cls(np.array(cols).T, dim, name)

    def __call__(self, x) -> np.ndarray:
        x = as_matrix(x)
        lead = x.shape[:-2]
        flat = x.reshape(lead + (self.dim * self.dim,))
        return (flat @ self.transfer.T).reshape(lead + (self.dim, self.dim))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.transfer + other.transfer, self.dim)

    def __mul__(self, c: float) -> "LinearMap":
        return LinearMap(c * self.transfer, self.dim, self.name)

    __rmul__ = __mul__

    def choi(self) -> np.ndarray:
        return choi_matrix(self, self.dim)

    def __repr__(self):
        return f"LinearMap({self.name or 'anonymous'}, dim={self.dim})"


@dataclass
class QuantumChannel:
    """CPTP map given by Kraus operators."""

    kraus_ops: Sequence[np.ndarray]
    name: str = ""
    dim: int = field(init=False)

    def __post_init__(self):
        ops = [as_matrix(k) for k in self.kraus_ops]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        if any(k.shape != (d, d) for k in ops):
            raise ValueError("Kraus operators must all be square with the same dimension")
        self.kraus_ops = ops
        self.dim = d

    def __call__(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        return sum(k @ rho @ dagger(k) for k in self.kraus_ops)

    def trace_defect(self) -> float:
        s = sum(dagger(k) @ k for k in self.kraus_ops)
        return float(np.max(np.abs(s - np.eye(self.dim))))

    def is_trace_preserving(self, tol: float = TP_TOL) -> bool:
        return self.trace_defect() <= tol

    def choi(self) -> np.ndarray:
        return choi_matrix(self.kraus_ops)

    def to_linear_map(self) -> LinearMap:
        return LinearMap.from_function(self, self.dim, self.name)


# -- elementary maps -------------------------------------------------------


def identity_map(dim: int = 2) -> LinearMap:
    return LinearMap(np.eye(dim * dim), dim, "id")


def transpose_map(dim: int = 2) -> LinearMap:
    return LinearMap.from_function(lambda x: x.T, dim, "T")


def inversion_map(dim: int = 2) -> LinearMap:
    return LinearMap.from_function(lambda x: -x, dim, "Theta")


def depolarizing_map(dim: int = 2) -> LinearMap:
    """X -> Tr(X) I/d."""
    return LinearMap.from_function(lambda x: np.trace(x) * np.eye(dim) / dim, dim, "D")


def partial_transpose_map() -> LinearMap:
    """id ⊗ T on two qubits."""
    return LinearMap.from_function(partial_transpose_b, 4, "id⊗T")


def local_map(map_a: LinearMap, map_b: LinearMap) -> LinearMap:
    """map_a ⊗ map_b acting on two-qubit operators."""
    sa = map_a.transfer.reshape(2, 2, 2, 2)
    sb = map_b.transfer.reshape(2, 2, 2, 2)

    def apply(x):
        r = x.reshape(2, 2, 2, 2)
        out = np.einsum("akbc,jldf,bdcf->ajkl", sa, sb, r)
        return out.reshape(4, 4)

    return LinearMap.from_function(apply, 4, f"{map_a.name}⊗{map_b.name}")


# -- SPA -------------------------------------------------------------------


def spa_mix(p_map: LinearMap, p: float) -> LinearMap:
    """(1 - p) P + p Tr(.) I/d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
    d = p_map.dim
    mixed = (1.0 - p) * p_map + p * depolarizing_map(d)
    mixed.name = f"SPA[{p_map.name}]"
    return mixed


class CPCertificate(NamedTuple):
    completely_positive: bool
    min_choi_eigenvalue: float

    def __bool__(self):
        return self.completely_positive


def is_completely_positive(op) -> CPCertificate:
    """Choi-matrix test; ``op`` is a LinearMap, QuantumChannel or Kraus list."""
    if isinstance(op, (LinearMap, QuantumChannel)):
        c = op.choi()
    else:
        c = choi_matrix(op)
    lam = min_eigenvalue(0.5 * (c + dagger(c)))
    return CPCertificate(lam >= CP_TOL, lam)


def minimal_cp_weight(p_map: LinearMap) -> float:
    """Smallest p for which ``spa_mix(p_map, p)`` is completely positive.

    The depolarising Choi matrix is I/d^2, so the mixture's Choi spectrum is
    (1 - p) mu + p/d^2 and the threshold follows from the smallest mu.
    """
    mu = min_eigenvalue(p_map.choi())
    if mu >= 0:
        return 0.0
    d2 = p_map.dim ** 2
    return -mu / (1.0 / d2 - mu)


def spa_pt_nu() -> float:
    """nu = -min over unit-trace Q > 0 of Tr[Q (id⊗T)|psi+><psi+|].

    The minimum is reached on the eigenvector of the smallest eigenvalue.
    """
    return -min_eigenvalue(partial_transpose_b(make_bell("psi+").projector()))


@lru_cache(maxsize=None)
def spa_pt_mixing_weight() -> float:
    """q* = 16 nu / (1 + 16 nu), which evaluates to 8/9."""
    nu = spa_pt_nu()
    return 16.0 * nu / (1.0 + 16.0 * nu)


def spa_pt_map() -> LinearMap:
    return spa_mix(partial_transpose_map(), spa_pt_mixing_weight())


def _spa_pt_array(m: np.ndarray) -> np.ndarray:
    q = spa_pt_mixing_weight()
    return (1.0 - q) * partial_transpose_b(m) + (q / 4.0) * np.eye(4)


def spa_pt(rho) -> DensityMatrix:
    """SPA-PT of a two-qubit state: (1/9) rho^{T_B} + (2/9) I."""
    rho = as_density(rho)
    if rho.dim != 4:
        raise ValueError("SPA-PT acts on two-qubit states")
    return DensityMatrix(_spa_pt_array(rho.matrix))


def spa_pt_stack(stack) -> np.ndarray:
    """SPA-PT applied to a ``(..., 4, 4)`` stack of trusted states."""
    return _spa_pt_array(as_matrix(stack))


def spa_pt_printed(rho) -> np.ndarray:
    """Element-wise SPA-PT formulas exactly as they appear in print.

    Diagnostic only. The off-diagonal entries carry extra imaginary terms and
    disagree with :func:`spa_pt` unless the relevant entries are real.
    """
    t = as_density(rho).matrix
    t = {(i + 1, j + 1): t[i, j] for i in range(4) for j in range(4)}
    c = np.conj
    e = np.zeros((4, 4), dtype=complex)
    e[0, 0] = 2 + t[1, 1]
    e[0, 1] = -1j * t[1, 2] + c(t[1, 2])
    e[0, 2] = t[1, 3] - 1j * (c(t[1, 3]) + c(t[2, 4]))
    e[0, 3] = -1j * t[1, 4] + t[2, 3]
    e[1, 1] = 2 + t[2, 2]
    e[1, 2] = t[1, 4] + 1j * t[2, 3]
    e[1, 3] = -1j * (c(t[1, 3]) + c(t[2, 4]))
    e[2, 2] = 2 + t[3, 3]
    e[2, 3] = -1j * t[3, 4] + c(t[3, 4])
    e[3, 3] = 2 + t[4, 4]
    e = e / 9
    upper = np.triu(e, 1)
    return np.diag(np.diag(e)) + upper + upper.conj().T


def printed_form_deviation(rho) -> float:
    """Largest entry-wise gap between the printed formulas and SPA-PT."""
    return float(np.max(np.abs(spa_pt_printed(rho) - spa_pt(rho).matrix)))


# -- single-qubit pieces of the linear-optics decomposition ----------------


def spa_transpose_1q(sigma) -> np.ndarray:
    """(1/3) sigma^T + (1/3) Tr(sigma) I."""
    sigma = as_matrix(sigma)
    return sigma.T / 3 + np.trace(sigma) * np.eye(2) / 3


def spa_inversion_1q(sigma) -> np.ndarray:
    """(1/3)(2 Tr(sigma) I - sigma); flips the Bloch vector and shrinks it by 3."""
    sigma = as_matrix(sigma)
    return (2 * np.trace(sigma) * np.eye(2) - sigma) / 3


def spa_transpose_1q_map() -> LinearMap:
    return LinearMap.from_function(spa_transpose_1q, 2, "T~")


def spa_inversion_1q_map() -> LinearMap:
    return LinearMap.from_function(spa_inversion_1q, 2, "Theta~")


def lim_decomposition(rho) -> DensityMatrix:
    """(1/3)(id ⊗ T~) rho + (2/3)(Theta~ ⊗ D) rho, built from local pieces."""
    m = as_density(rho).matrix
    local_t = local_map(identity_map(2), spa_transpose_1q_map())(m)
    inverted = np.kron(spa_inversion_1q(partial_trace(m, "A")), np.eye(2) / 2)
    return DensityMatrix(local_t / 3 + 2 * inverted / 3)


def lim_decomposition_map() -> LinearMap:
    branch_t = local_map(identity_map(2), spa_transpose_1q_map())
    branch_d = local_map(spa_inversion_1q_map(), depolarizing_map(2))
    out = (1 / 3) * branch_t + (2 / 3) * branch_d
    out.name = "SPA-PT (local)"
    return out
