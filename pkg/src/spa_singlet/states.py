"""Validated two-qubit states and the standard state families.

Basis order is |00>, |01>, |10>, |11>.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, hermiticity_defect, min_eigenvalue

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10
NORM_TOL = 1e-12


class StateError(ValueError):
    """A matrix or vector failed one of the state invariants.

    ``magnitude`` carries the measured size of the violation.
    """

    invariant = "state"

    def __init__(self, message: str, magnitude: float, where=None):
        super().__init__(message)
        self.magnitude = magnitude
        self.where = where


class NotHermitian(StateError):
    invariant = "hermitian"


class TraceNotOne(StateError):
    invariant = "unit-trace"


class NotPositiveSemidefinite(StateError):
    invariant = "positive-semidefinite"


class NotNormalized(StateError):
    invariant = "normalized"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density operator of dimension 2 or 4.

    Construct through :func:`validate`; the library only builds instances
    directly when the result is a state by construction.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if v.size not in (2, 4):
            raise ValueError(f"state vectors have length 2 or 4, got {v.size}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"vector norm is {norm!r}, expected 1", abs(norm - 1.0))
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def validate(m) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; return the state.

    Raises the matching :class:`StateError` subclass naming the measured
    violation.
    """
    if isinstance(m, DensityMatrix):
        return m
    m = as_matrix(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise ValueError(f"density matrices are 2x2 or 4x4, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        diff = np.abs(m - m.conj().T)
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        raise NotHermitian(
            f"entries ({i},{j}) and ({j},{i}) are not conjugate (defect {defect:.3e})",
            defect, where=(int(i), int(j)))
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace is {tr.real:.12g}, expected 1", abs(tr - 1.0))
    lam = min_eigenvalue(m)
    if lam < PSD_TOL:
        raise NotPositiveSemidefinite(f"minimum eigenvalue is {lam:.6g}", -lam)
    return DensityMatrix(m)


def as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else validate(rho)


BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")

_S = 1.0 / np.sqrt(2.0)
# psi+ is |00>+|11> and psi- the singlet; phi+/- take the remaining two.
_BELL = {
    "psi+": (_S, 0, 0, _S),
    "psi-": (0, _S, -_S, 0),
    "phi+": (0, _S, _S, 0),
    "phi-": (_S, 0, 0, -_S),
}
_ALIASES = {"ψ+": "psi+", "ψ-": "psi-", "φ+": "phi+", "φ-": "phi-",
            "psi-plus": "psi+", "psi-minus": "psi-", "phi-plus": "phi+", "phi-minus": "phi-"}


def make_bell(which: str) -> StateVector:
    key = _ALIASES.get(which, which)
    if key not in _BELL:
        raise ValueError(f"unknown Bell state {which!r}; choose from {BELL_LABELS}")
    return StateVector(np.array(_BELL[key], dtype=complex))


def bell_basis() -> dict[str, StateVector]:
    return {k: make_bell(k) for k in BELL_LABELS}


def pure_to_density(v) -> DensityMatrix:
    if not isinstance(v, StateVector):
        v = StateVector(v)
    return DensityMatrix(v.projector())


def singlet() -> DensityMatrix:
    return pure_to_density(make_bell("psi-"))


def maximally_mixed(dim: int = 4) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def make_werner(w: float) -> DensityMatrix:
    """w |psi-><psi-| + (1 - w) I/4."""
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"Werner weight must lie in [0, 1], got {w}")
    return DensityMatrix(w * singlet().matrix + (1.0 - w) * np.eye(4) / 4)


def bell_diagonal(weights) -> DensityMatrix:
    """Mixture of the Bell projectors in ``BELL_LABELS`` order."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (4,) or np.any(weights < 0) or abs(weights.sum() - 1) > TRACE_TOL:
        raise ValueError("Bell-diagonal weights must be 4 non-negative numbers summing to 1")
    m = sum(w * make_bell(k).projector() for w, k in zip(weights, BELL_LABELS))
    return DensityMatrix(m)


def _ginibre(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_density(seed: int, rank: int = 4) -> DensityMatrix:
    """Seeded Ginibre state G G^dagger / Tr(G G^dagger) with G of shape 4 x rank."""
    if not 1 <= rank <= 4:
        raise ValueError(f"rank must be in 1..4, got {rank}")
    return DensityMatrix(_ginibre(np.random.default_rng(seed), 4, rank))


def random_densities(seed: int, count: int, rank: int = 4) -> np.ndarray:
    """A ``(count, 4, 4)`` stack of Ginibre states from one seeded stream."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(count, 4, rank)) + 1j * rng.normal(size=(count, 4, rank))
    m = g @ np.conj(np.swapaxes(g, -1, -2))
    return m / np.trace(m, axis1=1, axis2=2).real[:, None, None]


def product_state(rho_a, rho_b) -> DensityMatrix:
    return DensityMatrix(np.kron(as_density(rho_a).matrix, as_density(rho_b).matrix))


def random_product(seed: int) -> DensityMatrix:
    """rho_A ⊗ rho_B with each factor a seeded single-qubit Ginibre state.

    The factor ranks are drawn too, so pure product states show up.
    """
    rng = np.random.default_rng(seed)
    ra, rb = rng.integers(1, 3, size=2)
    return DensityMatrix(np.kron(_ginibre(rng, 2, int(ra)), _ginibre(rng, 2, int(rb))))
