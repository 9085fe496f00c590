"""Singlet fraction and teleportation fidelity.

Two routes are provided: the non-physical one that needs the partial
transpose (``f_opt_oracle``) and the SPA route that only needs the smallest
eigenvalue of the SPA-PT output, or equivalently one overlap measurement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import overlap, partial_transpose_b
from .spa import spa_pt
from .states import BELL_LABELS, StateVector, as_density, make_bell
from .witness import THRESHOLD, min_eig_spa

CLASSICAL_FIDELITY = 2 / 3


@dataclass(frozen=True, eq=False)
class FilterOperator:
    """X_opt = (A ⊗ I)|psi+><psi+|(A^dagger ⊗ I) with A = diag(a, 1)."""

    a: float
    matrix: np.ndarray
    chi: StateVector

    @property
    def trace(self) -> float:
        return (self.a ** 2 + 1) / 2


@dataclass(frozen=True)
class SpaSingletFraction:
    """Result of :func:`f_opt_spa`.

    ``value`` is the raw SPA-route number. ``best`` is max(value, raw singlet
    fraction), and ``exceeds_route`` is set when the unfiltered Bell overlap
    already beats the SPA-route value.
    """

    value: float
    useful: bool
    lambda_min: float
    a: float
    raw_singlet_fraction: float
    best: float
    exceeds_route: bool

    def __float__(self):
        return self.value


def singlet_fraction(rho) -> float:
    """Largest overlap of rho with one of the four Bell states."""
    m = as_density(rho).matrix
    return max(float(np.real(make_bell(k).amplitudes.conj() @ m @ make_bell(k).amplitudes))
               for k in BELL_LABELS)


def build_filter(a: float) -> FilterOperator:
    if not -1.0 <= a <= 1.0:
        raise ValueError(f"filter parameter must lie in [-1, 1], got {a}")
    filt = np.kron(np.diag([a, 1.0]), np.eye(2))
    v = filt @ make_bell("psi+").amplitudes
    chi = np.array([a, 0, 0, 1], dtype=complex) / np.sqrt(a * a + 1)
    return FilterOperator(a, np.outer(v, v.conj()), StateVector(chi))


def f_opt_oracle(rho, a: float = 1.0) -> float:
    """1/2 - Tr(X_opt rho^{T_B}), evaluated on the partial transpose."""
    m = as_density(rho).matrix
    return 0.5 - overlap(build_filter(a).matrix, partial_transpose_b(m))


def f_opt_via_spa_trace(rho, a: float = 1.0) -> float:
    """1/2 - [9 Tr(X_opt rho~) - (a^2 + 1)], the same quantity from SPA-PT."""
    x = build_filter(a)
    return 0.5 - (9 * overlap(x.matrix, spa_pt(rho).matrix) - (a * a + 1))


def f_opt_from_lambda(lam: float, a: float = 1.0) -> float:
    """1/2 - (9 (a^2 + 1)/2)(lambda_min - 2/9); a = ±1 gives 1/2 - 9(lambda_min - 2/9)."""
    if not -1.0 <= a <= 1.0:
        raise ValueError(f"filter parameter must lie in [-1, 1], got {a}")
    return 0.5 - 9 * (a * a + 1) / 2 * (lam - THRESHOLD)


def f_opt_spa(rho, a: float = 1.0) -> SpaSingletFraction:
    rho = as_density(rho)
    lam, _ = min_eig_spa(rho)
    value = f_opt_from_lambda(lam, a)
    raw = singlet_fraction(rho)
    return SpaSingletFraction(
        value=value,
        useful=lam < THRESHOLD - 1e-12,
        lambda_min=lam,
        a=a,
        raw_singlet_fraction=raw,
        best=max(value, raw),
        exceeds_route=raw > value + 1e-12,
    )


def f_opt_from_favg(f_avg: float) -> float:
    """1/2 - (135/8)(F_avg - 7/15); the physical window is [59/135, 7/15)."""
    return 0.5 - 135 / 8 * (f_avg - 7 / 15)


def teleportation_fidelity(f: float) -> float:
    """(2F + 1)/3."""
    if not -1e-12 <= f <= 1 + 1e-12:
        raise ValueError(f"singlet fraction must lie in [0, 1], got {f}")
    return (2 * f + 1) / 3


def beats_classical(fidelity: float) -> bool:
    return fidelity > CLASSICAL_FIDELITY + 1e-12
