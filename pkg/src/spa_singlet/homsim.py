"""Two-detector Hong-Ou-Mandel estimator of state overlaps.

Two states enter a balanced beam splitter. The coincidence probability is
(1 - Tr(AB))/2, so counting coincidences against total shots gives Tr(AB).
A single such configuration, with V~ (normalised) on one port and SPA-PT(rho)
on the other, feeds F_avg, lambda_min, the optimal singlet fraction and the
teleportation fidelity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import overlap
from .singlet import f_opt_from_favg
from .spa import spa_pt
from .states import as_density
from .witness import V_TILDE_TRACE, build_V, build_V_tilde, lambda_from_favg, min_eig_spa

CONFIDENCE_DELTA = 0.01


@dataclass(frozen=True)
class ShotEstimate:
    """A point estimate with a 99% Hoeffding interval.

    ``shots`` is None for the analytic arm (no sampling, zero-width interval).
    """

    point: float
    shots: int | None
    seed: int | None
    ci_low: float
    ci_high: float
    derived_quantity: str
    coincidences: int | None = None

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2

    def contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high

    def affine(self, slope: float, offset: float, quantity: str) -> "ShotEstimate":
        """Push the estimate and its interval through x -> slope x + offset."""
        lo, hi = slope * self.ci_low + offset, slope * self.ci_high + offset
        return replace(self, point=slope * self.point + offset,
                       ci_low=min(lo, hi), ci_high=max(lo, hi), derived_quantity=quantity)


def hoeffding_half_width(shots: int, delta: float = CONFIDENCE_DELTA) -> float:
    return math.sqrt(math.log(2 / delta) / (2 * shots))


def coincidence_prob(a, b) -> float:
    a, b = as_density(a), as_density(b)
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return min(max((1.0 - overlap(a.matrix, b.matrix)) / 2, 0.0), 0.5 + 1e-12)


def estimate_overlap(a, b, shots: int | None, seed: int | None = None) -> ShotEstimate:
    """Estimate Tr(AB) from ``shots`` seeded coincidence trials.

    ``shots=None`` runs the analytic arm.
    """
    p = coincidence_prob(a, b)
    if shots is None:
        exact = 1.0 - 2.0 * p
        return ShotEstimate(exact, None, seed, exact, exact, "overlap")
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    rng = np.random.default_rng(seed)
    hits = int(rng.binomial(shots, min(p, 0.5)))
    freq = hits / shots
    h = hoeffding_half_width(shots)
    point = 1.0 - 2.0 * freq
    return ShotEstimate(point, shots, seed, point - 2 * h, point + 2 * h, "overlap", hits)


def interferometer_inputs(rho):
    """The two states sent into the interferometer: V~/Tr(V~) and SPA-PT(rho)."""
    rho = as_density(rho)
    _, phi = min_eig_spa(rho)
    v_tilde = build_V_tilde(build_V(phi))
    return v_tilde.normalized(), spa_pt(rho)


def estimate_favg(rho, shots: int | None, seed: int | None = None) -> ShotEstimate:
    """F_avg = Tr(V~ rho~), measured on the normalised V~ then rescaled by 52/27."""
    v_state, rho_t = interferometer_inputs(rho)
    return estimate_overlap(v_state, rho_t, shots, seed).affine(V_TILDE_TRACE, 0.0, "f_avg")


def _lambda(f_avg: ShotEstimate) -> ShotEstimate:
    return f_avg.affine(15 / 8, lambda_from_favg(0.0), "lambda_min")


def _f_opt(f_avg: ShotEstimate) -> ShotEstimate:
    return f_avg.affine(-135 / 8, f_opt_from_favg(0.0), "f_opt")


def _fidelity(f_opt: ShotEstimate) -> ShotEstimate:
    return f_opt.affine(2 / 3, 1 / 3, "teleport_fidelity")


def estimate_lambda_min(rho, shots: int | None, seed: int | None = None) -> ShotEstimate:
    return _lambda(estimate_favg(rho, shots, seed))


def estimate_f_opt_and_fidelity(rho, shots: int | None, seed: int | None = None):
    f_opt = _f_opt(estimate_favg(rho, shots, seed))
    return f_opt, _fidelity(f_opt)


def estimate_all(rho, shots: int | None, seed: int | None = None) -> dict[str, ShotEstimate]:
    """Every derived quantity from one coincidence stream."""
    f_avg = estimate_favg(rho, shots, seed)
    overlap_est = f_avg.affine(1 / V_TILDE_TRACE, 0.0, "overlap")
    f_opt = _f_opt(f_avg)
    return {
        "overlap": overlap_est,
        "f_avg": f_avg,
        "lambda_min": _lambda(f_avg),
        "f_opt": f_opt,
        "teleport_fidelity": _fidelity(f_opt),
    }

