"""Dense complex linear algebra for qubit and two-qubit operators.

Matrices are plain ``numpy`` complex arrays. Functions that act on a single
operator also accept stacks shaped ``(..., n, n)`` where that is cheap, so
sampling sweeps can be vectorised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
DEGENERACY_GAP = 1e-10


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order; ``vectors[:, i]`` pairs with ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[:, i]

    @property
    def min_value(self) -> float:
        return float(self.values[0])

    @property
    def min_vector(self) -> np.ndarray:
        return self.vectors[:, 0]


def as_matrix(m) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, ``a`` major."""
    return np.kron(as_matrix(a), as_matrix(b))


def _check_4x4(rho: np.ndarray) -> None:
    if rho.shape[-2:] != (4, 4):
        raise DimensionError(f"expected a 4x4 two-qubit operator, got shape {rho.shape}")


def partial_transpose_b(rho) -> np.ndarray:
    """Transpose the second qubit: entry (2i+j, 2k+l) moves to (2i+l, 2k+j)."""
    rho = as_matrix(rho)
    _check_4x4(rho)
    lead = rho.shape[:-2]
    r = rho.reshape(lead + (2, 2, 2, 2))
    return np.swapaxes(r, -3, -1).reshape(lead + (4, 4))


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduce a two-qubit operator to qubit ``keep`` ('A' or 'B')."""
    rho = as_matrix(rho)
    _check_4x4(rho)
    r = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    if keep.upper() == "A":
        return np.einsum("...ijkj->...ik", r)
    if keep.upper() == "B":
        return np.einsum("...ijil->...jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermiticity_defect(m) -> float:
    m = as_matrix(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def overlap(a, b) -> float:
    """Hilbert-Schmidt overlap Tr(AB) of two Hermitian operators."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[-2:] != b.shape[-2:]:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    value = np.einsum("...ij,...ji->...", a, b)
    return value.real if np.ndim(value) else float(value.real)


# -- eigensolver -----------------------------------------------------------


def _jacobi_sweeps(a: np.ndarray, tol: float, max_sweeps: int):
    """Cyclic complex Jacobi on a stack ``(m, n, n)`` of Hermitian matrices.

    Each pair (p, q) is annihilated with the unitary ``diag(e^{i phi}, 1) R(t)``
    where ``phi`` is the phase of a[p, q] and ``R`` a real Givens rotation.
    """
    m, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n)).copy()
    if n == 1:
        return a, v
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2))))
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.all(off <= tol * scale):
            return a, v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                mag = np.abs(apq)
                if not np.any(mag > 0.0):
                    continue
                phase = np.where(mag > 0.0, apq / np.where(mag > 0.0, mag, 1.0), 1.0)
                t = 0.5 * np.arctan2(2.0 * mag, (a[:, p, p] - a[:, q, q]).real)
                t = np.where(t > np.pi / 4, t - np.pi / 2, t)
                c = np.cos(t)[:, None]
                s = np.sin(t)[:, None]
                ph = phase[:, None]
                g00, g01, g10, g11 = ph * c, -ph * s, s, c
                cp, cq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = cp * g00 + cq * g10
                a[:, :, q] = cp * g01 + cq * g11
                rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = np.conj(g00) * rp + np.conj(g10) * rq
                a[:, q, :] = np.conj(g01) * rp + np.conj(g11) * rq
                vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
                v[:, :, p] = vp * g00 + vq * g10
                v[:, :, q] = vp * g01 + vq * g11
    off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
    if np.all(off <= tol * scale):
        return a, v
    raise ConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off.max():.3e})"
    )


def _jacobi_single(m: np.ndarray, tol: float, max_sweeps: int):
    """Scalar version of :func:`_jacobi_sweeps` for one small matrix.

    Plain Python complex arithmetic beats numpy call overhead at n <= 16.
    """
    n = m.shape[0]
    a = m.tolist()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = max(1.0, math.sqrt(sum(abs(x) ** 2 for row in a for x in row)))
    for _ in range(max_sweeps + 1):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= tol * scale:
            return np.array(a), np.array(v)
        if _ == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                t = 0.5 * math.atan2(2.0 * mag, (a[p][p] - a[q][q]).real)
                if t > math.pi / 4:
                    t -= math.pi / 2
                c, s = math.cos(t), math.sin(t)
                g00, g01 = ph * c, -ph * s
                cg00, cg01 = g00.conjugate(), g01.conjugate()
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = x * g00 + y * s
                    row[q] = x * g01 + y * c
                rp, rq = a[p], a[q]
                a[p] = [cg00 * x + s * y for x, y in zip(rp, rq)]
                a[q] = [cg01 * x + c * y for x, y in zip(rp, rq)]
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = x * g00 + y * s
                    row[q] = x * g01 + y * c
    raise ConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})"
    )


def _canonical_order(values: np.ndarray, vectors: np.ndarray):
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    # phase fix: largest-magnitude component real positive (first one on ties)
    for i in range(vectors.shape[1]):
        col = vectors[:, i]
        mags = np.abs(col)
        k = int(np.argmax(mags >= mags.max() - 1e-12))
        vectors[:, i] = col * (np.conj(col[k]) / mags[k])
    # within a degenerate cluster, order by component magnitudes (descending)
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < DEGENERACY_GAP:
            stop += 1
        if stop - start > 1:
            block = list(range(start, stop))
            block.sort(key=lambda j: tuple(-np.round(np.abs(vectors[:, j]), 10)))
            vectors[:, start:stop] = vectors[:, block]
        start = stop
    return values, vectors


def hermitian_eigensystems(stack, tol: float = JACOBI_TOL,
                           max_sweeps: int = JACOBI_MAX_SWEEPS) -> list[EigenSystem]:
    """Batched :func:`hermitian_eigensystem` over a ``(m, n, n)`` stack."""
    a = np.array(stack, dtype=complex)
    if a.ndim == 2:
        a = a[None]
    if a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"matrix must be square, got shape {a.shape[-2:]}")
    defect = np.max(np.abs(a - dagger(a)), axis=(1, 2)) if a.size else np.zeros(len(a))
    if np.any(defect > HERMITIAN_TOL):
        bad = int(np.argmax(defect))
        raise NotHermitianError(f"matrix {bad} is not Hermitian (defect {defect[bad]:.3e})")
    a = 0.5 * (a + dagger(a))
    if len(a) == 1:
        diag, vecs = _jacobi_single(a[0], tol, max_sweeps)
        diag, vecs = diag[None], vecs[None]
    else:
        diag, vecs = _jacobi_sweeps(a, tol, max_sweeps)
    values = np.real(np.diagonal(diag, axis1=1, axis2=2)).copy()
    return [EigenSystem(*_canonical_order(values[i], vecs[i].copy())) for i in range(len(values))]


def hermitian_eigensystem(m, tol: float = JACOBI_TOL,
                          max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenSystem:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending. Each eigenvector has its largest
    component real and positive, and vectors inside a degenerate cluster
    (gap below 1e-10) are ordered by their component magnitudes, so the
    output is fully deterministic.
    """
    m = as_matrix(m)
    if m.ndim != 2:
        raise DimensionError(f"expected a single matrix, got shape {m.shape}")
    return hermitian_eigensystems(m[None], tol, max_sweeps)[0]


def eigvalsh(stack) -> np.ndarray:
    """Ascending eigenvalues for one matrix or a stack, via the Jacobi solver."""
    a = as_matrix(stack)
    single = a.ndim == 2
    systems = hermitian_eigensystems(a[None] if single else a)
    values = np.array([s.values for s in systems])
    return values[0] if single else values


def min_eigenvalue(m) -> float:
    return float(eigvalsh(m)[0])


# -- Choi matrices ---------------------------------------------------------


def max_entangled(d: int) -> np.ndarray:
    """Normalised |Phi+_d> = sum_i |ii> / sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    v[[i * d + i for i in range(d)]] = 1.0 / np.sqrt(d)
    return v


def choi_matrix(channel, dim: int | None = None) -> np.ndarray:
    """(id ⊗ Λ)|Φ+_d><Φ+_d| for a map Λ on d x d matrices.

    ``channel`` may be a sequence of Kraus operators, or any callable taking a
    d x d matrix (``dim`` is then required unless the callable has ``.dim``).
    """
    if callable(channel):
        apply: Callable[[np.ndarray], np.ndarray] = channel
        d = dim if dim is not None else getattr(channel, "dim", None)
        if d is None:
            raise ValueError("dimension needed for a callable map")
    else:
        kraus = _kraus_list(channel)
        d = kraus[0].shape[0]

        def apply(x):
            return sum(k @ x @ dagger(k) for k in kraus)

    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            out += np.kron(e, as_matrix(apply(e)))
    return out / d


def _kraus_list(ops: Sequence) -> list[np.ndarray]:
    kraus = [as_matrix(k) for k in ops]
    if not kraus:
        raise ValueError("empty Kraus list")
    shape = kraus[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionError(f"Kraus operators must be square, got {shape}")
    if any(k.shape != shape for k in kraus):
        raise DimensionError("inconsistent Kraus operator dimensions")
    return kraus
