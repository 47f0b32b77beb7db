"""Small dense complex linear algebra and base-2 information measures.

Matrices are plain ``numpy`` complex arrays of shape (2, 2) or (4, 4) in the
computational basis ``|00>, |01>, |10>, |11>`` (subsystem A is the left
factor). Probability vectors are 1-D float arrays.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ConvergenceError, DimensionError, InvalidProbabilityError, NotHermitianError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PROB_CLAMP = 1e-12
PROB_SUM_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(m, dims: Sequence[int] = (2, 4)) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise DimensionError(f"expected a square matrix of dimension {tuple(dims)}, got shape {a.shape}")
    return a


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        raise NotHermitianError(f"matrix is not Hermitian (max |M - M^H| = {np.max(np.abs(a - a.conj().T)):.3e})")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators, A as the row-major factor."""
    a = as_matrix(a, (2,))
    b = as_matrix(b, (2,))
    out = np.empty((4, 4), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = a[i, j] * b
    return out


def partial_trace(m, keep: str) -> np.ndarray:
    """Reduced state of subsystem ``keep`` ('A' or 'B') of a two-qubit state."""
    a = check_hermitian(as_matrix(m, (4,)))
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidProbabilityError(f"density matrix has trace {tr!r}, expected 1")
    r = a.reshape(2, 2, 2, 2)
    keep = keep.upper()
    if keep == "A":
        return np.einsum("ibjb->ij", r)
    if keep == "B":
        return np.einsum("aiaj->ij", r)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a 2x2 or 4x4 Hermitian matrix, descending.

    Cyclic Jacobi rotations, stopped once every off-diagonal magnitude is
    below 1e-13.
    """
    a = check_hermitian(m)
    vals, sweeps = kernels.jacobi_eigvalsh(np.ascontiguousarray(a), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return np.sort(vals)[::-1]


def as_prob_vector(p) -> np.ndarray:
    """Validate a probability vector; components in [-1e-12, 0) clamp to 0."""
    v = np.array(p, dtype=float).ravel()
    if v.size == 0:
        raise InvalidProbabilityError("empty probability vector")
    if not np.all(np.isfinite(v)):
        raise InvalidProbabilityError("probability vector has non-finite entries")
    if np.any(v < -PROB_CLAMP):
        raise InvalidProbabilityError(f"negative probability {v.min()!r}")
    v[v < 0] = 0.0
    if abs(v.sum() - 1.0) > PROB_SUM_TOL:
        raise InvalidProbabilityError(f"probabilities sum to {v.sum()!r}, expected 1")
    return v


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def binary_entropy(x: float) -> float:
    """h2(x) = -x log2 x - (1 - x) log2(1 - x), with 0 log 0 = 0."""
    x = float(x)
    if not (-PROB_CLAMP <= x <= 1.0 + PROB_CLAMP):
        raise InvalidProbabilityError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return -_xlog2x(x) - _xlog2x(1.0 - x)


def shannon_entropy(p) -> float:
    v = as_prob_vector(p)
    # components a hair above 1 would otherwise give -1e-13
    return max(-sum(_xlog2x(x) for x in v.tolist()), 0.0)


def relative_entropy(x, y) -> float:
    """Base-2 Kullback-Leibler divergence H(x||y).

    Returns ``math.inf`` when x has support where y vanishes.
    """
    xv = as_prob_vector(x)
    yv = as_prob_vector(y)
    if xv.shape != yv.shape:
        raise DimensionError(f"length mismatch: {xv.size} vs {yv.size}")
    total = 0.0
    for xi, yi in zip(xv.tolist(), yv.tolist()):
        if xi == 0.0:
            continue
        if yi == 0.0:
            return math.inf
        total += xi * math.log2(xi / yi)
    # a non-negative quantity; rounding may leave -1e-17
    return max(total, 0.0)


def von_neumann_entropy(m) -> float:
    return shannon_entropy(np.clip(hermitian_eigenvalues(m), 0.0, None))
