"""Dense complex-matrix kernels: decompositions, matrix functions, norms.

All functions are pure, operate on square complex ``numpy`` arrays, and
validate their inputs against the central tolerance record. The principal
branch of the logarithm of a unitary is fixed to phases in (-pi, pi], with
a phase landing exactly on -pi mapped to +pi.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InvalidDimension, InvalidMatrix, NotHermitian, NotPSD, NotUnitary


def as_square_matrix(a) -> np.ndarray:
    """Coerce to a complex square 2-D array with finite entries."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InvalidMatrix("matrix has non-finite entries")
    return a


def check_unitary(u, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Validate ||U^dag U - I||_F <= tol.unitarity * dim and return U."""
    u = as_square_matrix(u)
    d = u.shape[0]
    defect = np.linalg.norm(u.conj().T @ u - np.eye(d))
    if defect > tol.unitarity * d:
        raise NotUnitary(f"unitarity defect {defect:.3e} exceeds {tol.unitarity * d:.3e}")
    return u


def check_hermitian(a, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Validate ||A - A^dag||_F <= tol.hermiticity * ||A||_F and return A."""
    a = as_square_matrix(a)
    scale = max(np.linalg.norm(a), 1.0)
    defect = np.linalg.norm(a - a.conj().T)
    if defect > tol.hermiticity * scale:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol.hermiticity * scale:.3e}")
    return a


def hermitize(a) -> np.ndarray:
    """Return the Hermitian part (A + A^dag) / 2."""
    a = np.asarray(a, dtype=complex)
    return (a + a.conj().swapaxes(-1, -2)) / 2


def eig_hermitian(a, tol: Tolerances = DEFAULT_TOLERANCES):
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Returns (eigenvalues, eigenvectors) with eigenvectors as orthonormal
    columns, so that a = V diag(w) V^dag.
    """
    a = check_hermitian(a, tol)
    w, v = np.linalg.eigh(hermitize(a))
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def principal_phases(eigvals: np.ndarray) -> np.ndarray:
    """Map unit-modulus eigenvalues to phases in the branch (-pi, pi].

    Works on the last axis, so batched inputs are fine. A phase that
    rounds to exactly -pi is folded to +pi.
    """
    phases = np.angle(eigvals)
    return np.where(phases <= -np.pi, np.pi, phases)


def eig_unitary(u, tol: Tolerances = DEFAULT_TOLERANCES):
    """Eigendecomposition of a unitary matrix.

    Returns (phases, eigenvectors) with phases in (-pi, pi] and
    orthonormal eigenvector columns, so that u = V diag(exp(i*phases)) V^dag.
    Uses the complex Schur form, which is diagonal for normal matrices, so
    the Schur vectors are a numerically orthonormal eigenbasis.
    """
    u = check_unitary(u, tol)
    t, z = scipy.linalg.schur(u, output="complex")
    return principal_phases(np.diagonal(t)), z


def log_unitary_norm(u, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Operator norm of i*log(U) on the principal branch: max_k |phase_k|."""
    phases, _ = eig_unitary(u, tol)
    return float(np.max(np.abs(phases)))


def phase_norm_after_global(phases: np.ndarray) -> np.ndarray:
    """min over global phase of max |principal phase|, from raw eigenphases.

    Equals pi - gap_max/2 where gap_max is the largest circular gap between
    adjacent sorted eigenphases (wraparound included). Vectorized over all
    axes but the last.
    """
    s = np.sort(phases, axis=-1)
    gaps = np.diff(s, axis=-1)
    wrap = s[..., :1] + 2 * np.pi - s[..., -1:]
    gap_max = np.max(np.concatenate([gaps, wrap], axis=-1), axis=-1)
    return np.pi - gap_max / 2


def min_global_phase_norm(u, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """min over phi of ||i log(e^{i phi} U)||.

    Zero iff U is a global phase times the identity.
    """
    phases, _ = eig_unitary(u, tol)
    return float(phase_norm_after_global(phases))


def operator_norm(a) -> float:
    """Largest singular value. For Hermitian input this is max |eigenvalue|."""
    a = as_square_matrix(a)
    return float(np.linalg.norm(a, 2))


def trace_norm(a) -> float:
    """Sum of singular values (Schatten 1-norm)."""
    a = as_square_matrix(a)
    return float(np.linalg.norm(a, "nuc"))


def matrix_sqrt_psd(a, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-tol.psd_clamp, 0) are clamped to zero; a smaller
    eigenvalue raises NotPSD.
    """
    w, v = eig_hermitian(a, tol)
    if np.min(w) < -tol.psd_clamp:
        raise NotPSD(f"eigenvalue {np.min(w):.3e} below -{tol.psd_clamp:.0e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return hermitize((v * w) @ v.conj().T)


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary, deterministic for a fixed seed.

    Drawn by QR-orthonormalizing a complex Gaussian matrix and fixing the
    phases of R's diagonal; the generator is numpy's default PCG64.
    """
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    return haar_from_rng(dim, np.random.default_rng(seed))


def haar_from_rng(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary drawn from an existing generator."""
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_batch_from_rng(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of `count` independent Haar-random unitaries, shape (count, dim, dim)."""
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    z = (rng.standard_normal((count, dim, dim))
         + 1j * rng.standard_normal((count, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.einsum("bii->bi", r)
    return q * (d / np.abs(d))[:, None, :]
