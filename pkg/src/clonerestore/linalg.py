"""Closed-form linear algebra for 2x2 complex matrices.

Everything the protocol needs is exact at this size: Hilbert-Schmidt
distance, the principal square root of a PSD matrix (Cayley-Hamilton),
polar decomposition, and the nearest-unitary approximation given by the
unitary polar factor. No iterative decompositions.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose; supports stacked (..., 2, 2) inputs."""
    return np.asarray(a).conj().swapaxes(-1, -2)


def det2(a: np.ndarray) -> complex:
    return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]


def inv2(a: np.ndarray) -> np.ndarray:
    """Inverse via the adjugate. Caller guarantees invertibility."""
    d = det2(a)
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=complex) / d


def hs_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert-Schmidt distance: (Tr[(a-b)^dag (a-b)])^(1/2)."""
    d = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return float(np.sqrt(np.sum(np.abs(d) ** 2)))


def is_hermitian(a: np.ndarray, tol: float = ATOL) -> bool:
    a = np.asarray(a, dtype=complex)
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def is_unitary(a: np.ndarray, tol: float = ATOL) -> bool:
    a = np.asarray(a, dtype=complex)
    return bool(np.max(np.abs(dagger(a) @ a - IDENTITY)) <= tol)


def is_psd(a: np.ndarray, tol: float = ATOL) -> bool:
    """Hermitian with both eigenvalues >= -tol (2x2 trace/det form)."""
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a, tol):
        return False
    tr = (a[0, 0] + a[1, 1]).real
    det = det2(a).real
    disc = max(tr * tr / 4.0 - det, 0.0)
    return tr / 2.0 - np.sqrt(disc) >= -tol


def sqrtm_psd(a: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian PSD 2x2 matrix.

    Uses sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)),
    valid for every PSD matrix except A = 0, which maps to 0.
    """
    a = np.asarray(a, dtype=complex)
    det = max(det2(a).real, 0.0)
    tr = (a[0, 0] + a[1, 1]).real
    s = np.sqrt(det)
    denom = np.sqrt(tr + 2.0 * s)
    if denom == 0.0:
        return np.zeros((2, 2), dtype=complex)
    return (a + s * IDENTITY) / denom


def polar_decompose(e: np.ndarray, tol: float = ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Factor e = u @ p with u unitary and p = sqrt(e^dag e) Hermitian PSD.

    Raises ValueError for (numerically) singular input: the unitary
    factor is not unique there and the protocol never produces one.
    """
    e = np.asarray(e, dtype=complex)
    if abs(det2(e)) <= tol:
        raise ValueError("degenerate input: polar decomposition requires an invertible matrix")
    p = sqrtm_psd(dagger(e) @ e)
    u = e @ inv2(p)
    return u, p


def nearest_unitary(e: np.ndarray, tol: float = ATOL) -> np.ndarray:
    """The unitary closest to e in Hilbert-Schmidt distance.

    This is the unitary factor of the polar decomposition, equal to the
    product of the two unitaries in the singular value decomposition.
    """
    u, _ = polar_decompose(e, tol)
    return u


def haar_random_unitary(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed 2x2 unitaries; shape (2, 2) or (size, 2, 2)."""
    shape = (2, 2) if size is None else (size, 2, 2)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def random_invertible(rng: np.random.Generator, min_abs_det: float = 0.05) -> np.ndarray:
    """Complex Gaussian 2x2 matrix, resampled until safely invertible."""
    while True:
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        if abs(det2(g)) >= min_abs_det:
            return g
