"""Cyclic Jacobi eigenvalue sweep for the small Hermitian oracle matrices."""

from __future__ import annotations

import numpy as np


def jacobi_symmetric(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, sorted ascending.

    Classic cyclic Jacobi: every off-diagonal pair is annihilated by a plane
    rotation once per sweep until the off-diagonal Frobenius mass drops below
    ``tol`` times the total mass.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("matrix must be symmetric")
    scale = max(np.linalg.norm(a), 1e-300)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.linalg.norm(a[off_mask]) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi sweep did not converge")
    return np.sort(np.diag(a))


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix, sorted ascending.

    Uses the real embedding [[Re, -Im], [Im, Re]], whose spectrum is the
    Hermitian spectrum with every eigenvalue doubled.
    """
    h = np.asarray(h, dtype=complex)
    if not np.allclose(h, h.conj().T, atol=1e-12):
        raise ValueError("matrix is not Hermitian")
    if np.abs(h.imag).max(initial=0.0) == 0.0:
        return jacobi_symmetric(h.real)
    re, im = h.real, h.imag
    emb = np.block([[re, -im], [im, re]])
    return jacobi_symmetric(emb)[::2]
