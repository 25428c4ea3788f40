"""Cyclic Jacobi diagonalisation for small dense Hermitian matrices.

Works on a single ``(n, n)`` matrix or a stack ``(..., n, n)``; the
rotations for a given ``(p, q)`` are applied to the whole stack at once.
"""
from __future__ import annotations

import numpy as np

from .dmap import check_hermitian


def jacobi_eigvalsh(a, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues (ascending) of a Hermitian matrix or stack of them.

    Each ``(p, q)`` step first rotates the phase of ``a[p, q]`` away and then
    applies the real Jacobi rotation with ``|theta| <= pi / 4``.  Sweeps stop
    once the off-diagonal Frobenius norm is below ``tol`` times the full one.
    """
    a = np.array(a, dtype=complex)
    single = a.ndim == 2
    if single:
        a = a[None]
    shape = a.shape
    n = shape[-1]
    a = a.reshape(-1, n, n)
    a = (a + a.conj().transpose(0, 2, 1)) / 2
    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                r = np.abs(apq)
                # entries this far below the matrix scale are already zero
                live = r > 1e-30 * scale
                if not live.any():
                    continue
                phase = np.where(live, apq / np.where(live, r, 1.0), 1.0)
                app = a[:, p, p].real
                aqq = a[:, q, q].real
                tau = (aqq - app) / (2 * np.where(live, r, 1.0))
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau**2))
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t**2)
                s = t * c
                # V = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                v = np.empty((a.shape[0], 2, 2), dtype=complex)
                v[:, 0, 0] = c
                v[:, 0, 1] = s
                v[:, 1, 0] = -s * phase.conj()
                v[:, 1, 1] = c * phase.conj()
                idx = [p, q]
                a[:, :, idx] = a[:, :, idx] @ v
                a[:, idx, :] = v.conj().transpose(0, 2, 1) @ a[:, idx, :]
                a[live, p, q] = 0.0
                a[live, q, p] = 0.0
    w = np.sort(np.real(np.diagonal(a, axis1=1, axis2=2)), axis=1)
    w = w.reshape(shape[:-1])
    return w[0] if single else w


def min_eigenvalue_hermitian(h, atol: float = 1e-12) -> float:
    h = check_hermitian(h, atol=atol)
    return float(jacobi_eigvalsh(h)[0])
