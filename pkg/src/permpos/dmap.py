"""D-type maps ``A -> diag(f) - A`` with ``f = diag(A) @ D``.

``D`` is any entrywise nonnegative n x n matrix, ``f_j = sum_i a_ii d_ij``.
Matrices are plain numpy arrays; the JSON helpers below read and write
the on-disk formats::

    Hermitian: {"n": 3, "re": [[...]], "im": [[...]]}
    D matrix:  {"n": 3, "d": [[...]]}
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .permutations import Permutation, permutation_matrix, power

HERMITIAN_ATOL = 1e-12


def check_d(d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"D must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("D has non-finite entries")
    if np.any(d < 0):
        raise ValueError("D must be entrywise nonnegative")
    return d


def check_hermitian(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    err = np.max(np.abs(a - a.conj().T), initial=0.0)
    if err > atol:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3g})")
    return a


def build_pair_d(n: int, pi1: Permutation, pi2: Permutation) -> np.ndarray:
    """``(n - 2) I + P_pi1 + P_pi2``."""
    if n < 3:
        raise ValueError("pair construction needs n >= 3")
    if pi1.n != n or pi2.n != n:
        raise ValueError("permutations must act on n points")
    return (n - 2) * np.eye(n) + permutation_matrix(pi1) + permutation_matrix(pi2)


def build_weighted_d(n: int, t: float, pi: Permutation) -> np.ndarray:
    """``(n - t) I + t P_pi`` for ``0 <= t <= n``."""
    if not 0 <= t <= n:
        raise ValueError(f"t must lie in [0, {n}], got {t}")
    if pi.n != n:
        raise ValueError("permutation must act on n points")
    return (n - t) * np.eye(n) + t * permutation_matrix(pi)


def build_k_power_d(n: int, k: int, pi: Permutation) -> np.ndarray:
    """``(n - k) I + P_pi + P_pi^2 + ... + P_pi^k``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    if pi.n != n:
        raise ValueError("permutation must act on n points")
    d = (n - k) * np.eye(n)
    for h in range(1, k + 1):
        d += permutation_matrix(power(pi, h))
    return d


def f_vector(d, diag) -> np.ndarray:
    d = check_d(d)
    diag = np.asarray(diag, dtype=float)
    if diag.shape != (d.shape[0],):
        raise ValueError("diagonal length does not match D")
    return diag @ d


def apply_map(d, a) -> np.ndarray:
    """Evaluate the D-type map on a Hermitian matrix."""
    d = check_d(d)
    a = check_hermitian(a)
    if a.shape != d.shape:
        raise ValueError(f"size mismatch: D is {d.shape}, A is {a.shape}")
    f = np.real(np.diag(a)) @ d
    out = np.diag(f).astype(complex) - a
    # symmetrize away rounding in the input's off-diagonal part
    return (out + out.conj().T) / 2


def rank_one(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return np.outer(x, x.conj())


def load_d(path) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    return d_from_json(data)


def d_from_json(data: dict) -> np.ndarray:
    try:
        n = int(data["n"])
        d = np.array(data["d"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed D matrix document: {exc}") from exc
    if d.shape != (n, n):
        raise ValueError(f"D has shape {d.shape}, expected ({n}, {n})")
    return check_d(d)


def d_to_json(d) -> dict:
    d = check_d(d)
    return {"n": d.shape[0], "d": d.tolist()}


def load_hermitian(path) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    return hermitian_from_json(data)


def hermitian_from_json(data: dict) -> np.ndarray:
    try:
        n = int(data["n"])
        re = np.array(data["re"], dtype=float)
        im = np.array(data["im"], dtype=float) if "im" in data else np.zeros_like(re)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix document: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValueError(f"matrix parts must both be {n} x {n}")
    return check_hermitian(re + 1j * im)


def hermitian_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"n": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}
