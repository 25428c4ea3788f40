"""Numerical positivity checks for D-type maps and the extremum formulas.

A D-type map is positive iff, over the probability simplex
``t_i = |u_i|^2``,

    F(t) = sum_{t_j > 0} t_j / f_j(t),   f_j(t) = sum_i d_ij t_i,

never exceeds 1 and no ``f_j`` vanishes where ``t_j > 0``.  Phases of ``u``
do not enter ``F``, so the search runs on the simplex.  A point with
``F > 1`` is a witness: for ``x = sqrt(t)`` the matrix ``diag(f) - x x*``
has a negative eigenvalue.  Search can only falsify; it never certifies.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .dmap import check_d
from .linalg import jacobi_eigvalsh

SIMPLEX_ATOL = 1e-12
FALSIFY_MARGIN = 1e-8
EIGEN_CONFIRM = -1e-10
FACE_RECURSION_MAX_N = 8
# keeps every coordinate above exp(-2 * LOGIT_BOUND) relative to the largest
LOGIT_BOUND = 50.0


@dataclass(frozen=True)
class PositiveByCriterion:
    reason: str
    kind = "PositiveByCriterion"


@dataclass(frozen=True)
class NotPositive:
    witness: tuple[float, ...]
    value: float
    min_eigenvalue: float
    kind = "NotPositive"


@dataclass(frozen=True)
class Unknown:
    max_found: float
    starts: int
    iterations: int
    kind = "Unknown"


Verdict = PositiveByCriterion | NotPositive | Unknown


@dataclass(frozen=True)
class SearchConfig:
    starts: int = 64
    max_iters: int = 10_000
    tol: float = 1e-12
    seed: int = 42

    def __post_init__(self):
        if self.starts < 1 or self.max_iters < 1 or not self.tol > 0:
            raise ValueError("starts and max_iters must be >= 1 and tol > 0")


@dataclass
class SearchResult:
    verdict: Verdict
    max_found: float
    best_point: np.ndarray
    starts: int
    iterations: int
    seed: int

    def evidence(self) -> dict:
        return {
            "max_found": _json_float(self.max_found),
            "witness": [float(v) for v in self.best_point],
            "starts": self.starts,
            "seed": self.seed,
            "iterations": self.iterations,
            "verdict": self.verdict.kind,
        }


def _json_float(x: float):
    return x if math.isfinite(x) else "inf"


def check_simplex(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or np.any(t < 0) or abs(t.sum() - 1.0) > SIMPLEX_ATOL:
        raise ValueError("not a point of the probability simplex")
    return t


def _functional(d: np.ndarray, t: np.ndarray) -> float:
    f = t @ d
    support = t > 0
    if np.any(f[support] <= 0):
        return math.inf
    return float(np.sum(t[support] / f[support]))


def lemma31_functional(d, t) -> float:
    """``F(t)``; ``inf`` when some ``f_j`` vanishes on the support."""
    return _functional(check_d(d), check_simplex(t))


def rank_one_min_eig(d, t) -> float:
    """Smallest eigenvalue of the map applied to ``x x*`` with ``x = sqrt(t)``."""
    d = np.asarray(d, dtype=float)
    x = np.sqrt(np.asarray(t, dtype=float))
    m = np.diag(x**2 @ d) - np.outer(x, x)
    return float(jacobi_eigvalsh(m)[0])


def _softmax(z):
    w = np.exp(z - z.max())
    return w / w.sum()


def _ascend(d_face: np.ndarray, z0: np.ndarray, cfg: SearchConfig):
    """Local maximisation of F on one face via softmax logits."""

    def neg_f(z):
        t = _softmax(z)
        f = t @ d_face
        live = t > 0
        ratio = np.divide(t, f, out=np.zeros_like(t), where=live)
        ratio2 = np.divide(ratio, f, out=np.zeros_like(t), where=live)
        g = np.divide(1.0, f, out=np.zeros_like(t), where=f > 0) - d_face @ ratio2
        # F is homogeneous of degree 0, so the softmax Jacobian reduces to t * g
        return -float(ratio.sum()), -(t * g)

    res = minimize(
        neg_f,
        z0,
        jac=True,
        method="L-BFGS-B",
        bounds=[(-LOGIT_BOUND, LOGIT_BOUND)] * len(z0),
        options={"maxiter": cfg.max_iters, "ftol": cfg.tol, "gtol": 1e-12},
    )
    return _softmax(res.x), -float(res.fun), int(res.nit)


def _faces(n: int, rng: np.random.Generator, starts: int):
    if n <= FACE_RECURSION_MAX_N:
        for size in range(2, n):
            for face in itertools.combinations(range(n), size):
                yield np.array(face)
    else:
        for _ in range(starts):
            size = int(rng.integers(2, n))
            yield np.sort(rng.choice(n, size=size, replace=False))


def _polish_witness(d: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Push a falsifying point towards a clearly negative eigenvalue.

    The sup of F is often only approached as ratios blow up, where the
    eigenvalue of the rank-one image goes to zero.  Minimising the smallest
    eigenvalue directly over unit vectors on the same support gives a
    better-conditioned witness.
    """
    support = np.flatnonzero(t > 0)
    d_face = d[np.ix_(support, support)]

    def obj(y):
        x = y / np.linalg.norm(y)
        m = np.diag(x**2 @ d_face) - np.outer(x, x)
        return float(jacobi_eigvalsh(m)[0])

    res = minimize(obj, np.sqrt(t[support]), method="Nelder-Mead",
                   options={"maxiter": 200 * len(support), "xatol": 1e-10, "fatol": 1e-14})
    x = np.abs(res.x) / np.linalg.norm(res.x)
    out = np.zeros_like(t)
    out[support] = x**2
    return out / out.sum()


def maximize_functional(d, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Multistart search for ``sup F`` over the simplex, faces included.

    Interior starts use symmetric random logits (the first is the
    barycentre).  For ``n <= 8`` every proper face of size >= 2 is searched
    too and vertices are evaluated exactly; for larger ``n`` random faces
    are sampled.  Returns ``NotPositive`` only when ``F`` exceeds
    ``1 + max(1e-8, 10 tol)`` and the rank-one eigenvalue check confirms
    it, otherwise ``Unknown``.
    """
    d = check_d(d)
    n = d.shape[0]
    rng = np.random.default_rng(cfg.seed)
    margin = max(FALSIFY_MARGIN, 10 * cfg.tol)

    # a zero diagonal entry makes f_j vanish at the vertex e_j
    for j in range(n):
        if d[j, j] == 0:
            t = np.zeros(n)
            t[j] = 1.0
            verdict = NotPositive(tuple(t), math.inf, rank_one_min_eig(d, t))
            return SearchResult(verdict, math.inf, t, 0, 0, cfg.seed)

    best_val, best_t = -math.inf, None
    candidates = []
    iterations = 0
    runs = 0

    def consider(t, val):
        nonlocal best_val, best_t
        if val > best_val:
            best_val, best_t = val, t
        if val > 1 + margin:
            candidates.append((val, t))

    for j in range(n):
        t = np.zeros(n)
        t[j] = 1.0
        consider(t, 1.0 / d[j, j])

    for s in range(cfg.starts):
        z0 = np.zeros(n) if s == 0 else rng.normal(scale=2.0, size=n)
        t, val, nit = _ascend(d, z0, cfg)
        iterations += nit
        runs += 1
        consider(t, val)

    face_starts = max(1, cfg.starts // 16)
    for face in _faces(n, rng, cfg.starts):
        d_face = d[np.ix_(face, face)]
        for s in range(face_starts):
            z0 = np.zeros(len(face)) if s == 0 else rng.normal(scale=2.0, size=len(face))
            tf, val, nit = _ascend(d_face, z0, cfg)
            iterations += nit
            runs += 1
            t = np.zeros(n)
            t[face] = tf
            consider(t, val)

    verdict: Verdict = Unknown(best_val, runs, iterations)
    if candidates:
        candidates.sort(key=lambda c: -c[0])
        best_witness = None
        for val, t in candidates[:5]:
            for point in (t, _polish_witness(d, t)):
                pval = _functional(d, point)
                if pval <= 1 + margin:
                    continue
                eig = rank_one_min_eig(d, point)
                if eig < EIGEN_CONFIRM and (best_witness is None or eig < best_witness.min_eigenvalue):
                    best_witness = NotPositive(tuple(float(v) for v in point), pval, eig)
        if best_witness is not None:
            verdict = best_witness
    return SearchResult(verdict, best_val, np.asarray(best_t), runs, iterations, cfg.seed)


@dataclass
class PsdSampleResult:
    min_eig_seen: float
    trials: int
    seed: int
    violations: list[tuple[np.ndarray, float]] = field(default_factory=list)

    def to_dict(self, limit: int = 5) -> dict:
        return {
            "min_eig_seen": self.min_eig_seen,
            "trials": self.trials,
            "seed": self.seed,
            "violation_count": len(self.violations),
            "violations": [
                {"re": x.real.tolist(), "im": x.imag.tolist(), "min_eig": e}
                for x, e in self.violations[:limit]
            ],
        }


def psd_sample_verify(d, trials: int, tol: float = 1e-8, seed: int = 42,
                      batch: int = 2000) -> PsdSampleResult:
    """Apply the map to random rank-one projectors and look for negative spectrum."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    d = check_d(d)
    n = d.shape[0]
    rng = np.random.default_rng(seed)
    result = PsdSampleResult(math.inf, trials, seed)
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        x = rng.normal(size=(b, n)) + 1j * rng.normal(size=(b, n))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        f = np.abs(x) ** 2 @ d
        m = -x[:, :, None] * x[:, None, :].conj()
        m[:, np.arange(n), np.arange(n)] += f
        w = jacobi_eigvalsh(m)[:, 0]
        result.min_eig_seen = min(result.min_eig_seen, float(w.min()))
        for idx in np.flatnonzero(w < -tol):
            result.violations.append((x[idx], float(w[idx])))
        done += b
    return result


def lemma21_sup(s: float, M: float, m: int) -> float:
    """``sup sum_i 1/(s + u_i)`` over ``u > 0`` with ``prod u_i = M^m``."""
    if not (s > 0 and M > 0) or m < 1:
        raise ValueError("need s, M > 0 and m >= 1")
    return max((m - 1) / s, m / (s + M))


def lemma22_bound(s: float, k: int, n: int) -> float:
    """Upper bound ``max((n-1)/(s-k), n/s)`` for the k-row cyclic sum."""
    if not s > k or k < 1 or n < 1:
        raise ValueError("need s > k >= 1 and n >= 1")
    return max((n - 1) / (s - k), n / s)


@dataclass(frozen=True)
class ExtremumTable:
    s: float
    k: float
    n: int
    delta: dict[int, float]


def delta_value(s: float, k: float, n: int, r: int) -> float:
    """Critical value with ``r`` equal coordinates, ``n/2 < r <= n``."""
    if r == n:
        return n / s
    e = n / (2 * r - n)
    a = s - k
    # (r a^e + (n-r) k^e) / (a (a^e + k^e)), scaled by the larger base
    if k <= a:
        rho = (k / a) ** e
        return (r + (n - r) * rho) / (a * (1 + rho))
    rho = (a / k) ** e
    return (r * rho + (n - r)) / (a * (rho + 1))


def delta_table(s: float, k: float, n: int) -> ExtremumTable:
    if not s > k > 0:
        raise ValueError("need s > k > 0")
    delta = {}
    if n % 2 == 0:
        delta[n // 2] = n / s
    for r in range(n // 2 + 1, n + 1):
        delta[r] = delta_value(s, k, n, r)
    return ExtremumTable(s, k, n, delta)


def psi(n: int) -> float:
    """``(n - 2) / (n - 3)^((n - 2) / n)``, at most 2 for ``n >= 4``."""
    if n < 4:
        raise ValueError("psi is defined for n >= 4")
    return (n - 2) * (n - 3) ** (-(n - 2) / n)
