"""Closed-form property (C) for powers of the cyclic shift.

Let ``pi(i) = i + 1 (mod n)`` and ``1 <= p < q <= n``.  With
``g = gcd(q - p, n)``, ``m = n / g`` and ``k = (q - p) / g`` (so
``m (q - p) = k n`` with ``gcd(m, k) = 1``), the pair {pi^p, pi^q} has
property (C) exactly when

* ``q = n`` (then ``pi^q`` is the identity), or
* ``q - p = 1``, or
* ``g = 1`` (no coprime ``m < n``, ``k < q - p`` solves the equation), or
* ``p == n - d (q - p)  (mod n)`` for some ``1 <= d <= m - 1``.

The last clause is read modulo ``n``.  Read over the integers it misses
true cases, e.g. ``n = 10, p = 2, q = 8`` (``d = 3`` wraps once).  Since
``d k`` runs over every nonzero residue mod ``m``, the modular clause is
the same as ``g | p``.  :func:`lemma41_literal` keeps the integer reading
so sweeps can show where the two part ways.

All arithmetic is exact integer arithmetic.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

from .permutations import Permutation, power


class Rule(enum.Enum):
    Q_EQUALS_N = "QEqualsN"
    Q_MINUS_P_IS_ONE = "QMinusPIsOne"
    NO_DIVISIBILITY_OBSTRUCTION = "NoDivisibilityObstruction"
    DIVISIBLE_AND_P_ALIGNED = "DivisibleAndPAligned"
    FAILS = "Fails"


class Positivity(enum.Enum):
    POSITIVE_BY_CRITERION = "PositiveByCriterion"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CyclicPairSpec:
    n: int
    p: int
    q: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if not 1 <= self.p < self.q <= self.n:
            raise ValueError(f"need 1 <= p < q <= n, got n={self.n}, p={self.p}, q={self.q}")

    def pair(self) -> tuple[Permutation, Permutation]:
        shift = Permutation.shift(self.n)
        return power(shift, self.p), power(shift, self.q)


@dataclass(frozen=True)
class CyclicVerdict:
    spec: CyclicPairSpec
    has_property_c: bool
    rule: Rule
    k: int | None = None
    m: int | None = None
    d: int | None = None

    @property
    def positivity(self) -> Positivity:
        # positivity is certified only through property (C)
        if self.has_property_c:
            return Positivity.POSITIVE_BY_CRITERION
        return Positivity.UNKNOWN

    @property
    def rule_text(self) -> str:
        if self.rule is Rule.DIVISIBLE_AND_P_ALIGNED:
            return f"{self.rule.value}{{k={self.k},m={self.m},d={self.d}}}"
        if self.rule is Rule.FAILS:
            return f"{self.rule.value}{{k={self.k},m={self.m}}}"
        return self.rule.value

    def row(self) -> dict:
        s = self.spec
        return {
            "n": s.n,
            "p": s.p,
            "q": s.q,
            "q_minus_p": s.q - s.p,
            "has_property_c": self.has_property_c,
            "rule": self.rule_text,
            "positivity": self.positivity.value,
        }


def coprime_pair(n: int, diff: int) -> tuple[int, int]:
    """Canonical ``(m, k)`` with ``m * diff == k * n`` and ``gcd(m, k) == 1``."""
    g = gcd(diff, n)
    return n // g, diff // g


def cyclic_has_property_c(spec: CyclicPairSpec) -> CyclicVerdict:
    n, p, q = spec.n, spec.p, spec.q
    if q == n:
        return CyclicVerdict(spec, True, Rule.Q_EQUALS_N)
    diff = q - p
    if diff == 1:
        return CyclicVerdict(spec, True, Rule.Q_MINUS_P_IS_ONE)
    m, k = coprime_pair(n, diff)
    if m == n:
        return CyclicVerdict(spec, True, Rule.NO_DIVISIBILITY_OBSTRUCTION, k=k, m=m)
    for d in range(1, m):
        if (p + d * diff) % n == 0:
            return CyclicVerdict(spec, True, Rule.DIVISIBLE_AND_P_ALIGNED, k=k, m=m, d=d)
    return CyclicVerdict(spec, False, Rule.FAILS, k=k, m=m)


def lemma41_literal(spec: CyclicPairSpec, d_min: int = 1) -> bool:
    """Integer (non-modular) reading of the alignment clause.

    ``d_min`` selects the lower end of the ``d`` range (1 or 2); for
    ``q < n`` the two choices always agree because ``d = 1`` would force
    ``q = n``.
    """
    n, p, q = spec.n, spec.p, spec.q
    if q == n or q - p == 1:
        return True
    m, _ = coprime_pair(n, q - p)
    if m == n:
        return True
    return any(p == n - d * (q - p) for d in range(d_min, m))


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    f = 2
    while f * f <= x:
        if x % f == 0:
            return False
        f += 1
    return True


def _power_of_two_exponent(n: int) -> int | None:
    if n >= 4 and n & (n - 1) == 0:
        return n.bit_length() - 1
    return None


def corollary_fast_path(spec: CyclicPairSpec) -> str | None:
    """First sufficient condition that applies, as a short reason string.

    Checked in order: ``q-p = 1 or q = n``, ``n`` prime, no coprime
    solution, ``q-p`` prime and not dividing ``n``, ``q-p`` a prime factor
    of ``n`` with ``p`` a small multiple of it, then for ``n = 2^N`` the
    odd-difference and two power-of-two alignment rules.
    """
    n, p, q = spec.n, spec.p, spec.q
    diff = q - p
    if diff == 1 or q == n:
        return "q = n" if q == n else "q - p = 1"
    if _is_prime(n):
        return "n is prime"
    m, _ = coprime_pair(n, diff)
    if m == n:
        return "no coprime m, k with m(q-p) = kn"
    if _is_prime(diff) and n % diff:
        return "q-p prime, not a factor of n"
    if _is_prime(diff) and n % diff == 0:
        if p % diff == 0 and 1 <= p // diff <= n // diff - 2:
            return "q-p prime factor of n, p = d(q-p)"
    N = _power_of_two_exponent(n)
    if N is not None and q < n:
        if diff % 2:
            return "n = 2^N, q-p odd"
        b = (diff & -diff).bit_length() - 1
        r = diff >> b
        if r == 1 and 1 <= b <= N - 1 and p % diff == 0 and 1 <= p // diff <= 2 ** (N - b) - 1:
            return "n = 2^N, q-p = 2^b, p = d 2^b"
        if p % (1 << b) == 0:
            rest = 2 ** (N - b) - p // (1 << b)
            if rest % r == 0 and 1 <= rest // r <= (2 ** (N - b) - 1) // r:
                return "n = 2^N, q-p = 2^b r, p = 2^b(2^(N-b) - dr)"
    return None


def enumerate_cyclic(n: int) -> list[CyclicVerdict]:
    """All ``1 <= p < q <= n`` rows, ordered by ``(p, q)``."""
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    return [
        cyclic_has_property_c(CyclicPairSpec(n, p, q))
        for p in range(1, n)
        for q in range(p + 1, n + 1)
    ]
