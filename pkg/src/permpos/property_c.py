"""Property (C) for a pair of permutations.

A pair {pi1, pi2} on {1..n} has property (C) when, for every excluded index
``i``, each ``j != i`` can pick one of ``pi1(j)``, ``pi2(j)`` so that the
picks are exactly {1..n} minus ``i``.  For fixed ``i`` that is a perfect
matching between the left vertices ``j != i`` and the targets ``!= i`` in a
bipartite graph where every left vertex has degree at most two.

The matching test is the ground truth.  The two structural conditions of
the characterisation for single-orbit pairs are evaluated alongside for
diagnostics and are never trusted on their own.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .permutations import (
    OrbitDecomposition,
    Permutation,
    minimal_invariant_subsets,
    restrict,
)


@dataclass(frozen=True)
class PermPair:
    pi1: Permutation
    pi2: Permutation

    def __post_init__(self):
        if self.pi1.n != self.pi2.n:
            raise ValueError(f"size mismatch: {self.pi1.n} vs {self.pi2.n}")

    @property
    def n(self) -> int:
        return self.pi1.n

    @cached_property
    def orbits(self) -> OrbitDecomposition:
        return minimal_invariant_subsets(self.pi1, self.pi2)


@dataclass(frozen=True)
class HallViolation:
    """Left vertices whose joint neighbourhood is too small.

    ``left`` are domain indices ``j != i``; ``targets`` is their combined
    set of admissible images (both exclude the failing index).
    """

    left: frozenset[int]
    targets: frozenset[int]


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    witness: dict | None = None


@dataclass
class OrbitResult:
    orbit: tuple[int, ...]
    holds: bool
    method: str
    failing_index: int | None = None
    hall: HallViolation | None = None
    condition1: ConditionResult | None = None
    condition2: ConditionResult | None = None

    def to_dict(self) -> dict:
        out = {
            "orbit": list(self.orbit),
            "holds": self.holds,
            "method": self.method,
            "failing_index": self.failing_index,
        }
        if self.hall is not None:
            out["hall_left"] = sorted(self.hall.left)
            out["hall_targets"] = sorted(self.hall.targets)
        if self.condition1 is not None:
            out["condition1"] = self.condition1.holds
        if self.condition2 is not None:
            out["condition2"] = self.condition2.holds
            if self.condition2.witness is not None:
                out["condition2_witness"] = self.condition2.witness
        return out


@dataclass
class PropCReport:
    per_orbit: list[OrbitResult] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.per_orbit)

    @property
    def first_failure(self) -> OrbitResult | None:
        return next((r for r in self.per_orbit if not r.holds), None)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "per_orbit": [r.to_dict() for r in self.per_orbit]}


def _match_excluding(img1, img2, i: int) -> tuple[bool, HallViolation | None]:
    """Perfect matching of ``j != i`` onto targets ``!= i`` (all 0-based).

    Kuhn's augmenting paths; on failure the alternating-reachable set from
    the first unmatched vertex gives a Hall violation.
    """
    n = len(img1)
    owner = [-1] * n  # target -> left vertex

    def neighbours(j):
        out = []
        for t in (img1[j], img2[j]):
            if t != i and t not in out:
                out.append(t)
        return out

    def augment(j, seen):
        for t in neighbours(j):
            if seen[t]:
                continue
            seen[t] = True
            if owner[t] < 0 or augment(owner[t], seen):
                owner[t] = j
                return True
        return False

    for j in range(n):
        if j == i:
            continue
        if augment(j, [False] * n):
            continue
        # alternating BFS from j: every reached target is matched
        left, targets = {j}, set()
        frontier = [j]
        while frontier:
            nxt = []
            for a in frontier:
                for t in neighbours(a):
                    if t not in targets:
                        targets.add(t)
                        b = owner[t]
                        if b >= 0 and b not in left:
                            left.add(b)
                            nxt.append(b)
            frontier = nxt
        hall = HallViolation(
            frozenset(a + 1 for a in left), frozenset(t + 1 for t in targets)
        )
        return False, hall
    return True, None


def failing_index(pi1: Permutation, pi2: Permutation) -> tuple[int | None, HallViolation | None]:
    """Smallest excluded index with no valid choice system, or ``(None, None)``."""
    img1 = list(pi1.array)
    img2 = list(pi2.array)
    for i in range(pi1.n):
        ok, hall = _match_excluding(img1, img2, i)
        if not ok:
            return i + 1, hall
    return None, None


def has_property_c_bruteforce(pair: PermPair) -> PropCReport:
    """Decide property (C) directly from its definition on the whole pair."""
    bad, hall = failing_index(pair.pi1, pair.pi2)
    orbit = tuple(range(1, pair.n + 1))
    return PropCReport([OrbitResult(orbit, bad is None, "matching", bad, hall)])


def check_prop35_condition1(pair: PermPair) -> ConditionResult:
    """``pi1(i) != pi2(i)`` and the unordered pairs {pi1(i), pi2(i)} are distinct."""
    pi1, pi2 = pair.pi1, pair.pi2
    seen: dict[frozenset, int] = {}
    for i in range(1, pair.n + 1):
        if pi1(i) == pi2(i):
            return ConditionResult(False, {"i": i, "image": pi1(i)})
        key = frozenset((pi1(i), pi2(i)))
        if key in seen:
            return ConditionResult(False, {"i": seen[key], "j": i, "images": sorted(key)})
        seen[key] = i
    return ConditionResult(True)


def check_prop35_condition2(pair: PermPair) -> ConditionResult:
    """Chain condition of the single-orbit characterisation.

    For each ``i`` fixed by neither permutation put ``j1 = pi2^-1(i)``,
    ``j2 = pi1^-1(i)`` and follow ``j_{t+1} = pi2^-1(pi1(j_t))`` starting
    from ``j1``.  While chain members are new and outside {i, j1, j2}, none
    may satisfy ``pi1(j_m) = pi2(j2)``.
    """
    pi1, pi2 = pair.pi1, pair.pi2
    inv1, inv2 = pi1.inverse(), pi2.inverse()
    for i in range(1, pair.n + 1):
        if i in (pi1(i), pi2(i)):
            continue
        j1, j2 = inv2(i), inv1(i)
        blocked = {i, j1, j2}
        chain = []
        j = inv2(pi1(j1))
        while j not in blocked:
            blocked.add(j)
            chain.append(j)
            if pi1(j) == pi2(j2):
                return ConditionResult(False, {"i": i, "j1": j1, "j2": j2, "chain": chain})
            j = inv2(pi1(j))
    return ConditionResult(True)


def _size_two_rule(sub1: Permutation, sub2: Permutation) -> bool:
    # on two points: one must be the identity and the other the swap
    return sub1.is_identity() != sub2.is_identity()


def has_property_c(pair: PermPair) -> PropCReport:
    """Decide property (C) orbit by orbit.

    Singletons hold trivially, two-point orbits follow the identity/swap
    rule, larger orbits go through the matching test with both structural
    conditions recorded.  Failing indices are reported in original labels.
    """
    report = PropCReport()
    for orbit in pair.orbits:
        sub1, labels = restrict(pair.pi1, orbit)
        sub2, _ = restrict(pair.pi2, orbit)
        if len(labels) == 1:
            report.per_orbit.append(OrbitResult(labels, True, "singleton"))
            continue
        if len(labels) == 2:
            ok = _size_two_rule(sub1, sub2)
            report.per_orbit.append(
                OrbitResult(labels, ok, "two-point", None if ok else labels[0])
            )
            continue
        bad, hall = failing_index(sub1, sub2)
        if hall is not None:
            hall = HallViolation(
                frozenset(labels[a - 1] for a in hall.left),
                frozenset(labels[t - 1] for t in hall.targets),
            )
        sub = PermPair(sub1, sub2)
        c1 = check_prop35_condition1(sub)
        c2 = check_prop35_condition2(sub) if c1.holds else None
        report.per_orbit.append(
            OrbitResult(
                labels,
                bad is None,
                "matching",
                None if bad is None else labels[bad - 1],
                hall,
                c1,
                c2,
            )
        )
    return report
