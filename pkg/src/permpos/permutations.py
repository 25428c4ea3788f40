"""Permutations of {1..n}, their matrices, cycles and common orbits.

Everything user-facing is 1-based.  ``Permutation.image[j - 1]`` is the
image of ``j``.

Matrix convention: ``P[i, j] = 1`` iff ``i = pi(j)`` (1-based), so column
``j`` carries its single 1 in row ``pi(j)``.  Transposing this flips the
meaning of the ``f_j`` in a D-type map, so don't.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, stored by its 1-based image tuple."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        n = len(image)
        if n == 0:
            raise ValueError("a permutation needs at least one point")
        if sorted(image) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {image}")
        object.__setattr__(self, "image", image)

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, j: int) -> int:
        return self.image[j - 1]

    def __str__(self) -> str:
        return format_permutation(self)

    @property
    def array(self) -> np.ndarray:
        """0-based image as an integer array."""
        return np.asarray(self.image, dtype=np.intp) - 1

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def shift(cls, n: int) -> "Permutation":
        """The cyclic shift i -> i + 1 (mod n)."""
        return cls(tuple(j % n + 1 for j in range(1, n + 1)))

    def is_identity(self) -> bool:
        return all(v == j for j, v in enumerate(self.image, start=1))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, v in enumerate(self.image, start=1):
            inv[v - 1] = j
        return Permutation(tuple(inv))


def parse_permutation(text: str) -> Permutation:
    """Parse ``"2,3,4,5,1"`` (whitespace tolerated) into a permutation."""
    parts = [p.strip() for p in text.strip().strip("()[]").split(",")]
    try:
        image = tuple(int(p) for p in parts if p)
    except ValueError as exc:
        raise ValueError(f"cannot parse permutation {text!r}") from exc
    return Permutation(image)


def format_permutation(pi: Permutation) -> str:
    return ",".join(str(v) for v in pi.image)


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """Return ``sigma o tau``, i.e. ``j -> sigma(tau(j))``."""
    if sigma.n != tau.n:
        raise ValueError(f"size mismatch: {sigma.n} vs {tau.n}")
    return Permutation(tuple(sigma(tau(j)) for j in range(1, tau.n + 1)))


def power(pi: Permutation, k: int) -> Permutation:
    if k < 0:
        raise ValueError("power must be nonnegative")
    result = Permutation.identity(pi.n)
    base = pi
    # square-and-multiply; powers of one permutation commute
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def max_len(self) -> int:
        return max(len(c) for c in self.cycles)


def cycle_decomposition(pi: Permutation) -> CycleDecomposition:
    """Disjoint cycles, each starting at its smallest element."""
    seen = set()
    cycles = []
    for start in range(1, pi.n + 1):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        j = pi(start)
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = pi(j)
        cycles.append(tuple(cycle))
    return CycleDecomposition(tuple(cycles))


def permutation_matrix(pi: Permutation) -> np.ndarray:
    n = pi.n
    P = np.zeros((n, n))
    P[pi.array, np.arange(n)] = 1.0
    return P


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller root wins so representatives are canonical
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass(frozen=True)
class OrbitDecomposition:
    """Minimal common invariant subsets, sorted by smallest member."""

    orbits: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)


def minimal_invariant_subsets(*perms: Permutation) -> OrbitDecomposition:
    """Orbits of the group generated by ``perms`` (usually a pair)."""
    if not perms:
        raise ValueError("need at least one permutation")
    n = perms[0].n
    if any(p.n != n for p in perms):
        raise ValueError("size mismatch")
    uf = _UnionFind(n)
    for p in perms:
        for j, v in enumerate(p.image):
            uf.union(j, v - 1)
    groups: dict[int, set[int]] = {}
    for j in range(n):
        groups.setdefault(uf.find(j), set()).add(j + 1)
    orbits = sorted((frozenset(g) for g in groups.values()), key=min)
    return OrbitDecomposition(tuple(orbits))


def restrict(pi: Permutation, orbit: Iterable[int]) -> tuple[Permutation, tuple[int, ...]]:
    """Restrict ``pi`` to an invariant set and relabel it as 1..len(orbit).

    Returns the restricted permutation together with the relabeling map:
    ``labels[r - 1]`` is the original index carried by new label ``r``.
    Labels follow the increasing order of the original indices.
    """
    labels = tuple(sorted(set(orbit)))
    if not labels:
        raise ValueError("empty orbit")
    index = {v: r for r, v in enumerate(labels, start=1)}
    try:
        image = tuple(index[pi(v)] for v in labels)
    except KeyError:
        raise ValueError(f"{set(labels)} is not invariant under {pi}") from None
    return Permutation(image), labels


def embed(sub: Permutation, labels: Sequence[int], j: int) -> int:
    """Action of a restricted permutation in original coordinates."""
    r = labels.index(j) + 1
    return labels[sub(r) - 1]
