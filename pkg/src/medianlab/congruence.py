"""Lattice congruences: generation by union-find closure, quotients, theta^d."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import NotACongruence
from .lattice import FiniteLattice, is_distributive, median_tables


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

    def union(self, x: int, y: int) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True


def _normalise(labels: Iterable[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(b, len(relabel)) for b in labels)


@dataclass(frozen=True)
class Congruence:
    """A partition of a lattice's elements, block ids numbered by first occurrence."""

    lattice: FiniteLattice
    partition: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "partition", _normalise(self.partition))

    @property
    def num_blocks(self) -> int:
        return max(self.partition) + 1

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.partition):
            out[b].append(x)
        return out

    def named_blocks(self) -> list[list[str]]:
        return [[self.lattice.names[x] for x in block] for block in self.blocks()]

    def related(self, x: int, y: int) -> bool:
        return self.partition[x] == self.partition[y]

    def is_compatible(self) -> bool:
        p = np.asarray(self.partition)
        L = self.lattice
        same = p[:, None] == p[None, :]
        for x in range(L.n):
            for y in np.flatnonzero(same[x]):
                if not (p[L.meet_table[x]] == p[L.meet_table[y]]).all():
                    return False
                if not (p[L.join_table[x]] == p[L.join_table[y]]).all():
                    return False
        return True

    def __le__(self, other: "Congruence") -> bool:
        """Refinement: every block of ``self`` lies inside a block of ``other``."""
        return all(other.partition[x] == other.partition[b[0]] for b in self.blocks() for x in b)

    def __hash__(self) -> int:
        return hash(self.partition)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.partition == other.partition and self.lattice is other.lattice


def congruence_generated(L: FiniteLattice, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence containing ``pairs``.

    Every merge is queued; a queued pair ``(x, y)`` merges ``x^z`` with
    ``y^z`` and ``xvz`` with ``yvz`` for all ``z``.
    """
    uf = _UnionFind(L.n)
    work = []
    for x, y in pairs:
        if uf.union(x, y):
            work.append((x, y))
    meet, join = L.meet_table, L.join_table
    while work:
        x, y = work.pop()
        for row_x, row_y in ((meet[x], meet[y]), (join[x], join[y])):
            for a, b in zip(row_x.tolist(), row_y.tolist()):
                if a != b and uf.union(a, b):
                    work.append((a, b))
    return Congruence(L, tuple(uf.find(x) for x in range(L.n)))


def identity_congruence(L: FiniteLattice) -> Congruence:
    return Congruence(L, tuple(range(L.n)))


def full_congruence(L: FiniteLattice) -> Congruence:
    return Congruence(L, (0,) * L.n)


def theta_d(L: FiniteLattice) -> Congruence:
    """Congruence generated by all pairs (lower median, upper median)."""
    lower, upper = median_tables(L)
    pairs = {(int(a), int(b)) for a, b in zip(lower.ravel(), upper.ravel()) if a != b}
    theta = congruence_generated(L, sorted(pairs))
    q, _ = quotient(L, theta)
    assert is_distributive(q), "quotient by theta^d must be distributive"
    return theta


def quotient(L: FiniteLattice, theta: Congruence) -> tuple[FiniteLattice, tuple[int, ...]]:
    """Factor lattice and the projection map ``element -> block``.

    Blocks are named after their least element.
    """
    if theta.lattice.n != L.n or not theta.is_compatible():
        raise NotACongruence("partition is not compatible with meet and join")
    blocks = theta.blocks()
    k = len(blocks)
    p = np.asarray(theta.partition)
    leq = np.zeros((k, k), dtype=bool)
    xs, ys = np.nonzero(L.leq_table)
    leq[p[xs], p[ys]] = True
    names = [L.names[min(b)] for b in blocks]
    try:
        q = FiniteLattice.from_order(leq, names)
    except Exception as exc:
        raise NotACongruence(f"block order is not a lattice order: {exc}") from exc
    proj = tuple(q.index(names[b]) for b in theta.partition)
    return q, proj


def all_congruences(L: FiniteLattice) -> list[Congruence]:
    """Every congruence, as joins of principal congruences (small lattices only)."""
    principal = {congruence_generated(L, [(x, y)]) for x, y in combinations(range(L.n), 2)}
    found = {identity_congruence(L)} | principal
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in principal:
                pairs = [(x, blk[0]) for c in (a, b) for blk in c.blocks() for x in blk]
                c = congruence_generated(L, pairs)
                if c not in found:
                    found.add(c)
                    new.append(c)
        frontier = new
    return sorted(found, key=lambda c: (c.num_blocks, c.partition), reverse=True)
