"""Finite lattices stored as dense order, meet and join tables.

Elements are the integers ``0 .. n-1`` listed in a linear extension of the
order (the bottom is ``0``, the top is ``n-1``); element names are used only
for input and output.
"""

from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CyclicCovers,
    DuplicateElement,
    NotALattice,
    RedundantCover,
    UnknownElement,
)

__all__ = [
    "FiniteLattice",
    "Sublattice",
    "validate_lattice",
    "chain",
    "dual",
    "direct_product",
    "linear_sum",
    "glue",
    "sublattice_closure",
    "three_generated_sublattices",
    "is_distributive",
    "is_modular",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float32 goes through BLAS; exact for counts below 2**24
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def _bound_table(below: np.ndarray, upper: bool) -> np.ndarray:
    """Greatest common lower bounds for ``below[x, z] = z <= x``.

    With ``upper=True`` the same code computes least upper bounds from the
    relation ``above[x, z] = z >= x``. Raises NotALattice on the first pair
    lacking a unique bound.
    """
    n = below.shape[0]
    table = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        common = below[x][None, :] & below
        if upper:
            # least upper bound has the smallest index among the common bounds
            g = np.argmax(common, axis=1)
        else:
            g = n - 1 - np.argmax(common[:, ::-1], axis=1)
        ok = common.any(axis=1) & ~(common & ~below[g]).any(axis=1)
        if not ok.all():
            y = int(np.flatnonzero(~ok)[0])
            kind = "join" if upper else "meet"
            raise NotALattice(
                f"elements {x} and {y} have no unique {kind}",
                pair=[x, y],
                reason="no-unique-bound",
            )
        table[x] = g
    return table


class FiniteLattice:
    """A finite lattice with precomputed tables.

    Use :func:`validate_lattice`, :meth:`from_order` or :meth:`from_tables`
    rather than calling the constructor, which trusts its arguments.
    """

    __slots__ = ("names", "leq_table", "meet_table", "join_table", "covers", "_index", "_upper", "_lower")

    def __init__(self, names: Sequence[str], leq: np.ndarray, meet: np.ndarray, join: np.ndarray):
        n = len(names)
        self.names = tuple(names)
        self.leq_table = _frozen(np.asarray(leq, dtype=bool))
        self.meet_table = _frozen(np.asarray(meet, dtype=np.int32))
        self.join_table = _frozen(np.asarray(join, dtype=np.int32))
        strict = self.leq_table & ~np.eye(n, dtype=bool)
        cover = strict & ~_bool_matmul(strict, strict) if n > 1 else strict
        xs, ys = np.nonzero(cover)
        self.covers = tuple(zip(xs.tolist(), ys.tolist()))
        self._index = {name: i for i, name in enumerate(self.names)}
        self._upper = tuple(tuple(np.flatnonzero(cover[x]).tolist()) for x in range(n))
        self._lower = tuple(tuple(np.flatnonzero(cover[:, x]).tolist()) for x in range(n))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_order(cls, leq, names: Sequence[str] | None = None) -> "FiniteLattice":
        """Build from an order relation, re-indexing into a linear extension."""
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if n == 0:
            raise NotALattice("a lattice needs at least one element", reason="empty")
        if names is None:
            names = [str(i) for i in range(n)]
        if len(set(names)) != len(names):
            raise DuplicateElement("element names must be unique")
        eye = np.eye(n, dtype=bool)
        if not leq[eye].all():
            raise NotALattice("order is not reflexive", reason="not-reflexive")
        if ((leq & leq.T) != eye).any():
            raise NotALattice("order is not antisymmetric", reason="not-antisymmetric")
        if (_bool_matmul(leq, leq) & ~leq).any():
            raise NotALattice("order is not transitive", reason="not-transitive")
        if np.triu(leq).sum() != leq.sum():
            perm = np.argsort(leq.sum(axis=0), kind="stable")
            leq = leq[np.ix_(perm, perm)]
            names = [names[i] for i in perm]
        meet = _bound_table(leq.T, upper=False)
        join = _bound_table(leq, upper=True)
        return cls(names, leq, meet, join)

    @classmethod
    def from_tables(cls, meet, join, names: Sequence[str]) -> "FiniteLattice":
        """Build from meet/join tables already indexed by a linear extension."""
        meet = np.asarray(meet, dtype=np.int32)
        join = np.asarray(join, dtype=np.int32)
        n = meet.shape[0]
        idx = np.arange(n)
        leq = meet == idx[:, None]
        if (leq != (join == idx[None, :])).any():
            raise NotALattice("meet and join tables induce different orders", reason="inconsistent-tables")
        if np.triu(leq).sum() != leq.sum():
            raise NotALattice("tables are not indexed by a linear extension", reason="not-topological")
        return cls(names, leq, meet, join)

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.names) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(f"no element named {name!r}", name=name) from None

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def join(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def leq(self, x: int, y: int) -> bool:
        return bool(self.leq_table[x, y])

    def upper_covers(self, x: int) -> tuple[int, ...]:
        return self._upper[x]

    def lower_covers(self, x: int) -> tuple[int, ...]:
        return self._lower[x]

    def heights(self) -> list[int]:
        """Length of the longest chain from the bottom to each element."""
        h = [0] * self.n
        for x in range(self.n):
            for y in self._lower[x]:
                h[x] = max(h[x], h[y] + 1)
        return h

    def depths(self) -> list[int]:
        """Length of the longest chain from each element to the top."""
        d = [0] * self.n
        for x in reversed(range(self.n)):
            for y in self._upper[x]:
                d[x] = max(d[x], d[y] + 1)
        return d

    def cover_pairs_by_name(self) -> list[tuple[str, str]]:
        return [(self.names[x], self.names[y]) for x, y in self.covers]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.leq_table, other.leq_table)

    def __hash__(self) -> int:
        return hash((self.names, self.leq_table.tobytes()))

    def __repr__(self) -> str:
        covers = ", ".join(f"{a}<{b}" for a, b in self.cover_pairs_by_name())
        return f"FiniteLattice(n={self.n}, covers=[{covers}])"


def validate_lattice(elements: Sequence, covers: Iterable[Sequence]) -> FiniteLattice:
    """Build a lattice from element names and a covering relation.

    The covers must form a transitive reduction; the order is their
    reflexive-transitive closure.
    """
    names = [str(e) for e in elements]
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateElement(f"duplicate element {name!r}", element=name)
        seen.add(name)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    pairs = []
    for pair in covers:
        a, b = (str(p) for p in pair)
        for e in (a, b):
            if e not in index:
                raise UnknownElement(f"cover mentions unknown element {e!r}", element=e)
        pairs.append((index[a], index[b]))

    sorter = TopologicalSorter({i: set() for i in range(n)})
    for a, b in pairs:
        sorter.add(b, a)
    try:
        order = list(sorter.static_order())
    except CycleError as exc:
        cycle = [names[i] for i in exc.args[1]]
        raise CyclicCovers(f"covers contain a cycle: {cycle}", cycle=cycle) from None

    pos = {x: k for k, x in enumerate(order)}
    leq = np.eye(n, dtype=bool)
    for x in reversed(order):
        for a, b in pairs:
            if a == x:
                leq[x] |= leq[b]
    for a, b in pairs:
        # a cover is redundant if b is reachable from a through another cover
        for c in (c for (s, c) in pairs if s == a and c != b):
            if leq[c, b]:
                raise RedundantCover(
                    f"cover ({names[a]}, {names[b]}) is implied by transitivity",
                    cover=[names[a], names[b]],
                )
    perm = sorted(range(n), key=lambda i: (int(leq[:, i].sum()), pos[i]))
    leq = leq[np.ix_(perm, perm)]
    names = [names[i] for i in perm]
    try:
        return FiniteLattice.from_order(leq, names)
    except NotALattice as exc:
        pair = exc.details.get("pair")
        if pair is None:
            raise
        a, b = names[pair[0]], names[pair[1]]
        kind = "join" if "join" in str(exc) else "meet"
        raise NotALattice(
            f"elements {a!r} and {b!r} have no unique {kind}", pair=[a, b], reason=exc.details["reason"]
        ) from None


def chain(n: int) -> FiniteLattice:
    """The ``n``-element chain ``0 < 1 < ... < n-1``."""
    return validate_lattice([str(i) for i in range(n)], [(str(i), str(i + 1)) for i in range(n - 1)])


def dual(L: FiniteLattice) -> FiniteLattice:
    n = L.n
    rev = np.arange(n)[::-1]
    leq = L.leq_table.T[np.ix_(rev, rev)]
    meet = (n - 1) - L.join_table[np.ix_(rev, rev)]
    join = (n - 1) - L.meet_table[np.ix_(rev, rev)]
    return FiniteLattice([L.names[i] for i in rev], leq, meet, join)


def _pair_name(a: str, b: str) -> str:
    if len(a) == 1 and len(b) == 1:
        return a + b
    return f"({a},{b})"


def direct_product(L1: FiniteLattice, L2: FiniteLattice) -> FiniteLattice:
    """Componentwise product; element ``(i, j)`` gets index ``i * |L2| + j``."""
    n1, n2 = L1.n, L2.n
    leq = (L1.leq_table[:, None, :, None] & L2.leq_table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    meet = (L1.meet_table[:, None, :, None] * n2 + L2.meet_table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    join = (L1.join_table[:, None, :, None] * n2 + L2.join_table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    names = [_pair_name(a, b) for a in L1.names for b in L2.names]
    if len(set(names)) != len(names):
        names = [f"({a},{b})" for a in L1.names for b in L2.names]
    return FiniteLattice(names, leq, meet, join)


def _disjoint_names(first: Sequence[str], second: Sequence[str]) -> list[str]:
    taken = set(first)
    out = []
    for name in second:
        while name in taken:
            name += "'"
        taken.add(name)
        out.append(name)
    return out


def linear_sum(L1: FiniteLattice, L2: FiniteLattice) -> FiniteLattice:
    """Stack ``L2`` entirely above ``L1``."""
    n1, n2 = L1.n, L2.n
    n = n1 + n2
    leq = np.zeros((n, n), dtype=bool)
    leq[:n1, :n1] = L1.leq_table
    leq[n1:, n1:] = L2.leq_table
    leq[:n1, n1:] = True
    meet = np.empty((n, n), dtype=np.int32)
    join = np.empty((n, n), dtype=np.int32)
    lo = np.arange(n1)
    hi = np.arange(n1, n)
    meet[:n1, :n1] = L1.meet_table
    meet[n1:, n1:] = L2.meet_table + n1
    meet[:n1, n1:] = lo[:, None]
    meet[n1:, :n1] = lo[None, :]
    join[:n1, :n1] = L1.join_table
    join[n1:, n1:] = L2.join_table + n1
    join[:n1, n1:] = hi[None, :]
    join[n1:, :n1] = hi[:, None]
    names = list(L1.names) + _disjoint_names(L1.names, L2.names)
    return FiniteLattice(names, leq, meet, join)


def glue(L1: FiniteLattice, L2: FiniteLattice) -> FiniteLattice:
    """Stack ``L2`` above ``L1`` identifying the top of ``L1`` with the bottom of ``L2``."""
    n1, n2 = L1.n, L2.n
    n = n1 + n2 - 1
    leq = np.zeros((n, n), dtype=bool)
    leq[:n1, :n1] = L1.leq_table
    leq[n1 - 1:, n1 - 1:] |= L2.leq_table
    leq[:n1, n1 - 1:] = True
    names = list(L1.names) + _disjoint_names(L1.names, L2.names[1:])
    return FiniteLattice.from_order(leq, names)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice together with its embedding into the parent lattice."""

    lattice: FiniteLattice
    embedding: tuple[int, ...]
    generators: tuple[int, ...]

    @property
    def carrier(self) -> frozenset[int]:
        return frozenset(self.embedding)


def _closure(L: FiniteLattice, subset: Iterable[int]) -> list[int]:
    members = np.zeros(L.n, dtype=bool)
    members[list(subset)] = True
    while True:
        idx = np.flatnonzero(members)
        grid = np.ix_(idx, idx)
        new = members.copy()
        new[L.meet_table[grid].ravel()] = True
        new[L.join_table[grid].ravel()] = True
        if (new == members).all():
            return idx.tolist()
        members = new


def sublattice_closure(L: FiniteLattice, subset: Iterable[int]) -> Sublattice:
    """Smallest meet- and join-closed subset containing ``subset``."""
    gens = tuple(sorted(set(int(x) for x in subset)))
    if not gens:
        raise ValueError("sublattice closure needs a nonempty generating set")
    emb = _closure(L, gens)
    pos = np.full(L.n, -1, dtype=np.int32)
    pos[emb] = np.arange(len(emb))
    grid = np.ix_(emb, emb)
    sub = FiniteLattice(
        [L.names[i] for i in emb],
        L.leq_table[grid],
        pos[L.meet_table[grid]],
        pos[L.join_table[grid]],
    )
    return Sublattice(sub, tuple(emb), gens)


def three_generated_sublattices(L: FiniteLattice) -> list[Sublattice]:
    """All sublattices generated by at most three elements, one per carrier set.

    Each carrier is reported with the lexicographically first generating
    triple that produced it.
    """
    seen: dict[frozenset[int], Sublattice] = {}
    for triple in combinations_with_replacement(range(L.n), 3):
        emb = frozenset(_closure(L, triple))
        if emb not in seen:
            seen[emb] = sublattice_closure(L, triple)
    return list(seen.values())


def median_tables(L: FiniteLattice) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper median values on all ordered triples, shape ``(n, n, n)``."""
    m, j = L.meet_table, L.join_table
    x = np.arange(L.n)[:, None, None]
    y = np.arange(L.n)[None, :, None]
    z = np.arange(L.n)[None, None, :]
    lower = j[j[m[x, y], m[x, z]], m[y, z]]
    upper = m[m[j[x, y], j[x, z]], j[y, z]]
    return lower, upper


def is_distributive(L: FiniteLattice) -> bool:
    lower, upper = median_tables(L)
    return bool((lower == upper).all())


def is_modular(L: FiniteLattice) -> bool:
    m, j = L.meet_table, L.join_table
    x = np.arange(L.n)[:, None, None]
    y = np.arange(L.n)[None, :, None]
    z = np.arange(L.n)[None, None, :]
    lhs = j[x, m[y, z]]
    rhs = m[j[x, y], z]
    relevant = np.broadcast_to(L.leq_table[:, None, :], lhs.shape)
    return bool((lhs == rhs)[relevant].all())
