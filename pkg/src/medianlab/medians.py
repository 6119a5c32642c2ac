"""Medians of a finite lattice: T-posets, outer/inner median lattices, clones.

A median is stored by its values on sorted triples ``i <= j <= k``; the
full table over ordered triples is materialised only when needed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    CloneCapExceeded,
    EquivalenceViolated,
    ExtensionNotMedian,
    NotALattice,
    NotSymmetric,
    OrderNotAntisymmetric,
    TooManyMedians,
)
from .iso import is_isomorphic
from .lattice import FiniteLattice, is_distributive, median_tables, three_generated_sublattices
from .terms import S3, Term, Verdict, holds_identity, is_symmetric_on

DEFAULT_MEDIAN_CAP = 10**6
DEFAULT_CLONE_CAP = 10**6


def default_cap(fallback: int) -> int:
    """Cap from ``MEDIANLAB_CAP`` if set, else ``fallback``."""
    env = os.environ.get("MEDIANLAB_CAP")
    return int(env) if env else fallback


# -- triple indexing ----------------------------------------------------------


@lru_cache(maxsize=None)
def sorted_triples(n: int) -> np.ndarray:
    """All ``(i, j, k)`` with ``i <= j <= k < n`` in lexicographic order, shape ``(r, 3)``."""
    out = [(i, j, k) for i in range(n) for j in range(i, n) for k in range(j, n)]
    arr = np.array(out, dtype=np.int64).reshape(-1, 3)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def reduced_index(n: int) -> np.ndarray:
    """Map each ordered triple (flattened, C order) to the index of its sorted triple."""
    st = sorted_triples(n)
    pos = np.full(n**3, -1, dtype=np.int64)
    pos[np.ravel_multi_index(st.T, (n, n, n))] = np.arange(len(st))
    grid = np.indices((n, n, n)).reshape(3, -1).T
    flat = np.ravel_multi_index(np.sort(grid, axis=1).T, (n, n, n))
    out = pos[flat]
    out.setflags(write=False)
    return out


# -- operations -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TernaryOperation:
    """Value table over all ordered triples, flattened in C order."""

    lattice: FiniteLattice
    values: np.ndarray

    @property
    def table(self) -> np.ndarray:
        n = self.lattice.n
        return self.values.reshape(n, n, n)

    @property
    def key(self) -> bytes:
        return np.asarray(self.values, dtype=np.int32).tobytes()

    def __call__(self, x: int, y: int, z: int) -> int:
        return int(self.table[x, y, z])

    def __eq__(self, other) -> bool:
        return isinstance(other, TernaryOperation) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


@dataclass(frozen=True, eq=False)
class Median:
    """A median given by its values on sorted triples."""

    lattice: FiniteLattice
    reduced: np.ndarray
    name: str = ""

    def full(self) -> TernaryOperation:
        return TernaryOperation(self.lattice, self.reduced[reduced_index(self.lattice.n)])

    def __call__(self, x: int, y: int, z: int) -> int:
        a, b, c = sorted((x, y, z))
        n = self.lattice.n
        return int(self.reduced[reduced_index(n)[(a * n + b) * n + c]])

    @property
    def key(self) -> bytes:
        return np.asarray(self.reduced, dtype=np.int32).tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, Median) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def _reduce(L: FiniteLattice, table: np.ndarray) -> np.ndarray:
    st = sorted_triples(L.n)
    return np.ascontiguousarray(table[st[:, 0], st[:, 1], st[:, 2]], dtype=np.int32)


def lower_median_fn(L: FiniteLattice) -> Median:
    lower, _ = median_tables(L)
    return Median(L, _reduce(L, lower), "m")


def upper_median_fn(L: FiniteLattice) -> Median:
    _, upper = median_tables(L)
    return Median(L, _reduce(L, upper), "M")


def is_median(L: FiniteLattice, f) -> Verdict:
    """Check symmetry, majority and monotonicity exhaustively.

    ``f`` may be a Median, a TernaryOperation or an ``(n, n, n)`` array. The
    witness on failure is ``(code, x, y, z)`` with code 0 = symmetry,
    1 = majority, 2 = monotonicity.
    """
    if isinstance(f, Median):
        f = f.full()
    table = f.table if isinstance(f, TernaryOperation) else np.asarray(f)
    n = L.n
    for p in S3:
        bad = table != table.transpose([s - 1 for s in p])
        if bad.any():
            return Verdict(False, (0, *map(int, np.argwhere(bad)[0])))
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    for vals in (table[x, x, y], table[x, y, x], table[y, x, x]):
        bad = vals != np.broadcast_to(x, (n, n))
        if bad.any():
            a, b = np.argwhere(bad)[0]
            return Verdict(False, (1, int(a), int(a), int(b)))
    # by symmetry, monotonicity along covers in the first coordinate suffices
    for a, b in L.covers:
        bad = ~L.leq_table[table[a], table[b]]
        if bad.any():
            j, k = np.argwhere(bad)[0]
            return Verdict(False, (2, a, int(j), int(k)))
    return Verdict(True, None)


# -- T-poset ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TPoset:
    """Three-element subsets with a nontrivial permitted interval.

    ``order[p, q]`` holds when triple ``p`` lies below triple ``q``. Triples
    are listed in lexicographic order, which is a linear extension.
    """

    lattice: FiniteLattice
    triples: list[tuple[int, int, int]]
    order: np.ndarray
    intervals: list[list[int]]
    lower: list[int]
    upper: list[int]

    def __len__(self) -> int:
        return len(self.triples)

    def triple_name(self, p: int) -> str:
        return _concat(self.lattice.names[x] for x in self.triples[p])

    def covers(self) -> list[tuple[int, int]]:
        k = len(self.triples)
        strict = self.order & ~np.eye(k, dtype=bool)
        two = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        xs, ys = np.nonzero(strict & ~two)
        return list(zip(xs.tolist(), ys.tolist()))

    def components(self) -> list[list[int]]:
        """Connected components of the comparability graph, in triple order."""
        k = len(self.triples)
        comp = [-1] * k
        out = []
        for s in range(k):
            if comp[s] >= 0:
                continue
            comp[s] = len(out)
            members, stack = [s], [s]
            while stack:
                p = stack.pop()
                for q in np.flatnonzero(self.order[p] | self.order[:, p]).tolist():
                    if comp[q] < 0:
                        comp[q] = comp[s]
                        members.append(q)
                        stack.append(q)
            out.append(sorted(members))
        return out


def _concat(names) -> str:
    names = list(names)
    if all(len(s) == 1 for s in names):
        return "".join(names)
    return ".".join(names)


def permitted_interval(L: FiniteLattice, triple: Sequence[int]) -> list[int]:
    """All elements between the lower and the upper median of ``triple``."""
    x, y, z = triple
    lower, upper = median_tables(L)
    lo, hi = lower[x, y, z], upper[x, y, z]
    return [u for u in range(L.n) if L.leq_table[lo, u] and L.leq_table[u, hi]]


def t_poset(L: FiniteLattice) -> TPoset:
    lower, upper = median_tables(L)
    triples = [t for t in combinations(range(L.n), 3) if lower[t] != upper[t]]
    k = len(triples)
    if k == 0:
        return TPoset(L, [], np.zeros((0, 0), dtype=bool), [], [], [])
    T = np.array(triples)
    leq = L.leq_table
    order = np.zeros((k, k), dtype=bool)
    for p in S3:
        ok = np.ones((k, k), dtype=bool)
        for i in range(3):
            ok &= leq[T[:, None, i], T[None, :, p[i] - 1]]
        order |= ok
    if ((order & order.T) != np.eye(k, dtype=bool)).any():
        p, q = np.argwhere((order & order.T) & ~np.eye(k, dtype=bool))[0]
        raise OrderNotAntisymmetric(
            "two distinct triples compare both ways", triples=[list(triples[p]), list(triples[q])]
        )
    lo = [int(lower[t]) for t in triples]
    hi = [int(upper[t]) for t in triples]
    intervals = [[u for u in range(L.n) if leq[a, u] and leq[u, b]] for a, b in zip(lo, hi)]
    return TPoset(L, triples, order, intervals, lo, hi)


# -- outer medians ------------------------------------------------------------


def _permitted_homs(tp: TPoset, subset: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Monotone interval-respecting maps on ``subset`` of the T-poset, lexicographically."""
    L = tp.lattice
    idx = list(range(len(tp))) if subset is None else list(subset)
    if not idx:
        yield ()
        return
    preds = [[a for a in range(b) if tp.order[idx[a], idx[b]]] for b in range(len(idx))]
    cands = [tp.intervals[p] for p in idx]
    leq, join = L.leq_table, L.join_table
    values = [0] * len(idx)
    last = len(idx) - 1

    def go(pos: int):
        lb = 0
        for a in preds[pos]:
            lb = join[lb, values[a]]
        for v in cands[pos]:
            if leq[lb, v]:
                values[pos] = v
                if pos == last:
                    yield tuple(values)
                else:
                    yield from go(pos + 1)

    yield from go(0)


def _median_name(L: FiniteLattice, choice: Sequence[int]) -> str:
    if not choice:
        return "m"
    return _concat(L.names[v] for v in choice)


def enumerate_outer_medians(
    L: FiniteLattice, cap: int | None = None, tposet: TPoset | None = None, verify: bool = True
) -> list[Median]:
    """All medians of ``L``, one per permitted homomorphism of its T-poset.

    Values on the T-poset triples come from the homomorphism; every other
    sorted triple has a one-point permitted interval and takes the lower
    median's value. With ``verify`` each extension is re-checked with
    ``is_median`` and a failure raises ExtensionNotMedian.
    """
    cap = default_cap(DEFAULT_MEDIAN_CAP) if cap is None else cap
    tp = t_poset(L) if tposet is None else tposet
    base = lower_median_fn(L).reduced
    n = L.n
    positions = np.array(
        [reduced_index(n)[(a * n + b) * n + c] for a, b, c in tp.triples], dtype=np.int64
    )
    out = []
    for choice in _permitted_homs(tp):
        if len(out) >= cap:
            raise TooManyMedians(f"more than {cap} medians", cap=cap)
        red = base.copy()
        red[positions] = choice
        red.setflags(write=False)
        f = Median(L, red, _median_name(L, choice))
        if verify:
            verdict = is_median(L, f)
            if not verdict:
                raise ExtensionNotMedian(
                    f"extension {f.name} is not a median", median=f.name, witness=list(verdict.witness)
                )
        out.append(f)
    return out


@dataclass(frozen=True, eq=False)
class MedianLattice:
    """A lattice of pointwise-ordered value vectors; element ``i`` is ``members[i]``."""

    lattice: FiniteLattice
    members: list


class _RowIndex:
    """Exact lookup of integer rows using a 64-bit hash prefilter."""

    def __init__(self, rows: np.ndarray):
        rng = np.random.default_rng(0x5EED)
        self.weights = rng.integers(1, 2**62, size=rows.shape[1], dtype=np.int64)
        self.rows = rows
        h = self.hash(rows)
        self.order = np.argsort(h, kind="stable")
        self.sorted_hashes = h[self.order]
        if len(np.unique(h)) != len(h):
            raise ValueError("duplicate rows or hash collision")

    def hash(self, rows: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            return (rows.astype(np.int64) * self.weights).sum(axis=1)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        h = self.hash(rows)
        pos = np.minimum(np.searchsorted(self.sorted_hashes, h), len(self.sorted_hashes) - 1)
        idx = self.order[pos]
        found = (self.sorted_hashes[pos] == h) & (self.rows[idx] == rows).all(axis=1)
        if not found.all():
            raise NotALattice("pointwise operation leaves the member set", reason="not-closed")
        return idx


def pointwise_lattice(L: FiniteLattice, rows: np.ndarray, names: Sequence[str]) -> tuple[FiniteLattice, np.ndarray]:
    """Lattice of value vectors closed under pointwise meet and join.

    Returns the lattice and the permutation taking lattice indices to row
    indices.
    """
    rows = np.asarray(rows, dtype=np.int32)
    k = rows.shape[0]
    rank = L.leq_table.sum(axis=0)
    weight = rank[rows].sum(axis=1)
    perm = np.argsort(weight, kind="stable")
    rows = rows[perm]
    index = _RowIndex(rows)
    meet = np.empty((k, k), dtype=np.int32)
    join = np.empty((k, k), dtype=np.int32)
    for i in range(k):
        meet[i] = index.lookup(L.meet_table[rows[i][None, :], rows])
        join[i] = index.lookup(L.join_table[rows[i][None, :], rows])
    lat = FiniteLattice.from_tables(meet, join, [names[p] for p in perm])
    return lat, perm


def outer_median_lattice(
    L: FiniteLattice, medians: list[Median] | None = None, cap: int | None = None
) -> MedianLattice:
    """The lattice of all medians under the pointwise order."""
    if medians is None:
        medians = enumerate_outer_medians(L, cap)
    rows = np.stack([f.reduced for f in medians])
    lat, perm = pointwise_lattice(L, rows, [f.name for f in medians])
    return MedianLattice(lat, [medians[p] for p in perm])


# -- clone ---------------------------------------------------------------------


@dataclass(eq=False)
class Clone:
    """Ternary term functions of a lattice, in insertion order."""

    lattice: FiniteLattice
    tables: np.ndarray
    _keys: set = field(default_factory=set, repr=False)

    def __post_init__(self):
        self._keys = {row.tobytes() for row in self.tables}

    def __len__(self) -> int:
        return len(self.tables)

    def __iter__(self) -> Iterator[TernaryOperation]:
        for row in self.tables:
            yield TernaryOperation(self.lattice, row)

    def __contains__(self, op) -> bool:
        if isinstance(op, Median):
            op = op.full()
        values = op.values if isinstance(op, TernaryOperation) else np.asarray(op).ravel()
        return np.asarray(values, dtype=np.int32).tobytes() in self._keys


def ternary_clone(L: FiniteLattice, cap: int | None = None) -> Clone:
    """Closure of the three projections under pointwise meet and join.

    Newest members are combined first against every current member; rows
    are deduplicated by a 64-bit hash and then compared exactly.
    """
    cap = default_cap(DEFAULT_CLONE_CAP) if cap is None else cap
    n = L.n
    N = n**3
    grid = np.indices((n, n, n)).reshape(3, N).astype(np.int32)
    rng = np.random.default_rng(0xC10E)
    weights = rng.integers(1, 2**62, size=N, dtype=np.int64)
    buf = np.empty((16, N), dtype=np.int32)
    count = 0
    index: dict[int, int] = {}
    stack: list[int] = []

    def absorb(rows: np.ndarray) -> None:
        nonlocal buf, count
        with np.errstate(over="ignore"):
            hs = (rows @ weights).tolist()
        known = [index.get(h, -1) for h in hs]
        hit = [i for i, j in enumerate(known) if j >= 0]
        if hit and not (buf[[known[i] for i in hit]] == rows[hit]).all():
            raise RuntimeError("hash collision in clone closure")
        for i, h in enumerate(hs):
            if known[i] >= 0:
                continue
            j = index.get(h)
            if j is not None:
                if not np.array_equal(buf[j], rows[i]):
                    raise RuntimeError("hash collision in clone closure")
                continue
            if count >= cap:
                raise CloneCapExceeded(f"clone exceeds {cap} operations", cap=cap)
            if count == len(buf):
                buf = np.concatenate([buf, np.empty_like(buf)])
            buf[count] = rows[i]
            index[h] = count
            stack.append(count)
            count += 1

    absorb(grid)
    while stack:
        f = buf[stack.pop()].copy()
        members = buf[:count]
        absorb(L.meet_table[f[None, :], members])
        absorb(L.join_table[f[None, :], members])
    return Clone(L, buf[:count].copy())


# -- inner medians ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InnerMedians:
    """Inner median lattice plus the inner/outer verdict for each outer median."""

    lattice: FiniteLattice
    inner: list[Median]
    classification: list[tuple[str, bool]]
    om_size: int


def inner_median_lattice(
    L: FiniteLattice,
    medians: list[Median] | None = None,
    clone: Clone | None = None,
    cap: int | None = None,
) -> InnerMedians:
    """Medians that are term functions, with the induced lattice."""
    if medians is None:
        medians = enumerate_outer_medians(L, cap)
    if clone is None:
        clone = ternary_clone(L, cap)
    flags = [f in clone for f in medians]
    inner = [f for f, ok in zip(medians, flags) if ok]
    for bound in (lower_median_fn(L), upper_median_fn(L)):
        assert bound in clone, "lower and upper medians are term functions"
    ml = outer_median_lattice(L, inner)
    return InnerMedians(ml.lattice, ml.members, [(f.name, ok) for f, ok in zip(medians, flags)], len(medians))


# -- theorems and cuts --------------------------------------------------------------


def two_outer_median_characterization(L: FiniteLattice, cap: int | None = None) -> dict[str, bool]:
    """Evaluate the three equivalent conditions independently.

    Raises EquivalenceViolated if they disagree.
    """
    medians = enumerate_outer_medians(L, cap)
    im = inner_median_lattice(L, medians, cap=cap)
    nondist = [s for s in three_generated_sublattices(L) if not is_distributive(s.lattice)]
    n5 = _n5()
    report = {
        "om_le_2": len(medians) <= 2,
        "om_eq_im": im.lattice.n == len(medians),
        "at_most_one_nondistributive_3gen_and_it_is_N5": len(nondist) == 0
        or (len(nondist) == 1 and is_isomorphic(nondist[0].lattice, n5)),
    }
    if len(set(report.values())) != 1:
        raise EquivalenceViolated(f"conditions disagree: {report}", report=report)
    return report


@lru_cache(maxsize=None)
def _n5() -> FiniteLattice:
    from .catalog import build_named

    return build_named("N5")


def cut_relates(L: FiniteLattice, s: Term, t: Term) -> bool:
    """Whether two symmetric ternary terms induce the same function on ``L``."""
    for term in (s, t):
        if term.arity > 3 or not is_symmetric_on(L, term):
            raise NotSymmetric("term does not induce a symmetric ternary function", term=str(term))
    return holds_identity(L, s, t).holds


@dataclass(frozen=True, eq=False)
class OMProduct:
    """OM split along the connected components of the T-poset."""

    tposet: TPoset
    components: list[list[int]]
    factors: list[MedianLattice]

    @property
    def size(self) -> int:
        return int(np.prod([f.lattice.n for f in self.factors]))


def om_product_decomposition(L: FiniteLattice, cap: int | None = None) -> OMProduct | None:
    """Factor OM by T-poset components; ``None`` when there are fewer than two."""
    cap = default_cap(DEFAULT_MEDIAN_CAP) if cap is None else cap
    tp = t_poset(L)
    comps = tp.components()
    if len(comps) < 2:
        return None
    factors = []
    for comp in comps:
        homs = []
        for choice in _permitted_homs(tp, comp):
            if len(homs) >= cap:
                raise TooManyMedians(f"more than {cap} maps on one component", cap=cap)
            homs.append(choice)
        rows = np.array(homs, dtype=np.int32)
        lat, perm = pointwise_lattice(L, rows, [_median_name(L, h) for h in homs])
        factors.append(MedianLattice(lat, [homs[p] for p in perm]))
    return OMProduct(tp, comps, factors)
