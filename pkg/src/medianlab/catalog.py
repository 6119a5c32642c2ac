"""Named small lattices, the E_n family, enumeration and the reference-table report."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import NotALattice, SizeUnsupported, UnknownName
from .iso import invariant_key, is_isomorphic
from .lattice import (
    FiniteLattice,
    chain,
    direct_product,
    dual,
    glue,
    sublattice_closure,
    validate_lattice,
)
from .medians import (
    enumerate_outer_medians,
    inner_median_lattice,
    om_product_decomposition,
    outer_median_lattice,
    ternary_clone,
)

_COVERS = {
    "M3": ("0abc1", "0a 0b 0c a1 b1 c1"),
    "N5": ("0abc1", "0a 0b ac b1 c1"),
    "M4": ("0abcd1", "0a 0b 0c 0d a1 b1 c1 d1"),
    "A1": ("0abcd1", "0a 0b 0d ac b1 c1 d1"),
    "A2": ("0abcd1", "0a 0b ac bd c1 d1"),
    "A3": ("0abcd1", "0a 0b ac cd b1 d1"),
    "L4": ("0abcd1", "0a 0b 0c ad bd c1 d1"),
}

NAMED = ("M3", "N5", "M4", "A1", "A2", "A3", "L4", "L5", "B1", "B2", "B3", "B4")


def _from_covers(elements: str, covers: str) -> FiniteLattice:
    return validate_lattice(list(elements), [tuple(c) for c in covers.split()])


def grid(a: int, b: int) -> FiniteLattice:
    """The product of an ``a``-chain and a ``b``-chain."""
    return direct_product(chain(a), chain(b))


@lru_cache(maxsize=None)
def build_named(name: str) -> FiniteLattice:
    """One of the named 5- and 6-element lattices, ``chain(n)`` / ``grid(a,b)`` / ``E(n)``."""
    if name in _COVERS:
        return _from_covers(*_COVERS[name])
    if name == "L5":
        return dual(build_named("L4"))
    if name == "B1":
        return glue(build_named("M3"), chain(2))
    if name == "B2":
        return dual(build_named("B1"))
    if name == "B3":
        return glue(build_named("N5"), chain(2))
    if name == "B4":
        return dual(build_named("B3"))
    for prefix, arity in (("chain(", 1), ("grid(", 2), ("E(", 1)):
        if name.startswith(prefix) and name.endswith(")"):
            try:
                args = [int(a) for a in name[len(prefix):-1].split(",")]
            except ValueError:
                break
            if len(args) != arity:
                break
            if prefix == "chain(":
                return chain(*args)
            if prefix == "grid(":
                return grid(*args)
            return build_E(*args)
    raise UnknownName(f"unknown lattice name {name!r}", name=name)


def build_E(n: int) -> FiniteLattice:
    """The ``(2n+1)``-element lattice with exactly ``n`` medians."""
    if n < 2:
        raise ValueError("E(n) needs n >= 2")
    z = [f"z{i}" for i in range(1, n)]
    # a[0] stands for the bottom, so a_{n-2} is "0" when n == 2
    a = ["0"] + [f"a{i}" for i in range(1, n - 1)]
    covers = [("0", "z1")]
    covers += [(z[i], z[i + 1]) for i in range(n - 2)]
    covers += [(a[i], a[i + 1]) for i in range(n - 2)]
    covers += [(a[i], z[i]) for i in range(1, n - 1)]
    covers += [(a[-1], "a"), ("a", "b"), ("b", "1"), (z[-1], "1")]
    return validate_lattice(["0", *z, *a[1:], "a", "b", "1"], covers)


def monotone_pairs(L: FiniteLattice) -> FiniteLattice:
    """Lattice of monotone maps from the 2-chain into ``L`` (pairs ``x <= y``)."""
    sq = direct_product(L, L)
    keep = [i * L.n + j for i in range(L.n) for j in range(L.n) if L.leq_table[i, j]]
    return sublattice_closure(sq, keep).lattice


# -- enumeration ---------------------------------------------------------------


def _antichains(L: FiniteLattice, pool: list[int]):
    for r in range(1, len(pool) + 1):
        for combo in combinations(pool, r):
            if all(not L.leq_table[x, y] and not L.leq_table[y, x] for x, y in combinations(combo, 2)):
                yield combo


def _add_coatom(L: FiniteLattice, lower_covers) -> FiniteLattice | None:
    n = L.n
    leq = np.zeros((n + 1, n + 1), dtype=bool)
    leq[:n, :n] = L.leq_table
    below = L.leq_table[:, list(lower_covers)].any(axis=1)
    leq[:n, n] = below
    leq[n, n] = True
    leq[n, n - 1] = True
    try:
        return FiniteLattice.from_order(leq, [str(i) for i in range(n + 1)])
    except NotALattice:
        return None


def _relabel(L: FiniteLattice) -> FiniteLattice:
    return FiniteLattice(
        [str(i) for i in range(L.n)], L.leq_table, L.meet_table, L.join_table
    )


@lru_cache(maxsize=None)
def _lattices(n: int) -> tuple[FiniteLattice, ...]:
    if n == 1:
        return (chain(1),)
    if n == 2:
        return (chain(2),)
    out: list[FiniteLattice] = []
    buckets: dict[tuple, list[FiniteLattice]] = {}
    for L in _lattices(n - 1):
        for ac in _antichains(L, list(range(L.n - 1))):
            cand = _add_coatom(L, ac)
            if cand is None:
                continue
            key = invariant_key(cand)
            bucket = buckets.setdefault(key, [])
            if any(is_isomorphic(cand, other) for other in bucket):
                continue
            cand = _relabel(cand)
            bucket.append(cand)
            out.append(cand)
    out.sort(key=lambda L: (invariant_key(L), L.covers))
    return tuple(out)


def enumerate_lattices(n: int) -> list[FiniteLattice]:
    """All ``n``-element lattices up to isomorphism, ``1 <= n <= 8``.

    Every lattice with at least three elements arises from a smaller one by
    adding a new coatom above an antichain; isomorphic duplicates are
    dropped after bucketing by a colour-refinement invariant.
    """
    if not 1 <= n <= 8:
        raise SizeUnsupported(f"enumeration supports 1 <= n <= 8, got {n}", n=n)
    return list(_lattices(n))


def lattices_up_to(n: int) -> list[FiniteLattice]:
    return [L for k in range(1, n + 1) for L in enumerate_lattices(k)]


# -- reference table ---------------------------------------------------------------

# A3's OM transcribed from a drawn Hasse diagram; node labels are arbitrary.
A3_OM_DRAWN = (
    ["aab", "aac", "abb", "abc", "acc", "bbb", "bbc", "bcc"],
    [
        ("aab", "aac"), ("aab", "abb"), ("aac", "abc"), ("abb", "abc"), ("abb", "bbb"),
        ("abc", "acc"), ("abc", "bbc"), ("bbb", "bbc"), ("acc", "bcc"), ("bbc", "bcc"),
    ],
)


def descriptor_factors(descriptor: str) -> list[FiniteLattice]:
    """Factors of an OM/IM descriptor such as ``"3^2"`` or ``"2^2 x A1^2"``.

    ``A1^2`` in a product means monotone maps from the 2-chain into A1, not
    the direct square.
    """
    if descriptor == "A3-drawn":
        return [validate_lattice(*A3_OM_DRAWN)]
    factors: list[FiniteLattice] = []
    for part in descriptor.split(" x "):
        base, _, exp = part.partition("^")
        if base.isdigit():
            factors += [chain(int(base))] * (int(exp) if exp else 1)
        elif exp and base in ("A1",):
            factors.append(monotone_pairs(build_named(base)))
        else:
            factors += [build_named(base)] * (int(exp) if exp else 1)
    return factors


def descriptor_lattice(descriptor: str) -> FiniteLattice:
    factors = descriptor_factors(descriptor)
    out = factors[0]
    for f in factors[1:]:
        out = direct_product(out, f)
    return out


@dataclass(frozen=True)
class Table1Expectation:
    name: str
    om: str
    im: str
    om_size: int
    im_size: int
    note: str = ""


TABLE1 = (
    Table1Expectation("M3", "M3", "2", 5, 2),
    Table1Expectation("N5", "2", "2", 2, 2),
    Table1Expectation("M4", "M4^4", "2", 1296, 2, "OM certified through the T-poset component product"),
    Table1Expectation("A1", "2^2 x A1^2", "2^2", 64, 4, "A1^2 is the lattice of monotone 2 -> A1 maps"),
    Table1Expectation("A2", "3^2", "2", 9, 2),
    Table1Expectation("A3", "A3-drawn", "2", 8, 2, "OM shape transcribed from the drawing"),
    Table1Expectation("L4", "3^2", "3", 9, 3),
    Table1Expectation("L5", "3^2", "3", 9, 3),
    Table1Expectation("B1", "M3", "2", 5, 2),
    Table1Expectation("B2", "M3", "2", 5, 2),
    Table1Expectation("B3", "2", "2", 2, 2),
    Table1Expectation("B4", "2", "2", 2, 2),
)


@dataclass
class Table1Row:
    name: str
    expected_om: str
    expected_im: str
    om_size: int
    im_size: int
    om_match: bool
    im_match: bool
    certified_by_product: bool = False
    im_members: list[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.om_match and self.im_match

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expected_om": self.expected_om,
            "expected_im": self.expected_im,
            "om_size": self.om_size,
            "im_size": self.im_size,
            "om_match": self.om_match,
            "im_match": self.im_match,
            "certified_by_product": self.certified_by_product,
            "im_members": self.im_members,
            "match": self.match,
        }


def _factors_match(got: list[FiniteLattice], want: list[FiniteLattice]) -> bool:
    if len(got) != len(want):
        return False
    left = list(want)
    for g in got:
        for i, w in enumerate(left):
            if is_isomorphic(g, w):
                del left[i]
                break
        else:
            return False
    return True


def compute_row(exp: Table1Expectation, materialize: bool = False) -> Table1Row:
    L = build_named(exp.name)
    medians = enumerate_outer_medians(L)
    im = inner_median_lattice(L, medians, ternary_clone(L))
    want_om = descriptor_factors(exp.om)
    certified = False
    if len(medians) > 100 and not materialize:
        decomp = om_product_decomposition(L)
        certified = decomp is not None
        om_match = (
            decomp is not None
            and decomp.size == len(medians) == exp.om_size
            and _factors_match([f.lattice for f in decomp.factors], want_om)
        )
    else:
        om = outer_median_lattice(L, medians).lattice
        om_match = om.n == exp.om_size and is_isomorphic(om, descriptor_lattice(exp.om))
    im_match = im.lattice.n == exp.im_size and is_isomorphic(im.lattice, descriptor_lattice(exp.im))
    return Table1Row(
        exp.name,
        exp.om,
        exp.im,
        len(medians),
        im.lattice.n,
        om_match,
        im_match,
        certified,
        [f.name for f in im.inner],
    )


def reproduce_table1(
    expectations=TABLE1, materialize: bool = False
) -> list[Table1Row]:
    """Compute OM and IM for every named lattice and compare with the table."""
    return [compute_row(exp, materialize) for exp in expectations]


def table1_markdown(rows: list[Table1Row]) -> str:
    lines = ["| lattice | OM expected | |OM| | IM expected | |IM| | match |", "|---|---|---|---|---|---|"]
    for r in rows:
        lines.append(
            f"| {r.name} | {r.expected_om} | {r.om_size} | {r.expected_im} | {r.im_size} | "
            f"{'yes' if r.match else 'NO'} |"
        )
    return "\n".join(lines)
