"""Order isomorphisms between finite lattices.

Colour refinement on the cover graph narrows the candidates, then a
backtracking search extends a partial map along cover edges.
"""

from __future__ import annotations

from typing import Iterator

from .errors import SizeLimitExceeded
from .lattice import FiniteLattice

DEFAULT_SIZE_LIMIT = 2000


def _initial_colors(L: FiniteLattice) -> list[tuple]:
    h, d = L.heights(), L.depths()
    return [(h[x], d[x], len(L.lower_covers(x)), len(L.upper_covers(x))) for x in range(L.n)]


def refine_colors(*lattices: FiniteLattice) -> list[list[int]]:
    """Jointly refine element colours of several lattices to stability.

    Colours are integers comparable across the given lattices.
    """
    colors = [_initial_colors(L) for L in lattices]
    num = -1
    while True:
        palette = sorted({c for cs in colors for c in cs})
        lookup = {c: i for i, c in enumerate(palette)}
        ints = [[lookup[c] for c in cs] for cs in colors]
        if len(palette) == num:
            return ints
        num = len(palette)
        colors = [
            [
                (
                    cs[x],
                    tuple(sorted(cs[y] for y in L.lower_covers(x))),
                    tuple(sorted(cs[y] for y in L.upper_covers(x))),
                )
                for x in range(L.n)
            ]
            for L, cs in zip(lattices, ints)
        ]


def _search_order(L: FiniteLattice) -> list[int]:
    # BFS over the undirected cover graph: every element after the bottom has
    # an already-placed neighbour.
    order, seen = [0], {0}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in L.upper_covers(x) + L.lower_covers(x):
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


def _isomorphisms(L1: FiniteLattice, L2: FiniteLattice) -> Iterator[tuple[int, ...]]:
    if L1.n != L2.n or len(L1.covers) != len(L2.covers):
        return
    c1, c2 = refine_colors(L1, L2)
    if sorted(c1) != sorted(c2):
        return
    n = L1.n
    order = _search_order(L1)
    up1 = [set(L1.upper_covers(x)) for x in range(n)]
    lo1 = [set(L1.lower_covers(x)) for x in range(n)]
    up2 = [set(L2.upper_covers(x)) for x in range(n)]
    lo2 = [set(L2.lower_covers(x)) for x in range(n)]
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(c2[v], []).append(v)

    image = [-1] * n
    used = [False] * n

    def candidates(u: int) -> list[int]:
        if u == 0:
            return [0]
        for w in lo1[u]:
            if image[w] >= 0:
                pool = up2[image[w]]
                break
        else:
            for w in up1[u]:
                if image[w] >= 0:
                    pool = lo2[image[w]]
                    break
            else:
                pool = by_color[c1[u]]
        return sorted(v for v in pool if c2[v] == c1[u] and not used[v])

    def consistent(u: int, v: int) -> bool:
        for w in lo1[u]:
            if image[w] >= 0 and image[w] not in lo2[v]:
                return False
        for w in up1[u]:
            if image[w] >= 0 and image[w] not in up2[v]:
                return False
        mapped_lo = sum(1 for w in lo1[u] if image[w] >= 0)
        mapped_up = sum(1 for w in up1[u] if image[w] >= 0)
        # reject extra cover edges of v towards already-used elements
        if sum(1 for w in lo2[v] if used[w]) != mapped_lo:
            return False
        if sum(1 for w in up2[v] if used[w]) != mapped_up:
            return False
        return True

    stack = [iter(candidates(order[0]))]
    while stack:
        depth = len(stack) - 1
        u = order[depth]
        if image[u] >= 0:
            used[image[u]] = False
            image[u] = -1
        for v in stack[-1]:
            if consistent(u, v):
                image[u] = v
                used[v] = True
                break
        else:
            stack.pop()
            continue
        if depth + 1 == n:
            yield tuple(image)
        else:
            stack.append(iter(candidates(order[depth + 1])))


def find_isomorphism(
    L1: FiniteLattice, L2: FiniteLattice, size_limit: int = DEFAULT_SIZE_LIMIT
) -> tuple[int, ...] | None:
    """An order isomorphism ``L1 -> L2`` as an index tuple, or ``None``."""
    if max(L1.n, L2.n) > size_limit:
        raise SizeLimitExceeded(
            f"isomorphism test limited to {size_limit} elements", size=max(L1.n, L2.n), limit=size_limit
        )
    return next(_isomorphisms(L1, L2), None)


def is_isomorphic(L1: FiniteLattice, L2: FiniteLattice, size_limit: int = DEFAULT_SIZE_LIMIT) -> bool:
    return find_isomorphism(L1, L2, size_limit) is not None


def automorphisms(L: FiniteLattice) -> list[tuple[int, ...]]:
    """All order automorphisms of ``L``; the identity comes first."""
    return sorted(_isomorphisms(L, L))


def invariant_key(L: FiniteLattice) -> tuple:
    """Isomorphism-invariant fingerprint, used to bucket candidates."""
    (colors,) = refine_colors(L)
    return (L.n, len(L.covers), tuple(sorted(_initial_colors(L))), tuple(sorted(colors)))
