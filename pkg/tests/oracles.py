"""Brute-force reference implementations that share no code paths with medianlab.

Everything here works on plain Python sets/tuples built from an explicit
``leq(x, y)`` predicate over ``range(n)``.
"""

from __future__ import annotations

from itertools import combinations, permutations, product


def glb(n, leq, x, y):
    lower = [z for z in range(n) if leq(z, x) and leq(z, y)]
    best = [z for z in lower if all(leq(w, z) for w in lower)]
    return best[0] if len(best) == 1 else None


def lub(n, leq, x, y):
    upper = [z for z in range(n) if leq(x, z) and leq(y, z)]
    best = [z for z in upper if all(leq(z, w) for w in upper)]
    return best[0] if len(best) == 1 else None


def is_lattice_order(n, rel):
    leq = lambda a, b: (a, b) in rel
    return all(glb(n, leq, x, y) is not None and lub(n, leq, x, y) is not None for x in range(n) for y in range(n))


def lattices_by_brute_force(n):
    """All n-element lattice orders up to isomorphism.

    Bottom is 0 and top is n-1; every relation on the middle elements is
    tried and closed-ness/antisymmetry/lattice-ness is checked directly.
    Isomorphism classes are found by minimising over all relabellings of
    the middle elements.
    """
    if n == 1:
        return [frozenset({(0, 0)})]
    mid = list(range(1, n - 1))
    pairs = [(a, b) for a in mid for b in mid if a != b]
    base = {(x, x) for x in range(n)} | {(0, x) for x in range(n)} | {(x, n - 1) for x in range(n)}
    classes = {}
    for bits in product((0, 1), repeat=len(pairs)):
        rel = set(base) | {p for p, bit in zip(pairs, bits) if bit}
        if any((b, a) in rel for a, b in rel if a != b):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        if not is_lattice_order(n, rel):
            continue
        key = min(
            tuple(sorted((m[a], m[b]) for a, b in rel))
            for p in permutations(mid)
            for m in [{0: 0, n - 1: n - 1, **dict(zip(mid, p))}]
        )
        classes.setdefault(key, frozenset(rel))
    return list(classes.values())


def medians_by_brute_force(L):
    """All symmetric majority monotone ternary tables, as dicts on sorted triples.

    Triples with a repeated entry are fixed by majority; each 3-subset gets
    every element of L in turn, and an assignment survives only if it is
    monotone against every already-fixed ordered triple.
    """
    n = L.n
    leq = lambda a, b: bool(L.leq_table[a, b])
    subsets = list(combinations(range(n), 3))
    value = {}
    for x in range(n):
        for y in range(n):
            for t in {(x, x, y), (x, y, x), (y, x, x)}:
                value[t] = x

    def comparable_constraints(v, t):
        for s, w in value.items():
            if all(leq(a, b) for a, b in zip(t, s)) and not leq(v, w):
                return False
            if all(leq(b, a) for a, b in zip(t, s)) and not leq(w, v):
                return False
        return True

    results = []

    def go(i):
        if i == len(subsets):
            results.append({t: value[t] for t in sorted(value) if t[0] <= t[1] <= t[2]})
            return
        sub = subsets[i]
        orders = set(permutations(sub))
        for v in range(n):
            if all(comparable_constraints(v, t) for t in orders):
                for t in orders:
                    value[t] = v
                go(i + 1)
                for t in orders:
                    del value[t]

    go(0)
    return results


def clone_by_naive_closure(L):
    """Set of ternary term-function tables (tuples over ordered triples)."""
    n = L.n
    triples = list(product(range(n), repeat=3))
    meet = lambda a, b: int(L.meet_table[a, b])
    join = lambda a, b: int(L.join_table[a, b])
    ops = {tuple(t[i] for t in triples) for i in range(3)}
    while True:
        new = set(ops)
        for f in ops:
            for g in ops:
                new.add(tuple(meet(a, b) for a, b in zip(f, g)))
                new.add(tuple(join(a, b) for a, b in zip(f, g)))
        if new == ops:
            return ops
        ops = new


def automorphisms_by_brute_force(L):
    n = L.n
    out = []
    for p in permutations(range(n)):
        if all(L.leq_table[x, y] == L.leq_table[p[x], p[y]] for x in range(n) for y in range(n)):
            out.append(p)
    return out


def congruence_by_relation_closure(L, pairs):
    """Least equivalence containing pairs, closed under x~y => x^z ~ y^z, xvz ~ yvz."""
    n = L.n
    rel = {(x, x) for x in range(n)} | set(pairs) | {(b, a) for a, b in pairs}
    while True:
        new = set(rel)
        for a, b in rel:
            for c, d in rel:
                if b == c:
                    new.add((a, d))
            for z in range(n):
                new.add((int(L.meet_table[a, z]), int(L.meet_table[b, z])))
                new.add((int(L.join_table[a, z]), int(L.join_table[b, z])))
        if new == rel:
            return rel
        rel = new
