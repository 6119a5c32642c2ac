"""Acceptance criteria 1-10, one test each.

Every test records a PASS/FAIL line that the conftest prints in the terminal
summary; ``python3 tests/test_acceptance.py`` prints the same lines directly.
"""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

import oracles
from medianlab import (
    automorphisms,
    build_E,
    build_named,
    chain,
    direct_product,
    enumerate_outer_medians,
    inner_median_lattice,
    is_distributive,
    is_isomorphic,
    is_median,
    is_modular,
    modular_by_symmetric_identity,
    outer_median_lattice,
    quotient,
    sublattice_closure,
    t_poset,
    ternary_clone,
    theta_d,
)
from medianlab.catalog import NAMED, enumerate_lattices, grid, lattices_up_to, reproduce_table1
from medianlab.checks import check_gluing_pair, check_two_outer_theorem
from medianlab.congruence import full_congruence
from medianlab.lattice import median_tables
from medianlab.medians import lower_median_fn, om_product_decomposition, upper_median_fn


def catalog_lattices():
    """Named lattices plus every lattice with at most six elements."""
    return [build_named(name) for name in NAMED] + lattices_up_to(6)


# -- criteria -------------------------------------------------------------------


def criterion_1():
    rows = reproduce_table1()
    bad = [r.name for r in rows if not r.match]
    sizes = {r.name: (r.om_size, r.im_size) for r in rows}
    extra = []
    if sizes["M3"] != (5, 2):
        extra.append("M3")
    if sizes["M4"][0] != 1296 or not next(r for r in rows if r.name == "M4").certified_by_product:
        extra.append("M4 product")
    decomp = om_product_decomposition(build_named("M4"))
    if decomp is None or len(decomp.factors) != 4 or not all(
        is_isomorphic(f.lattice, build_named("M4")) for f in decomp.factors
    ):
        extra.append("M4 factors")
    for a, b in (("B1", "B2"), ("B3", "B4")):
        if not is_isomorphic(outer_median_lattice(build_named(a)).lattice, outer_median_lattice(build_named(b)).lattice):
            extra.append(f"OM({a})!=OM({b})")
    bad += extra
    return not bad, f"{len(rows) - len(bad)}/{len(rows)} rows match" + (f"; failing {bad}" if bad else "")


def criterion_2():
    bad = []
    for n in range(2, 9):
        L = build_E(n)
        tp = t_poset(L)
        om = outer_median_lattice(L).lattice
        ab = sorted([L.index("a"), L.index("b")])
        chain_shape = len(tp) == n - 1 and int(tp.order.sum()) == (n - 1) * n // 2
        if not (om.n == n and is_isomorphic(om, chain(n)) and chain_shape and all(sorted(i) == ab for i in tp.intervals)):
            bad.append(n)
    return not bad, "E_2..E_8 OM chains of length n" + (f"; failing n={bad}" if bad else "")


def criterion_3():
    count, bad = 0, 0
    for L in lattices_up_to(5):
        keys = sorted({t for t in product(range(L.n), repeat=3) if t[0] <= t[1] <= t[2]})
        ours = {tuple(f(*t) for t in keys) for f in enumerate_outer_medians(L)}
        theirs = {tuple(d[t] for t in keys) for d in oracles.medians_by_brute_force(L)}
        count += 1
        bad += ours != theirs
    return bad == 0, f"{count} lattices, {bad} disagreements"


def criterion_4():
    lattices = lattices_up_to(6)
    bad = [i for i, L in enumerate(lattices) if not check_two_outer_theorem(L)["pass"]]
    return not bad, f"{len(lattices)} lattices, {len(bad)} violations"


def _random_sublattices(count: int, seed: int = 20261015, max_size: int = 12):
    pool = [build_named(name) for name in NAMED] + [chain(2), chain(3), grid(2, 2)] + enumerate_lattices(5)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, b = rng.choice(len(pool), size=2)
        P = direct_product(pool[a], pool[b])
        gens = rng.choice(P.n, size=int(rng.integers(2, 5)), replace=False)
        sub = sublattice_closure(P, gens.tolist()).lattice
        if 3 <= sub.n <= max_size:
            out.append(sub)
    return out


def criterion_5():
    lattices = lattices_up_to(6) + _random_sublattices(100)
    bad = sum(is_modular(L) != modular_by_symmetric_identity(L) for L in lattices)
    nonmod = sum(not is_modular(L) for L in lattices)
    return bad == 0, f"{len(lattices)} lattices ({nonmod} nonmodular), {bad} disagreements"


def criterion_6():
    pool = lattices_up_to(4)
    bad = [(i, j) for i, L1 in enumerate(pool) for j, L2 in enumerate(pool) if not check_gluing_pair(L1, L2)["pass"]]
    return not bad, f"{len(pool) ** 2} ordered pairs, {len(bad)} violations"


def criterion_7():
    bad = [L for L in catalog_lattices() if not is_distributive(quotient(L, theta_d(L))[0])]
    N5, M3 = build_named("N5"), build_named("M3")
    n5_blocks = sorted(sorted(b) for b in theta_d(N5).named_blocks())
    ok_n5 = n5_blocks == [["0"], ["1"], ["a", "c"], ["b"]]
    ok_m3 = theta_d(M3) == full_congruence(M3)
    ok = not bad and ok_n5 and ok_m3
    return ok, f"{len(bad)} non-distributive quotients; N5 blocks {n5_blocks}; M3 full={ok_m3}"


def criterion_8():
    two = chain(2)
    clone = ternary_clone(two)
    # term functions on the 2-chain: monotone Boolean tables that are idempotent
    triples = list(product((0, 1), repeat=3))
    filtered = {
        t
        for t in product((0, 1), repeat=8)
        if t[0] == 0 and t[7] == 1
        and all(t[i] <= t[j] for i, a in enumerate(triples) for j, b in enumerate(triples) if all(p <= q for p, q in zip(a, b)))
    }
    naive = oracles.clone_by_naive_closure(two)
    ours = {tuple(int(v) for v in row) for row in clone.tables}
    ok = len(clone) == 18 and ours == filtered == naive
    missing, not_inner = [], []
    for L in catalog_lattices():
        if L.n > 6:
            continue
        c = ternary_clone(L)
        if lower_median_fn(L) not in c or upper_median_fn(L) not in c:
            missing.append(L)
        im = inner_median_lattice(L, clone=c)
        if not all(f in c for f in im.inner):
            not_inner.append(L)
    ok = ok and not missing and not not_inner
    return ok, f"|clone(2)|={len(clone)}, oracle={len(filtered)}, naive={len(naive)}; m/M missing in {len(missing)}, IM outside clone in {len(not_inner)}"


def criterion_9():
    counts = [len(enumerate_lattices(n)) for n in range(1, 7)]
    brute = [len(oracles.lattices_by_brute_force(n)) for n in range(1, 6)]
    table = [build_named(name) for name in NAMED]
    nondist = {n: [L for L in enumerate_lattices(n) if not is_distributive(L)] for n in (5, 6)}
    unique = all(sum(is_isomorphic(L, T) for T in table) == 1 for Ls in nondist.values() for L in Ls)
    ok = counts == [1, 1, 1, 2, 5, 15] and brute == counts[:5] and [len(nondist[5]), len(nondist[6])] == [2, 10] and unique
    return ok, f"counts {counts}, brute {brute}, nondistributive {len(nondist[5])}/{len(nondist[6])}, one row each={unique}"


def _rows_closed(rows: np.ndarray, table: np.ndarray) -> bool:
    known = {r.tobytes() for r in rows}
    for f in rows:
        combined = table[f[None, :], rows].astype(rows.dtype)
        if any(r.tobytes() not in known for r in combined):
            return False
    return True


def criterion_10():
    violations = []
    for L in catalog_lattices():
        medians = enumerate_outer_medians(L)
        lower, upper = median_tables(L)
        leq = L.leq_table
        for f in medians:
            full = f.full().table
            if not (leq[lower, full].all() and leq[full, upper].all() and is_median(L, f.full()).holds):
                violations.append(("median", L, f.name))
        rows = np.array([f.reduced for f in medians], dtype=np.int32)
        if not (_rows_closed(rows, L.meet_table) and _rows_closed(rows, L.join_table)):
            violations.append(("closure", L))
        if (len(medians) == 1) != is_distributive(L):
            violations.append(("distributive", L))
        if L.n <= 6:
            im = inner_median_lattice(L, medians)
            for f in im.inner:
                table = f.full().table
                for alpha in automorphisms(L):
                    a = np.asarray(alpha)
                    if not np.array_equal(table[np.ix_(a, a, a)], a[table]):
                        violations.append(("automorphism", L, f.name))
    return not violations, f"{len(violations)} violations"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    from conftest import ACCEPTANCE

    ok, detail = CRITERIA[number]()
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    for number, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
