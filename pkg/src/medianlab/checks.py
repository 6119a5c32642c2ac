"""Per-lattice verification routines behind ``medianlab check``."""

from __future__ import annotations

from .congruence import all_congruences, quotient, theta_d
from .errors import EquivalenceViolated
from .iso import is_isomorphic
from .lattice import FiniteLattice, direct_product, glue, is_distributive, is_modular, linear_sum
from .medians import outer_median_lattice, two_outer_median_characterization
from .terms import modular_by_symmetric_identity

CHECKS = ("modularity-symmetric", "two-outer-theorem", "gluing-prop", "theta-d")


def check_modularity_symmetric(L: FiniteLattice) -> dict:
    direct = is_modular(L)
    symmetric = modular_by_symmetric_identity(L)
    return {"pass": direct == symmetric, "modular": direct, "symmetric_criterion": symmetric}


def check_two_outer_theorem(L: FiniteLattice) -> dict:
    try:
        report = two_outer_median_characterization(L)
    except EquivalenceViolated as exc:
        return {"pass": False, **exc.details["report"]}
    return {"pass": True, **report}


def om(L: FiniteLattice) -> FiniteLattice:
    return outer_median_lattice(L).lattice


def check_gluing_pair(L1: FiniteLattice, L2: FiniteLattice) -> dict:
    product = direct_product(om(L1), om(L2))
    summed = is_isomorphic(om(linear_sum(L1, L2)), product)
    glued = is_isomorphic(om(glue(L1, L2)), product)
    return {"pass": summed and glued, "linear_sum": summed, "glue": glued}


def check_gluing_self(L: FiniteLattice) -> dict:
    return check_gluing_pair(L, L)


def check_theta_d(L: FiniteLattice, minimality_limit: int = 8) -> dict:
    """Quotient by theta^d is distributive and, for small lattices, least such."""
    theta = theta_d(L)
    q, _ = quotient(L, theta)
    out = {"blocks": theta.named_blocks(), "quotient_distributive": is_distributive(q)}
    if L.n <= minimality_limit:
        out["least"] = all(theta <= c for c in all_congruences(L) if is_distributive(quotient(L, c)[0]))
    out["pass"] = out["quotient_distributive"] and out.get("least", True)
    return out


SINGLE = {
    "modularity-symmetric": check_modularity_symmetric,
    "two-outer-theorem": check_two_outer_theorem,
    "gluing-prop": check_gluing_self,
    "theta-d": check_theta_d,
}
