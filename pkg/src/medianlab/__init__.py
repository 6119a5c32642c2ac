"""Outer and inner median lattices of finite lattices."""

from .catalog import build_E, build_named, enumerate_lattices, reproduce_table1
from .congruence import Congruence, congruence_generated, quotient, theta_d
from .iso import automorphisms, find_isomorphism, is_isomorphic
from .lattice import (
    FiniteLattice,
    chain,
    direct_product,
    dual,
    glue,
    is_distributive,
    is_modular,
    linear_sum,
    sublattice_closure,
    three_generated_sublattices,
    validate_lattice,
)
from .medians import (
    Median,
    TernaryOperation,
    enumerate_outer_medians,
    inner_median_lattice,
    is_median,
    om_product_decomposition,
    outer_median_lattice,
    permitted_interval,
    t_poset,
    ternary_clone,
    two_outer_median_characterization,
)
from .terms import (
    evaluate,
    holds_identity,
    holds_inequality,
    modular_by_symmetric_identity,
    parse_term,
    render_term,
)

__version__ = "0.1.0"
