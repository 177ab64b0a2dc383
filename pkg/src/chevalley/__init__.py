"""Chevalley Lie algebras over prime fields.

Exact construction of the simply connected and adjoint Chevalley Lie
algebras of types A-G over F_p, their invariants (form nullity, dual
Coxeter number, maximal non-central centralizer dimension, ridgeline
number), subgroup-growth exponent evaluation, and seeded randomized
verification of the codimension bounds for commutator spans.
"""

from .root_data import (
    RootSystemSpec,
    RootSystem,
    ChevalleyStructure,
    build_root_system,
    build_structure_constants,
    root_system,
    structure_constants,
    dual_coxeter,
    classify_prime,
    is_tolerable,
    VERY_GOOD,
    GOOD_NOT_VERY_GOOD,
    TOLERABLE_NOT_GOOD,
    INTOLERABLE,
)

__version__ = "0.1.0"
