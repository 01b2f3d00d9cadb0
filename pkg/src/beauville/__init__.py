"""Finite-group engine for classifying unmixed Beauville n-folds."""

from .catalog import build, load_group_file, parse_group_spec, write_group_file
from .classify import (
    BeauvilleStructure,
    KernelContext,
    beauville_dimension,
    enumerate_structures,
    structure_exists,
)
from .groups import (
    FiniteGroup,
    QuotientGroup,
    Subgroup,
    is_normal,
    normal_subgroups,
    quotient,
    subgroup_generated,
)
from .invariants import candidate_tuples, compute_invariants, hurwitz_bound
from .morphisms import all_automorphisms, induced_quotient_iso, kernel_tuple_orbits
from .braid import apply_braid, braid_orbit, braid_type_automorphisms, orbit_classes
from .reports import classify_ub
from .triples import GeneratingTriple, enumerate_triples

__all__ = [
    "BeauvilleStructure",
    "FiniteGroup",
    "GeneratingTriple",
    "KernelContext",
    "QuotientGroup",
    "Subgroup",
    "all_automorphisms",
    "apply_braid",
    "beauville_dimension",
    "braid_orbit",
    "braid_type_automorphisms",
    "build",
    "candidate_tuples",
    "classify_ub",
    "compute_invariants",
    "enumerate_structures",
    "enumerate_triples",
    "hurwitz_bound",
    "induced_quotient_iso",
    "is_normal",
    "kernel_tuple_orbits",
    "load_group_file",
    "normal_subgroups",
    "orbit_classes",
    "parse_group_spec",
    "quotient",
    "structure_exists",
    "subgroup_generated",
    "write_group_file",
]

__version__ = "0.1.0"
