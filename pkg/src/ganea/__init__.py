"""Sectional category, LS-category and topological complexity of finite simplicial sets.

The Ganea tower of a map is built from joins over its base; a weak section
of the n-th Ganea map bounds the sectional category from above.  Cover
oracles compute the same invariants from explicit covers, and cohomology
gives the lower bounds.
"""
from .cohomology import INF, CohomologyRing, cup_length, schwarz_bound, zero_divisor_cup_length
from .constructions import (ex, function_complex, mapping_cylinder, product, pullback, pushout, subdivide,
                            vertex_inclusion)
from .corpus import CORPUS
from .cover import Cover, cat_cover, consistency_harness, local_section_check, secat_cover, tc_cover
from .fundamental_group import pi1_presentation, tietze_reduce
from .homology import homology, induced_homology
from .kan import fibration_status, horn_filler_report
from .model import c_factorize, f_factorize, is_cofibration, is_weak_equivalence
from .secat import SecatReport, SectionBudget, cat, diagonal, gsecat, tc, verify_certificate, weak_section_exists
from .serialize import dump_map, dump_sset, load_map, load_sset
from .sset import BudgetExceeded, Simplex, SimplicialMap, SimplicialSet
from .tower import GaneaTower, join

__all__ = [
    "INF", "CohomologyRing", "cup_length", "schwarz_bound", "zero_divisor_cup_length",
    "ex", "function_complex", "mapping_cylinder", "product", "pullback", "pushout", "subdivide", "vertex_inclusion",
    "CORPUS",
    "Cover", "cat_cover", "consistency_harness", "local_section_check", "secat_cover", "tc_cover",
    "pi1_presentation", "tietze_reduce",
    "homology", "induced_homology",
    "fibration_status", "horn_filler_report",
    "c_factorize", "f_factorize", "is_cofibration", "is_weak_equivalence",
    "SecatReport", "SectionBudget", "cat", "diagonal", "gsecat", "tc", "verify_certificate", "weak_section_exists",
    "dump_map", "dump_sset", "load_map", "load_sset",
    "BudgetExceeded", "Simplex", "SimplicialMap", "SimplicialSet",
    "GaneaTower", "join",
]
