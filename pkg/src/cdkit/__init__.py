"""Chermak-Delgado lattices of finite groups: construction, enumeration, checks."""

from .cd import CDReport, cd_report, measure
from .errors import CapExceeded, CDKitError, InvalidParameters, NotAGroup, ParseError
from .groups import Group, Permutation, group_from_cayley_table, group_from_generators
from .lattice import SubgroupLattice, all_subgroups

__version__ = "0.1.0"

__all__ = [
    "CDKitError", "CDReport", "CapExceeded", "Group", "InvalidParameters", "NotAGroup", "ParseError",
    "Permutation", "SubgroupLattice", "all_subgroups", "cd_report", "group_from_cayley_table",
    "group_from_generators", "measure",
]
