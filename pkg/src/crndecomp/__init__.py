"""Decomposition analysis of chemical reaction networks."""
from .decomposition import (
    Decomposition,
    classify,
    coarsen,
    finest_independent_decomposition,
    linkage_decomposition,
    s_decomposition,
    subnetwork,
    verify_C_structure,
    verify_Cstar_structure,
)
from .exactla import RationalMatrix, kernel_basis, member, rank, sum_is_direct
from .kinetics import PowerLawKinetics, evaluate, find_cb_equilibria, verify_equilibria_theorems
from .model import (
    Complex,
    Network,
    ParseError,
    incidence_matrix,
    map_of_complexes,
    parse_network,
    stoichiometric_matrix,
    union,
)
from .ssystem import RealizationSpec, SSystemModel, coverability, realize, verify_species_decomposition_theorem
from .structure import analyze, linkage_classes, strong_and_terminal_classes

__version__ = "0.1.0"
