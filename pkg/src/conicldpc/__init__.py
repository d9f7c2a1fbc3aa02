"""Binary LDPC codes from tangency incidences of affine conics over F_q."""

__version__ = "0.1.0"

from .ffield import GF, field_new, supported_qs
from .geometry import Conic, Flag, Line, Point, enumerate_conics, flags_of, incident_conics, points_on, tangent_at
from .gf2 import BitMatrix, SparseBinaryMatrix, code_dimension, conjectured_dimension, nullspace_basis, rank_gf2
from .incidence import IncidenceStructure, build_structure, cached_structure, incidence_matrix, kappa
from .tanner import BipartiteGraph, count_6_cycles, count_8_cycles, find_c3_configurations, girth
from .codewords import (
    FlagWord,
    is_codeword,
    min_distance_exhaustive,
    min_distance_information_sets,
    min_weight_codeword,
    psi_involution,
)
from .decoder import ChannelPoint, GallagerSpec, SimulationResult, gallager_code, simulate_ber, sum_product_decode

__all__ = [
    "BipartiteGraph",
    "BitMatrix",
    "ChannelPoint",
    "Conic",
    "Flag",
    "FlagWord",
    "GF",
    "GallagerSpec",
    "IncidenceStructure",
    "Line",
    "Point",
    "SimulationResult",
    "SparseBinaryMatrix",
    "build_structure",
    "cached_structure",
    "code_dimension",
    "conjectured_dimension",
    "count_6_cycles",
    "count_8_cycles",
    "enumerate_conics",
    "field_new",
    "find_c3_configurations",
    "flags_of",
    "gallager_code",
    "girth",
    "incidence_matrix",
    "incident_conics",
    "is_codeword",
    "kappa",
    "min_distance_exhaustive",
    "min_distance_information_sets",
    "min_weight_codeword",
    "nullspace_basis",
    "points_on",
    "psi_involution",
    "rank_gf2",
    "simulate_ber",
    "sum_product_decode",
    "supported_qs",
    "tangent_at",
]
