# Decomposition-space engine
__version__ = "1.0.0"

from .axioms import check_decomposition, classify_map, convex_hull, full_hull, is_complete
from .crapo import build_context, check_crapo
from .incidence import certify_finiteness, check_inversion, convolve, epsilon, moebius, phi, zeta
from .nerve import Poset, nerve, nerve_category
from .sset import SimplicialMap, SubSSet, TruncatedSSet

__all__ = [
    "Poset",
    "SimplicialMap",
    "SubSSet",
    "TruncatedSSet",
    "build_context",
    "certify_finiteness",
    "check_crapo",
    "check_decomposition",
    "check_inversion",
    "classify_map",
    "convex_hull",
    "convolve",
    "epsilon",
    "full_hull",
    "is_complete",
    "moebius",
    "nerve",
    "nerve_category",
    "phi",
    "zeta",
]
