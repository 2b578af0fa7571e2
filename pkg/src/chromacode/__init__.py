"""chromacode: sphere packing of proper q-colorings on spectral expanders.

Core objects: RegularGraph, Coloring, CodeSet, Spectrum, RegimePoint.
Submodules follow the pipeline: graphs -> spectral -> colorings -> codes ->
regimes, with a CLI on top.
"""

from .codes import CodeSet, distance_threshold, exact_max_packing, greedy_pack
from .colorings import Coloring, distance, enumerate_proper, is_proper
from .graphs import (
    RegularGraph,
    Signing,
    build_from_edges,
    complete_graph,
    cycle_graph,
    gadget_expand,
    random_regular_bipartite,
    tensor_power,
    two_lift,
)
from .regimes import (
    RegimePoint,
    bipartite_threshold,
    hoffman_bound,
    unique_regime_certificate,
)
from .spectral import Spectrum, full_spectrum, lambda2, lambda_min, rayleigh_quotient

__all__ = [
    "CodeSet",
    "Coloring",
    "RegimePoint",
    "RegularGraph",
    "Signing",
    "Spectrum",
    "bipartite_threshold",
    "build_from_edges",
    "complete_graph",
    "cycle_graph",
    "distance",
    "distance_threshold",
    "enumerate_proper",
    "exact_max_packing",
    "full_spectrum",
    "gadget_expand",
    "greedy_pack",
    "hoffman_bound",
    "is_proper",
    "lambda2",
    "lambda_min",
    "random_regular_bipartite",
    "rayleigh_quotient",
    "tensor_power",
    "two_lift",
    "unique_regime_certificate",
]

__version__ = "0.1.0"
