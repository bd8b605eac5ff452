"""Rigidity analysis of 2D bar-joint frameworks.

Sparsity and max-tight decompositions are decided combinatorially by a
pebble game; realization counts of tight graphs come from certified
homotopy continuation on pinned distance systems; realizations are
classified into irreducible components by per-part direct isometries
backed by monodromy; calligraph classes predict coupler-curve degree and
genus, and coupler curves can be traced to SVG.
"""

from .calligraphs import (CalligraphClass, CouplerPrediction, CouplerTrace,
                          class_of, coupler_degree_numeric,
                          coupler_multiplicity, coupler_prediction,
                          coupler_trace, is_calligraph, is_thin, pair,
                          prediction_from_class)
from .components import (ComponentLabel, ComponentReport, SameComponentResult,
                         class_sizes, classify_witnesses, component_number,
                         equal_degree_check, monodromy_orbits, same_component)
from .graphs import (EdgeLengths, Graph, Realization, ValidationError,
                     catalog, catalog_names, edge_key, induced_subgraph,
                     make_graph, make_realization, parse_graph, parse_lengths,
                     sample_lengths, serialize_graph, serialize_lengths)
from .homotopy import TrackingError
from .isometry import Transformation, fit_direct_isometry
from .solver import (CertificationError, CountReport, SolutionSet,
                     count_bound, count_realizations, count_report,
                     witness_points)
from .sparsity import (HennebergSequence, TightDecomposition,
                       henneberg_sequence, is_sparse, is_tight,
                       max_tight_decomposition, replay_henneberg)
from .svgout import curve_plot

__version__ = "0.1.0"

__all__ = [
    "CalligraphClass", "CertificationError", "ComponentLabel",
    "ComponentReport", "CountReport", "CouplerPrediction", "CouplerTrace",
    "EdgeLengths", "Graph", "HennebergSequence", "Realization",
    "SameComponentResult", "SolutionSet", "TightDecomposition",
    "TrackingError", "Transformation", "ValidationError",
    "catalog", "catalog_names", "class_of", "class_sizes",
    "classify_witnesses", "component_number", "count_bound",
    "count_realizations", "count_report", "coupler_degree_numeric",
    "coupler_multiplicity", "coupler_prediction", "coupler_trace",
    "curve_plot", "edge_key", "equal_degree_check", "fit_direct_isometry",
    "henneberg_sequence", "induced_subgraph", "is_calligraph", "is_sparse",
    "is_thin", "is_tight", "make_graph", "make_realization",
    "max_tight_decomposition", "monodromy_orbits", "pair", "parse_graph",
    "parse_lengths", "prediction_from_class", "replay_henneberg",
    "same_component", "sample_lengths", "serialize_graph",
    "serialize_lengths", "witness_points", "__version__",
]
