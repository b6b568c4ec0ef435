"""Spectral extremal graph theory toolkit.

Constructs the classical graph families of edge-extremal spectral theory,
computes spectral radii and Perron vectors, analyzes forbidden patterns
(chromatic data, independence structure, the induced-complement families
used to predict extremal shapes), exhaustively searches small edge counts
for spectral extremal graphs, and numerically verifies the associated
bounds and stability inequalities.
"""

from .graph_core import (
    Graph,
    GraphError,
    CanonicalKey,
    EXACT_CANON_CAP,
    from_edge_list,
    join,
    blow_up,
    disjoint_union,
    edit_distance_labeled,
    canonical_key,
    canonical_labeling,
    is_isomorphic,
    iso_hash,
    bipartition,
    complete_multipartite_parts,
    to_edge_list_text,
    from_edge_list_text,
    to_graph6,
    from_graph6,
)

__version__ = "0.1.0"
