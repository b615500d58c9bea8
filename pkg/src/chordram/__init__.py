"""Ramsey numbers of cycles with chords: exhaustive search, extremal
colourings with certificates, and the desk-scale machinery of the
regularity-based upper bound."""

from .coloring import BLUE, RED, ColoredCompleteGraph, mono_copy
from .constants import ParameterSet, paper_constants
from .errors import (
    BudgetExceeded,
    CapacityError,
    CapExceeded,
    EmbeddingFailure,
    FloorError,
    InvalidInput,
    ParityError,
)
from .extremal import (
    certify_lower_bound,
    even_extremal_coloring,
    k_almost_extremal_coloring,
    lower_bound,
    odd_extremal_coloring,
)
from .formats import from_graph6, parse_graph_spec, to_graph6
from .graph import (
    ChordSet,
    SimpleGraph,
    VertexPartition,
    almost_bipartite_index,
    bipartition,
    build_chorded_cycle,
    cycle_graph,
    find_subgraph,
)
from .preparation import PreparedDecomposition, prepare_host
from .ramsey import arrows, ramsey_number, ramsey_search
from .regularity import (
    AnchoredPathSpec,
    ClusterChain,
    allocate_chunks,
    chain_path_embed,
    regularity_check,
)

__version__ = "0.1.0"
