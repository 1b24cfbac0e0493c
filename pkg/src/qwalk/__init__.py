"""Graph similarity from continuous-time quantum walks.

Two graphs are merged into one structure, two degree-seeded walks evolve
on it, and the Jensen-Shannon divergence of their time-averaged density
operators scores the pair. On top of that sit per-node-pair scores, an
optimal assignment via the Hungarian algorithm, and a nearest-neighbor
classifier over a cheap edge-XOR distance.
"""

from .config import (
    INFINITE,
    CostTransform,
    Hamiltonian,
    OutputFormat,
    PairTopology,
    RunConfig,
    split_seed,
)
from .classify import (
    Dataset,
    EvaluationReport,
    edge_hamming,
    evaluate,
    knn_classify,
    load_dataset,
    xor_distance,
)
from .divergence import (
    DivergenceReport,
    graph_density_pair,
    graph_qjsd,
    node_pair_qjsd,
    qjsd,
    von_neumann_entropy,
)
from .errors import (
    AttributeMismatchError,
    DomainError,
    FormatError,
    NumericalError,
    ParameterError,
    QwalkError,
    ShapeError,
)
from .graph import (
    Graph,
    MergedGraph,
    MergePolicy,
    degree_vector,
    inter_edge_weight,
    laplacian,
    load_attributes,
    load_graph,
    merge_graphs,
    perturb,
    save_graph,
    synth_prototype,
)
from .matching import Assignment, hungarian, optimal_node_matching
from .spectral import Spectrum, eig_sym, group_degenerate
from .walk import (
    DensityMatrix,
    WalkState,
    avg_density_finite,
    avg_density_infinite,
    avg_density_quadrature,
    evolve,
    initial_states,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AttributeMismatchError",
    "CostTransform",
    "Dataset",
    "DensityMatrix",
    "DivergenceReport",
    "DomainError",
    "EvaluationReport",
    "FormatError",
    "Graph",
    "Hamiltonian",
    "INFINITE",
    "MergePolicy",
    "MergedGraph",
    "NumericalError",
    "OutputFormat",
    "PairTopology",
    "ParameterError",
    "QwalkError",
    "RunConfig",
    "ShapeError",
    "Spectrum",
    "WalkState",
    "avg_density_finite",
    "avg_density_infinite",
    "avg_density_quadrature",
    "degree_vector",
    "edge_hamming",
    "eig_sym",
    "evaluate",
    "evolve",
    "graph_density_pair",
    "graph_qjsd",
    "group_degenerate",
    "hungarian",
    "initial_states",
    "inter_edge_weight",
    "knn_classify",
    "laplacian",
    "load_attributes",
    "load_dataset",
    "load_graph",
    "merge_graphs",
    "node_pair_qjsd",
    "optimal_node_matching",
    "perturb",
    "qjsd",
    "save_graph",
    "split_seed",
    "synth_prototype",
    "von_neumann_entropy",
    "xor_distance",
]
