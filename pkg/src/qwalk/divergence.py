"""Von Neumann entropy and Jensen-Shannon divergence between graphs.

The divergence between two graphs is obtained by merging them, running
two degree-seeded walks on the merged structure, time-averaging the
resulting density operators, and measuring how far the mixture entropy
exceeds the mean of the individual entropies. Logarithms are base 2, so
the divergence is bounded by [0, 1] and reaches 1 exactly when the two
averaged operators have orthogonal supports.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import INFINITE, Hamiltonian, PairTopology, RunConfig, horizon_token
from .errors import DomainError, ParameterError, ShapeError
from .graph import Graph, MergePolicy, laplacian, merge_graphs
from .spectral import Spectrum, eig_sym
from .walk import (
    DensityMatrix,
    WalkState,
    avg_density_finite,
    avg_density_infinite,
    initial_states,
)

#: Eigenvalues inside [-ENTROPY_CLIP, ENTROPY_CLIP] contribute nothing
#: (0 log 0 := 0); anything below EIGENVALUE_FLOOR is a real violation.
ENTROPY_CLIP = 1e-12
EIGENVALUE_FLOOR = -1e-9

VALUE_BAND = 1e-9
CONSISTENCY_TOL = 1e-10


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Eigenvalue Shannon entropy of a density matrix, in bits.

    Raises DomainError when an eigenvalue falls below -1e-9, since that
    means the input is not a valid (positive semidefinite) mixture.
    """
    eigenvalues = np.linalg.eigvalsh(rho.entries)
    if eigenvalues.size and float(eigenvalues[0]) < EIGENVALUE_FLOOR:
        raise DomainError(f"density matrix has eigenvalue {eigenvalues[0]!r} "
                          f"below {EIGENVALUE_FLOOR}")
    positive = eigenvalues[eigenvalues > ENTROPY_CLIP]
    entropy = float(-(positive * np.log2(positive)).sum()) if positive.size else 0.0
    return max(entropy, 0.0)


@dataclass(frozen=True)
class DivergenceReport:
    """Divergence value together with the three entropies behind it."""

    value: float
    entropy_mixture: float
    entropy_rho: float
    entropy_sigma: float
    time_horizon: float

    def __post_init__(self):
        combined = (self.entropy_mixture - 0.5 * self.entropy_rho
                    - 0.5 * self.entropy_sigma)
        if abs(self.value - combined) > CONSISTENCY_TOL:
            raise DomainError("divergence value inconsistent with its entropies")
        if not -VALUE_BAND <= self.value <= 1.0 + VALUE_BAND:
            raise DomainError(f"divergence value {self.value!r} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "entropy_mixture": float(self.entropy_mixture),
            "entropy_rho": float(self.entropy_rho),
            "entropy_sigma": float(self.entropy_sigma),
            "time_horizon": horizon_token(self.time_horizon),
        }


def qjsd(rho: DensityMatrix, sigma: DensityMatrix,
         time_horizon: float = INFINITE) -> DivergenceReport:
    """Jensen-Shannon divergence between two density matrices.

    Symmetric in its arguments and bounded by [0, 1] thanks to base-2
    logarithms. ``time_horizon`` is recorded in the report unchanged.
    """
    if rho.n != sigma.n:
        raise ShapeError(f"density matrices have different sizes: "
                         f"{rho.n} vs {sigma.n}")
    mixture = DensityMatrix((rho.entries + sigma.entries) / 2.0)
    h_mix = von_neumann_entropy(mixture)
    h_rho = von_neumann_entropy(rho)
    h_sigma = von_neumann_entropy(sigma)
    return DivergenceReport(
        value=h_mix - 0.5 * h_rho - 0.5 * h_sigma,
        entropy_mixture=h_mix,
        entropy_rho=h_rho,
        entropy_sigma=h_sigma,
        time_horizon=time_horizon,
    )


def _hamiltonian_matrix(mg_graph: Graph, config: RunConfig) -> np.ndarray:
    if config.hamiltonian is Hamiltonian.ADJACENCY:
        return mg_graph.weights
    return laplacian(mg_graph)


def _averaged(spec: Spectrum, psi0: WalkState, horizon: float) -> DensityMatrix:
    if math.isinf(horizon):
        return avg_density_infinite(spec, psi0)
    return avg_density_finite(spec, psi0, horizon)


def graph_density_pair(g1: Graph, g2: Graph, horizon: float = INFINITE,
                       config: RunConfig | None = None
                       ) -> tuple[DensityMatrix, DensityMatrix]:
    """Time-averaged density operators of the two walks on the merged graph.

    The first operator comes from the sign-flipped starting state, the
    second from the all-positive one.
    """
    if config is None:
        config = RunConfig()
    if g1.n == 0 or g2.n == 0:
        raise DomainError("graph divergence requires nonempty graphs")
    if not horizon > 0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    mg = merge_graphs(g1, g2, MergePolicy.full(sigma=config.sigma))
    spec = eig_sym(_hamiltonian_matrix(mg.graph, config))
    minus, plus = initial_states(mg)
    return _averaged(spec, minus, horizon), _averaged(spec, plus, horizon)


def graph_qjsd(g1: Graph, g2: Graph, horizon: float = INFINITE,
               config: RunConfig | None = None) -> DivergenceReport:
    """Divergence between two graphs via walks on their merged union.

    Equals 1 (up to numerics) for isomorphic graphs at the infinite
    horizon: the merged structure then has a swap symmetry under which
    one walk is even and the other odd, so the averaged operators have
    orthogonal supports.
    """
    rho, sigma = graph_density_pair(g1, g2, horizon, config)
    return qjsd(rho, sigma, time_horizon=horizon)


def _pair_value_single(g1: Graph, g2: Graph, u: int, v: int, horizon: float,
                       config: RunConfig) -> float:
    mg = merge_graphs(g1, g2, MergePolicy.single(u, v, sigma=config.sigma))
    spec = eig_sym(_hamiltonian_matrix(mg.graph, config))
    minus, plus = initial_states(mg)
    rho = _averaged(spec, minus, horizon)
    sigma = _averaged(spec, plus, horizon)
    return qjsd(rho, sigma, time_horizon=horizon).value


def _localized_state(n: int, node: int) -> WalkState:
    amplitudes = np.zeros(n, dtype=complex)
    amplitudes[node] = 1.0
    return WalkState(amplitudes)


def node_pair_qjsd(g1: Graph, g2: Graph, horizon: float = INFINITE,
                   config: RunConfig | None = None,
                   workers: int | None = None) -> np.ndarray:
    """Divergence score for every (node of g1, node of g2) pair.

    With the default SINGLE topology, entry (u, v) is the whole-graph
    divergence computed on a merge that connects only u to v, which is
    what the per-pair tables of the matching stage use. The alternative
    FULL topology merges once with all inter-edges and compares the
    time-averaged walks started at u and at v instead.

    ``workers`` > 1 evaluates cells in a thread pool; the assembled
    matrix is identical to the serial result.
    """
    if config is None:
        config = RunConfig()
    if g1.n == 0 or g2.n == 0:
        raise DomainError("node-pair divergence requires nonempty graphs")
    if not horizon > 0:
        raise ParameterError(f"horizon must be positive, got {horizon}")
    n1, n2 = g1.n, g2.n
    cells = [(u, v) for u in range(n1) for v in range(n2)]

    if config.pair_topology is PairTopology.FULL:
        mg = merge_graphs(g1, g2, MergePolicy.full(sigma=config.sigma))
        spec = eig_sym(_hamiltonian_matrix(mg.graph, config))

        def compute(cell: tuple[int, int]) -> float:
            u, v = cell
            rho = _averaged(spec, _localized_state(mg.graph.n, u), horizon)
            sig = _averaged(spec, _localized_state(mg.graph.n, n1 + v), horizon)
            return qjsd(rho, sig, time_horizon=horizon).value
    else:
        def compute(cell: tuple[int, int]) -> float:
            u, v = cell
            return _pair_value_single(g1, g2, u, v, horizon, config)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(compute, cells))
    else:
        values = [compute(cell) for cell in cells]
    return np.array(values).reshape(n1, n2)
