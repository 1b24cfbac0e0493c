"""Weighted undirected graphs: construction, merging, perturbation, and I/O.

Graphs are dense and small by design; weights live in a symmetric numpy
matrix with a zero diagonal. All functions here are pure and every value
type is immutable after construction, so instances can be shared freely
across threads.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    AttributeMismatchError,
    DomainError,
    FormatError,
    ParameterError,
)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph with nonnegative edge weights.

    ``weights`` is a symmetric n-by-n float matrix whose diagonal is zero.
    ``attributes``, when given, holds one real feature vector per node as
    an (n, d) array. ``label`` is an optional class identifier used by the
    classification layer.
    """

    weights: np.ndarray
    attributes: np.ndarray | None = None
    label: str | None = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DomainError(f"weight matrix must be square, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise DomainError("edge weights must be finite")
        if not np.array_equal(w, w.T):
            raise DomainError("weight matrix must be symmetric")
        if w.size and np.any(np.diag(w) != 0.0):
            raise DomainError("self-loops are not allowed (nonzero diagonal)")
        if w.size and np.any(w < 0.0):
            raise DomainError("edge weights must be nonnegative")
        object.__setattr__(self, "weights", _freeze(w))
        if self.attributes is not None:
            a = np.array(self.attributes, dtype=float)
            if a.ndim != 2 or a.shape[0] != w.shape[0]:
                raise AttributeMismatchError(
                    f"attributes must be ({w.shape[0]}, d), got shape {a.shape}")
            object.__setattr__(self, "attributes", _freeze(a))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if not np.array_equal(self.weights, other.weights):
            return False
        if (self.attributes is None) != (other.attributes is None):
            return False
        if self.attributes is not None and not np.array_equal(
                self.attributes, other.attributes):
            return False
        return self.label == other.label

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], *,
                   attributes=None, label: str | None = None) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples."""
        w = np.zeros((n, n))
        for edge in edges:
            u, v = edge[0], edge[1]
            weight = float(edge[2]) if len(edge) > 2 else 1.0
            w[u, v] = w[v, u] = weight
        return cls(w, attributes=attributes, label=label)


@dataclass(frozen=True, eq=False)
class MergedGraph:
    """Union of two graphs joined by inter-graph edges.

    Nodes ``0..n_left-1`` come from the first input graph and
    ``n_left..n_left+n_right-1`` from the second; the index maps are
    exposed as ``left_indices`` / ``right_indices``. ``inter_edges`` lists
    ``(u, v, weight)`` with ``u`` a left index and ``v`` a right index.
    """

    graph: Graph
    n_left: int
    n_right: int
    inter_edges: tuple[tuple[int, int, float], ...]

    @property
    def left_indices(self) -> range:
        return range(self.n_left)

    @property
    def right_indices(self) -> range:
        return range(self.n_left, self.n_left + self.n_right)


@dataclass(frozen=True)
class MergePolicy:
    """Which inter-graph edges to add and how to weight them.

    ``use_attributes=None`` means: weight edges with the Gaussian
    attribute kernel when both graphs carry attributes, otherwise use
    constant weight 1. Forcing ``use_attributes=True`` on unattributed
    input is an error.
    """

    kind: str = "full"
    u: int | None = None
    v: int | None = None
    sigma: float = 1.0
    use_attributes: bool | None = None

    @staticmethod
    def full(sigma: float = 1.0, use_attributes: bool | None = None) -> "MergePolicy":
        return MergePolicy("full", sigma=sigma, use_attributes=use_attributes)

    @staticmethod
    def single(u: int, v: int, sigma: float = 1.0,
               use_attributes: bool | None = None) -> "MergePolicy":
        """Connect only node ``u`` of the first graph to node ``v`` of the second."""
        return MergePolicy("single", u=u, v=v, sigma=sigma,
                           use_attributes=use_attributes)


def degree_vector(g: Graph) -> np.ndarray:
    """Weighted degree of every node (row sums of the weight matrix)."""
    return g.weights.sum(axis=1)


def laplacian(g: Graph) -> np.ndarray:
    """Degree matrix minus weight matrix; symmetric positive semidefinite."""
    return np.diag(degree_vector(g)) - g.weights


def inter_edge_weight(a_u, a_v, sigma: float = 1.0) -> float:
    """Gaussian similarity exp(-|a_u - a_v|^2 / (2 sigma^2)) in (0, 1].

    Equals 1 exactly when the two attribute vectors coincide and decays to
    0 as they separate.
    """
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    a_u = np.asarray(a_u, dtype=float).ravel()
    a_v = np.asarray(a_v, dtype=float).ravel()
    if a_u.shape != a_v.shape:
        raise AttributeMismatchError(
            f"attribute dimensions differ: {a_u.shape[0]} vs {a_v.shape[0]}")
    delta = a_u - a_v
    return float(np.exp(-delta.dot(delta) / (2.0 * sigma * sigma)))


def _resolve_attribute_use(g1: Graph, g2: Graph, policy: MergePolicy) -> bool:
    both = g1.attributes is not None and g2.attributes is not None
    if policy.use_attributes is None:
        use = both
    else:
        use = policy.use_attributes
    if use:
        if not both:
            raise AttributeMismatchError(
                "attribute-kernel weighting requires attributes on both graphs")
        if g1.attributes.shape[1] != g2.attributes.shape[1]:
            raise AttributeMismatchError(
                f"attribute dimensions differ: {g1.attributes.shape[1]} vs "
                f"{g2.attributes.shape[1]}")
    return use


def merge_graphs(g1: Graph, g2: Graph, policy: MergePolicy | None = None) -> MergedGraph:
    """Join two graphs into one by adding inter-graph edges.

    Intra-graph weights are copied unchanged. The policy decides which
    (left, right) pairs get an edge, and each such edge is weighted by the
    Gaussian attribute kernel or by the constant 1 (see MergePolicy).
    """
    if policy is None:
        policy = MergePolicy.full()
    n1, n2 = g1.n, g2.n
    use_attrs = _resolve_attribute_use(g1, g2, policy)

    if policy.kind == "full":
        pairs = [(u, v) for u in range(n1) for v in range(n2)]
    elif policy.kind == "single":
        u, v = policy.u, policy.v
        if u is None or v is None or not (0 <= u < n1) or not (0 <= v < n2):
            raise IndexError(f"single inter-edge ({u}, {v}) out of range "
                             f"for sizes ({n1}, {n2})")
        pairs = [(u, v)]
    else:
        raise ParameterError(f"unknown merge policy kind {policy.kind!r}")

    w = np.zeros((n1 + n2, n1 + n2))
    w[:n1, :n1] = g1.weights
    w[n1:, n1:] = g2.weights
    inter = []
    for u, v in pairs:
        if use_attrs:
            weight = inter_edge_weight(g1.attributes[u], g2.attributes[v],
                                       policy.sigma)
        else:
            weight = 1.0
        w[u, n1 + v] = w[n1 + v, u] = weight
        inter.append((u, n1 + v, weight))

    attributes = None
    if (g1.attributes is not None and g2.attributes is not None
            and g1.attributes.shape[1] == g2.attributes.shape[1]):
        attributes = np.vstack([g1.attributes, g2.attributes])
    merged = Graph(w, attributes=attributes)
    return MergedGraph(graph=merged, n_left=n1, n_right=n2,
                       inter_edges=tuple(inter))


def perturb(g: Graph, k: int, seed: int) -> Graph:
    """Flip exactly ``k`` distinct node pairs of ``g``, seeded.

    A flip deletes the edge if one is present and otherwise inserts an
    edge of weight 1. Pairs are drawn uniformly without replacement, so
    the result differs from ``g`` in exactly ``k`` upper-triangle entries.
    """
    if k < 0:
        raise ParameterError(f"flip count must be nonnegative, got {k}")
    n = g.n
    n_pairs = n * (n - 1) // 2
    if k > n_pairs:
        raise ParameterError(
            f"cannot flip {k} pairs in a graph with only {n_pairs} node pairs")
    w = g.weights.copy()
    if k > 0:
        rng = np.random.default_rng(seed)
        iu, ju = np.triu_indices(n, 1)
        for idx in rng.choice(n_pairs, size=k, replace=False):
            i, j = int(iu[idx]), int(ju[idx])
            value = 0.0 if w[i, j] > 0 else 1.0
            w[i, j] = w[j, i] = value
    return Graph(w, attributes=g.attributes, label=g.label)


def synth_prototype(n: int, p: float, seed: int, label: str | None = None) -> Graph:
    """Seeded Erdos-Renyi style graph: each pair gets a unit edge with probability p."""
    if n < 1:
        raise ParameterError(f"node count must be at least 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    iu, ju = np.triu_indices(n, 1)
    mask = rng.random(iu.shape[0]) < p
    w[iu[mask], ju[mask]] = 1.0
    w[ju[mask], iu[mask]] = 1.0
    return Graph(w, label=label)


# ---------------------------------------------------------------------------
# File ingestion / serialization
# ---------------------------------------------------------------------------

FORMATS = ("edgelist", "matrix")


def _source_lines(source) -> tuple[str, list[tuple[int, str]]]:
    """Return (name, [(lineno, stripped line), ...]) skipping blanks and comments."""
    if isinstance(source, (str, Path)):
        name = str(source)
        with open(source, "r", encoding="utf-8") as fh:
            raw = fh.read()
    else:
        name = getattr(source, "name", "<stream>")
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
    lines = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((lineno, stripped))
    return name, lines


def _parse_edgelist(name: str, lines: list[tuple[int, str]]) -> Graph:
    if not lines:
        raise FormatError("missing node-count header line", source=name)
    lineno, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise FormatError(f"expected integer node count, got {header!r}",
                          source=name, line=lineno) from None
    if n < 0:
        raise FormatError(f"node count must be nonnegative, got {n}",
                          source=name, line=lineno)
    w = np.zeros((n, n))
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise FormatError(f"expected 'u v [w]', got {line!r}",
                              source=name, line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            weight = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise FormatError(f"could not parse edge row {line!r}",
                              source=name, line=lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"node index out of range in {line!r}",
                              source=name, line=lineno)
        if u == v:
            raise FormatError(f"self-loop on node {u} is not allowed",
                              source=name, line=lineno)
        if not np.isfinite(weight) or weight < 0:
            raise FormatError(f"edge weight must be finite and nonnegative, "
                              f"got {parts[2] if len(parts) == 3 else weight}",
                              source=name, line=lineno)
        w[u, v] = w[v, u] = weight
    return Graph(w)


def _parse_matrix(name: str, lines: list[tuple[int, str]]) -> Graph:
    rows = []
    n = len(lines)
    for lineno, line in lines:
        tokens = [t.strip() for t in line.split(",")]
        try:
            row = [float(t) for t in tokens]
        except ValueError:
            raise FormatError(f"could not parse matrix row {line!r}",
                              source=name, line=lineno) from None
        if len(row) != n:
            raise FormatError(f"matrix row has {len(row)} entries, expected {n}",
                              source=name, line=lineno)
        rows.append((lineno, row))
    w = np.array([r for _, r in rows]) if rows else np.zeros((0, 0))
    for i, (lineno, _) in enumerate(rows):
        if w[i, i] != 0.0:
            raise FormatError(f"self-loop: diagonal entry ({i},{i}) is nonzero",
                              source=name, line=lineno)
        bad = np.where(~np.isfinite(w[i]) | (w[i] < 0))[0]
        if bad.size:
            raise FormatError(f"negative or non-finite weight in column {bad[0]}",
                              source=name, line=lineno)
    if w.size and not np.array_equal(w, w.T):
        i, j = np.argwhere(w != w.T)[0]
        raise FormatError(f"matrix is not symmetric: entry ({i},{j}) = {w[i, j]} "
                          f"but ({j},{i}) = {w[j, i]}", source=name,
                          line=rows[i][0])
    return Graph(w)


def load_graph(source, fmt: str = "edgelist") -> Graph:
    """Parse a graph from a file path or text stream.

    ``fmt`` selects the layout: "edgelist" (node-count header, then
    "u v [w]" rows, '#' comments allowed, each undirected edge listed
    once) or "matrix" (comma-separated square weight matrix).
    """
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise ParameterError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")
    name, lines = _source_lines(source)
    if fmt == "edgelist":
        return _parse_edgelist(name, lines)
    return _parse_matrix(name, lines)


def load_attributes(source, n: int) -> np.ndarray:
    """Parse a node-attribute sidecar: one "u a1 a2 ... ad" row per node."""
    name, lines = _source_lines(source)
    vectors: dict[int, list[float]] = {}
    dim = None
    for lineno, line in lines:
        parts = line.split()
        if len(parts) < 2:
            raise FormatError(f"expected 'u a1 ... ad', got {line!r}",
                              source=name, line=lineno)
        try:
            u = int(parts[0])
            vec = [float(t) for t in parts[1:]]
        except ValueError:
            raise FormatError(f"could not parse attribute row {line!r}",
                              source=name, line=lineno) from None
        if not 0 <= u < n:
            raise FormatError(f"node index {u} out of range", source=name,
                              line=lineno)
        if u in vectors:
            raise FormatError(f"duplicate attribute row for node {u}",
                              source=name, line=lineno)
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise FormatError(f"attribute dimension {len(vec)} differs from "
                              f"earlier rows ({dim})", source=name, line=lineno)
        vectors[u] = vec
    missing = [u for u in range(n) if u not in vectors]
    if missing:
        raise FormatError(f"missing attribute rows for nodes {missing}",
                          source=name)
    return np.array([vectors[u] for u in range(n)])


def save_graph(g: Graph, path) -> None:
    """Write ``g`` in edge-list format, deterministically."""
    out = io.StringIO()
    out.write(f"{g.n}\n")
    iu, ju = np.triu_indices(g.n, 1)
    for i, j in zip(iu, ju):
        w = g.weights[i, j]
        if w > 0:
            out.write(f"{i} {j} {w:.12g}\n")
    Path(path).write_text(out.getvalue(), encoding="utf-8")
