import numpy as np
import pytest

import qwalk as qw


def random_graph(seed: int, n: int | None = None, p: float = 0.4,
                 n_min: int = 2, n_max: int = 10) -> qw.Graph:
    """Seeded random graph with a seeded random size unless n is given."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(n_min, n_max + 1))
    return qw.synth_prototype(n, p, seed + 10_000)


def merged_walk(g1: qw.Graph, g2: qw.Graph):
    """Merged graph, Laplacian spectrum, and the two starting states."""
    mg = qw.merge_graphs(g1, g2)
    spec = qw.eig_sym(qw.laplacian(mg.graph))
    minus, plus = qw.initial_states(mg)
    return mg, spec, minus, plus


def permuted_copy(g: qw.Graph, seed: int) -> qw.Graph:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(g.n)
    w = g.weights[np.ix_(perm, perm)]
    attrs = g.attributes[perm] if g.attributes is not None else None
    return qw.Graph(w, attributes=attrs, label=g.label)


@pytest.fixture
def k2() -> qw.Graph:
    return qw.Graph.from_edges(2, [(0, 1)])


@pytest.fixture
def p3() -> qw.Graph:
    return qw.Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def c3() -> qw.Graph:
    return qw.Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def c4() -> qw.Graph:
    return qw.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
