import numpy as np
import pytest

import qwalk as qw
from qwalk.config import INFINITE
from qwalk.errors import DomainError, ShapeError

from conftest import merged_walk, permuted_copy, random_graph


def _pure(amplitudes) -> qw.DensityMatrix:
    a = np.asarray(amplitudes, dtype=complex)
    a = a / np.linalg.norm(a)
    return qw.DensityMatrix(np.outer(a, a.conj()))


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------

def test_entropy_of_pure_state_is_zero():
    assert qw.von_neumann_entropy(_pure([0.6, 0.8j, 0.0])) == 0.0


def test_entropy_of_maximally_mixed():
    rho = qw.DensityMatrix(np.eye(4, dtype=complex) / 4.0)
    assert qw.von_neumann_entropy(rho) == pytest.approx(2.0, abs=1e-12)


def test_entropy_three_quarters_split():
    rho = qw.DensityMatrix(np.diag([0.75, 0.25]).astype(complex))
    assert qw.von_neumann_entropy(rho) == pytest.approx(0.8112781244591328,
                                                        abs=1e-12)


def test_entropy_rejects_indefinite_matrix():
    rho = qw.DensityMatrix(np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises(DomainError):
        qw.von_neumann_entropy(rho)


# ---------------------------------------------------------------------------
# Operator-level divergence
# ---------------------------------------------------------------------------

def test_qjsd_self_divergence_is_zero():
    rho = _pure([1.0, 1.0, 0.0])
    assert qw.qjsd(rho, rho).value <= 1e-10


def test_qjsd_orthogonal_pure_states_is_one():
    report = qw.qjsd(_pure([1.0, 0.0]), _pure([0.0, 1.0]))
    assert report.value == pytest.approx(1.0, abs=1e-10)


def test_qjsd_pure_against_maximally_mixed():
    rho = qw.DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    sigma = qw.DensityMatrix(np.eye(2, dtype=complex) / 2.0)
    report = qw.qjsd(rho, sigma)
    # mixture diag(3/4, 1/4): H = 0.811278..., minus 0 and half a bit
    assert report.value == pytest.approx(0.3112781244591328, abs=1e-12)


def test_qjsd_is_symmetric():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = _pure(rng.normal(size=4))
        m = rng.normal(size=(4, 4))
        sym = m @ m.T
        b = qw.DensityMatrix((sym / np.trace(sym)).astype(complex))
        assert abs(qw.qjsd(a, b).value - qw.qjsd(b, a).value) <= 1e-12


def test_qjsd_report_is_consistent():
    report = qw.qjsd(_pure([1.0, 0.0]), _pure([1.0, 1.0]))
    combined = (report.entropy_mixture - 0.5 * report.entropy_rho
                - 0.5 * report.entropy_sigma)
    assert abs(report.value - combined) <= 1e-10
    assert -1e-9 <= report.value <= 1.0 + 1e-9


def test_qjsd_dimension_mismatch():
    with pytest.raises(ShapeError):
        qw.qjsd(_pure([1.0, 0.0]), _pure([1.0, 0.0, 0.0]))


# ---------------------------------------------------------------------------
# Graph-level divergence
# ---------------------------------------------------------------------------

def test_graph_qjsd_identical_graphs_is_one(c4):
    assert qw.graph_qjsd(c4, c4).value == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_graph_qjsd_isomorphic_copy_is_one(seed):
    g = random_graph(seed, p=0.4, n_min=3)
    assert qw.graph_qjsd(g, permuted_copy(g, seed)).value == pytest.approx(
        1.0, abs=1e-6)


@pytest.mark.parametrize("seed", range(15))
def test_graph_qjsd_bounded(seed):
    g1 = random_graph(seed, p=0.5)
    g2 = random_graph(seed + 100, p=0.3)
    horizon = INFINITE if seed % 3 else 5.0
    value = qw.graph_qjsd(g1, g2, horizon).value
    assert -1e-9 <= value <= 1.0 + 1e-9


@pytest.mark.parametrize("seed", range(8))
def test_graph_qjsd_argument_order_is_irrelevant(seed):
    g1 = random_graph(seed, p=0.5)
    g2 = random_graph(seed + 200, p=0.5)
    assert qw.graph_qjsd(g1, g2).value == pytest.approx(
        qw.graph_qjsd(g2, g1).value, abs=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_graph_qjsd_invariant_under_relabeling(seed):
    g1 = random_graph(seed, p=0.5, n_min=3)
    g2 = random_graph(seed + 300, p=0.5)
    base = qw.graph_qjsd(g1, g2).value
    relabeled = qw.graph_qjsd(permuted_copy(g1, seed + 1), g2).value
    assert base == pytest.approx(relabeled, abs=1e-9)


def test_graph_qjsd_rejects_empty_graph(k2):
    with pytest.raises(DomainError):
        qw.graph_qjsd(qw.Graph(np.zeros((0, 0))), k2)


def test_graph_qjsd_finite_horizon_report_carries_time(k2, c3):
    report = qw.graph_qjsd(k2, c3, 2.5)
    assert report.time_horizon == 2.5
    assert report.to_dict()["time_horizon"] == 2.5
    assert qw.graph_qjsd(k2, c3).to_dict()["time_horizon"] == "infinite"


def test_graph_qjsd_adjacency_hamiltonian(k2, c3):
    config = qw.RunConfig(hamiltonian=qw.Hamiltonian.ADJACENCY)
    value = qw.graph_qjsd(k2, c3, INFINITE, config).value
    assert -1e-9 <= value <= 1.0 + 1e-9


def test_graph_density_pair_invariants(p3, c3):
    rho, sigma = qw.graph_density_pair(p3, c3, 4.0)
    for op in (rho, sigma):
        assert abs(np.trace(op.entries) - 1.0) <= 1e-9
        assert float(np.linalg.eigvalsh(op.entries)[0]) >= -1e-9


# ---------------------------------------------------------------------------
# Node-pair divergence
# ---------------------------------------------------------------------------

def test_node_pair_k2_k2_all_equal(k2):
    table = qw.node_pair_qjsd(k2, k2)
    assert table.shape == (2, 2)
    assert np.max(np.abs(table - table[0, 0])) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_node_pair_entries_bounded(seed):
    g1 = random_graph(seed, n_max=5)
    g2 = random_graph(seed + 400, n_max=5)
    table = qw.node_pair_qjsd(g1, g2, 3.0)
    assert np.all(table >= -1e-9) and np.all(table <= 1.0 + 1e-9)


def test_node_pair_p3_pair_matches_quadrature_pipeline(p3):
    # rebuild selected cells with the trapezoid oracle instead of the
    # closed form and compare end to end
    horizon = 10.0
    table = qw.node_pair_qjsd(p3, p3, horizon)
    for u, v in ((1, 1), (0, 0)):
        mg = qw.merge_graphs(p3, p3, qw.MergePolicy.single(u, v))
        spec = qw.eig_sym(qw.laplacian(mg.graph))
        minus, plus = qw.initial_states(mg)
        rho = qw.avg_density_quadrature(spec, minus, horizon, 1e-3)
        sigma = qw.avg_density_quadrature(spec, plus, horizon, 1e-3)
        oracle = qw.qjsd(rho, sigma).value
        assert table[u, v] == pytest.approx(oracle, abs=1e-6)


def test_node_pair_parallel_matches_serial(p3, c3):
    serial = qw.node_pair_qjsd(p3, c3, 2.0)
    threaded = qw.node_pair_qjsd(p3, c3, 2.0, workers=4)
    assert np.array_equal(serial, threaded)


def test_node_pair_full_topology_switch(p3, c3):
    config = qw.RunConfig(pair_topology=qw.PairTopology.FULL)
    table = qw.node_pair_qjsd(p3, c3, 5.0, config)
    assert table.shape == (3, 3)
    assert np.all(table >= -1e-9) and np.all(table <= 1.0 + 1e-9)
    again = qw.node_pair_qjsd(p3, c3, 5.0, config)
    assert np.array_equal(table, again)


# ---------------------------------------------------------------------------
# Noise trend
# ---------------------------------------------------------------------------

def test_noise_degrades_divergence_on_average():
    g = qw.synth_prototype(12, 0.35, 3)
    seeds = qw.split_seed(17, 3 * 12)
    means = []
    for k in (0, 1, 3):
        values = [qw.graph_qjsd(g, qw.perturb(g, k, s)).value
                  for s in seeds[:12]]
        means.append(float(np.mean(values)))
        seeds = seeds[12:]
    assert means[0] == pytest.approx(1.0, abs=1e-6)
    assert means[0] >= means[1] >= means[2]
