import numpy as np
import pytest

import qwalk as qw
from qwalk.errors import DomainError, ParameterError, ShapeError

from conftest import merged_walk, random_graph


def _flip_columns(spec: qw.Spectrum, columns) -> qw.Spectrum:
    phi = spec.eigenvectors.copy()
    phi[:, columns] *= -1.0
    return qw.Spectrum(eigenvalues=spec.eigenvalues, eigenvectors=phi,
                       groups=spec.groups)


# ---------------------------------------------------------------------------
# Initial states
# ---------------------------------------------------------------------------

def test_initial_states_merged_k2_pair(k2):
    # merged degrees are all 3, so C = sqrt(4 * 9) = 6
    mg = qw.merge_graphs(k2, k2)
    minus, plus = qw.initial_states(mg)
    assert np.allclose(plus.amplitudes, [0.5, 0.5, 0.5, 0.5], atol=1e-12)
    assert np.allclose(minus.amplitudes, [0.5, 0.5, -0.5, -0.5], atol=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_initial_states_are_unit_norm(seed):
    _, _, minus, plus = merged_walk(random_graph(seed), random_graph(seed + 30))
    assert abs(np.linalg.norm(minus.amplitudes) - 1.0) <= 1e-12
    assert abs(np.linalg.norm(plus.amplitudes) - 1.0) <= 1e-12


def test_initial_states_reject_edgeless_merge():
    edgeless = qw.Graph(np.zeros((2, 2)))
    mg = qw.MergedGraph(graph=qw.Graph(np.zeros((4, 4))), n_left=2, n_right=2,
                        inter_edges=())
    with pytest.raises(DomainError):
        qw.initial_states(mg)
    del edgeless


def test_walk_state_rejects_bad_norm():
    with pytest.raises(DomainError):
        qw.WalkState([1.0, 1.0])


# ---------------------------------------------------------------------------
# Evolution
# ---------------------------------------------------------------------------

def test_evolve_at_zero_is_identity(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    out = qw.evolve(spec, minus, 0.0)
    assert np.max(np.abs(out.amplitudes - minus.amplitudes)) <= 1e-12


def test_evolve_k2_return_probability(k2):
    # amplitude on the start node is (1 + exp(-2it))/2, so probability cos^2(t)
    spec = qw.eig_sym(qw.laplacian(k2))
    psi0 = qw.WalkState([1.0, 0.0])
    for t in (0.3, np.pi / 4, np.pi / 2, 2.0):
        out = qw.evolve(spec, psi0, t)
        assert abs(out.amplitudes[0]) ** 2 == pytest.approx(np.cos(t) ** 2,
                                                            abs=1e-12)
    swapped = qw.evolve(spec, psi0, np.pi / 2)
    assert np.allclose(swapped.amplitudes, [0.0, 1.0], atol=1e-12)


@pytest.mark.parametrize("seed", range(25))
def test_evolve_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(seed, p=0.5)
    spec = qw.eig_sym(qw.laplacian(g))
    raw = rng.normal(size=g.n) + 1j * rng.normal(size=g.n)
    psi = qw.WalkState(raw / np.linalg.norm(raw))
    t = float(rng.uniform(0.0, 20.0))
    out = qw.evolve(spec, psi, t)
    assert abs(np.linalg.norm(out.amplitudes) - 1.0) <= 1e-10


def test_evolve_dimension_mismatch(k2, p3):
    spec = qw.eig_sym(qw.laplacian(k2))
    _, _, minus, _ = merged_walk(p3, p3)
    with pytest.raises(ShapeError):
        qw.evolve(spec, minus, 1.0)


# ---------------------------------------------------------------------------
# Finite-time averaged operator
# ---------------------------------------------------------------------------

def test_avg_density_finite_small_T_is_projector(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    rho = qw.avg_density_finite(spec, minus, 1e-9)
    projector = np.outer(minus.amplitudes, minus.amplitudes.conj())
    assert np.max(np.abs(rho.entries - projector)) <= 1e-7


def test_avg_density_finite_matches_quadrature_k2_pair(k2):
    _, spec, minus, plus = merged_walk(k2, k2)
    for psi in (minus, plus):
        closed = qw.avg_density_finite(spec, psi, 10.0)
        integrated = qw.avg_density_quadrature(spec, psi, 10.0, 1e-3)
        assert np.max(np.abs(closed.entries - integrated.entries)) <= 1e-6


@pytest.mark.parametrize("seed", range(8))
def test_avg_density_finite_matches_quadrature_random(seed):
    g1 = random_graph(seed, n_max=5)
    g2 = random_graph(seed + 40, n_max=5)
    _, spec, minus, plus = merged_walk(g1, g2)
    for psi in (minus, plus):
        closed = qw.avg_density_finite(spec, psi, 5.0)
        integrated = qw.avg_density_quadrature(spec, psi, 5.0, 1e-3)
        assert np.max(np.abs(closed.entries - integrated.entries)) <= 1e-6


def test_avg_density_finite_rejects_bad_T(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    with pytest.raises(ParameterError):
        qw.avg_density_finite(spec, minus, 0.0)
    with pytest.raises(ParameterError):
        qw.avg_density_finite(spec, minus, np.inf)


@pytest.mark.parametrize("seed", range(6))
def test_averaged_operators_satisfy_invariants(seed):
    _, spec, minus, plus = merged_walk(random_graph(seed), random_graph(seed + 60))
    for psi in (minus, plus):
        for rho in (qw.avg_density_finite(spec, psi, 7.5),
                    qw.avg_density_infinite(spec, psi)):
            m = rho.entries
            assert np.max(np.abs(m - m.conj().T)) <= 1e-10
            assert abs(np.trace(m) - 1.0) <= 1e-9
            assert float(np.linalg.eigvalsh(m)[0]) >= -1e-9


# ---------------------------------------------------------------------------
# Infinite-time averaged operator
# ---------------------------------------------------------------------------

def test_avg_density_infinite_nondegenerate_is_diagonal_in_eigenbasis(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    assert all(len(g) == 1 for g in spec.groups)  # this pair is nondegenerate
    rho = qw.avg_density_infinite(spec, minus)
    coeffs = spec.eigenvectors.T @ minus.amplitudes
    in_basis = spec.eigenvectors.T @ rho.entries @ spec.eigenvectors
    assert np.max(np.abs(in_basis - np.diag(np.abs(coeffs) ** 2))) <= 1e-10


def test_avg_density_infinite_fully_degenerate_is_projector():
    spec = qw.eig_sym(np.eye(2))
    psi = qw.WalkState([0.6, 0.8])
    rho = qw.avg_density_infinite(spec, psi)
    expected = np.outer(psi.amplitudes, psi.amplitudes.conj())
    assert np.max(np.abs(rho.entries - expected)) <= 1e-15


@pytest.mark.parametrize("seed", range(10))
def test_avg_density_infinite_is_large_T_limit(seed):
    g1 = random_graph(seed, n=4, p=0.5)
    g2 = random_graph(seed + 70, n=4, p=0.5)
    _, spec, minus, plus = merged_walk(g1, g2)
    for psi in (minus, plus):
        finite = qw.avg_density_finite(spec, psi, 1e4)
        infinite = qw.avg_density_infinite(spec, psi)
        assert np.max(np.abs(finite.entries - infinite.entries)) <= 1e-3


def test_sign_flips_leave_averages_unchanged(p3, c4):
    _, spec, minus, plus = merged_walk(p3, c4)
    flipped = _flip_columns(spec, [0, 2, 3])
    for psi in (minus, plus):
        for maker in (lambda s, v: qw.avg_density_finite(s, v, 3.0),
                      qw.avg_density_infinite):
            assert np.max(np.abs(maker(spec, psi).entries
                                 - maker(flipped, psi).entries)) <= 1e-10


def test_rotation_inside_degenerate_group_leaves_infinite_average(c4):
    # C4 has a two-dimensional eigenspace; mixing its basis is invisible
    # to the projector construction
    spec = qw.eig_sym(qw.laplacian(c4))
    group = next(g for g in spec.groups if len(g) == 2)
    theta = 0.7
    rot = np.array([[np.cos(theta), -np.sin(theta)],
                    [np.sin(theta), np.cos(theta)]])
    phi = spec.eigenvectors.copy()
    phi[:, list(group)] = phi[:, list(group)] @ rot
    mixed = qw.Spectrum(eigenvalues=spec.eigenvalues, eigenvectors=phi,
                        groups=spec.groups)
    psi = qw.WalkState(np.full(4, 0.5))
    base = qw.avg_density_infinite(spec, psi)
    alt = qw.avg_density_infinite(mixed, psi)
    assert np.max(np.abs(base.entries - alt.entries)) <= 1e-10


def test_avg_density_infinite_real_for_real_input(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    rho = qw.avg_density_infinite(spec, minus)
    assert np.max(np.abs(rho.entries.imag)) <= 1e-15


# ---------------------------------------------------------------------------
# Quadrature oracle
# ---------------------------------------------------------------------------

def test_quadrature_is_second_order(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    closed = qw.avg_density_finite(spec, minus, 1.0)
    errors = [
        np.max(np.abs(qw.avg_density_quadrature(spec, minus, 1.0, h).entries
                      - closed.entries))
        for h in (0.02, 0.01)
    ]
    ratio = errors[0] / errors[1]
    assert 3.0 <= ratio <= 5.0


def test_quadrature_trace_is_one(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    rho = qw.avg_density_quadrature(spec, minus, 2.0, 0.01)
    assert abs(np.trace(rho.entries) - 1.0) <= 1e-9


def test_quadrature_rejects_bad_step(p3, c3):
    _, spec, minus, _ = merged_walk(p3, c3)
    with pytest.raises(ParameterError):
        qw.avg_density_quadrature(spec, minus, 1.0, 0.0)
    with pytest.raises(ParameterError):
        qw.avg_density_quadrature(spec, minus, 1.0, 2.0)


# ---------------------------------------------------------------------------
# DensityMatrix contract
# ---------------------------------------------------------------------------

def test_density_matrix_rejects_non_hermitian():
    with pytest.raises(DomainError):
        qw.DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]], dtype=complex))


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(DomainError):
        qw.DensityMatrix(np.eye(2, dtype=complex))
