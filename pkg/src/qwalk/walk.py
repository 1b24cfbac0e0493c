"""Quantum walk states, unitary evolution, and time-averaged density operators.

The walk on a graph evolves an amplitude vector under U(t) = exp(-iHt)
with H the graph Laplacian (or adjacency matrix). Everything here works in
the eigenbasis of H: evolution is a phase rotation, and the time average
of the projector onto the evolving state has a closed form per eigenvalue
pair, so no numerical integration is needed in production. The trapezoid
integrator is kept only as an independent oracle for tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, ShapeError
from .graph import MergedGraph, degree_vector
from .spectral import Spectrum

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WalkState:
    """Complex amplitude vector over graph nodes, unit norm."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).ravel()
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state norm must be 1 within {NORM_TOL}, got {norm!r}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace operator describing a statistical mixture.

    Hermiticity and trace are enforced at construction; positive
    semidefiniteness is checked where eigenvalues are computed anyway
    (entropy) and by the test suite.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {m.shape}")
        if float(np.max(np.abs(m - m.conj().T))) > HERMITIAN_TOL:
            raise DomainError("density matrix must be Hermitian within 1e-10")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix trace must be 1 within {TRACE_TOL}, "
                              f"got {trace!r}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def initial_states(mg: MergedGraph) -> tuple[WalkState, WalkState]:
    """Degree-weighted starting states of the two walks on a merged graph.

    Both states carry amplitude d_u / C on node u, where d_u is the
    weighted degree in the merged graph (inter-graph edges included) and
    C normalizes to unit norm. The first returned state flips the sign on
    the second graph's nodes; the second is positive everywhere.
    """
    d = degree_vector(mg.graph)
    c = float(np.sqrt(np.sum(d * d)))
    if c == 0.0:
        raise DomainError("merged graph has no edges; initial states undefined")
    plus = d / c
    minus = plus.copy()
    minus[mg.n_left:] *= -1.0
    return WalkState(minus), WalkState(plus)


def evolve(spec: Spectrum, psi0: WalkState, t: float) -> WalkState:
    """Evolve a state for time t under U(t) = exp(-iHt).

    Computed in the eigenbasis: project, rotate each coefficient by
    exp(-i lambda_k t), reconstruct. Unitary, so the norm is preserved.
    """
    if spec.n != psi0.n:
        raise ShapeError(f"spectrum is {spec.n}-dimensional but state has "
                         f"{psi0.n} amplitudes")
    coeffs = spec.eigenvectors.T @ psi0.amplitudes
    phases = np.exp(-1j * spec.eigenvalues * t)
    return WalkState(spec.eigenvectors @ (phases * coeffs))


def _same_group_mask(spec: Spectrum) -> np.ndarray:
    mask = np.zeros((spec.n, spec.n), dtype=bool)
    for group in spec.groups:
        idx = np.array(group)
        mask[np.ix_(idx, idx)] = True
    return mask


def _to_density(raw: np.ndarray) -> DensityMatrix:
    # float dust from the final change of basis can break exact Hermiticity
    return DensityMatrix(0.5 * (raw + raw.conj().T))


def avg_density_finite(spec: Spectrum, psi0: WalkState, T: float) -> DensityMatrix:
    """Average of |psi_t><psi_t| over t in [0, T], in closed form.

    In the eigenbasis the (k, n) entry of the average is
    a_k * conj(a_n) * I(k, n) with a = coefficients of psi0 and

        I(k, n) = 1                                       same eigenvalue,
                  (exp(i(l_n - l_k)T) - 1)/(i(l_n - l_k)T) otherwise.

    "Same eigenvalue" is decided by the spectrum's degeneracy groups, not
    by exact float comparison.
    """
    if not T > 0 or not np.isfinite(T):
        raise ParameterError(f"averaging time must be positive and finite, got {T}")
    if spec.n != psi0.n:
        raise ShapeError(f"spectrum is {spec.n}-dimensional but state has "
                         f"{psi0.n} amplitudes")
    coeffs = spec.eigenvectors.T @ psi0.amplitudes
    omega = spec.eigenvalues[None, :] - spec.eigenvalues[:, None]
    same = _same_group_mask(spec)
    denom = np.where(same, 1.0, 1j * omega * T)
    integral = np.where(same, 1.0, (np.exp(1j * omega * T) - 1.0) / denom)
    basis_avg = np.outer(coeffs, coeffs.conj()) * integral
    raw = spec.eigenvectors @ basis_avg @ spec.eigenvectors.T
    return _to_density(raw)


def avg_density_infinite(spec: Spectrum, psi0: WalkState) -> DensityMatrix:
    """Long-time limit of the averaged projector.

    Only coherences inside a degenerate eigenspace survive, so the limit
    is the sum over distinct eigenvalues of the projected pure states
    (P_g psi0)(P_g psi0)^dagger. Real input yields a real-valued operator.
    """
    if spec.n != psi0.n:
        raise ShapeError(f"spectrum is {spec.n}-dimensional but state has "
                         f"{psi0.n} amplitudes")
    coeffs = spec.eigenvectors.T @ psi0.amplitudes
    raw = np.zeros((spec.n, spec.n), dtype=complex)
    for group in spec.groups:
        idx = np.array(group)
        projected = spec.eigenvectors[:, idx] @ coeffs[idx]
        raw += np.outer(projected, projected.conj())
    return _to_density(raw)


def avg_density_quadrature(spec: Spectrum, psi0: WalkState, T: float,
                           step: float) -> DensityMatrix:
    """Trapezoid-rule approximation of the finite-time average.

    Test oracle only; production code uses the closed form. The grid is
    the uniform subdivision of [0, T] closest to the requested step, and
    the weights are normalized so a constant integrand averages exactly.
    """
    if not T > 0 or not np.isfinite(T):
        raise ParameterError(f"averaging time must be positive and finite, got {T}")
    if not 0 < step < T:
        raise ParameterError(f"step must lie in (0, T), got {step}")
    if spec.n != psi0.n:
        raise ShapeError(f"spectrum is {spec.n}-dimensional but state has "
                         f"{psi0.n} amplitudes")
    m = max(1, int(round(T / step)))
    h = T / m
    times = np.arange(m + 1) * h
    coeffs = spec.eigenvectors.T @ psi0.amplitudes
    phases = np.exp(-1j * times[:, None] * spec.eigenvalues[None, :])
    states = (phases * coeffs[None, :]) @ spec.eigenvectors.T
    weights = np.full(m + 1, h)
    weights[0] = weights[-1] = h / 2.0
    weights /= weights.sum()
    raw = states.T @ (weights[:, None] * states.conj())
    return _to_density(raw)
