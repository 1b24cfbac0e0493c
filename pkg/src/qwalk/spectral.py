"""Dense symmetric eigendecomposition with degenerate-eigenvalue grouping.

The time-averaged walk operators need to know which eigenvalues coincide,
because only cross terms inside an eigenspace survive long-time averaging.
Grouping therefore lives next to the decomposition itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError, ShapeError

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition of a symmetric matrix.

    ``eigenvalues`` ascending; column k of ``eigenvectors`` belongs to
    ``eigenvalues[k]``; ``groups`` partitions 0..n-1 into classes of
    numerically equal eigenvalues, in spectral order.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ev = self.eigenvalues
        if ev.ndim != 1 or self.eigenvectors.shape != (ev.shape[0], ev.shape[0]):
            raise ShapeError("eigenvalues and eigenvectors have inconsistent shapes")
        if ev.shape[0] > 1 and np.any(np.diff(ev) < 0):
            raise ShapeError("eigenvalues must be sorted ascending")

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def default_grouping_tol(eigenvalues: np.ndarray) -> float:
    """Degeneracy tolerance scaled to the spectral range (floor 1e-9)."""
    if eigenvalues.size == 0:
        return 1e-9
    spread = float(eigenvalues[-1] - eigenvalues[0])
    return 1e-9 * max(1.0, spread)


def group_degenerate(eigenvalues, tol: float) -> tuple[tuple[int, ...], ...]:
    """Partition sorted eigenvalues into classes of numerically equal values.

    Each value is compared against the first member of the current group,
    not its immediate predecessor, so a long chain of slightly increasing
    values cannot silently bridge a real gap.
    """
    ev = np.asarray(eigenvalues, dtype=float)
    if not tol > 0:
        raise ParameterError(f"grouping tolerance must be positive, got {tol}")
    if ev.size > 1 and np.any(np.diff(ev) < 0):
        raise ParameterError("eigenvalues must be sorted ascending")
    groups: list[list[int]] = []
    anchor = None
    for i, value in enumerate(ev):
        if anchor is not None and abs(value - anchor) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
            anchor = value
    return tuple(tuple(g) for g in groups)


def eig_sym(m, grouping_tol: float | None = None) -> Spectrum:
    """Eigendecompose a symmetric real matrix.

    Raises ShapeError when the input is not square or departs from
    symmetry by more than 1e-10, and NumericalError when the underlying
    solver fails to converge.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    if m.size and float(np.max(np.abs(m - m.T))) > SYMMETRY_TOL:
        raise ShapeError("matrix is not symmetric within 1e-10")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    if grouping_tol is None:
        grouping_tol = default_grouping_tol(eigenvalues)
    groups = group_degenerate(eigenvalues, grouping_tol)
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors,
                    groups=groups)
