"""Three-cavity / three-dot linear bosonic model and its exact mode propagator.

Mode amplitudes are ordered ``(a1, b1, a2, b2, a3, b3)`` everywhere in the
package: ``a`` is the cavity field of site *i*, ``b`` the exciton of the dot it
holds. Under the RWA Hamiltonian the amplitude vector ``v`` obeys
``dv/dt = -i M v`` with ``M`` real symmetric, so ``U(t) = exp(-i M t)`` is
obtained exactly from one eigendecomposition of ``M``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class InvalidInputError(ValueError):
    """Raised when parameters or settings violate an operation's preconditions."""


class ModeIndex(enum.IntEnum):
    A1 = 0
    B1 = 1
    A2 = 2
    B2 = 3
    A3 = 4
    B3 = 5


N_MODES = len(ModeIndex)
CAVITY_MODES = (ModeIndex.A1, ModeIndex.A2, ModeIndex.A3)
EXCITON_MODES = (ModeIndex.B1, ModeIndex.B2, ModeIndex.B3)


@dataclass(frozen=True)
class ModelParams:
    """Frequencies and couplings, all in units of the cavity frequency.

    ``omega`` is the cavity frequency, ``delta`` the cavity-exciton detuning
    (exciton frequency is ``omega - delta``), ``g`` the dot-cavity coupling and
    ``c`` the photon hopping between neighbouring cavities.
    """

    omega: float = 1.0
    delta: float = 0.0
    g: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        for name in ("omega", "delta", "g", "c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidInputError(f"{name} must be finite, got {value!r}")
        if self.g < 0 or self.c < 0:
            raise InvalidInputError(
                f"g and c must be nonnegative (got g={self.g}, c={self.c})"
            )


def build_system_matrix(params: ModelParams, n_sites: int = 3) -> np.ndarray:
    """Coefficient matrix ``M`` of the Heisenberg equations for an ``n_sites`` chain.

    Only ``n_sites == 3`` is covered by the closed-form kernel; other lengths
    are accepted for numerical experiments.
    """
    if n_sites < 1:
        raise InvalidInputError(f"n_sites must be >= 1, got {n_sites}")
    dim = 2 * n_sites
    m = np.zeros((dim, dim))
    for i in range(n_sites):
        a, b = 2 * i, 2 * i + 1
        m[a, a] = params.omega
        m[b, b] = params.omega - params.delta
        m[a, b] = m[b, a] = params.g
    for i in range(n_sites - 1):
        a, a_next = 2 * i, 2 * i + 2
        m[a, a_next] = m[a_next, a] = params.c
    return m


def _check_matrix(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f"system matrix must be square, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError("system matrix has non-finite entries")
    if not np.array_equal(matrix, matrix.T):
        raise InvalidInputError("system matrix must be exactly symmetric")
    return matrix


def _shifted_eigh(matrix: np.ndarray):
    """Eigendecomposition of ``M - s I`` with ``s`` the mean diagonal.

    Pulling the common frequency out as a scalar phase keeps the eigenvalues,
    and hence the rounding in ``lambda * t``, small at long times.
    """
    shift = float(np.trace(matrix)) / matrix.shape[0]
    evals, evecs = np.linalg.eigh(matrix - shift * np.eye(matrix.shape[0]))
    return shift, evals, evecs


def propagator(matrix: np.ndarray, t: float) -> np.ndarray:
    """Return ``U(t) = exp(-i M t)`` via the eigendecomposition of ``M``."""
    matrix = _check_matrix(matrix)
    if not math.isfinite(t):
        raise InvalidInputError(f"t must be finite, got {t!r}")
    shift, evals, evecs = _shifted_eigh(matrix)
    return np.exp(-1j * shift * t) * ((evecs * np.exp(-1j * evals * t)) @ evecs.T)


def propagator_row_b1(matrix: np.ndarray, t: float) -> np.ndarray:
    """Row ``b1`` of ``U(t)``: the coefficients expressing ``b1(t)`` in the initial modes.

    ``U`` is complex symmetric, so this row is also the column carrying the
    Schrodinger-picture amplitude out of ``b1``.
    """
    return propagator(matrix, t)[ModeIndex.B1].copy()


def propagator_rows_b1(matrix: np.ndarray, times) -> np.ndarray:
    """Vectorised :func:`propagator_row_b1` over an array of times, shape ``(n, dim)``."""
    matrix = _check_matrix(matrix)
    times = np.asarray(times, dtype=float)
    shift, evals, evecs = _shifted_eigh(matrix)
    weights = evecs[ModeIndex.B1][None, :] * evecs  # (dim, k)
    phases = np.exp(-1j * np.multiply.outer(times, evals))  # (n, k)
    return np.exp(-1j * shift * times)[:, None] * (phases @ weights.T)
