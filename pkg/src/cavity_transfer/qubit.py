"""Coherent-state qubits ``(mu|alpha> + nu|-alpha>) / sqrt(N)`` and overlap arithmetic."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import InvalidInputError

DEGENERATE_NORM = 1e-12
ROW_NORM_TOL = 1e-8


class DegenerateQubitError(InvalidInputError):
    """The superposition has (numerically) zero norm."""


@dataclass(frozen=True)
class CoherentQubit:
    alpha: complex
    mu: complex = 1.0
    nu: complex = 0.0

    @property
    def normalization(self) -> float:
        return qubit_normalization(self)


def _norm_factor(q: CoherentQubit) -> float:
    cross = 2.0 * (q.mu * np.conj(q.nu)).real * math.exp(-2.0 * abs(q.alpha) ** 2)
    return abs(q.mu) ** 2 + abs(q.nu) ** 2 + cross


def qubit_normalization(q: CoherentQubit) -> float:
    """Normalization factor ``|mu|^2 + |nu|^2 + 2 Re(mu nu*) exp(-2|alpha|^2)``."""
    n = _norm_factor(q)
    if n <= DEGENERATE_NORM:
        raise DegenerateQubitError(
            f"qubit norm {n:.3g} is below {DEGENERATE_NORM:g} "
            f"(alpha={q.alpha}, mu={q.mu}, nu={q.nu})"
        )
    return n


def coherent_overlap(beta: complex, gamma: complex) -> complex:
    """Inner product ``<beta|gamma>`` of two single-mode coherent states."""
    return cmath.exp(
        -0.5 * abs(beta) ** 2 - 0.5 * abs(gamma) ** 2 + beta.conjugate() * gamma
    )


def product_overlap(betas, gammas) -> complex:
    """``<beta_1 ... beta_n | gamma_1 ... gamma_n>`` for product coherent states."""
    betas = np.asarray(betas, dtype=complex)
    gammas = np.asarray(gammas, dtype=complex)
    exponent = np.sum(
        -0.5 * np.abs(betas) ** 2 - 0.5 * np.abs(gammas) ** 2 + np.conj(betas) * gammas
    )
    return complex(np.exp(exponent))


def branch_amplitudes(alpha: complex, row) -> np.ndarray:
    """Per-mode coherent amplitudes of the ``+alpha`` branch after evolution.

    Mode ``j`` carries ``alpha * U[j, b1]``, which equals ``alpha * row[j]`` for
    the ``b1`` row because ``U`` is complex symmetric.
    """
    row = np.asarray(row, dtype=complex)
    defect = abs(float(np.sum(np.abs(row) ** 2)) - 1.0)
    if defect > ROW_NORM_TOL:
        raise InvalidInputError(f"coefficient row is not normalized (defect {defect:.3g})")
    return complex(alpha) * row
