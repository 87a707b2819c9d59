"""Closed-form transfer coefficients for the three-site chain.

The cavity hopping term is diagonalised by the chain normal modes
``(1, sqrt2, 1)/2``, ``(1, 0, -1)/sqrt2`` and ``(1, -sqrt2, 1)/2`` with frequency
shifts ``+sqrt2 c``, ``0`` and ``-sqrt2 c``. Applying the same rotation to the
excitons splits the dynamics into three independent cavity-exciton 2x2 blocks
with Rabi splittings ``a``, ``f`` and ``b``. Each coefficient ``u_j`` is the sum
of the three block propagators weighted by the projections of ``b1`` and of
mode ``j`` on the block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams

SQRT2 = math.sqrt(2.0)
_SMALL_FREQ = 1e-12


@dataclass(frozen=True)
class RabiFrequencies:
    a: float
    b: float
    f: float

    @property
    def fastest(self) -> float:
        return max(self.a, self.b, self.f)


@dataclass(frozen=True)
class TransferCoefficients:
    """The six amplitudes ``u_{b1j}(t)`` in ``ModeIndex`` order."""

    u: np.ndarray
    time: float

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.u) ** 2


def rabi_frequencies(params: ModelParams) -> RabiFrequencies:
    d, g, c = params.delta, params.g, params.c
    base = d * d + 2 * c * c + 4 * g * g
    cross = 2 * SQRT2 * d * c
    # base >= |cross| always (AM-GM), the max() only absorbs rounding
    return RabiFrequencies(
        a=math.sqrt(max(base + cross, 0.0)),
        b=math.sqrt(max(base - cross, 0.0)),
        f=math.sqrt(d * d + 4 * g * g),
    )


def _sin_over(freq: float, t: np.ndarray) -> np.ndarray:
    """``sin(freq t / 2) / freq`` with the ``t/2`` limit at vanishing frequency."""
    if abs(freq) < _SMALL_FREQ:
        return t / 2.0
    return np.sin(freq * t / 2.0) / freq


def _block_terms(params: ModelParams, t: np.ndarray):
    rabi = rabi_frequencies(params)
    d, c = params.delta, params.c
    common = np.exp(-1j * (params.omega - d / 2.0) * t)
    phase_a = np.exp(-1j * c * t / SQRT2)
    phase_b = np.exp(1j * c * t / SQRT2)
    return rabi, d, c, common, phase_a, phase_b


def coefficient_table(params: ModelParams, times) -> np.ndarray:
    """Evaluate ``u_{b11} ... u_{b16}`` on an array of times; returns shape ``(n, 6)``."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    g = params.g
    if g == 0.0:
        # dots decoupled from the field: the exciton only picks up its own phase
        u = np.zeros((t.size, 6), dtype=complex)
        u[:, 1] = np.exp(-1j * (params.omega - params.delta) * t)
        return u
    rabi, d, c, common, pa, pb = _block_terms(params, t)
    a, b, f = rabi.a, rabi.b, rabi.f

    cos_a, cos_b, cos_f = np.cos(a * t / 2), np.cos(b * t / 2), np.cos(f * t / 2)
    so_a, so_b, so_f = _sin_over(a, t), _sin_over(b, t), _sin_over(f, t)
    d_plus, d_minus = d + SQRT2 * c, d - SQRT2 * c

    # exciton -> exciton element of each block (detuning d+eps on the cavity side)
    ex_a = cos_a + 1j * d_plus * so_a
    ex_b = cos_b + 1j * d_minus * so_b
    ex_f = cos_f + 1j * d * so_f

    u = np.empty((t.size, 6), dtype=complex)
    u[:, 0] = -1j * (pa * g * so_a / 2 + pb * g * so_b / 2 + g * so_f)
    u[:, 1] = pa * ex_a / 4 + pb * ex_b / 4 + ex_f / 2
    u[:, 2] = 1j * (-pa * SQRT2 * g * so_a / 2 + pb * SQRT2 * g * so_b / 2)
    u[:, 3] = pa * SQRT2 / 4 * ex_a - pb * SQRT2 / 4 * ex_b
    u[:, 4] = -1j * (pa * g * so_a / 2 + pb * g * so_b / 2 - g * so_f)
    u[:, 5] = pa * ex_a / 4 + pb * ex_b / 4 - ex_f / 2
    return u * common[:, None]


def transfer_coefficients(params: ModelParams, t: float) -> TransferCoefficients:
    return TransferCoefficients(u=coefficient_table(params, t)[0], time=float(t))


def unitarity_defect(coeffs) -> float:
    """``|sum_j |u_j|^2 - 1|`` for a coefficient set (or a bare vector)."""
    u = coeffs.u if isinstance(coeffs, TransferCoefficients) else np.asarray(coeffs)
    return abs(float(np.sum(np.abs(u) ** 2)) - 1.0)


def as_printed_u14(params: ModelParams, t: float) -> complex:
    """Literal transcription of the published ``u_{b14}`` expression.

    Its inner sine coefficients read ``(2 delta + c sqrt2) / (4A)`` and
    ``(2 delta + c sqrt2) / (4B)``; the block decomposition instead gives
    ``sqrt2 (delta +- sqrt2 c) / (4 a|b)``. Kept only to exhibit the
    discrepancy; nothing else in the package calls it.
    """
    t_arr = np.array([float(t)])
    rabi, d, c, common, pa, pb = _block_terms(params, t_arr)
    a, b = rabi.a, rabi.b
    k = 2 * d + c * SQRT2
    term_a = SQRT2 / 4 * np.cos(a * t_arr / 2) + 1j * k / 4 * _sin_over(a, t_arr)
    term_b = SQRT2 / 4 * np.cos(b * t_arr / 2) + 1j * k / 4 * _sin_over(b, t_arr)
    return complex((common * (pa * term_a - pb * term_b))[0])


def as_printed_coefficients(params: ModelParams, t: float) -> TransferCoefficients:
    """Coefficient set with the published ``u_{b14}`` swapped in for the corrected one."""
    coeffs = transfer_coefficients(params, t)
    u = coeffs.u.copy()
    u[3] = as_printed_u14(params, t)
    return TransferCoefficients(u=u, time=coeffs.time)
