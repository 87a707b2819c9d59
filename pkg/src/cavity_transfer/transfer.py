"""Population curves, transfer-time search, photon number, fidelity and detuning search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import coefficient_table, rabi_frequencies
from .model import CAVITY_MODES, InvalidInputError, ModelParams, ModeIndex
from .qubit import CoherentQubit, branch_amplitudes, product_overlap, qubit_normalization

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
SAMPLES_PER_HALF_PERIOD = 10
FALLBACK_POINTS = 1001
# a sinusoid sampled at ten points per half-period is undershot by at most 1 - cos(pi/20)
SAMPLING_MARGIN = 1.0 - math.cos(math.pi / (2 * SAMPLES_PER_HALF_PERIOD))
MAX_CANDIDATES = 256
# near-equal ripple peaks are only told apart once each bracket is narrowed this far
REFINE_FRACTION = 1e-6
_CHUNK = 1 << 17


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    f_pop: np.ndarray
    u2: np.ndarray
    u4: np.ndarray
    u6: np.ndarray

    def rows(self):
        return zip(self.times, self.f_pop, self.u2, self.u4, self.u6)


@dataclass(frozen=True)
class TransferResult:
    t_star: float
    quality: float
    phase: float
    max_f_pop: float


def _cavity_weight(u: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(u[..., list(CAVITY_MODES)]) ** 2, axis=-1)


def population_trajectory(params: ModelParams, t_max: float, n_points: int) -> Trajectory:
    if not (math.isfinite(t_max) and t_max > 0):
        raise InvalidInputError(f"t_max must be positive and finite, got {t_max!r}")
    if int(n_points) != n_points or n_points < 2:
        raise InvalidInputError(f"n_points must be an integer >= 2, got {n_points!r}")
    times = np.linspace(0.0, t_max, int(n_points))
    pops = np.abs(coefficient_table(params, times)) ** 2
    return Trajectory(
        times=times,
        f_pop=pops[:, list(CAVITY_MODES)].sum(axis=1),
        u2=pops[:, ModeIndex.B1],
        u4=pops[:, ModeIndex.B2],
        u6=pops[:, ModeIndex.B3],
    )


def cavity_population_factor(params: ModelParams, t: float) -> float:
    """Total weight ``|u1|^2 + |u3|^2 + |u5|^2`` sitting in the cavity fields."""
    return float(_cavity_weight(coefficient_table(params, t))[0])


def avg_photon_number(q: CoherentQubit, params: ModelParams, t: float) -> float:
    norm = qubit_normalization(q)
    r2 = abs(q.alpha) ** 2
    cross = 2.0 * (q.mu * np.conj(q.nu)).real * math.exp(-2.0 * r2)
    numerator = r2 * (abs(q.mu) ** 2 + abs(q.nu) ** 2 - cross)
    return numerator * cavity_population_factor(params, t) / norm


def scan_step(params: ModelParams) -> float | None:
    """Coarse-scan spacing: ten samples per half-period of the fastest Rabi splitting."""
    fastest = rabi_frequencies(params).fastest
    if fastest == 0.0:
        return None
    return math.pi / (SAMPLES_PER_HALF_PERIOD * fastest)


def _grid(lo: float, hi: float, step: float | None) -> np.ndarray:
    if step is None:
        return np.linspace(lo, hi, FALLBACK_POINTS)
    n = max(int(math.ceil((hi - lo) / step)) + 1, 2)
    return np.linspace(lo, hi, n)


def _u6_pop(params: ModelParams, times: np.ndarray) -> np.ndarray:
    out = np.empty(times.size)
    for start in range(0, times.size, _CHUNK):
        chunk = times[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.abs(coefficient_table(params, chunk)[:, ModeIndex.B3]) ** 2
    return out


def _max_cavity_weight(params: ModelParams, times: np.ndarray) -> float:
    best = 0.0
    for start in range(0, times.size, _CHUNK):
        chunk = times[start:start + _CHUNK]
        best = max(best, float(_cavity_weight(coefficient_table(params, chunk)).max()))
    return best


def _golden_max(func, lo, hi, tol):
    """Golden-section search for the maximisers of a unimodal ``func``.

    ``lo``, ``hi`` and ``tol`` are arrays so that many brackets are refined in
    lockstep; ``func`` maps an array of abscissae to an array of values.
    """
    lo, hi = np.array(lo, dtype=float), np.array(hi, dtype=float)
    tol = np.broadcast_to(np.asarray(tol, dtype=float), lo.shape)
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = func(x1), func(x2)
    active = hi - lo > tol
    while active.any():
        left = active & (f1 >= f2)
        right = active & ~left
        hi = np.where(left, x2, hi)
        lo = np.where(right, x1, lo)
        x2n = np.where(left, x1, lo + INV_PHI * (hi - lo))
        x1n = np.where(left, hi - INV_PHI * (hi - lo), x2)
        f2n = np.where(left, f1, f2)
        f1n = np.where(right, f2, f1)
        x1, x2 = x1n, x2n
        probe = np.where(left, x1, x2)
        fresh = func(probe)
        f1 = np.where(left, fresh, f1n)
        f2 = np.where(right, fresh, f2n)
        active = hi - lo > tol
    return np.where(f1 >= f2, x1, x2)


def _candidate_peaks(pops: np.ndarray, best: float) -> np.ndarray:
    """Sample indices of local maxima that could hide the global peak between samples."""
    margin = SAMPLING_MARGIN * max(best, 1e-300)
    interior = np.zeros(pops.size, dtype=bool)
    interior[1:-1] = (pops[1:-1] >= pops[:-2]) & (pops[1:-1] >= pops[2:])
    interior[0] = pops.size > 1 and pops[0] >= pops[1]
    interior[-1] = pops.size > 1 and pops[-1] >= pops[-2]
    idx = np.flatnonzero(interior & (pops >= best - margin))
    order = np.argsort(pops[idx])[::-1]
    return idx[order][:MAX_CANDIDATES]


def _check_window(window) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in window)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"window must be a (lo, hi) pair, got {window!r}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or hi <= lo:
        raise InvalidInputError(f"window must satisfy 0 <= lo < hi < inf, got {window!r}")
    return lo, hi


def find_transfer_time(params: ModelParams, window=(0.0, 10.0), rel_tol: float = 1e-4) -> TransferResult:
    """Global maximiser of ``|u6(t)|^2`` over ``window``.

    A uniform scan finds every sampled local maximum that could still be the
    global one; golden-section search refines each to well below
    ``rel_tol * t_star`` and the best is kept. ``max_f_pop`` is the maximum cavity weight on the
    scan spacing over ``[0, t_star]`` plus ``t_star`` itself; it is a grid
    maximum, not a certified bound.
    """
    lo, hi = _check_window(window)
    if not (0.0 < rel_tol <= 1e-2):
        raise InvalidInputError(f"rel_tol must lie in (0, 1e-2], got {rel_tol!r}")

    step = scan_step(params)
    times = _grid(lo, hi, step)
    pops = _u6_pop(params, times)
    k = int(np.argmax(pops))
    t_best, q_best = float(times[k]), float(pops[k])

    if q_best > 0.0:
        idx = _candidate_peaks(pops, q_best)
        left = times[np.maximum(idx - 1, 0)]
        right = times[np.minimum(idx + 1, times.size - 1)]
        width = np.minimum(REFINE_FRACTION * (right - left), rel_tol * 0.5 * (left + right))
        width = np.maximum(width, 1e-12 * max(hi, 1.0))
        refined = _golden_max(lambda t: _u6_pop(params, t), left, right, width)
        values = _u6_pop(params, refined)
        j = int(np.argmax(values))
        if values[j] > q_best:
            t_best, q_best = float(refined[j]), float(values[j])

    u_star = coefficient_table(params, t_best)[0]
    phase = float(np.angle(u_star[ModeIndex.B3]))
    if phase == -math.pi:
        phase = math.pi
    max_f = max(
        _max_cavity_weight(params, _grid(0.0, t_best, step)) if t_best > 0 else 0.0,
        float(_cavity_weight(u_star)),
    )
    return TransferResult(
        t_star=t_best,
        quality=float(abs(u_star[ModeIndex.B3]) ** 2),
        phase=phase,
        max_f_pop=max_f,
    )


def qubit_transfer_fidelity(
    q: CoherentQubit, params: ModelParams, t: float, phase_corrected: bool = False
) -> float:
    """``|<target|psi(t)>|^2`` with the qubit moved from dot 1 to dot 3.

    Both the evolved state and the target are two-branch superpositions of
    six-mode product coherent states, so every inner product is a product of
    single-mode coherent overlaps. With ``phase_corrected`` the target
    amplitude is rotated by ``arg u6(t)``, i.e. fidelity up to the known
    single-mode phase the channel imprints.
    """
    norm = qubit_normalization(q)
    row = coefficient_table(params, t)[0]
    alpha = complex(q.alpha)
    evolved = branch_amplitudes(alpha, row)
    target_alpha = alpha * np.exp(1j * np.angle(row[ModeIndex.B3])) if phase_corrected else alpha
    target = np.zeros(6, dtype=complex)
    target[ModeIndex.B3] = target_alpha

    weights = ((1, complex(q.mu)), (-1, complex(q.nu)))
    amp = 0j
    for s_t, c_t in weights:
        for s_e, c_e in weights:
            amp += np.conj(c_t) * c_e * product_overlap(s_t * target, s_e * evolved)
    return float(min(max(abs(amp / norm) ** 2, 0.0), 1.0))


def sweep_detuning(
    g: float,
    c: float,
    delta_grid,
    pop_cap: float,
    window,
    omega: float = 1.0,
    rel_tol: float = 1e-4,
) -> list[tuple[float, TransferResult, bool]]:
    """Transfer search at each detuning; every row is kept with its feasibility flag."""
    if not (0.0 < pop_cap <= 1.0):
        raise InvalidInputError(f"pop_cap must lie in (0, 1], got {pop_cap!r}")
    deltas = [float(d) for d in delta_grid]
    if not deltas:
        raise InvalidInputError("delta grid is empty")
    _check_window(window)
    rows = []
    for delta in deltas:
        result = find_transfer_time(ModelParams(omega, delta, g, c), window, rel_tol)
        rows.append((delta, result, result.max_f_pop <= pop_cap))
    return rows


def design_search(
    g: float,
    c: float,
    delta_grid,
    pop_cap: float,
    window,
    omega: float = 1.0,
    rel_tol: float = 1e-4,
) -> list[tuple[float, TransferResult]]:
    """Detunings whose cavity weight stays below ``pop_cap`` up to ``t_star``, fastest first."""
    rows = sweep_detuning(g, c, delta_grid, pop_cap, window, omega, rel_tol)
    feasible = [(d, r) for d, r, ok in rows if ok]
    return sorted(feasible, key=lambda item: (item[1].t_star, item[0]))
