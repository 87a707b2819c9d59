import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavity_transfer.model import (
    InvalidInputError,
    ModeIndex,
    ModelParams,
    build_system_matrix,
    propagator,
    propagator_row_b1,
)

from conftest import RESONANT

deltas = st.floats(-1e3, 1e3)
couplings = st.floats(0, 100)
hoppings = st.floats(0, 10)
times = st.floats(-100, 100)


def test_decoupled_matrix_is_identity():
    np.testing.assert_array_equal(build_system_matrix(ModelParams(1, 0, 0, 0)), np.eye(6))


def test_resonant_coupling_structure():
    m = build_system_matrix(RESONANT)
    expected = np.eye(6)
    for a, b in [(0, 1), (2, 3), (4, 5)]:
        expected[a, b] = expected[b, a] = 65
    for a, b in [(0, 2), (2, 4)]:
        expected[a, b] = expected[b, a] = 1
    np.testing.assert_array_equal(m, expected)


def test_exciton_diagonal_carries_detuning():
    m = build_system_matrix(ModelParams(2, 0.5, 1, 1))
    np.testing.assert_array_equal(np.diag(m), [2, 1.5, 2, 1.5, 2, 1.5])


def test_general_chain_length_is_accepted():
    m = build_system_matrix(RESONANT, n_sites=5)
    assert m.shape == (10, 10)
    assert m[6, 8] == 1 and m[8, 9] == 65


@pytest.mark.parametrize("bad", [
    dict(omega=float("nan")), dict(delta=float("inf")), dict(g=-1.0), dict(c=-0.1),
])
def test_params_rejected(bad):
    with pytest.raises(InvalidInputError):
        ModelParams(**bad)


def test_propagator_rejects_nonfinite_time():
    with pytest.raises(InvalidInputError):
        propagator(build_system_matrix(RESONANT), float("nan"))


def test_propagator_at_zero_is_identity():
    np.testing.assert_allclose(propagator(build_system_matrix(RESONANT), 0.0), np.eye(6), atol=1e-15)


def test_decoupled_phases():
    t = 0.73
    u = propagator(build_system_matrix(ModelParams(1, 0, 0, 0)), t)
    np.testing.assert_allclose(u, np.exp(-1j * t) * np.eye(6), atol=1e-15)


def test_resonant_transfer_in_propagator():
    u = propagator(build_system_matrix(RESONANT), 4.4464)
    assert abs(u[ModeIndex.B1, ModeIndex.B3]) ** 2 >= 0.999


def test_row_b1():
    m = build_system_matrix(RESONANT)
    np.testing.assert_allclose(propagator_row_b1(m, 0.0), [0, 1, 0, 0, 0, 0], atol=1e-15)
    row = propagator_row_b1(m, 4.4464)
    assert abs(row[5]) ** 2 >= 0.999
    assert abs(np.sum(np.abs(row) ** 2) - 1) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(deltas, couplings, hoppings, times)
def test_unitary_and_complex_symmetric(delta, g, c, t):
    u = propagator(build_system_matrix(ModelParams(1, delta, g, c)), t)
    assert np.max(np.abs(u @ u.conj().T - np.eye(6))) <= 1e-11
    assert np.max(np.abs(u - u.T)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(deltas, couplings, hoppings, times, times)
def test_group_law(delta, g, c, t1, t2):
    m = build_system_matrix(ModelParams(1, delta, g, c))
    np.testing.assert_allclose(propagator(m, t1 + t2), propagator(m, t1) @ propagator(m, t2), atol=1e-10, rtol=0)


@settings(max_examples=100, deadline=None)
@given(deltas, couplings, hoppings, times)
def test_time_reversal(delta, g, c, t):
    m = build_system_matrix(ModelParams(1, delta, g, c))
    assert np.max(np.abs(propagator(m, -t) - np.conj(propagator(m, t)))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(deltas, couplings, hoppings, st.floats(-10, 10), st.floats(0, 5))
def test_omega_only_sets_a_global_phase(delta, g, c, omega, t):
    u1 = propagator(build_system_matrix(ModelParams(1.0, delta, g, c)), t)
    u2 = propagator(build_system_matrix(ModelParams(omega, delta, g, c)), t)
    assert np.max(np.abs(np.abs(u1) - np.abs(u2))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(deltas, couplings, hoppings, st.floats(0, 10), st.floats(0.1, 10))
def test_scaling_law(delta, g, c, t, s):
    u = propagator(build_system_matrix(ModelParams(1, delta, g, c)), t)
    v = propagator(build_system_matrix(ModelParams(1, s * delta, s * g, s * c)), t / s)
    assert np.max(np.abs(np.abs(u) - np.abs(v))) <= 1e-10
