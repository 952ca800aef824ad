import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anyonqc.qudit_oracle import (Gate, OracleError, QuditState, basis_state, oracle_apply, oracle_compare,
                                  oracle_measure, tilde_state)

D = [2, 3, 5, 7]


def vec(state):
    return state.amplitudes


def random_state(d, n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d ** n) + 1j * rng.normal(size=d ** n)
    return QuditState(d, n, v / np.linalg.norm(v))


@pytest.mark.parametrize("d", D)
def test_pauli_orders_and_commutation(d):
    psi = random_state(d, 1, d)
    x, z = psi, psi
    for _ in range(d):
        x = oracle_apply(x, Gate.X(0))
        z = oracle_apply(z, Gate.Z(0))
    assert np.allclose(vec(x), vec(psi)) and np.allclose(vec(z), vec(psi))
    zx = oracle_apply(oracle_apply(psi, Gate.X(0)), Gate.Z(0))
    xz = oracle_apply(oracle_apply(psi, Gate.Z(0)), Gate.X(0))
    assert np.allclose(vec(zx), np.exp(2j * np.pi / d) * vec(xz))


@pytest.mark.parametrize("d", D)
def test_tilde_basis_conventions(d):
    w = np.exp(2j * np.pi / d)
    for i in range(d):
        t = QuditState(d, 1, tilde_state(d, i))
        assert np.allclose(vec(oracle_apply(t, Gate.Z(0))), tilde_state(d, i - 1))
        assert np.allclose(vec(oracle_apply(t, Gate.X(0))), w ** i * tilde_state(d, i))
    M = np.array([tilde_state(d, i) for i in range(d)])
    assert np.allclose(M @ M.conj().T, np.eye(d))


def test_basis_gates():
    s = basis_state(3, [1, 2, 0])
    assert np.argmax(np.abs(vec(oracle_apply(s, Gate.CX(0, 2))))) == np.ravel_multi_index((1, 2, 1), (3,) * 3)
    assert np.argmax(np.abs(vec(oracle_apply(s, Gate.Toffoli(0, 1, 2))))) == np.ravel_multi_index((1, 2, 2), (3,) * 3)
    assert np.argmax(np.abs(vec(oracle_apply(s, Gate.Mult(1, 2))))) == np.ravel_multi_index((1, 1, 0), (3,) * 3)
    ph = oracle_apply(s, Gate.Phase(0, 1, lambda i, j: i * j))
    assert np.isclose(vec(ph)[np.ravel_multi_index((1, 2, 0), (3,) * 3)], np.exp(2j * np.pi * 2 / 3))


def test_gate_errors():
    s = basis_state(3, [0, 0])
    with pytest.raises(OracleError):
        oracle_apply(s, Gate.CX(0, 0))
    with pytest.raises(OracleError):
        oracle_apply(s, Gate.X(2))
    with pytest.raises(OracleError):
        oracle_apply(s, Gate.Mult(0, 3))
    with pytest.raises(OracleError):
        QuditState(3, 2, np.zeros(4))


@given(st.sampled_from(D), st.integers(0, 10 ** 6), st.sampled_from(["X", "CX", "TOFFOLI", "Z"]))
def test_gates_unitary(d, seed, kind):
    psi = random_state(d, 3, seed)
    g = {"X": Gate.X(1), "CX": Gate.CX(2, 0), "TOFFOLI": Gate.Toffoli(0, 2, 1), "Z": Gate.Z(2, 2)}[kind]
    assert abs(oracle_apply(psi, g).norm() - 1) < 1e-12


@given(st.sampled_from(D), st.integers(0, 10 ** 6), st.sampled_from(["Z", "X"]), st.integers(0, 1))
def test_measurement_probabilities_sum(d, seed, basis, q):
    psi = random_state(d, 2, seed)
    br = oracle_measure(psi, q, basis, enumerate_all=True)
    assert sum(p for _, p, _ in br) == pytest.approx(1)
    for _, _, post in br:
        assert post.norm() == pytest.approx(1)


def test_measure_examples():
    d = 3
    br = oracle_measure(QuditState(d, 1, tilde_state(d, 2)), 0, "X", enumerate_all=True)
    assert [(j, round(p, 12)) for j, p, _ in br] == [(2, 1.0)]
    br = oracle_measure(QuditState(d, 1, tilde_state(d, 0)), 0, "Z", enumerate_all=True)
    assert [round(p, 12) for _, p, _ in br] == [round(1 / 3, 12)] * 3
    out1 = oracle_measure(random_state(3, 2, 1), 0, seed=5)
    out2 = oracle_measure(random_state(3, 2, 1), 0, seed=5)
    assert out1[0] == out2[0]


def test_compare():
    a = QuditState(3, 1, [0, 1, 1])
    rep = oracle_compare({"b": a}, {"b": QuditState(3, 1, 1j * np.array([0, 1, 1]))})
    assert rep.ok(1e-12) and rep.max_deficit < 1e-12
    bad = oracle_compare({"b": a}, {"b": basis_state(3, [0])})
    assert not bad.ok(1e-3) and bad.max_deficit == pytest.approx(1)
    with pytest.raises(OracleError):
        oracle_compare({"b": a}, {"c": a})


def test_json_round_trip():
    s = random_state(5, 2, 3)
    assert np.allclose(QuditState.from_json(s.to_json()).amplitudes, s.amplitudes)
