import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmon.operators import (
    InvalidStateError,
    apply_local,
    check_density,
    ket_to_density,
    operator_from_json,
    operator_to_json,
    partial_trace,
    random_density,
    random_unitary,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

SZ = np.diag([1.0, -1.0])
KET0 = np.diag([1.0, 0.0])
BELL = ket_to_density(np.array([1, 0, 0, 1]))


def test_tensor_examples():
    assert np.array_equal(tensor([np.eye(2), np.eye(3)]), np.eye(6))
    expected = np.zeros((4, 4))
    expected[0, 0], expected[2, 2] = 1, -1
    assert np.array_equal(tensor([SZ, KET0]), expected)
    a = random_density(3, seed=1)
    assert np.array_equal(tensor([a]), a)


def test_tensor_rejects_empty():
    with pytest.raises(ValueError):
        tensor([])


def test_tensor_associative():
    # exact on integer-valued entries; rounding-level on generic complex ones
    ints = [np.arange(k * k).reshape(k, k) + 1j * np.eye(k) for k in (2, 3, 2)]
    a, b, c = ints
    assert np.array_equal(tensor([a, tensor([b, c])]), tensor([tensor([a, b]), c]))
    a, b, c = (random_density(k, seed=k) for k in (2, 3, 2))
    assert np.max(np.abs(tensor([a, tensor([b, c])]) - tensor([tensor([a, b]), c]))) < 1e-16


def test_partial_trace_examples():
    assert np.allclose(partial_trace(BELL, [2, 2], [0]), np.eye(2) / 2, atol=1e-15)
    rho, sigma = random_density(3, seed=4), random_density(2, seed=5)
    prod = tensor([rho, sigma])
    assert np.allclose(partial_trace(prod, [3, 2], [0]), rho, atol=1e-14)
    assert np.allclose(partial_trace(prod, [3, 2], [1]), sigma, atol=1e-14)


def test_partial_trace_three_factors_against_loops():
    rho = random_density(12, seed=3)
    dims = (2, 3, 2)
    t = rho.reshape(dims + dims)
    expected = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for c in range(2):
            for a2 in range(2):
                for c2 in range(2):
                    expected[2 * a + c, 2 * a2 + c2] = sum(t[a, b, c, a2, b, c2] for b in range(3))
    assert np.allclose(partial_trace(rho, dims, [0, 2]), expected, atol=1e-14)


def test_partial_trace_errors():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, [2, 3], [0])
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, [2, 2], [])


@pytest.mark.parametrize("seed", range(5))
def test_partial_trace_preserves_trace(seed):
    h = random_density(8, seed=seed) * 3 - np.eye(8)
    for keep in ([0], [1], [2], [0, 2], [1, 2]):
        assert abs(np.trace(partial_trace(h, [2, 2, 2], keep)) - np.trace(h)) < 1e-12


def test_apply_local_matches_full_matrix():
    dims = (2, 3, 2)
    rho = random_density(12, seed=7)
    u = random_unitary(4, seed=8)
    # u on factors (0, 2): reorder to (0, 2, 1), apply kron(u, 1), reorder back
    perm = np.arange(12).reshape(dims).transpose(0, 2, 1).ravel()
    p = np.eye(12)[perm]
    full = p.T @ np.kron(u, np.eye(3)) @ p
    assert np.allclose(apply_local(rho, dims, [0, 2], u), full @ rho @ full.conj().T, atol=1e-13)


def test_entropy_examples():
    assert von_neumann_entropy(KET0) == 0
    for d in (2, 3, 5):
        assert abs(von_neumann_entropy(np.eye(d) / d) - np.log2(d)) < 1e-14
    # h(1/4) from the binary-entropy formula
    assert abs(von_neumann_entropy(np.diag([0.75, 0.25])) - 0.8112781244591328) < 1e-14


def test_entropy_rejects_invalid():
    with pytest.raises(InvalidStateError):
        von_neumann_entropy(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(InvalidStateError):
        von_neumann_entropy(np.eye(2))
    with pytest.raises(InvalidStateError):
        von_neumann_entropy(np.diag([1.1, -0.1]))


def test_entropy_clamps_rounding_negatives():
    rho = np.diag([1 + 5e-11, -5e-11])
    assert von_neumann_entropy(rho) == 0


@pytest.mark.parametrize("seed", range(10))
def test_entropy_unitary_invariance(seed):
    rho = random_density(4, seed=seed)
    u = random_unitary(4, seed=100 + seed)
    assert abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)) < 1e-10


def test_trace_distance_examples():
    rho = random_density(3, seed=1)
    assert trace_distance(rho, rho) == 0
    assert abs(trace_distance(KET0, np.diag([0.0, 1.0])) - 1) < 1e-15
    assert abs(trace_distance(np.eye(2) / 2, KET0) - 0.5) < 1e-15
    with pytest.raises(ValueError):
        trace_distance(np.eye(2) / 2, np.eye(3) / 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_trace_distance_metric(seed):
    a, b, c = (random_density(3, seed=seed + k) for k in range(3))
    dab, dba = trace_distance(a, b), trace_distance(b, a)
    assert abs(dab - dba) < 1e-12
    assert dab <= trace_distance(a, c) + trace_distance(c, b) + 1e-12
    assert 0 <= dab <= 1 + 1e-12


def test_random_density_properties():
    pure = random_density(5, 1, seed=3)
    assert von_neumann_entropy(pure) < 1e-10
    assert np.array_equal(random_density(4, 2, seed=9), random_density(4, 2, seed=9))
    full = random_density(4, 4, seed=2)
    assert np.all(np.linalg.eigvalsh(full) > 0)
    check_density(full)
    assert np.linalg.matrix_rank(random_density(6, 3, seed=1), tol=1e-10) == 3
    with pytest.raises(ValueError):
        random_density(3, 4, seed=0)
    with pytest.raises(ValueError):
        random_density(3, 0, seed=0)


def test_operator_json_round_trip():
    rho = random_density(3, seed=11)
    assert np.array_equal(operator_from_json(operator_to_json(rho)), rho)
