from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctnorm.errors import DimensionCapError, InvalidStateError
from ctnorm.sampling import random_mixed, random_pure
from ctnorm.states import (DensityMatrix, basis_ket, edges_to_adjacency, from_ket, make_ame43,
                           make_ghz, make_graph_state, make_product, make_w, maximally_mixed,
                           mix_with_white_noise, parse_edge_list, partial_trace, purity)

from conftest import CYCLE4


def _check_valid(rho):
    assert np.abs(rho.data - rho.data.conj().T).max() < 1e-10
    assert abs(np.trace(rho.data) - 1) < 1e-10
    assert np.linalg.eigvalsh(rho.data).min() > -1e-8


def test_ghz_qubits():
    rho = make_ghz(3, 2)
    psi = (basis_ket([0, 0, 0], 2) + basis_ket([1, 1, 1], 2)) / np.sqrt(2)
    assert np.allclose(rho.data, np.outer(psi, psi.conj()))
    assert abs(purity(rho) - 1) < 1e-10


@pytest.mark.parametrize("factory", [
    lambda: make_ghz(3, 3), lambda: make_ghz(2, 5), lambda: make_w(4),
    lambda: make_graph_state(CYCLE4), make_ame43, lambda: make_product(3, 3)])
def test_constructors_valid_and_pure(factory):
    rho = factory()
    _check_valid(rho)
    assert abs(purity(rho) - 1) < 1e-10


def test_w_two_qubits():
    psi = (basis_ket([0, 1], 2) + basis_ket([1, 0], 2)) / np.sqrt(2)
    assert np.allclose(make_w(2).data, np.outer(psi, psi.conj()))


def test_w_three_marginal():
    m = partial_trace(make_w(3), [1])
    assert np.allclose(m.data, np.diag([2 / 3, 1 / 3]))
    assert abs(purity(m) - 5 / 9) < 1e-12


def test_graph_state_single_edge_is_lu_bell():
    rho = make_graph_state([[0, 1], [1, 0]])
    # CZ|++> = (|0+> + |1->)/sqrt2; Hadamard on qubit 2 gives the Bell state
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    bell = (basis_ket([0, 0], 2) + basis_ket([1, 1], 2)) / np.sqrt(2)
    u = np.kron(np.eye(2), h)
    assert np.allclose(u @ rho.data @ u.conj().T, np.outer(bell, bell))


def test_empty_graph_is_plus_product():
    rho = make_graph_state(np.zeros((3, 3), dtype=int))
    plus = np.ones(2) / np.sqrt(2)
    assert np.allclose(rho.data, make_product(3, 2, [plus] * 3).data)


@pytest.mark.parametrize("adj", [
    [[0, 1], [0, 0]],             # not symmetric
    [[1, 0], [0, 0]],             # diagonal entry
    [[0, 2], [2, 0]],             # not binary
    [[0, 1, 0], [1, 0, 1]],       # not square
])
def test_graph_state_rejects_bad_adjacency(adj):
    with pytest.raises(InvalidStateError):
        make_graph_state(adj)


def test_edge_list_parsing():
    assert parse_edge_list("1-2, 2-3,3-4,4-1") == [(1, 2), (2, 3), (3, 4), (4, 1)]
    assert np.array_equal(edges_to_adjacency(parse_edge_list("1-2,2-3,3-4,4-1")), CYCLE4)
    assert edges_to_adjacency([(1, 2)], n=4).shape == (4, 4)
    with pytest.raises(InvalidStateError):
        parse_edge_list("1:2")
    with pytest.raises(InvalidStateError):
        edges_to_adjacency([(1, 1)])


def test_ame43_marginals():
    rho = make_ame43()
    for p in range(1, 5):
        assert np.abs(partial_trace(rho, [p]).data - np.eye(3) / 3).max() < 1e-12
    for pair in combinations(range(1, 5), 2):
        assert np.abs(partial_trace(rho, pair).data - np.eye(9) / 9).max() < 1e-12


def test_partial_trace_examples():
    bell = from_ket(basis_ket([0, 0], 2) + basis_ket([1, 1], 2), 2, 2)
    assert np.allclose(partial_trace(bell, [1]).data, np.eye(2) / 2)
    m = partial_trace(make_ghz(3, 3), [1, 2])
    expected = sum(np.outer(basis_ket([i, i], 3), basis_ket([i, i], 3)) for i in range(3)) / 3
    assert np.allclose(m.data, expected)


def test_partial_trace_of_product_is_exact(rng):
    a, b = random_mixed(1, 3, rng), random_mixed(2, 3, rng)
    prod = a.tensor(b)
    assert np.abs(partial_trace(prod, [2, 3]).data - b.data).max() < 1e-14
    assert np.abs(partial_trace(prod, [1]).data - a.data).max() < 1e-14


def test_partial_trace_keeps_party_order(rng):
    a, b, c = (random_mixed(1, 2, rng) for _ in range(3))
    prod = a.tensor(b).tensor(c)
    assert np.allclose(partial_trace(prod, [3, 1]).data, np.kron(a.data, c.data))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(2, 4), d=st.integers(2, 3))
def test_partial_trace_composes(seed, n, d):
    r = np.random.default_rng(seed)
    rho = random_mixed(n, d, r)
    parties = list(range(1, n + 1))
    alpha = sorted(r.choice(parties, size=int(r.integers(1, n + 1)), replace=False).tolist())
    beta = sorted(r.choice(alpha, size=int(r.integers(1, len(alpha) + 1)), replace=False).tolist())
    direct = partial_trace(rho, beta)
    via = partial_trace(partial_trace(rho, alpha), [alpha.index(b) + 1 for b in beta])
    assert np.abs(direct.data - via.data).max() < 1e-12


@pytest.mark.parametrize("keep", [[], [0], [4], [1, 5]])
def test_partial_trace_bad_subset(keep):
    with pytest.raises(InvalidStateError):
        partial_trace(make_ghz(3, 2), keep)


def test_white_noise_endpoints():
    rho = make_ghz(3, 3)
    assert np.array_equal(mix_with_white_noise(rho, 1).data, rho.data)
    assert np.allclose(mix_with_white_noise(rho, 0).data, np.eye(27) / 27)
    for p in (-0.1, 1.5):
        with pytest.raises(InvalidStateError):
            mix_with_white_noise(rho, p)


def test_purity_values():
    assert abs(purity(maximally_mixed(3, 3)) - 3 ** -3) < 1e-15
    p = 0.5
    rho_p = mix_with_white_noise(make_ghz(3, 3), p)
    # eigenvalues: p + (1-p)/27 once, (1-p)/27 with multiplicity 26
    from_eigs = (p + (1 - p) / 27) ** 2 + 26 * ((1 - p) / 27) ** 2
    closed = p ** 2 + 2 * p * (1 - p) / 27 + (1 - p) ** 2 / 27
    assert abs(from_eigs - closed) < 1e-15
    assert abs(purity(rho_p) - closed) < 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 3), d=st.integers(2, 4))
def test_purity_range(seed, n, d):
    rho = random_mixed(n, d, np.random.default_rng(seed))
    assert d ** -n - 1e-12 <= purity(rho) <= 1 + 1e-12


def test_validation_on_construction():
    with pytest.raises(InvalidStateError):
        DensityMatrix(1, 2, np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(1, 2, np.eye(2))
    # negative eigenvalue slips past construction, caught on explicit check
    bad = DensityMatrix(1, 2, np.array([[1.5, 0], [0, -0.5]]))
    with pytest.raises(InvalidStateError):
        bad.validate_positive()


def test_dimension_cap():
    with pytest.raises(DimensionCapError):
        make_ghz(15, 2)
    with pytest.raises(DimensionCapError):
        make_ghz(3, 3, cap=4)
    assert make_ghz(3, 3, cap=5).n == 3


def test_random_states_are_valid(rng):
    _check_valid(random_mixed(3, 2, rng, rank=2))
    assert abs(purity(random_pure(2, 3, rng)) - 1) < 1e-12
