from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctnorm.basis import build_basis
from ctnorm.correlations import (NormTable, all_subsets, correlation_tensor, cx,
                                 norm_table_direct, norm_table_from_tensor, norm_table_moebius,
                                 subset_norm_direct, tensor_element)
from ctnorm.errors import InvalidCutoffError, NumericalIntegrityError
from ctnorm.sampling import random_local_unitary, random_mixed, random_pure
from ctnorm.states import (DensityMatrix, basis_ket, from_ket, make_ame43, make_ghz,
                           make_graph_state, maximally_mixed, mix_with_white_noise, purity)

from conftest import CYCLE4, brute_element, brute_subset_norm

B2, B3 = build_basis(2), build_basis(3)
BELL = from_ket(basis_ket([0, 0], 2) + basis_ket([1, 1], 2), 2, 2)


def test_ghz_stabilizer_elements():
    g = make_ghz(3, 2)
    assert abs(tensor_element(g, B2, (1, 1, 1)) - 1) < 1e-12
    assert abs(tensor_element(g, B2, (1, 2, 2)) + 1) < 1e-12
    assert abs(tensor_element(g, B2, (0, 0, 0)) - 1) < 1e-12


def test_element_matches_kron_oracle(rng):
    rho = random_mixed(3, 3, rng)
    for _ in range(20):
        idx = tuple(rng.integers(0, 9, size=3))
        assert abs(tensor_element(rho, B3, idx) - brute_element(rho, B3, idx).real) < 1e-12


def test_full_tensor_matches_elementwise(rng):
    rho = random_mixed(2, 3, rng)
    t = correlation_tensor(rho, B3)
    for idx in product(range(9), repeat=2):
        assert abs(t[idx] - brute_element(rho, B3, idx).real) < 1e-12


def test_non_hermitian_input_is_rejected():
    rho = make_ghz(2, 2)
    # bypass validation to simulate corrupted data
    bad = object.__new__(DensityMatrix)
    data = rho.data.copy()
    data[0, 3] += 0.1j
    object.__setattr__(bad, "n", 2)
    object.__setattr__(bad, "d", 2)
    object.__setattr__(bad, "data", data)
    with pytest.raises(NumericalIntegrityError):
        tensor_element(bad, B2, (1, 1))
    with pytest.raises(NumericalIntegrityError):
        correlation_tensor(bad, B2)


def test_bell_norm_oracle():
    assert abs(brute_subset_norm(BELL, B2, (1, 2)) - 3) < 1e-12
    assert abs(subset_norm_direct(BELL, B2, (1, 2)) - 3) < 1e-12
    t = correlation_tensor(BELL, B2)
    assert np.allclose([t[1, 1], t[2, 2], t[3, 3]], [1, -1, 1])


def test_ghz33_fullbody_is_20():
    g = make_ghz(3, 3)
    oracle = brute_subset_norm(g, B3, (1, 2, 3))  # all 8**3 elements
    assert abs(oracle - 20) < 1e-10
    assert abs(subset_norm_direct(g, B3, (1, 2, 3)) - 20) < 1e-10
    assert abs(norm_table_moebius(g)[(1, 2, 3)] - 20) < 1e-10


def test_product_norm_is_product(rng):
    a, b = random_mixed(1, 3, rng), random_mixed(2, 3, rng)
    full = subset_norm_direct(a.tensor(b), B3, (1, 2, 3))
    assert abs(full - subset_norm_direct(a, B3, (1,)) * subset_norm_direct(b, B3, (1, 2))) < 1e-10


def test_moebius_ghz_qubits():
    t = norm_table_moebius(make_ghz(3, 2))
    assert abs(t.full_body - 4) < 1e-12
    for a in [(1, 2), (1, 3), (2, 3)]:
        assert abs(t[a] - 1) < 1e-12
    for a in [(1,), (2,), (3,)]:
        assert abs(t[a]) < 1e-12


def test_moebius_cluster():
    t = norm_table_moebius(make_graph_state(CYCLE4))
    assert abs(t.full_body - 5) < 1e-12
    for a in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]:
        assert abs(t[a] - 2) < 1e-12


def test_moebius_ame():
    t = norm_table_moebius(make_ame43())
    for a, v in t.entries.items():
        if len(a) <= 2:
            assert abs(v) < 1e-10
    assert abs(t.total() - 80) < 1e-10


def test_cx_examples():
    assert abs(cx(norm_table_moebius(make_ame43()), 3).value - 80) < 1e-10
    assert abs(cx(norm_table_moebius(make_ghz(3, 3)), 2).value - 26) < 1e-10
    for rho in (make_ghz(3, 2), make_ghz(2, 3), make_graph_state(CYCLE4)):
        assert abs(cx(norm_table_moebius(rho), 0).value - (rho.dim - 1)) < 1e-10


def test_cx_range():
    t = norm_table_moebius(make_ghz(3, 2))
    with pytest.raises(InvalidCutoffError):
        cx(t, 4)
    with pytest.raises(InvalidCutoffError):
        cx(t, -1)
    vals = [cx(t, x).value for x in range(4)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_maximally_mixed_table_is_zero():
    t = norm_table_moebius(maximally_mixed(3, 2))
    assert all(v == 0 for v in t.entries.values())


def test_moebius_clamps_and_flags(monkeypatch):
    from ctnorm import correlations
    rho = make_ghz(2, 2)
    # single-party purity 1/2 gives exactly 0; nudge it below and far below
    tiny = {(): 1.0, (1,): 0.5 - 1e-11, (2,): 0.5, (1, 2): 1.0}
    monkeypatch.setattr(correlations, "marginal_purities", lambda r: tiny)
    assert norm_table_moebius(rho)[(1,)] == 0.0
    broken = {**tiny, (1,): 0.3}
    monkeypatch.setattr(correlations, "marginal_purities", lambda r: broken)
    with pytest.raises(NumericalIntegrityError):
        norm_table_moebius(rho)


def test_table_from_full_tensor(rng):
    rho = random_mixed(3, 2, rng)
    a = norm_table_from_tensor(correlation_tensor(rho), 3, 2)
    b = norm_table_moebius(rho)
    for k in a:
        assert abs(a[k] - b[k]) < 1e-10


def test_norm_table_json_round_trip(rng):
    t = norm_table_moebius(random_mixed(3, 2, rng))
    back = NormTable.from_dict(t.to_dict())
    assert back.entries == t.entries and (back.n, back.d) == (3, 2)
    assert set(t.to_dict()["norms"]) == {"1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"}


# -- properties ------------------------------------------------------------

states_strategy = st.tuples(st.integers(0, 2 ** 32 - 1), st.integers(1, 4), st.integers(2, 3)) \
    .filter(lambda t: t[2] ** t[1] <= 27)


@settings(max_examples=40, deadline=None)
@given(states_strategy)
def test_paths_agree(args):
    seed, n, d = args
    rho = random_mixed(n, d, np.random.default_rng(seed), rank=1 + seed % 3)
    a, b = norm_table_direct(rho), norm_table_moebius(rho)
    for k in a:
        assert abs(a[k] - b[k]) < 1e-8


@settings(max_examples=40, deadline=None)
@given(states_strategy)
def test_purity_identity(args):
    seed, n, d = args
    rho = random_mixed(n, d, np.random.default_rng(seed))
    t = norm_table_moebius(rho)
    assert abs(1 + t.total() - d ** n * purity(rho)) < 1e-8
    assert abs(cx(t, 0).value - (d ** n * purity(rho) - 1)) < 1e-8


@settings(max_examples=30, deadline=None)
@given(states_strategy)
def test_local_unitary_invariance(args):
    seed, n, d = args
    r = np.random.default_rng(seed)
    rho = random_mixed(n, d, r)
    rot = rho.conjugate_by(random_local_unitary(n, d, r))
    a, b = norm_table_moebius(rho), norm_table_moebius(rot)
    for k in a:
        assert abs(a[k] - b[k]) < 1e-8


@settings(max_examples=30, deadline=None)
@given(states_strategy, st.floats(0, 1))
def test_noise_scaling(args, p):
    seed, n, d = args
    rho = random_pure(n, d, np.random.default_rng(seed))
    a, b = norm_table_moebius(rho), norm_table_moebius(mix_with_white_noise(rho, p))
    for k in a:
        assert abs(b[k] - p * p * a[k]) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_partial_sums_lower_bound_subset_norm(seed):
    r = np.random.default_rng(seed)
    rho = random_mixed(3, 2, r)
    t = correlation_tensor(rho)
    for alpha in all_subsets(3):
        sl = tuple(slice(1, None) if p + 1 in alpha else 0 for p in range(3))
        sq = (t[sl] ** 2).reshape(-1)
        mask = r.random(sq.size) < 0.5
        assert sq[mask].sum() <= subset_norm_direct(rho, None, alpha) + 1e-12
