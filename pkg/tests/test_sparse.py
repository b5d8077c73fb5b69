from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topo_slepians.dictionary import build_dictionary, default_concentration_sets
from topo_slepians.errors import DimensionMismatch, MaxIterExceeded, NoProgress, ZeroSignal
from topo_slepians.sparse import l0_for_tolerances, nmse, omp_error, omp_path, omp_sparsity
from topo_slepians.spectral import spectrum_of


def naive_omp(D, x, s):
    """Textbook OMP with a fresh least-squares solve at every step."""
    support, r = [], x.copy()
    for _ in range(s):
        corr = np.abs(D.T @ r)
        corr[support] = -1
        support.append(int(np.argmax(corr)))
        c, *_ = np.linalg.lstsq(D[:, support], x, rcond=None)
        r = x - D[:, support] @ c
    return support, c, r


def best_subset_residual(D, x, s):
    best = np.inf
    for sub in combinations(range(D.shape[1]), s):
        c, *_ = np.linalg.lstsq(D[:, sub], x, rcond=None)
        best = min(best, float(np.linalg.norm(x - D[:, sub] @ c)))
    return best


def unit_columns(rng, E, M):
    D = rng.standard_normal((E, M))
    return D / np.linalg.norm(D, axis=0)


def test_single_atom_signal():
    D = np.eye(3)
    code = omp_error(D, np.array([0.0, 2.0, 0.0]), 1e-10)
    assert code.support == (1,)
    assert np.allclose(code.coefficients, [2.0])
    assert code.residual_norm == 0.0 and code.converged


def test_large_tolerance_gives_empty_code():
    x = np.array([0.6, 0.8, 0.0])
    code = omp_error(np.eye(3), x, 1.0)
    assert code.l0 == 0 and code.converged
    assert np.array_equal(code.reconstruct(np.eye(3)), np.zeros(3))


def test_orthonormal_two_sparse():
    U = np.linalg.qr(np.random.default_rng(0).standard_normal((3, 3)))[0]
    x = 0.8 * U[:, 0] + 0.6 * U[:, 2]
    code = omp_sparsity(U, x, 2)
    assert code.support == (0, 2)
    assert np.allclose(code.coefficients, [0.8, 0.6])
    assert code.residual_norm < 1e-12


def test_full_T3_dictionary_reaches_tolerance(T3, rng):
    sp = spectrum_of(T3)
    d = build_dictionary(sp, default_concentration_sets(T3, sp))
    x = rng.standard_normal(3)
    code = omp_error(d, x, 1e-12 * (x @ x))
    assert code.converged and code.l0 <= 3
    assert np.linalg.norm(x - code.reconstruct(d)) ** 2 <= 1e-12 * (x @ x)


def test_ties_go_to_lowest_index():
    D = np.eye(2)
    code = omp_sparsity(D, np.array([1.0, 1.0]), 1)
    assert code.support == (0,)


def test_duplicate_atoms_raise_no_progress():
    # after picking atom 0 the remaining correlation is zero with a nonzero residual
    D = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
    with pytest.raises(NoProgress) as info:
        omp_error(D, np.array([1.0, 1.0, 0.0]), 1e-6)
    assert info.value.partial.support == (0,)


def test_max_iter_exceeded():
    x = np.array([1.0, 1.0, 1.0])
    code = omp_error(np.eye(3), x, 1e-6, max_iter=1)
    assert not code.converged and code.l0 == 1
    with pytest.raises(MaxIterExceeded):
        omp_error(np.eye(3), x, 1e-6, max_iter=1, strict=True)


def test_input_validation():
    with pytest.raises(ValueError):
        omp_error(np.eye(2) * 2, np.ones(2), 0.1)
    with pytest.raises(DimensionMismatch):
        omp_error(np.eye(2), np.ones(3), 0.1)
    with pytest.raises(ValueError):
        omp_error(np.eye(2), np.ones(2), 0.0)
    with pytest.raises(ValueError):
        omp_sparsity(np.eye(2), np.ones(2), 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(4, 10), st.integers(1, 3))
def test_matches_naive_omp(seed, E, s):
    rng = np.random.default_rng(seed)
    D = unit_columns(rng, E, 12)
    x = rng.standard_normal(E)
    code = omp_sparsity(D, x, s)
    sup, c, r = naive_omp(D, x, s)
    assert list(code.support) == sup
    assert np.allclose(code.coefficients, c, atol=1e-8)
    assert abs(code.residual_norm - np.linalg.norm(r)) < 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_residual_orthogonal_and_monotone(seed):
    rng = np.random.default_rng(seed)
    D = unit_columns(rng, 10, 15)
    x = rng.standard_normal(10)
    codes = omp_path(D, x, range(1, 8))
    prev = np.linalg.norm(x)
    for s, code in codes.items():
        r = x - code.reconstruct(D)
        assert np.abs(D[:, list(code.support)].T @ r).max() <= 1e-8 * np.linalg.norm(x)
        assert code.residual_norm <= prev + 1e-12
        prev = code.residual_norm
    assert np.all(np.diff(codes[7].residual_path) < 0)


def test_planted_support_recovered():
    rng = np.random.default_rng(7)
    D = unit_columns(rng, 8, 12)
    x = D[:, [2, 9]] @ np.array([1.0, -0.7])
    code = omp_sparsity(D, x, 2)
    assert best_subset_residual(D, x, 2) < 1e-10
    assert code.residual_norm < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_omp_path_matches_separate_runs(seed):
    rng = np.random.default_rng(seed)
    D = unit_columns(rng, 9, 14)
    x = rng.standard_normal(9)
    path = omp_path(D, x, [1, 3, 5])
    for s in (1, 3, 5):
        single = omp_sparsity(D, x, s)
        assert path[s].support == single.support
        assert np.allclose(path[s].coefficients, single.coefficients, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_tolerance_grid_matches_separate_runs(seed):
    rng = np.random.default_rng(seed)
    D = unit_columns(rng, 9, 14)
    x = rng.standard_normal(9)
    x /= np.linalg.norm(x)
    eps = [1e-3, 1e-2, 0.1, 0.5, 2.0]
    grid = l0_for_tolerances(D, x, eps)
    for e in eps:
        single = omp_error(D, x, e)
        assert grid[e].support == single.support
        assert abs(grid[e].residual_norm - single.residual_norm) < 1e-10
    assert grid[2.0].l0 == 0
    assert [grid[e].l0 for e in eps] == sorted((grid[e].l0 for e in eps), reverse=True)


def test_nmse_values():
    x = np.array([1.0, 0.0])
    assert nmse(x, x) == 0.0
    assert nmse(x, np.zeros(2)) == 1.0
    assert nmse(x, np.array([0.5, 0.0])) == 0.25
    with pytest.raises(ZeroSignal):
        nmse(np.zeros(2), x)
    with pytest.raises(DimensionMismatch):
        nmse(x, np.ones(3))
