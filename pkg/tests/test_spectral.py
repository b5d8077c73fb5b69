import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import complexes
from topo_slepians.complex import incidence, laplacian
from topo_slepians.errors import DimensionMismatch
from topo_slepians.spectral import (
    TAU_ORTH,
    fix_signs,
    hodge_decompose,
    hodge_spectrum,
    inverse_sft,
    sft,
    spectrum_of,
)


def test_T3_partition(T3):
    sp = spectrum_of(T3)
    assert (sp.n_grad, sp.n_sol, sp.n_harm) == (2, 1, 0)
    assert np.allclose(sp.gradient_eigs, [3, 3])
    assert np.allclose(sp.solenoidal_eigs, [3])
    assert sp.grad_freqs == [0, 1] and sp.sol_freqs == [2]


def test_H3_partition(H3):
    sp = spectrum_of(H3)
    assert (sp.n_grad, sp.n_sol, sp.n_harm) == (2, 0, 1)
    # sign convention: first of the equal-magnitude entries is positive
    assert np.allclose(sp.harmonic_basis[:, 0], np.array([1, -1, 1]) / np.sqrt(3))


@settings(max_examples=50, deadline=None)
@given(complexes())
def test_basis_orthonormal_and_partitioned(cx):
    sp = spectrum_of(cx)
    U = sp.U
    E = cx.count(1)
    assert sp.consistent
    assert U.shape == (E, E)
    assert np.abs(U.T @ U - np.eye(E)).max() <= TAU_ORTH
    B1 = incidence(cx, 1)
    B2 = incidence(cx, 2)
    assert sp.n_grad == np.linalg.matrix_rank(B1)
    assert sp.n_sol == (np.linalg.matrix_rank(B2) if B2.size else 0)
    # each basis vector is an eigenvector of L with the recorded eigenvalue
    L = laplacian(cx, 1).L
    assert np.allclose(L @ U, U * sp.eigenvalues, atol=1e-8)


def test_sign_convention():
    V = np.array([[0.2, -0.6], [-0.9, 0.6], [0.1, 0.1]])
    out = fix_signs(V)
    assert out[1, 0] == 0.9
    # tie between rows 0 and 1 goes to row 0
    assert out[0, 1] == 0.6 and out[1, 1] == -0.6


def test_sft_examples(T3, H3):
    sp = spectrum_of(T3)
    u = sp.gradient_basis[:, 0]
    coeffs = sft(sp, u)
    assert np.allclose(coeffs, np.eye(3)[0], atol=TAU_ORTH)
    assert not sft(sp, np.zeros(3)).any()

    sh = spectrum_of(H3)
    c = sft(sh, np.array([1, -1, 1]) / np.sqrt(3))
    assert np.allclose(c[:2], 0, atol=TAU_ORTH)
    assert abs(c[2] - 1) < TAU_ORTH


def test_sft_dimension_mismatch(T3):
    sp = spectrum_of(T3)
    with pytest.raises(DimensionMismatch):
        sft(sp, np.ones(4))
    with pytest.raises(DimensionMismatch):
        inverse_sft(sp, np.ones(2))


@settings(max_examples=50, deadline=None)
@given(complexes(), st.integers(0, 2**31))
def test_parseval_and_inverse(cx, seed):
    sp = spectrum_of(cx)
    x = np.random.default_rng(seed).standard_normal(cx.count(1))
    c = sft(sp, x)
    assert abs(np.linalg.norm(c) - np.linalg.norm(x)) <= 1e-10 * np.linalg.norm(x)
    assert np.linalg.norm(inverse_sft(sp, c) - x) <= TAU_ORTH * np.linalg.norm(x)


def test_pure_gradient_input(two_triangles, rng):
    B1 = incidence(two_triangles, 1)
    x = B1.T @ rng.standard_normal(4)
    irr, sol, harm = hodge_decompose(two_triangles, x)
    assert np.linalg.norm(sol) < TAU_ORTH and np.linalg.norm(harm) < TAU_ORTH
    assert np.allclose(irr, x)


def test_curl_input_T3(T3):
    x = np.array([1.0, -1.0, 1.0])
    irr, sol, harm = hodge_decompose(T3, x)
    assert np.linalg.norm(irr) < TAU_ORTH and np.linalg.norm(harm) < TAU_ORTH
    assert not (incidence(T3, 1) @ x).any()
    assert np.allclose(sol, x)


def test_harmonic_input_H3(H3):
    x = np.array([1.0, -1.0, 1.0])
    irr, sol, harm = hodge_decompose(H3, x)
    assert np.allclose(harm, x)
    assert not (incidence(H3, 1) @ x).any()
    assert incidence(H3, 2).shape == (3, 0)


@settings(max_examples=50, deadline=None)
@given(complexes(), st.integers(0, 2**31))
def test_hodge_decomposition_properties(cx, seed):
    x = np.random.default_rng(seed).standard_normal(cx.count(1))
    n = np.linalg.norm(x)
    irr, sol, harm = hodge_decompose(cx, x)
    assert np.linalg.norm(irr + sol + harm - x) <= TAU_ORTH * n
    for a, b in ((irr, sol), (irr, harm), (sol, harm)):
        assert abs(a @ b) <= TAU_ORTH * n * n
    B1 = incidence(cx, 1).astype(float)
    B2 = incidence(cx, 2).astype(float)
    assert np.linalg.norm(B1 @ sol) <= TAU_ORTH * n
    assert np.linalg.norm(B2.T @ irr) <= TAU_ORTH * n
    assert np.linalg.norm(B1 @ harm) <= TAU_ORTH * n
    assert np.linalg.norm(B2.T @ harm) <= TAU_ORTH * n
    # idempotence
    irr2, sol2, harm2 = hodge_decompose(cx, irr)
    assert np.linalg.norm(irr2 - irr) <= TAU_ORTH * n
    assert np.linalg.norm(sol2) <= TAU_ORTH * n and np.linalg.norm(harm2) <= TAU_ORTH * n


@settings(max_examples=30, deadline=None)
@given(complexes(), st.integers(0, 2**31))
def test_decomposition_agrees_with_spectral_projection(cx, seed):
    sp = spectrum_of(cx)
    x = np.random.default_rng(seed).standard_normal(cx.count(1))
    irr, sol, harm = hodge_decompose(cx, x)
    G, S, H = sp.gradient_basis, sp.solenoidal_basis, sp.harmonic_basis
    assert np.allclose(irr, G @ (G.T @ x), atol=1e-8)
    assert np.allclose(sol, S @ (S.T @ x), atol=1e-8)
    assert np.allclose(harm, H @ (H.T @ x), atol=1e-8)


def test_explicit_tolerance(T3):
    sp = hodge_spectrum(laplacian(T3, 1), tol=5.0)
    # every eigenvalue (3) falls under the threshold
    assert sp.n_grad == 0 and sp.n_sol == 0
    assert not sp.consistent or sp.n_harm == 3
