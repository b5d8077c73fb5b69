import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topo_slepians.dictionary import (
    build_dictionary,
    default_concentration_sets,
    dictionary_summary,
    empirical_frame_check,
    fourier_dictionary,
    frame_certificate,
    frame_operator_parts,
    from_records,
    meta_records,
    per_set_bessel_max,
    restrict_plan,
)
from topo_slepians.errors import EmptyDictionary
from topo_slepians.random_complex import random_complex
from topo_slepians.slepian import ConcentrationPair
from topo_slepians.spectral import spectrum_of
from topo_slepians.dictionary import ConcentrationPlan


def _dict(cx, k=None, hops=1):
    sp = spectrum_of(cx)
    plan = default_concentration_sets(cx, sp, hops)
    return sp, plan, build_dictionary(sp, plan, k)


def test_T3_plan_and_atoms(T3):
    sp, plan, d = _dict(T3)
    assert plan.K_d == 3 and plan.K_u == 3
    assert all(p.edge_set == (0, 1, 2) for p in plan.lower_pairs + plan.upper_pairs)
    assert d.size == 9
    assert dictionary_summary(d)["atoms_per_band"] == {"upper": 3, "lower": 6, "harmonic": 0}
    # upper sets come first
    assert [m.band for m in d.meta[:3]] == ["upper"] * 3
    assert np.allclose(np.linalg.norm(d.atoms, axis=0), 1)


def test_T3_certificate(T3):
    _, _, d = _dict(T3)
    cert = frame_certificate(d)
    # three copies of each band's orthonormal basis: D D^T = 3 I
    assert np.allclose(d.atoms @ d.atoms.T, 3 * np.eye(3))
    assert abs(cert.A - 3) < 1e-10 and abs(cert.B_rr - 3) < 1e-10
    assert cert.B_thm == 6
    assert cert.lower_complete and cert.upper_complete and cert.a_positive and cert.consistent


def test_T3_k_tilde_one(T3):
    _, _, d = _dict(T3, k=1)
    assert d.size == 6


def test_H3_has_empty_upper_band(H3):
    sp, plan, d = _dict(H3)
    assert plan.upper_band_empty and plan.K_u == 0
    assert d.size == 7 and d.K_h == 1
    cert = frame_certificate(d)
    assert cert.upper_band_empty and cert.upper_complete and cert.a_positive
    assert cert.B_thm == 4
    assert np.allclose(d.band_atoms("harmonic")[:, 0], np.array([1, -1, 1]) / np.sqrt(3))


def test_negative_control_restricted_lower_sets(two_triangles):
    sp, plan, _ = _dict(two_triangles)
    assert sp.n_grad == 3
    bad = restrict_plan(plan, [0], "lower")
    d = build_dictionary(sp, bad)
    cert = frame_certificate(d)
    assert not cert.lower_complete
    assert cert.A <= 1e-8 and not cert.a_positive
    assert cert.consistent


def test_restrict_plan_errors(T3):
    sp, plan, _ = _dict(T3)
    with pytest.raises(ValueError):
        restrict_plan(plan, [0], "sideways")
    assert restrict_plan(plan, [0], "upper").K_u == 3


def test_empty_dictionary(T3):
    sp = spectrum_of(T3)
    with pytest.raises(EmptyDictionary):
        build_dictionary(sp, ConcentrationPlan((), ()))


def test_fourier_dictionary_is_tight(two_triangles):
    sp = spectrum_of(two_triangles)
    d = fourier_dictionary(sp)
    cert = frame_certificate(d)
    assert d.size == 5
    assert abs(cert.A - 1) < 1e-10 and abs(cert.B_rr - 1) < 1e-10
    assert np.allclose(d.atoms.T @ d.atoms, np.eye(5), atol=1e-10)


def _corpus(n=8, seed=3):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        cx = random_complex(rng, int(rng.integers(5, 12)), edge_prob=0.5, triangle_prob=0.6, connected=True)
        if cx.count(2):
            out.append(cx)
    return out


@pytest.mark.parametrize("cx", _corpus(), ids=lambda c: f"E{c.count(1)}T{c.count(2)}")
def test_random_complex_frame_properties(cx):
    sp, plan, d = _dict(cx)
    E = cx.count(1)
    assert plan.coverage(E) == (True, True)
    assert plan.cardinality_ok(sp) == (True, True)
    cert = frame_certificate(d)
    assert cert.lower_complete and cert.upper_complete
    assert cert.A > 1e-8 and cert.frame_operator_rank == E
    assert cert.B_rr <= cert.B_thm + 1e-8
    # frame operator splits across bands with no cross terms
    parts = frame_operator_parts(d)
    G, H = sp.gradient_basis, sp.solenoidal_basis
    assert np.allclose(parts["lower"] @ H, 0, atol=1e-8)
    assert np.allclose(parts["upper"] @ G, 0, atol=1e-8)
    assert np.allclose(sum(parts.values()), d.atoms @ d.atoms.T)
    # every Slepian set is orthonormal, hence a Bessel sequence with bound 1
    assert per_set_bessel_max(d) <= 1 + 1e-8
    report = empirical_frame_check(d, cert, trials=500, seed=1)
    assert report.violations == 0
    assert report.min_quotient >= cert.A - 1e-8
    # the lower bound is attained by the bottom eigenvector
    w, V = np.linalg.eigh(d.atoms @ d.atoms.T)
    q = ((d.atoms.T @ V[:, 0]) ** 2).sum()
    assert abs(q - cert.A) < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3))
def test_k_tilde_caps_set_sizes(seed, k):
    cx = random_complex(np.random.default_rng(seed), 8, edge_prob=0.5, triangle_prob=0.6, connected=True)
    sp, plan, d = _dict(cx, k=k)
    ranks = [m.rank for m in d.meta if m.band != "harmonic"]
    assert not ranks or max(ranks) < k
    # concentrations within each set are non-increasing
    by_set = {}
    for m in d.meta:
        by_set.setdefault((m.band, m.pair_index), []).append(m.concentration)
    for vals in by_set.values():
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_records_round_trip(two_triangles):
    _, _, d = _dict(two_triangles)
    back = from_records(d.atoms, meta_records(d), dictionary_summary(d))
    assert back.meta == d.meta
    assert frame_certificate(back) == frame_certificate(d)


def test_wider_neighborhoods_do_not_shrink(two_triangles):
    _, _, d1 = _dict(two_triangles, hops=1)
    _, _, d2 = _dict(two_triangles, hops=2)
    assert frame_certificate(d2).A >= frame_certificate(d1).A - 1e-10


def test_explicit_pair_list(T3):
    sp = spectrum_of(T3)
    plan = ConcentrationPlan((ConcentrationPair([0], sp.grad_freqs),), (ConcentrationPair([0, 1, 2], sp.sol_freqs),))
    d = build_dictionary(sp, plan)
    cert = frame_certificate(d)
    assert d.size == 2
    assert not cert.lower_complete and not cert.a_positive
