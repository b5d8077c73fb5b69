"""Slepian dictionaries built from sequences of concentration pairs, and
frame-bound certificates for them."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .complex import SimplicialComplex, lower_neighborhoods, upper_neighborhoods
from .errors import EmptyDictionary
from .slepian import DEFAULT_TOL, ConcentrationPair, solve_slepians
from .spectral import TAU_ORTH, HodgeSpectrum

TAU_RANK = 1e-8

BANDS = ("upper", "lower", "harmonic")


@dataclass(frozen=True)
class ConcentrationPlan:
    """Lower pairs use the gradient band, upper pairs the solenoidal band."""

    lower_pairs: tuple[ConcentrationPair, ...]
    upper_pairs: tuple[ConcentrationPair, ...]
    upper_band_empty: bool = False
    lower_band_empty: bool = False

    @property
    def K_d(self) -> int:
        return len(self.lower_pairs)

    @property
    def K_u(self) -> int:
        return len(self.upper_pairs)

    def coverage(self, n_edges: int) -> tuple[bool, bool]:
        """Whether the lower (resp. upper) edge sets cover every edge.

        An empty band counts as covered, since there is nothing to span.
        """
        full = set(range(n_edges))

        def covers(pairs, empty):
            if empty:
                return True
            return set().union(*(p.edge_set for p in pairs)) == full if pairs else False

        return covers(self.lower_pairs, self.lower_band_empty), covers(self.upper_pairs, self.upper_band_empty)

    def cardinality_ok(self, spectrum: HodgeSpectrum) -> tuple[bool, bool]:
        return self.K_d >= spectrum.n_grad, self.K_u >= spectrum.n_sol


def default_concentration_sets(
    cx: SimplicialComplex, spectrum: HodgeSpectrum, hops: int = 1
) -> ConcentrationPlan:
    """One lower and one upper pair per edge, from its ``hops``-hop neighborhoods.

    A band with no frequencies (e.g. no triangles, so no solenoidal band)
    contributes no pairs and is flagged on the plan.
    """
    F_d, F_u = spectrum.grad_freqs, spectrum.sol_freqs
    lower = tuple(ConcentrationPair(S, F_d) for S in lower_neighborhoods(cx, hops)) if F_d else ()
    upper = tuple(ConcentrationPair(S, F_u) for S in upper_neighborhoods(cx, hops)) if F_u else ()
    return ConcentrationPlan(lower, upper, upper_band_empty=not F_u, lower_band_empty=not F_d)


def singleton_frequency_plan(spectrum: HodgeSpectrum) -> ConcentrationPlan:
    """Plan whose dictionary is exactly the Fourier basis (one pair per frequency)."""
    every = range(spectrum.size)
    lower = tuple(ConcentrationPair(every, [j]) for j in spectrum.grad_freqs)
    upper = tuple(ConcentrationPair(every, [j]) for j in spectrum.sol_freqs)
    return ConcentrationPlan(lower, upper, not upper, not lower)


def restrict_plan(plan: ConcentrationPlan, keep_edges: Iterable[int], band: str = "lower") -> ConcentrationPlan:
    """Intersect every edge set of one band with ``keep_edges``; empty sets are dropped."""
    keep = set(keep_edges)

    def cut(pairs):
        out = []
        for p in pairs:
            S = [e for e in p.edge_set if e in keep]
            if S:
                out.append(ConcentrationPair(S, p.freq_set))
        return tuple(out)

    if band == "lower":
        return ConcentrationPlan(cut(plan.lower_pairs), plan.upper_pairs, plan.upper_band_empty, plan.lower_band_empty)
    if band == "upper":
        return ConcentrationPlan(plan.lower_pairs, cut(plan.upper_pairs), plan.upper_band_empty, plan.lower_band_empty)
    raise ValueError(f"unknown band {band!r}")


@dataclass(frozen=True)
class AtomMeta:
    band: str  # "upper" | "lower" | "harmonic"
    pair_index: int  # index within its band's pair list (harmonic: kernel column)
    rank: int  # position within its Slepian set, 0 = most concentrated
    concentration: float


@dataclass(frozen=True)
class SlepianDictionary:
    atoms: np.ndarray  # E x M
    meta: tuple[AtomMeta, ...]
    K_d: int
    K_u: int
    K_h: int
    n_grad: int
    n_sol: int
    k_tilde: int | None = None
    plan: ConcentrationPlan | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.atoms.shape[1]

    def band_columns(self, band: str) -> np.ndarray:
        return np.array([i for i, m in enumerate(self.meta) if m.band == band], dtype=int)

    def band_atoms(self, band: str) -> np.ndarray:
        return self.atoms[:, self.band_columns(band)]


def build_dictionary(
    spectrum: HodgeSpectrum,
    plan: ConcentrationPlan,
    k_tilde: int | None = None,
    tol: float = DEFAULT_TOL,
) -> SlepianDictionary:
    """Concatenate the Slepian sets of every pair, then the harmonic eigenvectors.

    Column order: all upper sets, all lower sets, harmonic basis. Each set
    contributes ``min(k_tilde, rank(B_F C_S B_F))`` atoms.
    """
    blocks: list[np.ndarray] = []
    meta: list[AtomMeta] = []
    for band, pairs in (("upper", plan.upper_pairs), ("lower", plan.lower_pairs)):
        for i, pair in enumerate(pairs):
            sset = solve_slepians(spectrum, pair, k_max=k_tilde, tol=tol)
            if len(sset) == 0:
                continue
            blocks.append(sset.vectors)
            meta.extend(AtomMeta(band, i, r, float(lam)) for r, lam in enumerate(sset.concentrations))
    H = spectrum.harmonic_basis
    if H.shape[1]:
        blocks.append(H)
        meta.extend(AtomMeta("harmonic", j, 0, 1.0) for j in range(H.shape[1]))
    if not blocks:
        raise EmptyDictionary("every concentration pair produced an empty Slepian set")
    return SlepianDictionary(
        atoms=np.hstack(blocks),
        meta=tuple(meta),
        K_d=plan.K_d,
        K_u=plan.K_u,
        K_h=spectrum.n_harm,
        n_grad=spectrum.n_grad,
        n_sol=spectrum.n_sol,
        k_tilde=k_tilde,
        plan=plan,
    )


def fourier_dictionary(spectrum: HodgeSpectrum) -> SlepianDictionary:
    """The orthonormal Fourier basis wrapped as a (tight-frame) dictionary."""
    return build_dictionary(spectrum, singleton_frequency_plan(spectrum))


def _numerical_rank(G: np.ndarray, rel: float = TAU_RANK) -> int:
    if G.size == 0:
        return 0
    w = np.linalg.eigvalsh(G)
    top = float(w[-1])
    if top <= 0:
        return 0
    return int(np.sum(w > rel * max(top, 1.0)))


def frame_operator_parts(dictionary: SlepianDictionary) -> dict[str, np.ndarray]:
    """Per-band frame operators; their sum is ``D @ D.T``."""
    parts = {}
    for band in BANDS:
        P = dictionary.band_atoms(band)
        parts[band] = P @ P.T
    return parts


@dataclass(frozen=True)
class FrameCertificate:
    A: float  # lambda_min of the frame operator, clipped at 0
    B_rr: float  # lambda_max of the frame operator
    B_thm: int  # K_d + K_u + K_h
    lower_complete: bool
    upper_complete: bool
    frame_operator_rank: int
    dimension: int
    K_d: int
    K_u: int
    K_h: int
    upper_band_empty: bool
    a_positive: bool
    # A > tol exactly when both completeness conditions hold
    consistent: bool

    def to_dict(self) -> dict:
        return asdict(self)


def frame_certificate(dictionary: SlepianDictionary, tol: float = TAU_RANK) -> FrameCertificate:
    """Frame bounds of a dictionary together with the completeness diagnostics."""
    D = dictionary.atoms
    E = D.shape[0]
    G = D @ D.T
    w = np.linalg.eigvalsh(G)
    A = max(float(w[0]), 0.0)
    B_rr = float(w[-1])
    parts = frame_operator_parts(dictionary)
    lower_complete = _numerical_rank(parts["lower"]) == dictionary.n_grad
    upper_complete = _numerical_rank(parts["upper"]) == dictionary.n_sol
    a_positive = A > tol
    return FrameCertificate(
        A=A,
        B_rr=B_rr,
        B_thm=dictionary.K_d + dictionary.K_u + dictionary.K_h,
        lower_complete=lower_complete,
        upper_complete=upper_complete,
        frame_operator_rank=_numerical_rank(G),
        dimension=E,
        K_d=dictionary.K_d,
        K_u=dictionary.K_u,
        K_h=dictionary.K_h,
        upper_band_empty=dictionary.n_sol == 0,
        a_positive=a_positive,
        consistent=a_positive == (lower_complete and upper_complete),
    )


@dataclass(frozen=True)
class FrameCheckReport:
    trials: int
    min_quotient: float
    max_quotient: float
    lower_violations: int
    upper_violations: int

    @property
    def violations(self) -> int:
        return self.lower_violations + self.upper_violations


def frame_quotients(atoms: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``sum_psi <psi, v>^2 / ||v||^2`` for each column ``v`` of ``V``."""
    C = atoms.T @ V
    return (C ** 2).sum(axis=0) / (V ** 2).sum(axis=0)


def empirical_frame_check(
    dictionary: SlepianDictionary,
    certificate: FrameCertificate,
    trials: int = 1000,
    seed: int | None = 0,
    tol: float = TAU_ORTH,
) -> FrameCheckReport:
    """Check the frame inequality on ``trials`` random unit vectors."""
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((dictionary.atoms.shape[0], trials))
    V /= np.linalg.norm(V, axis=0)
    q = frame_quotients(dictionary.atoms, V)
    return FrameCheckReport(
        trials=trials,
        min_quotient=float(q.min()),
        max_quotient=float(q.max()),
        lower_violations=int(np.sum(q < certificate.A - tol)),
        upper_violations=int(np.sum(q > certificate.B_thm + tol)),
    )


def per_set_bessel_max(dictionary: SlepianDictionary) -> float:
    """Largest operator norm among the per-pair Gram blocks (1 for orthonormal sets)."""
    groups: dict[tuple[str, int], list[int]] = {}
    for i, m in enumerate(dictionary.meta):
        groups.setdefault((m.band, m.pair_index if m.band != "harmonic" else 0), []).append(i)
    worst = 0.0
    for cols in groups.values():
        P = dictionary.atoms[:, cols]
        worst = max(worst, float(np.linalg.norm(P, 2) ** 2))
    return worst


def dictionary_summary(dictionary: SlepianDictionary) -> dict:
    counts = {band: int(len(dictionary.band_columns(band))) for band in BANDS}
    return {
        "atoms": dictionary.size,
        "dimension": int(dictionary.atoms.shape[0]),
        "k_tilde": dictionary.k_tilde,
        "atoms_per_band": counts,
        "K_d": dictionary.K_d,
        "K_u": dictionary.K_u,
        "K_h": dictionary.K_h,
        "n_grad": dictionary.n_grad,
        "n_sol": dictionary.n_sol,
    }


def meta_records(dictionary: SlepianDictionary) -> list[dict]:
    return [asdict(m) for m in dictionary.meta]


def from_records(
    atoms: np.ndarray,
    records: Sequence[dict],
    summary: dict,
) -> SlepianDictionary:
    """Rebuild a dictionary from its serialized atoms, meta records and summary."""
    meta = tuple(
        AtomMeta(r["band"], int(r["pair_index"]), int(r["rank"]), float(r["concentration"]))
        for r in records
    )
    return SlepianDictionary(
        atoms=np.asarray(atoms, dtype=float),
        meta=meta,
        K_d=int(summary["K_d"]),
        K_u=int(summary["K_u"]),
        K_h=int(summary["K_h"]),
        n_grad=int(summary["n_grad"]),
        n_sol=int(summary["n_sol"]),
        k_tilde=summary.get("k_tilde"),
    )
