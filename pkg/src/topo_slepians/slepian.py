"""Edge/band localization operators and topological Slepian eigenproblems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EigenFailure, EmptySet, IndexOutOfRange
from .spectral import HodgeSpectrum, fix_signs

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ConcentrationPair:
    """An edge concentration set and a frequency concentration set (0-based)."""

    edge_set: tuple[int, ...]
    freq_set: tuple[int, ...]

    def __init__(self, edge_set: Iterable[int], freq_set: Iterable[int]):
        object.__setattr__(self, "edge_set", tuple(sorted({int(i) for i in edge_set})))
        object.__setattr__(self, "freq_set", tuple(sorted({int(i) for i in freq_set})))

    def validate(self, n_edges: int, n_freqs: int | None = None) -> None:
        n_freqs = n_edges if n_freqs is None else n_freqs
        _check_set(self.edge_set, n_edges, "edge")
        _check_set(self.freq_set, n_freqs, "frequency")


def _check_set(idx: Iterable[int], n: int, what: str) -> list[int]:
    idx = sorted({int(i) for i in idx})
    if not idx:
        raise EmptySet(f"empty {what} set")
    if idx[0] < 0 or idx[-1] >= n:
        raise IndexOutOfRange(f"{what} index outside [0, {n})")
    return idx


@dataclass(frozen=True)
class SlepianSet:
    vectors: np.ndarray  # E x C, orthonormal columns
    concentrations: np.ndarray  # descending, in (0, 1]
    pair: ConcentrationPair

    def __len__(self) -> int:
        return self.vectors.shape[1]


def edge_limiter(S: Iterable[int], E: int) -> np.ndarray:
    """Diagonal projector ``diag(1_S)``."""
    idx = _check_set(S, E, "edge")
    d = np.zeros(E)
    d[idx] = 1.0
    return np.diag(d)


def band_limiter(spectrum: HodgeSpectrum, F: Iterable[int]) -> np.ndarray:
    """Spectral projector ``U_F @ U_F.T`` onto the frequencies in ``F``."""
    U = spectrum.U
    idx = _check_set(F, U.shape[1], "frequency")
    UF = U[:, idx]
    return UF @ UF.T


def _sorted_eigh(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def _truncate(w, V, tol, k_max):
    keep = w > tol
    w, V = w[keep], V[:, keep]
    if k_max is not None:
        w, V = w[:k_max], V[:, :k_max]
    return w, V


def solve_slepians(
    spectrum: HodgeSpectrum,
    pair: ConcentrationPair,
    k_max: int | None = None,
    tol: float = DEFAULT_TOL,
) -> SlepianSet:
    """Maximally edge-concentrated, perfectly band-limited signals.

    Solved in band coordinates: with ``U_F`` the selected eigenvectors, the
    eigenvectors ``z`` of ``M = U_F.T C_S U_F`` give ``psi = U_F z`` with the
    same concentration values as ``B_F C_S B_F``. Eigenpairs with value
    ``<= tol`` are discarded and at most ``k_max`` are kept. When ``|S| < |F|``
    the same eigenpairs are read off the thin SVD of ``U_F[S]``.
    """
    U = spectrum.U
    E, n_freq = U.shape
    S = _check_set(pair.edge_set, E, "edge")
    F = _check_set(pair.freq_set, n_freq, "frequency")
    if k_max is not None and k_max < 1:
        raise ValueError("k_max must be positive")
    UF = U[:, F]
    rows = UF[S]
    if len(S) < len(F):
        # nonzero eigenpairs of rows.T @ rows from the thin SVD of rows
        try:
            _, sv, Zt = np.linalg.svd(rows, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise EigenFailure(str(exc)) from exc
        w, Z = _truncate(sv**2, Zt.T, tol, k_max)
    else:
        w, Z = _truncate(*_sorted_eigh(rows.T @ rows), tol, k_max)
    psi = fix_signs(UF @ Z)
    return SlepianSet(psi, w, pair)


def dual_slepians(
    spectrum: HodgeSpectrum,
    pair: ConcentrationPair,
    k_max: int | None = None,
    tol: float = DEFAULT_TOL,
) -> SlepianSet:
    """Maximally band-concentrated signals perfectly supported on the edge set.

    Eigenvectors of ``B_F`` restricted to the rows and columns in ``S``,
    embedded back into R^E (zero off ``S``).
    """
    U = spectrum.U
    E, n_freq = U.shape
    S = _check_set(pair.edge_set, E, "edge")
    F = _check_set(pair.freq_set, n_freq, "frequency")
    if k_max is not None and k_max < 1:
        raise ValueError("k_max must be positive")
    rows = U[np.ix_(S, F)]
    M = rows @ rows.T
    w, Z = _truncate(*_sorted_eigh(M), tol, k_max)
    psi = np.zeros((E, Z.shape[1]))
    psi[S] = Z
    return SlepianSet(fix_signs(psi), w, pair)


def concentration(psi: np.ndarray, S: Iterable[int]) -> np.ndarray:
    """Energy fraction of each column of ``psi`` inside ``S``."""
    psi = np.atleast_2d(np.asarray(psi, dtype=float).T).T
    idx = list(S)
    return (psi[idx] ** 2).sum(axis=0) / (psi ** 2).sum(axis=0)
