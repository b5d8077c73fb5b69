"""Hodge spectrum of the edge Laplacian, simplicial Fourier transform and
Hodge decomposition of edge flows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import LaplacianTriple, SimplicialComplex, incidence, laplacian
from .errors import DimensionMismatch, EigenFailure

TAU_ORTH = 1e-8
TAU_RANK_REL = 1e-8


def fix_signs(V: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive.

    Near-ties (within 1e-9 relative) go to the smallest index.
    """
    V = np.array(V, dtype=float, copy=True)
    if V.size == 0:
        return V
    mag = np.abs(V)
    peak = mag.max(axis=0)
    lead = np.argmax(mag >= peak * (1 - 1e-9), axis=0)
    signs = np.sign(V[lead, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def _eigh(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc


@dataclass(frozen=True)
class HodgeSpectrum:
    """Gradient, solenoidal and harmonic eigenbases of an edge Laplacian.

    Frequency indices follow the column order of :attr:`U`: gradient columns
    first (ascending eigenvalue), then solenoidal, then harmonic.
    """

    gradient_basis: np.ndarray
    solenoidal_basis: np.ndarray
    harmonic_basis: np.ndarray
    gradient_eigs: np.ndarray
    solenoidal_eigs: np.ndarray
    tol: float
    # False when the three pieces do not add up to E after thresholding
    consistent: bool = True

    @property
    def size(self) -> int:
        return self.gradient_basis.shape[0]

    @property
    def n_grad(self) -> int:
        return self.gradient_basis.shape[1]

    @property
    def n_sol(self) -> int:
        return self.solenoidal_basis.shape[1]

    @property
    def n_harm(self) -> int:
        return self.harmonic_basis.shape[1]

    @property
    def U(self) -> np.ndarray:
        return np.hstack([self.gradient_basis, self.solenoidal_basis, self.harmonic_basis])

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.gradient_eigs, self.solenoidal_eigs, np.zeros(self.n_harm)])

    @property
    def grad_freqs(self) -> list[int]:
        return list(range(self.n_grad))

    @property
    def sol_freqs(self) -> list[int]:
        return list(range(self.n_grad, self.n_grad + self.n_sol))

    @property
    def harm_freqs(self) -> list[int]:
        start = self.n_grad + self.n_sol
        return list(range(start, start + self.n_harm))


def hodge_spectrum(lap: LaplacianTriple, tol: float | None = None) -> HodgeSpectrum:
    """Eigendecompose the lower and upper Laplacians separately.

    Eigenvectors of ``lap.down`` (resp. ``lap.up``) with eigenvalue above
    ``tol`` give the gradient (resp. solenoidal) basis; the harmonic basis is
    an orthonormal basis of the kernel of ``lap.L``. ``tol`` defaults to
    ``1e-8 * lambda_max(L)``.
    """
    L = np.asarray(lap.L, dtype=float)
    E = L.shape[0]
    wL, VL = _eigh(L)
    lam_max = float(wL[-1]) if E else 0.0
    if tol is None:
        tol = TAU_RANK_REL * max(lam_max, 1.0)

    wd, Vd = _eigh(np.asarray(lap.down, dtype=float))
    wu, Vu = _eigh(np.asarray(lap.up, dtype=float))
    keep_d = wd > tol
    keep_u = wu > tol
    grad = fix_signs(Vd[:, keep_d])
    sol = fix_signs(Vu[:, keep_u])

    harm = VL[:, wL <= tol]
    if harm.shape[1]:
        # purge round-off leakage into the other two subspaces
        other = np.hstack([grad, sol])
        if other.shape[1]:
            harm = harm - other @ (other.T @ harm)
        harm, _ = np.linalg.qr(harm)
        harm = fix_signs(harm)
    consistent = grad.shape[1] + sol.shape[1] + harm.shape[1] == E
    return HodgeSpectrum(
        grad, sol, harm, wd[keep_d].copy(), wu[keep_u].copy(), float(tol), consistent
    )


def spectrum_of(cx: SimplicialComplex, k: int = 1, tol: float | None = None) -> HodgeSpectrum:
    return hodge_spectrum(laplacian(cx, k), tol)


def sft(spectrum: HodgeSpectrum, x: np.ndarray) -> np.ndarray:
    """Simplicial Fourier coefficients ``U.T @ x``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != spectrum.size:
        raise DimensionMismatch(f"signal length {x.shape[0]} != E = {spectrum.size}")
    return spectrum.U.T @ x


def inverse_sft(spectrum: HodgeSpectrum, coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    U = spectrum.U
    if coeffs.shape[0] != U.shape[1]:
        raise DimensionMismatch(f"{coeffs.shape[0]} coefficients for {U.shape[1]} frequencies")
    return U @ coeffs


def _project_onto_range(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    if A.size == 0:
        return np.zeros_like(x)
    coef, *_ = np.linalg.lstsq(A, x, rcond=None)
    return A @ coef


def hodge_decompose(cx: SimplicialComplex, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an edge flow into irrotational, solenoidal and harmonic parts.

    The first two are least-squares projections onto ``im(B1.T)`` and
    ``im(B2)``; the harmonic part is what remains.
    """
    x = np.asarray(x, dtype=float)
    E = cx.count(1)
    if x.shape[0] != E:
        raise DimensionMismatch(f"signal length {x.shape[0]} != E = {E}")
    B1 = incidence(cx, 1).astype(float)
    irrot = _project_onto_range(B1.T, x)
    if cx.order >= 2 and cx.count(2):
        B2 = incidence(cx, 2).astype(float)
        sol = _project_onto_range(B2, x)
    else:
        sol = np.zeros(E)
    harm = x - irrot - sol
    return irrot, sol, harm
