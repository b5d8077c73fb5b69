"""Orthogonal matching pursuit (error- and sparsity-constrained) and NMSE."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import DimensionMismatch, MaxIterExceeded, NoProgress, ZeroSignal

MIN_CORRELATION = 1e-14
JITTER = 1e-12
MAX_CONDITION = 1e12
UNIT_NORM_TOL = 1e-6


@dataclass
class SparseCode:
    support: tuple[int, ...]
    coefficients: np.ndarray
    residual_norm: float
    iterations: int
    residual_path: list[float] = field(default_factory=list)
    converged: bool = True

    @property
    def l0(self) -> int:
        return len(self.support)

    def dense(self, n_atoms: int) -> np.ndarray:
        out = np.zeros(n_atoms)
        out[list(self.support)] = self.coefficients
        return out

    def reconstruct(self, atoms) -> np.ndarray:
        D = _as_matrix(atoms)
        if not self.support:
            return np.zeros(D.shape[0])
        return D[:, list(self.support)] @ self.coefficients


def _as_matrix(atoms) -> np.ndarray:
    return np.asarray(getattr(atoms, "atoms", atoms), dtype=float)


def _check_inputs(atoms, x) -> tuple[np.ndarray, np.ndarray]:
    D = _as_matrix(atoms)
    x = np.asarray(x, dtype=float).ravel()
    if D.ndim != 2 or D.shape[0] != x.shape[0]:
        raise DimensionMismatch(f"dictionary rows {D.shape[0]} != signal length {x.shape[0]}")
    norms = np.linalg.norm(D, axis=0)
    if D.shape[1] and np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
        raise ValueError("dictionary atoms must have unit norm")
    return D, x


class _CholeskyOMP:
    """Greedy selection with an incrementally grown Cholesky factor of the
    support Gram matrix."""

    def __init__(self, D: np.ndarray, x: np.ndarray):
        self.D = D
        self.x = x
        self.support: list[int] = []
        self.L = np.zeros((0, 0))
        self.b = np.zeros(0)  # D_S.T @ x
        self.coef = np.zeros(0)
        self.residual = x.copy()
        self.selected = np.zeros(D.shape[1], dtype=bool)
        self.jittered = False

    def pick(self) -> tuple[int, float]:
        corr = self.D.T @ self.residual
        corr[self.selected] = 0.0
        j = int(np.argmax(np.abs(corr)))
        return j, float(abs(corr[j]))

    def add(self, j: int) -> None:
        d = self.D[:, j]
        n = len(self.support)
        if n:
            g = self.D[:, self.support].T @ d
            w = solve_triangular(self.L, g, lower=True, check_finite=False)
            diag2 = float(d @ d - w @ w)
        else:
            w = np.zeros(0)
            diag2 = float(d @ d)
        # keep cond(G) below MAX_CONDITION on coherent supports
        scale = max(float(np.max(np.diag(self.L)) ** 2), 1.0) if n else 1.0
        if diag2 < scale / MAX_CONDITION:
            diag2 += JITTER
            self.jittered = True
        L = np.zeros((n + 1, n + 1))
        L[:n, :n] = self.L
        L[n, :n] = w
        L[n, n] = np.sqrt(max(diag2, JITTER))
        self.L = L
        self.support.append(j)
        self.selected[j] = True
        self.b = np.append(self.b, d @ self.x)
        self.coef = cho_solve((self.L, True), self.b, check_finite=False)
        self.residual = self.x - self.D[:, self.support] @ self.coef

    def coefficients_at(self, s: int) -> np.ndarray:
        if s == 0:
            return np.zeros(0)
        return cho_solve((self.L[:s, :s], True), self.b[:s], check_finite=False)

    def code(self, path: list[float], converged: bool = True) -> SparseCode:
        return SparseCode(
            support=tuple(self.support),
            coefficients=self.coef.copy(),
            residual_norm=float(np.linalg.norm(self.residual)),
            iterations=len(self.support),
            residual_path=list(path),
            converged=converged,
        )


def _run(D, x, *, epsilon=None, sparsity=None, max_iter=None):
    """Run the greedy loop; returns ``(code, state)``."""
    state = _CholeskyOMP(D, x)
    xnorm = float(np.linalg.norm(x))
    path = [xnorm]
    limit = D.shape[1] if max_iter is None else min(max_iter, D.shape[1])
    if sparsity is not None:
        limit = min(limit, sparsity)
    while True:
        rnorm = path[-1]
        if epsilon is not None and rnorm ** 2 <= epsilon:
            break
        if sparsity is not None and rnorm <= 1e-12 * xnorm:
            break
        if len(state.support) >= limit:
            if epsilon is not None:
                return state.code(path, converged=False), state
            break
        j, c = state.pick()
        if c < MIN_CORRELATION:
            if sparsity is not None and rnorm <= 1e-10 * xnorm:
                break
            raise NoProgress(
                f"max |<atom, residual>| = {c:.3e} after {len(state.support)} atoms",
                partial=state.code(path, converged=False),
            )
        state.add(j)
        new = float(np.linalg.norm(state.residual))
        if new >= rnorm:
            raise NoProgress(
                f"residual did not decrease at iteration {len(state.support)}",
                partial=state.code(path, converged=False),
            )
        path.append(new)
    return state.code(path), state


def _prefix_code(state: _CholeskyOMP, path: list[float], s: int) -> SparseCode:
    c = state.coefficients_at(s)
    sup = tuple(state.support[:s])
    res = state.x - state.D[:, list(sup)] @ c if s else state.x
    return SparseCode(sup, c, float(np.linalg.norm(res)), s, list(path[: s + 1]))


def omp_error(
    atoms,
    x,
    epsilon: float,
    max_iter: int | None = None,
    strict: bool = False,
) -> SparseCode:
    """Greedy sparse code with ``||x - D c||^2 <= epsilon``.

    Each step adds the atom most correlated with the residual (lowest index on
    ties) and refits all coefficients by least squares. ``max_iter`` defaults
    to the signal length. If the cap is hit first the partial code is returned
    with ``converged=False`` (or :class:`MaxIterExceeded` is raised when
    ``strict``).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    D, x = _check_inputs(atoms, x)
    if max_iter is None:
        max_iter = x.shape[0]
    code, _ = _run(D, x, epsilon=epsilon, max_iter=max_iter)
    if strict and not code.converged:
        raise MaxIterExceeded(f"residual^2 {code.residual_norm ** 2:.3e} > {epsilon:g}", partial=code)
    return code


def omp_sparsity(atoms, x, s: int) -> SparseCode:
    """Greedy least-squares code using at most ``s`` atoms.

    Stops early once the residual vanishes.
    """
    if s < 1:
        raise ValueError("sparsity level must be positive")
    D, x = _check_inputs(atoms, x)
    code, _ = _run(D, x, sparsity=s)
    return code


def omp_path(atoms, x, levels: Iterable[int]) -> dict[int, SparseCode]:
    """Sparsity-constrained codes for several levels from one greedy run.

    The greedy support at level ``s`` is a prefix of the one at any larger
    level, so a single run up to ``max(levels)`` yields all of them. Levels
    beyond the point where the residual vanishes map to the final code.
    """
    levels = sorted({int(s) for s in levels})
    if not levels or levels[0] < 1:
        raise ValueError("levels must be positive integers")
    D, x = _check_inputs(atoms, x)
    final, state = _run(D, x, sparsity=levels[-1])
    n = final.iterations
    return {s: _prefix_code(state, final.residual_path, s) if s < n else final for s in levels}


def l0_for_tolerances(atoms, x, epsilons: Iterable[float], max_iter: int | None = None) -> dict[float, SparseCode]:
    """Error-constrained codes for a grid of tolerances from one greedy run.

    The greedy path does not depend on the tolerance, so the code for each
    ``epsilon`` is the shortest prefix whose squared residual meets it.
    """
    eps = sorted({float(e) for e in epsilons})
    if not eps or eps[0] <= 0:
        raise ValueError("tolerances must be positive")
    D, x = _check_inputs(atoms, x)
    if max_iter is None:
        max_iter = x.shape[0]
    full, state = _run(D, x, epsilon=eps[0], max_iter=max_iter)
    path = np.asarray(full.residual_path)
    out = {}
    for e in eps:
        hits = np.flatnonzero(path ** 2 <= e)
        if hits.size == 0:
            out[e] = full
        elif hits[0] == full.iterations:
            out[e] = full
        else:
            out[e] = _prefix_code(state, full.residual_path, int(hits[0]))
    return out


def nmse(x, x_rec) -> float:
    """``||x - x_rec||^2 / ||x||^2``."""
    x = np.asarray(x, dtype=float)
    x_rec = np.asarray(x_rec, dtype=float)
    if x.shape != x_rec.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {x_rec.shape} differ")
    denom = float(x @ x)
    if denom == 0.0:
        raise ZeroSignal("reference signal has zero norm")
    diff = x - x_rec
    return float(diff @ diff) / denom
