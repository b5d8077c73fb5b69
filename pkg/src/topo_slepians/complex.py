"""Oriented simplicial complexes, signed incidence matrices and Hodge Laplacians.

Simplices are stored as tuples of 0-based vertex indices in strictly
increasing order, which fixes the reference orientation. The sign of face
``i`` in a k-simplex is ``(-1)**p`` where ``p`` is the position of the vertex
omitted to obtain the face.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateSimplex, IndexOutOfRange, MissingFace, OrderOutOfRange

TAU_SYM = 1e-10
TAU_PSD_REL = 1e-8

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex of order ``order`` over ``vertex_count`` vertices.

    ``simplices[k]`` lists the k-simplices in their canonical storage order;
    that order defines the row/column order of every matrix built from the
    complex. ``simplices[0]`` is always ``[(0,), (1,), ...]``.
    """

    vertex_count: int
    simplices: tuple[tuple[Simplex, ...], ...]
    order: int = 2
    _index: tuple[dict, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self._index:
            index = tuple({s: i for i, s in enumerate(level)} for level in self.simplices)
            object.__setattr__(self, "_index", index)

    @property
    def edges(self) -> tuple[Simplex, ...]:
        return self.simplices[1] if len(self.simplices) > 1 else ()

    @property
    def triangles(self) -> tuple[Simplex, ...]:
        return self.simplices[2] if len(self.simplices) > 2 else ()

    @property
    def sizes(self) -> tuple[int, ...]:
        """Number of simplices at each order 0..order."""
        return tuple(self.count(k) for k in range(self.order + 1))

    def count(self, k: int) -> int:
        if k < 0:
            return 0
        return len(self.simplices[k]) if k < len(self.simplices) else 0

    def index_of(self, simplex: Iterable[int]) -> int:
        key = tuple(sorted(simplex))
        k = len(key) - 1
        if k >= len(self._index) or key not in self._index[k]:
            raise IndexOutOfRange(f"simplex {key} not in complex")
        return self._index[k][key]

    def __contains__(self, simplex) -> bool:
        key = tuple(sorted(simplex))
        k = len(key) - 1
        return k < len(self._index) and key in self._index[k]


def _canonical(level: Sequence[Sequence[int]], k: int, vertex_count: int) -> list[Simplex]:
    out: list[Simplex] = []
    seen: set[Simplex] = set()
    for raw in level:
        s = tuple(int(v) for v in raw)
        if len(s) != k + 1:
            raise IndexOutOfRange(f"{k}-simplex {s} must have {k + 1} vertices")
        for v in s:
            if not 0 <= v < vertex_count:
                raise IndexOutOfRange(f"vertex {v} of {s} outside [0, {vertex_count})")
        key = tuple(sorted(s))
        if len(set(key)) != len(key) or key in seen:
            raise DuplicateSimplex(f"duplicate {k}-simplex {s}")
        seen.add(key)
        out.append(key)
    return out


def from_simplices(
    vertex_count: int,
    levels: Sequence[Sequence[Sequence[int]]],
    order: int | None = None,
) -> SimplicialComplex:
    """Build a complex of arbitrary order from 0-based simplex lists.

    ``levels[j]`` holds the (j+1)-simplices (edges, triangles, tetrahedra...).
    Storage order within each level is preserved after orienting each simplex
    with ascending vertices. Inclusivity is validated at every order.
    """
    if vertex_count <= 0:
        raise IndexOutOfRange("vertex_count must be positive")
    if order is None:
        order = max(2, len(levels))
    if len(levels) > order:
        raise OrderOutOfRange(f"{len(levels)} simplex levels given for order {order}")
    stored: list[tuple[Simplex, ...]] = [tuple((v,) for v in range(vertex_count))]
    for j, level in enumerate(levels):
        k = j + 1
        canon = _canonical(level, k, vertex_count)
        if k >= 2:
            below = set(stored[k - 1])
            for s in canon:
                for face in combinations(s, k):
                    if face not in below:
                        raise MissingFace(f"{k}-simplex {s} is missing face {face}")
        stored.append(tuple(canon))
    while len(stored) < order + 1:
        stored.append(())
    return SimplicialComplex(vertex_count, tuple(stored), order)


def build_complex(
    vertex_count: int,
    edges: Sequence[Sequence[int]],
    triangles: Sequence[Sequence[int]] = (),
) -> SimplicialComplex:
    """Build an order-2 complex from 0-based edge and triangle lists.

    Raises:
        IndexOutOfRange: a vertex index is outside ``[0, vertex_count)``.
        DuplicateSimplex: a simplex repeats (as a vertex set) or repeats a vertex.
        MissingFace: a triangle references an edge that is not listed.
    """
    return from_simplices(vertex_count, [edges, triangles], order=2)


def incidence(cx: SimplicialComplex, k: int) -> np.ndarray:
    """Signed incidence ``B_k`` of shape ``(N_{k-1}, N_k)`` as an int64 array."""
    if not 1 <= k <= cx.order:
        raise OrderOutOfRange(f"incidence order {k} outside [1, {cx.order}]")
    rows = cx.count(k - 1)
    cols = cx.simplices[k]
    B = np.zeros((rows, len(cols)), dtype=np.int64)
    lower = cx._index[k - 1]
    for j, s in enumerate(cols):
        for p in range(k + 1):
            face = s[:p] + s[p + 1:]
            B[lower[face], j] = 1 if p % 2 == 0 else -1
    return B


@dataclass(frozen=True)
class LaplacianTriple:
    """``L = down + up``; at the extreme orders one of the parts is zero."""

    L: np.ndarray
    down: np.ndarray
    up: np.ndarray
    k: int = 1


def laplacian(cx: SimplicialComplex, k: int = 1) -> LaplacianTriple:
    if not 0 <= k <= cx.order:
        raise OrderOutOfRange(f"Laplacian order {k} outside [0, {cx.order}]")
    n = cx.count(k)
    if k >= 1:
        Bk = incidence(cx, k).astype(float)
        down = Bk.T @ Bk
    else:
        down = np.zeros((n, n))
    if k < cx.order:
        Bk1 = incidence(cx, k + 1).astype(float)
        up = Bk1 @ Bk1.T
    else:
        up = np.zeros((n, n))
    return LaplacianTriple(down + up, down, up, k)


def _adjacency(cx: SimplicialComplex, k: int, kind: str) -> np.ndarray:
    if kind == "lower":
        if k < 1:
            return np.zeros((cx.count(k),) * 2, dtype=bool)
        A = np.abs(incidence(cx, k))
        adj = (A.T @ A) > 0
    else:
        if k >= cx.order:
            return np.zeros((cx.count(k),) * 2, dtype=bool)
        A = np.abs(incidence(cx, k + 1))
        adj = (A @ A.T) > 0
    np.fill_diagonal(adj, False)
    return adj


def _neighborhood(cx: SimplicialComplex, index: int, hops: int, k: int, kind: str) -> list[int]:
    n = cx.count(k)
    if not 0 <= index < n:
        raise IndexOutOfRange(f"{k}-simplex index {index} outside [0, {n})")
    if hops < 0:
        raise ValueError("hops must be non-negative")
    return _bfs(_adjacency(cx, k, kind), index, hops)


def lower_neighborhood(cx: SimplicialComplex, edge_index: int, hops: int = 1, k: int = 1) -> list[int]:
    """The simplex itself plus everything within ``hops`` shared-face steps, ascending."""
    return _neighborhood(cx, edge_index, hops, k, "lower")


def upper_neighborhood(cx: SimplicialComplex, edge_index: int, hops: int = 1, k: int = 1) -> list[int]:
    """The simplex itself plus everything within ``hops`` shared-coface steps, ascending."""
    return _neighborhood(cx, edge_index, hops, k, "upper")


def lower_neighborhoods(cx: SimplicialComplex, hops: int = 1, k: int = 1) -> list[list[int]]:
    adj = _adjacency(cx, k, "lower")
    return [_bfs(adj, i, hops) for i in range(cx.count(k))]


def upper_neighborhoods(cx: SimplicialComplex, hops: int = 1, k: int = 1) -> list[list[int]]:
    adj = _adjacency(cx, k, "upper")
    return [_bfs(adj, i, hops) for i in range(cx.count(k))]


def _bfs(adj: np.ndarray, start: int, hops: int) -> list[int]:
    reached = np.zeros(adj.shape[0], dtype=bool)
    reached[start] = True
    frontier = reached.copy()
    for _ in range(hops):
        frontier = adj[frontier].any(axis=0) & ~reached
        if not frontier.any():
            break
        reached |= frontier
    return [int(i) for i in np.flatnonzero(reached)]


def is_psd(M: np.ndarray) -> bool:
    w = np.linalg.eigvalsh(M)
    scale = max(float(w[-1]), 1.0) if w.size else 1.0
    return bool(w.size == 0 or w[0] >= -TAU_PSD_REL * scale)


def flip_orientation(cx: SimplicialComplex, edge_indices: Iterable[int]) -> np.ndarray:
    """Diagonal ±1 vector that maps edge signals to a reversed-orientation frame.

    The complex itself always keeps ascending storage; a flip is modelled as a
    change of basis ``D`` acting on signals and on ``B_1``/``B_2``.
    """
    d = np.ones(cx.count(1))
    for e in edge_indices:
        d[e] = -1.0
    return d
