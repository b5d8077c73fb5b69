"""Random simplicial complexes for property tests and acceptance runs."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .complex import SimplicialComplex, build_complex


def random_complex(
    rng: np.random.Generator,
    n_vertices: int,
    edge_prob: float = 0.3,
    triangle_prob: float = 0.5,
    connected: bool = False,
    max_edges: int | None = None,
) -> SimplicialComplex:
    """Erdos-Renyi edges plus a random subset of the 3-cliques as triangles.

    With ``connected`` a random spanning tree is laid down first. ``max_edges``
    caps the edge count (tree edges are kept). Vertex labels are shuffled so
    storage order is not correlated with construction order.
    """
    perm = rng.permutation(n_vertices)
    edges: set[tuple[int, int]] = set()
    if connected:
        for i in range(1, n_vertices):
            j = int(rng.integers(i))
            a, b = sorted((int(perm[i]), int(perm[j])))
            edges.add((a, b))
    extra = [e for e in combinations(range(n_vertices), 2) if e not in edges and rng.random() < edge_prob]
    rng.shuffle(extra)
    if max_edges is not None:
        extra = extra[: max(0, max_edges - len(edges))]
    edges.update(tuple(e) for e in extra)
    edge_list = sorted(edges)
    nbrs = {v: set() for v in range(n_vertices)}
    for a, b in edge_list:
        nbrs[a].add(b)
        nbrs[b].add(a)
    cliques = sorted((a, b, c) for a, b in edge_list for c in nbrs[a] & nbrs[b] if c > b)
    triangles = [t for t in cliques if rng.random() < triangle_prob]
    order = rng.permutation(len(edge_list))
    return build_complex(n_vertices, [edge_list[i] for i in order], triangles)
