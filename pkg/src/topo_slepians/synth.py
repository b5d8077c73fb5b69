"""Hexagonal-grid benchmark: complex, side geometry, localized vector field,
edge flows and Gaussian noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex, build_complex
from .errors import DegenerateGrid, ZeroSignal

REFERENCE_SIZES = (225, 629, 405)  # (V, E, T) reported for the 15 x 15 benchmark


@dataclass(frozen=True)
class HexGeometry:
    centers: np.ndarray  # V x 2 hexagon centers
    corners: np.ndarray  # E x 2 x 2 endpoints of each shared side
    midpoints: np.ndarray  # E x 2
    normals: np.ndarray  # E x 2, unit, pointing from lower- to higher-indexed hexagon
    lengths: np.ndarray  # E


@dataclass(frozen=True)
class FieldSpec:
    centers: tuple[tuple[float, float], ...] = (
        (math.pi / 4, math.pi / 4),
        (-math.pi / 4, -math.pi / 4),
    )
    radius: float = 0.7
    extent: tuple[float, float, float, float] = (-2.0, 2.0, -2.0, 2.0)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def inside(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        hit = np.zeros(len(pts), dtype=bool)
        for c in self.centers:
            hit |= np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1]) <= self.radius
        return hit

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        """``[cos(x+y), sin(x-y)]`` masked to the union of the balls."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        F = np.stack([np.cos(x + y), np.sin(x - y)], axis=1)
        return F * self.inside(pts)[:, None]


def _neighbors(r: int, c: int, rows: int, cols: int):
    """Forward neighbors (right and next row) on an odd-row-offset grid."""
    if c + 1 < cols:
        yield r, c + 1
    if r + 1 < rows:
        shift = 0 if r % 2 else -1
        for cc in (c + shift, c + shift + 1):
            if 0 <= cc < cols:
                yield r + 1, cc


def _circumcenter(a, b, c) -> np.ndarray:
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax**2 + ay**2) * (by - cy) + (bx**2 + by**2) * (cy - ay) + (cx**2 + cy**2) * (ay - by)) / d
    uy = ((ax**2 + ay**2) * (cx - bx) + (bx**2 + by**2) * (ax - cx) + (cx**2 + cy**2) * (bx - ax)) / d
    return np.array([ux, uy])


def _lattice(rows, cols, extent, fit):
    x0, x1, y0, y1 = extent
    width, height = x1 - x0, y1 - y0
    if width <= 0 or height <= 0:
        raise DegenerateGrid(f"empty extent {extent}")
    x_cells = cols - 1 + (0.5 if rows > 1 else 0.0)
    dx_fit = width / x_cells if x_cells > 0 else None
    dy_fit = height / (rows - 1) if rows > 1 else None
    if fit == "stretch":
        dx = dx_fit if dx_fit is not None else dy_fit * 2 / math.sqrt(3)
        dy = dy_fit if dy_fit is not None else dx * math.sqrt(3) / 2
    elif fit == "regular":
        cands = [v for v in (dx_fit, None if dy_fit is None else dy_fit * 2 / math.sqrt(3)) if v is not None]
        dx = min(cands)
        dy = dx * math.sqrt(3) / 2
    else:
        raise ValueError(f"unknown fit {fit!r}")
    a = np.array([dx, 0.0])
    b = np.array([dx / 2, dy])
    # the offset lattice only tiles by hexagons with these six neighbors when
    # its basic triangle is acute
    if 2 * (b @ b) <= a @ a:
        raise DegenerateGrid(f"aspect ratio too flat for a {rows} x {cols} hexagonal grid")
    r = np.arange(rows)[:, None]
    c = np.arange(cols)[None, :]
    xs = c * dx + (r % 2) * dx / 2
    ys = np.broadcast_to(r * dy, xs.shape)
    pts = np.stack([xs.ravel(), ys.ravel()], axis=1).astype(float)
    span = pts.max(axis=0) - pts.min(axis=0)
    offset = np.array([x0 + (width - span[0]) / 2, y0 + (height - span[1]) / 2]) - pts.min(axis=0)
    return pts + offset, (a, b)


def hex_complex(
    rows: int = 15,
    cols: int = 15,
    extent: tuple[float, float, float, float] = (-2.0, 2.0, -2.0, 2.0),
    fit: str = "stretch",
) -> tuple[SimplicialComplex, HexGeometry]:
    """Complex of an odd-row-offset hexagonal grid and its shared-side geometry.

    Hexagons are nodes, hexagons sharing a side are joined by an edge, and
    three hexagons meeting at a corner form a triangle. With ``fit="stretch"``
    the centers span ``extent`` exactly (hexagons become affine images of
    regular ones); ``fit="regular"`` keeps them regular and centered.

    Hexagon ``(r, c)`` gets vertex index ``r * cols + c``.
    """
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise DegenerateGrid(f"a {rows} x {cols} grid has no shared sides")
    centers, (a, b) = _lattice(rows, cols, extent, fit)
    edges = []
    for r in range(rows):
        for c in range(cols):
            p = r * cols + c
            for rr, cc in _neighbors(r, c, rows, cols):
                q = rr * cols + cc
                edges.append((min(p, q), max(p, q)))
    edges.sort()
    adj: dict[int, set[int]] = {}
    for p, q in edges:
        adj.setdefault(p, set()).add(q)
        adj.setdefault(q, set()).add(p)
    triangles = sorted(
        (p, q, w) for p, q in edges for w in adj[p] & adj[q] if w > q
    )
    cx = build_complex(rows * cols, edges, triangles)

    offsets = [a, -a, b, -b, b - a, a - b]
    corners = np.zeros((len(edges), 2, 2))
    for i, (p, q) in enumerate(edges):
        P, Q = centers[p], centers[q]
        d = Q - P
        apex = [u for u in offsets if min(np.linalg.norm(u - d - v) for v in offsets) < 1e-9 * np.linalg.norm(a)]
        if len(apex) != 2:
            raise DegenerateGrid(f"edge {(p, q)} does not border exactly two lattice triangles")
        corners[i] = [_circumcenter(P, Q, P + u) for u in apex]
    midpoints = corners.mean(axis=1)
    side = corners[:, 1] - corners[:, 0]
    lengths = np.linalg.norm(side, axis=1)
    normals = np.stack([side[:, 1], -side[:, 0]], axis=1) / lengths[:, None]
    towards = centers[[q for _, q in edges]] - centers[[p for p, _ in edges]]
    normals *= np.sign(np.einsum("ij,ij->i", normals, towards))[:, None]
    geom = HexGeometry(centers, corners, midpoints, normals, lengths)
    return cx, geom


def _sample_points(geometry: HexGeometry, quadrature: str):
    c0, c1 = geometry.corners[:, 0], geometry.corners[:, 1]
    if quadrature == "midpoint":
        return [geometry.midpoints], np.array([1.0])
    if quadrature == "simpson":
        return [c0, geometry.midpoints, c1], np.array([1.0, 4.0, 1.0]) / 6.0
    raise ValueError(f"unknown quadrature {quadrature!r}")


def raw_field_flow(geometry: HexGeometry, spec: FieldSpec = FieldSpec(), quadrature: str = "midpoint") -> np.ndarray:
    """Total flow of the field across each shared side, before normalization."""
    pts, weights = _sample_points(geometry, quadrature)
    flux = np.zeros(len(geometry.lengths))
    for P, w in zip(pts, weights):
        flux += w * np.einsum("ij,ij->i", spec(P), geometry.normals)
    return flux * geometry.lengths


def sampled_inside(geometry: HexGeometry, spec: FieldSpec = FieldSpec(), quadrature: str = "midpoint") -> np.ndarray:
    """Edges with at least one field sampling point inside the balls."""
    pts, _ = _sample_points(geometry, quadrature)
    hit = np.zeros(len(geometry.lengths), dtype=bool)
    for P in pts:
        hit |= spec.inside(P)
    return hit


def field_flow(geometry: HexGeometry, spec: FieldSpec = FieldSpec(), quadrature: str = "midpoint") -> np.ndarray:
    """Unit-norm edge flow of the localized field."""
    flow = raw_field_flow(geometry, spec, quadrature)
    norm = np.linalg.norm(flow)
    if norm == 0:
        raise ZeroSignal("field does not cross any shared side")
    return flow / norm


def add_noise(x: np.ndarray, sigma: float, seed=None) -> np.ndarray:
    """``x + n`` with i.i.d. ``N(0, sigma^2)`` entries.

    ``seed`` may be an int, a SeedSequence or a Generator.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x = np.asarray(x, dtype=float)
    return x + sigma * rng.standard_normal(x.shape)


def snr_of(sigma: float, E: int, signal_energy: float = 1.0) -> float:
    """``||x||^2 / (sigma^2 E)``."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return signal_energy / (sigma**2 * E)


def sigma_for(snr: float, E: int, signal_energy: float = 1.0) -> float:
    if snr <= 0:
        raise ValueError("snr must be positive")
    return math.sqrt(signal_energy / (snr * E))


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)
