"""Readers and writers for complexes, edge signals, Slepian sets and dictionaries.

All on-disk vertex indices are 1-based; everything in memory is 0-based.
Floats are written with 17 significant digits so files round-trip exactly
and identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .complex import SimplicialComplex, build_complex
from .dictionary import FrameCertificate, SlepianDictionary, dictionary_summary, from_records, meta_records
from .errors import FormatError, TopoSlepianError
from .slepian import SlepianSet

FLOAT_FMT = "%.17g"


def _fmt(v: float) -> str:
    return FLOAT_FMT % v


def complex_to_json(cx: SimplicialComplex) -> dict:
    return {
        "vertices": cx.vertex_count,
        "edges": [[a + 1, b + 1] for a, b in cx.edges],
        "triangles": [[a + 1, b + 1, c + 1] for a, b, c in cx.triangles],
    }


def complex_from_json(data: dict) -> SimplicialComplex:
    try:
        V = int(data["vertices"])
        edges = [[int(v) - 1 for v in e] for e in data.get("edges", [])]
        tris = [[int(v) - 1 for v in t] for t in data.get("triangles", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed complex description: {exc}") from exc
    return build_complex(V, edges, tris)


def save_complex(path, cx: SimplicialComplex) -> None:
    Path(path).write_text(json.dumps(complex_to_json(cx)) + "\n")


def load_complex(path) -> SimplicialComplex:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return complex_from_json(data)


def save_signal(path, cx: SimplicialComplex, x: np.ndarray) -> None:
    x = np.asarray(x, dtype=float)
    if x.shape != (cx.count(1),):
        raise FormatError(f"signal of shape {x.shape} for {cx.count(1)} edges")
    buf = io.StringIO()
    buf.write("edge_u,edge_v,value\n")
    for (a, b), v in zip(cx.edges, x):
        buf.write(f"{a + 1},{b + 1},{_fmt(v)}\n")
    Path(path).write_text(buf.getvalue())


def load_signal(path, cx: SimplicialComplex) -> np.ndarray:
    """Read a signal CSV and align it to the complex's edge order.

    A row listed as ``(v, u)`` for the stored edge ``(u, v)`` is read as flow
    against the reference orientation, so its value is negated.
    """
    E = cx.count(1)
    x = np.full(E, np.nan)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["edge_u", "edge_v", "value"]:
            raise FormatError(f"{path}: expected header edge_u,edge_v,value")
        for row in reader:
            try:
                u, v = int(row["edge_u"]) - 1, int(row["edge_v"]) - 1
                val = float(row["value"])
                i = cx.index_of((u, v))
            except (TypeError, ValueError, TopoSlepianError) as exc:
                raise FormatError(f"{path}: bad row {row}: {exc}") from exc
            if not np.isnan(x[i]):
                raise FormatError(f"{path}: edge ({u + 1},{v + 1}) listed twice")
            x[i] = val if u < v else -val
    if np.isnan(x).any():
        missing = [cx.edges[i] for i in np.flatnonzero(np.isnan(x))[:3]]
        raise FormatError(f"{path}: no value for edges such as {[(a + 1, b + 1) for a, b in missing]}")
    return x


def _matrix_csv(M: np.ndarray, header: list[str] | None = None) -> str:
    buf = io.StringIO()
    if header is not None:
        buf.write(",".join(header) + "\n")
    for row in np.atleast_2d(M):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def save_slepian_set(path, sset: SlepianSet) -> None:
    """One column per Slepian; the header row holds the concentration values."""
    header = [_fmt(v) for v in sset.concentrations]
    Path(path).write_text(_matrix_csv(sset.vectors, header))


def load_slepian_set(path) -> tuple[np.ndarray, np.ndarray]:
    lines = Path(path).read_text().splitlines()
    lam = np.array([float(v) for v in lines[0].split(",")]) if lines[0] else np.zeros(0)
    vecs = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return vecs, lam


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def save_dictionary(path, dictionary: SlepianDictionary, certificate: FrameCertificate | None = None) -> Path:
    """Write atoms as an E x M CSV (or ``.npy``) plus a JSON sidecar with metadata."""
    path = Path(path)
    if path.suffix == ".npy":
        np.save(path, dictionary.atoms)
    else:
        path.write_text(_matrix_csv(dictionary.atoms))
    side = {
        "summary": dictionary_summary(dictionary),
        "atoms": meta_records(dictionary),
        "certificate": certificate.to_dict() if certificate is not None else None,
    }
    sc = sidecar_path(path)
    sc.write_text(json.dumps(side, indent=1, sort_keys=True) + "\n")
    return sc


def load_dictionary(path) -> tuple[SlepianDictionary, dict]:
    path = Path(path)
    try:
        side = json.loads(sidecar_path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read dictionary sidecar for {path}: {exc}") from exc
    if path.suffix == ".npy":
        atoms = np.load(path)
    else:
        try:
            atoms = np.loadtxt(path, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise FormatError(f"cannot read dictionary matrix {path}: {exc}") from exc
    if atoms.shape[1] != len(side["atoms"]):
        raise FormatError(f"{path}: {atoms.shape[1]} columns but {len(side['atoms'])} atom records")
    return from_records(atoms, side["atoms"], side["summary"]), side
