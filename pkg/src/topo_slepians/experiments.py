"""Sparse-representation and denoising sweeps on the hexagonal benchmark."""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

from .complex import SimplicialComplex
from .dictionary import (
    SlepianDictionary,
    build_dictionary,
    default_concentration_sets,
    dictionary_summary,
    fourier_dictionary,
    frame_certificate,
)
from .errors import TopoSlepianError
from .fileio import load_complex, load_signal
from .sparse import l0_for_tolerances, nmse, omp_path
from .spectral import HodgeSpectrum, spectrum_of
from .synth import (
    REFERENCE_SIZES,
    FieldSpec,
    add_noise,
    db_to_linear,
    field_flow,
    hex_complex,
    linear_to_db,
    sigma_for,
    snr_of,
)

FULL = "full"


def _default_epsilons() -> list[float]:
    return [float(v) for v in np.logspace(-4, -1, 13)]


def _default_snr_db() -> list[float]:
    return [-5.0 + 2.5 * i for i in range(9)]


@dataclass
class ExperimentConfig:
    kind: str = "sparsity-sweep"
    # complex source: a JSON file, or the hexagonal generator
    complex_file: str | None = None
    signal_file: str | None = None
    rows: int = 15
    cols: int = 15
    extent: tuple[float, float, float, float] = (-2.0, 2.0, -2.0, 2.0)
    fit: str = "stretch"
    quadrature: str = "midpoint"
    ball_radius: float = 0.7
    # dictionaries
    hops: int = 1
    k_tilde: list = field(default_factory=lambda: [4, 8, FULL])
    include_fourier: bool = True
    # sweeps
    epsilons: list[float] = field(default_factory=_default_epsilons)
    snr_db: list[float] = field(default_factory=_default_snr_db)
    sparsity_levels: list[int] = field(default_factory=lambda: [10, 25, 50])
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        self.extent = tuple(float(v) for v in self.extent)
        self.k_tilde = [FULL if k in (None, FULL) else int(k) for k in self.k_tilde]
        self.validate()

    def validate(self) -> None:
        if self.kind not in ("sparsity-sweep", "denoise-sweep"):
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if not self.epsilons or min(self.epsilons) <= 0:
            raise ValueError("epsilon grid must be non-empty and positive")
        if not self.snr_db:
            raise ValueError("SNR grid must be non-empty")
        if not self.sparsity_levels or min(self.sparsity_levels) < 1:
            raise ValueError("sparsity levels must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.k_tilde and not self.include_fourier:
            raise ValueError("no method selected")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path, **overrides) -> "ExperimentConfig":
        data = json.loads(Path(path).read_text())
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def updated(self, **overrides) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["extent"] = list(self.extent)
        return d


@dataclass
class Benchmark:
    complex: SimplicialComplex
    signal: np.ndarray
    spectrum: HodgeSpectrum

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(self.complex.sizes[:3])


def load_benchmark(cfg: ExperimentConfig) -> Benchmark:
    """The complex and clean unit-norm signal described by ``cfg``."""
    if cfg.complex_file:
        cx = load_complex(cfg.complex_file)
        if not cfg.signal_file:
            raise ValueError("a complex file needs a signal file")
        x = load_signal(cfg.signal_file, cx)
        x = x / np.linalg.norm(x)
    else:
        cx, geom = hex_complex(cfg.rows, cfg.cols, cfg.extent, cfg.fit)
        if cfg.signal_file:
            x = load_signal(cfg.signal_file, cx)
            x = x / np.linalg.norm(x)
        else:
            x = field_flow(geom, FieldSpec(radius=cfg.ball_radius, extent=cfg.extent), cfg.quadrature)
    return Benchmark(cx, x, spectrum_of(cx))


def method_label(k) -> str:
    return "fourier" if k == "fourier" else f"slepian-{'full' if k == FULL else f'K{k}'}"


def build_methods(bench: Benchmark, cfg: ExperimentConfig, k_values=None) -> dict[str, SlepianDictionary]:
    k_values = cfg.k_tilde if k_values is None else k_values
    out: dict[str, SlepianDictionary] = {}
    if cfg.include_fourier:
        out["fourier"] = fourier_dictionary(bench.spectrum)
    if k_values:
        plan = default_concentration_sets(bench.complex, bench.spectrum, cfg.hops)
        for k in k_values:
            out[method_label(k)] = build_dictionary(bench.spectrum, plan, None if k == FULL else k)
    return out


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[dict]
    metadata: dict

    def sorted_rows(self) -> list[dict]:
        return sorted(self.rows, key=lambda r: tuple(_sort_key(r[c]) for c in self.columns[:3]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for r in self.sorted_rows():
            buf.write(",".join(_cell(r.get(c)) for c in self.columns) + "\n")
        return buf.getvalue()

    def write(self, csv_path) -> tuple[Path, Path]:
        csv_path = Path(csv_path)
        csv_path.write_text(self.to_csv())
        meta = csv_path.with_suffix(".json")
        meta.write_text(json.dumps(self.metadata, indent=1, sort_keys=True, default=_json_default) + "\n")
        return csv_path, meta


def _sort_key(v):
    return (0, v, "") if isinstance(v, (int, float)) else (1, 0.0, str(v))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else "%.17g" % v
    return str(v)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))


def _metadata(bench: Benchmark, methods: dict[str, SlepianDictionary], cfg: ExperimentConfig) -> dict:
    V, E, T = bench.sizes
    dicts = {}
    for label, d in methods.items():
        cert = frame_certificate(d)
        dicts[label] = {
            **dictionary_summary(d),
            "certificate": {k: cert.to_dict()[k] for k in ("A", "B_rr", "B_thm", "lower_complete", "upper_complete")},
        }
    return {
        "complex": {"V": V, "E": E, "T": T, "reference_VET": list(REFERENCE_SIZES)},
        "harmonic_dimension": bench.spectrum.n_harm,
        "dictionaries": dicts,
        "config": cfg.to_dict(),
        "seed": cfg.seed,
    }


def run_sparsity_sweep(cfg: ExperimentConfig, bench: Benchmark | None = None) -> SweepResult:
    """Greedy l0 of the clean signal versus the squared-error tolerance, per method."""
    bench = bench or load_benchmark(cfg)
    methods = build_methods(bench, cfg)
    rows = []
    for label, d in methods.items():
        try:
            codes = l0_for_tolerances(d, bench.signal, cfg.epsilons)
        except TopoSlepianError as exc:
            for e in cfg.epsilons:
                rows.append({"epsilon": float(e), "method": label, "l0": None, "residual": None, "status": exc.code})
            continue
        for e in cfg.epsilons:
            c = codes[float(e)]
            rows.append({
                "epsilon": float(e),
                "method": label,
                "l0": c.l0,
                "residual": c.residual_norm ** 2,
                "status": "ok" if c.residual_norm ** 2 <= e else "max_iter",
            })
    return SweepResult(["epsilon", "method", "l0", "residual", "status"], rows, _metadata(bench, methods, cfg))


def trial_rng(seed: int, snr_index: int, trial: int) -> np.random.Generator:
    """Independent stream per (SNR point, trial), shared across methods."""
    return np.random.default_rng(np.random.SeedSequence([seed, snr_index, trial]))


def run_denoise_sweep(cfg: ExperimentConfig, bench: Benchmark | None = None) -> SweepResult:
    """NMSE of sparsity-constrained OMP reconstructions of noisy flows versus SNR."""
    bench = bench or load_benchmark(cfg)
    methods = build_methods(bench, cfg)
    x = bench.signal
    E = x.shape[0]
    energy = float(x @ x)
    levels = sorted(set(cfg.sparsity_levels))
    rows = []
    for si, snr_db in enumerate(cfg.snr_db):
        sigma = sigma_for(db_to_linear(snr_db), E, energy)
        realized = linear_to_db(snr_of(sigma, E, energy))
        noisy = [add_noise(x, sigma, trial_rng(cfg.seed, si, t)) for t in range(cfg.trials)]
        for label, d in methods.items():
            errs = {s: [] for s in levels}
            status = "ok"
            for y in noisy:
                try:
                    codes = omp_path(d, y, levels)
                except TopoSlepianError as exc:
                    status = exc.code
                    break
                for s in levels:
                    errs[s].append(nmse(x, codes[s].reconstruct(d)))
            for s in levels:
                vals = np.asarray(errs[s])
                ok = status == "ok"
                rows.append({
                    "snr_db": float(snr_db),
                    "method": label,
                    "s": s,
                    "nmse_mean": float(vals.mean()) if ok else None,
                    "nmse_stderr": float(vals.std(ddof=1) / math.sqrt(len(vals))) if ok and len(vals) > 1 else (0.0 if ok else None),
                    "sigma": sigma,
                    "snr_db_realized": realized,
                    "trials": len(vals),
                    "status": status,
                })
    cols = ["snr_db", "method", "s", "nmse_mean", "nmse_stderr", "sigma", "snr_db_realized", "trials", "status"]
    return SweepResult(cols, rows, _metadata(bench, methods, cfg))


def gnuplot_script(result: SweepResult, csv_name: str, kind: str) -> str:
    """A small gnuplot script plotting one curve per method (and sparsity level)."""
    rows = result.sorted_rows()
    lines = ["set datafile separator ','", "set key outside", "set grid"]
    if kind == "sparsity-sweep":
        lines += ["set logscale x", "set xlabel 'error tolerance'", "set ylabel 'l0 norm'"]
        series = sorted({r["method"] for r in rows})
        plots = [
            f"'{csv_name}' using (strcol(2) eq '{m}' ? $1 : 1/0):3 with linespoints title '{m}'"
            for m in series
        ]
    else:
        lines += ["set logscale y", "set xlabel 'SNR [dB]'", "set ylabel 'NMSE'"]
        series = sorted({(r["method"], r["s"]) for r in rows})
        plots = [
            f"'{csv_name}' using ((strcol(2) eq '{m}' && $3 == {s}) ? $1 : 1/0):4 with linespoints title '{m} s={s}'"
            for m, s in series
        ]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
