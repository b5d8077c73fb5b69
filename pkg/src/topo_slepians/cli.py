"""Command-line entry point: ``topo-slepians <command> ...``.

Failures exit nonzero with one line on stderr: ``error: <CODE>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dictionary as dct
from .errors import FrameDegenerate, TopoSlepianError, ZeroSignal
from .experiments import (
    FULL,
    ExperimentConfig,
    gnuplot_script,
    load_benchmark,
    run_denoise_sweep,
    run_sparsity_sweep,
)
from .fileio import load_complex, load_dictionary, save_complex, save_dictionary, save_signal
from .spectral import spectrum_of
from .synth import (
    REFERENCE_SIZES,
    FieldSpec,
    add_noise,
    db_to_linear,
    field_flow,
    hex_complex,
    raw_field_flow,
    sigma_for,
)

EXIT_ERROR = 1
EXIT_DEGENERATE = 3


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _k_values(text: str) -> list:
    return [FULL if v.strip() == FULL else int(v) for v in text.split(",") if v.strip()]


def _load_config(args, kind: str) -> ExperimentConfig:
    overrides = {
        "kind": kind,
        "seed": args.seed,
        "rows": getattr(args, "rows", None),
        "cols": getattr(args, "cols", None),
        "fit": getattr(args, "fit", None),
        "quadrature": getattr(args, "quadrature", None),
        "complex_file": getattr(args, "complex", None),
        "signal_file": getattr(args, "signal", None),
        "k_tilde": getattr(args, "k_tilde", None),
        "epsilons": getattr(args, "epsilons", None),
        "snr_db": getattr(args, "snr_db", None),
        "sparsity_levels": getattr(args, "levels", None),
        "trials": getattr(args, "trials", None),
        "hops": getattr(args, "hops", None),
    }
    if getattr(args, "no_fourier", False):
        overrides["include_fourier"] = False
    if args.config:
        return ExperimentConfig.from_json(args.config, **overrides)
    base = ExperimentConfig(kind=kind)
    if kind == "denoise-sweep":
        base = base.updated(k_tilde=[4])
    return base.updated(**overrides)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_synth(args) -> int:
    cfg = _load_config(args, "sparsity-sweep")
    cx, geom = hex_complex(cfg.rows, cfg.cols, cfg.extent, cfg.fit)
    spec = FieldSpec(radius=cfg.ball_radius, extent=cfg.extent)
    try:
        x = field_flow(geom, spec, cfg.quadrature)
    except ZeroSignal:
        # grids too coarse to see the field still yield valid complex files
        x = raw_field_flow(geom, spec, cfg.quadrature)
        print("note: flow is identically zero on this grid", file=sys.stderr)
    out = _out_dir(args)
    save_complex(out / "complex.json", cx)
    save_signal(out / "flow.csv", cx, x)
    if args.noise_snr_db is not None:
        sigma = sigma_for(db_to_linear(args.noise_snr_db), len(x))
        save_signal(out / "noisy_flow.csv", cx, add_noise(x, sigma, cfg.seed))
    V, E, T = cx.sizes[:3]
    print(f"V={V} E={E} T={T} (reference V={REFERENCE_SIZES[0]} E={REFERENCE_SIZES[1]} T={REFERENCE_SIZES[2]})")
    return 0


def _print_certificate(cert: dct.FrameCertificate) -> None:
    print(
        f"A={cert.A:.6g} B_rr={cert.B_rr:.6g} B_thm={cert.B_thm} "
        f"lower_complete={cert.lower_complete} upper_complete={cert.upper_complete} "
        f"rank={cert.frame_operator_rank}/{cert.dimension} "
        f"K_d={cert.K_d} K_u={cert.K_u} K_h={cert.K_h}"
        + (" upper_band=empty" if cert.upper_band_empty else "")
    )


def _degenerate(cert: dct.FrameCertificate) -> FrameDegenerate:
    why = []
    if not cert.lower_complete:
        why.append("lower Slepians do not span the gradient space")
    if not cert.upper_complete:
        why.append("upper Slepians do not span the curl space")
    return FrameDegenerate(f"A={cert.A:.3g} <= {dct.TAU_RANK:g}; " + ("; ".join(why) or "frame operator is singular"))


def cmd_dict(args) -> int:
    cx = load_complex(args.complex)
    spec = spectrum_of(cx)
    if args.fourier:
        d = dct.fourier_dictionary(spec)
    else:
        plan = dct.default_concentration_sets(cx, spec, args.hops)
        if args.restrict_lower_to:
            plan = dct.restrict_plan(plan, [i - 1 for i in args.restrict_lower_to], "lower")
        k = None if args.k_tilde in (None, FULL) else int(args.k_tilde)
        d = dct.build_dictionary(spec, plan, k)
    cert = dct.frame_certificate(d)
    out = _out_dir(args)
    save_dictionary(out / args.name, d, cert)
    counts = dct.dictionary_summary(d)["atoms_per_band"]
    print(f"atoms={d.size} upper={counts['upper']} lower={counts['lower']} harmonic={counts['harmonic']}")
    _print_certificate(cert)
    if not cert.a_positive:
        raise _degenerate(cert)
    return 0


def cmd_certify(args) -> int:
    d, _ = load_dictionary(args.dictionary)
    cert = dct.frame_certificate(d)
    report = dct.empirical_frame_check(d, cert, args.trials, args.seed)
    _print_certificate(cert)
    tight = abs(cert.A - cert.B_rr) <= 1e-8 * max(cert.B_rr, 1.0)
    print(
        f"trials={report.trials} min_quotient={report.min_quotient:.6g} "
        f"max_quotient={report.max_quotient:.6g} violations={report.violations}"
        + (" tight=True" if tight else "")
    )
    if args.out_dir:
        out = _out_dir(args)
        payload = {"certificate": cert.to_dict(), "check": {**report.__dict__, "violations": report.violations}, "tight": tight}
        (out / "certify.json").write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    if not cert.a_positive:
        raise _degenerate(cert)
    if report.violations:
        raise FrameDegenerate(f"{report.violations} random vectors violate the frame bounds")
    return 0


def _sweep(args, kind: str) -> int:
    cfg = _load_config(args, kind)
    bench = load_benchmark(cfg)
    result = run_sparsity_sweep(cfg, bench) if kind == "sparsity-sweep" else run_denoise_sweep(cfg, bench)
    out = _out_dir(args)
    stem = kind.replace("-", "_")
    csv_path, _ = result.write(out / f"{stem}.csv")
    (out / f"{stem}.gp").write_text(gnuplot_script(result, csv_path.name, kind))
    V, E, T = bench.sizes
    print(f"V={V} E={E} T={T} rows={len(result.rows)} -> {csv_path}")
    return 0


def cmd_sparsity_sweep(args) -> int:
    return _sweep(args, "sparsity-sweep")


def cmd_denoise_sweep(args) -> int:
    return _sweep(args, "denoise-sweep")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topo-slepians", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=True):
        sp.add_argument("--config", help="JSON experiment config; flags override it")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out-dir", default="out" if out_required else None)

    def grid(sp):
        sp.add_argument("--rows", type=int)
        sp.add_argument("--cols", type=int)
        sp.add_argument("--fit", choices=["stretch", "regular"])
        sp.add_argument("--quadrature", choices=["midpoint", "simpson"])

    sp = sub.add_parser("synth", help="generate the hexagonal complex and its edge flow")
    common(sp)
    grid(sp)
    sp.add_argument("--noise-snr-db", type=float, help="also write a seeded noisy copy at this SNR")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("dict", help="build a Slepian dictionary and certify its frame bounds")
    sp.add_argument("complex", help="complex JSON file")
    sp.add_argument("--k-tilde", default=None, help="per-set cap (integer or 'full')")
    sp.add_argument("--hops", type=int, default=1)
    sp.add_argument("--fourier", action="store_true", help="emit the Fourier basis instead")
    sp.add_argument("--restrict-lower-to", type=_ints, help="1-based edge positions kept in every lower set")
    sp.add_argument("--name", default="dictionary.csv", help="output file name (.csv or .npy)")
    sp.add_argument("--out-dir", default="out")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=cmd_dict)

    sp = sub.add_parser("certify", help="recompute frame bounds of a saved dictionary")
    sp.add_argument("dictionary", help="dictionary CSV/NPY written by 'dict'")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", default=None)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=cmd_certify)

    for name, func in (("sparsity-sweep", cmd_sparsity_sweep), ("denoise-sweep", cmd_denoise_sweep)):
        sp = sub.add_parser(name)
        common(sp)
        grid(sp)
        sp.add_argument("--complex", help="complex JSON instead of the generator")
        sp.add_argument("--signal", help="edge signal CSV")
        sp.add_argument("--k-tilde", type=_k_values, help="comma list, e.g. 4,8,full")
        sp.add_argument("--hops", type=int)
        sp.add_argument("--no-fourier", action="store_true")
        if name == "sparsity-sweep":
            sp.add_argument("--epsilons", type=_floats)
        else:
            sp.add_argument("--snr-db", type=_floats)
            sp.add_argument("--levels", type=_ints, help="sparsity levels, e.g. 10,25,50")
            sp.add_argument("--trials", type=int)
        sp.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FrameDegenerate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except TopoSlepianError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"error: {type(exc).__name__.upper()}: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
