"""Monte-Carlo denoising sweep on the hexagonal benchmark.

Each trial adds seeded Gaussian noise at the target SNR and reconstructs the
flow with sparsity-constrained OMP; the table printed at the end shows mean
NMSE per (method, s) and SNR.

    python scripts/run_denoise_sweep.py --trials 100 --out-dir results/denoise
"""

import argparse
from collections import defaultdict
from pathlib import Path

from topo_slepians.experiments import ExperimentConfig, gnuplot_script, load_benchmark, run_denoise_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON experiment config")
    ap.add_argument("--out-dir", default="results/denoise")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=100)
    args = ap.parse_args()

    overrides = dict(kind="denoise-sweep", seed=args.seed, trials=args.trials)
    if args.config:
        cfg = ExperimentConfig.from_json(args.config, **overrides)
    else:
        cfg = ExperimentConfig(k_tilde=[4], **overrides)
    bench = load_benchmark(cfg)
    result = run_denoise_sweep(cfg, bench)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, _ = result.write(out / "denoise_sweep.csv")
    (out / "denoise_sweep.gp").write_text(gnuplot_script(result, csv_path.name, "denoise-sweep"))

    table = defaultdict(dict)
    for r in result.rows:
        table[(r["method"], r["s"])][r["snr_db"]] = r["nmse_mean"]
    snrs = sorted(cfg.snr_db)
    print(f"{cfg.trials} trials per point, E={bench.sizes[1]}")
    print("SNR [dB]          " + " ".join(f"{s:7.1f}" for s in snrs))
    for (method, s), row in sorted(table.items()):
        cells = " ".join(f"{row[v]:7.4f}" if row[v] is not None else "   fail" for v in snrs)
        print(f"{method:12s} s={s:<3d} {cells}")
    print(f"wrote {csv_path}")


if __name__ == "__main__":
    main()
