"""Sparsity sweep on the hexagonal benchmark.

Writes the sweep CSV, its JSON sidecar and a gnuplot script, then prints the
l0 curve of every method.

    python scripts/run_sparsity_sweep.py --out-dir results/sparsity
"""

import argparse
from collections import defaultdict
from pathlib import Path

from topo_slepians.experiments import ExperimentConfig, gnuplot_script, load_benchmark, run_sparsity_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON experiment config")
    ap.add_argument("--out-dir", default="results/sparsity")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if args.config:
        cfg = ExperimentConfig.from_json(args.config, kind="sparsity-sweep", seed=args.seed)
    else:
        cfg = ExperimentConfig(seed=args.seed)
    bench = load_benchmark(cfg)
    result = run_sparsity_sweep(cfg, bench)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, _ = result.write(out / "sparsity_sweep.csv")
    (out / "sparsity_sweep.gp").write_text(gnuplot_script(result, csv_path.name, "sparsity-sweep"))

    V, E, T = bench.sizes
    print(f"complex V={V} E={E} T={T}, harmonic dimension {bench.spectrum.n_harm}")
    curves = defaultdict(list)
    for r in result.sorted_rows():
        curves[r["method"]].append(r["l0"])
    eps = sorted(cfg.epsilons)
    print("epsilon      " + " ".join(f"{e:8.1e}" for e in eps))
    for method, l0 in sorted(curves.items()):
        print(f"{method:12s} " + " ".join(f"{v:8d}" for v in l0))
    print(f"wrote {csv_path}")


if __name__ == "__main__":
    main()
