"""Run the six K x capacity scenarios and print a per-scenario summary.

    python scripts/reproduce_sweep.py --out results/sweep --seeds 0 1 2
"""
import argparse
from pathlib import Path

import numpy as np

from dmimo_routing.cli import write_report
from dmimo_routing.config import ScenarioConfig, default_sweep
from dmimo_routing.simulator import run_scenario


def quantiles(xs, qs=(0.1, 0.5, 0.9)):
    if not xs:
        return "n/a"
    return " ".join(f"{v:7.2f}" for v in np.quantile(xs, qs))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--realizations", type=int, default=50)
    ap.add_argument("--common-seeds", action="store_true",
                    help="same UE drops/channels for every capacity at a given K")
    args = ap.parse_args()

    print(f"{'scenario':<14}{'seed':>5}{'drop':>8}{'SINR dB p10/p50/p90':>28}{'util':>8}{'ratio<1':>9}{'maxL2':>7}")
    for seed in args.seeds:
        base = ScenarioConfig(realizations=args.realizations, master_seed=seed)
        for cfg in default_sweep(base):
            if args.common_seeds:
                cfg = cfg.replace(seed_key=f"K{cfg.n_ue}")
            rep = run_scenario(cfg)
            b = rep.batch
            partial = np.mean([r < 1 for r in b.connection_ratio])
            print(f"{cfg.name:<14}{seed:>5}{b.drop_rate:>8.3f}{quantiles(b.sinr_db):>28}"
                  f"{np.mean(b.segment_utilization):>8.3f}{partial:>9.3f}{max(b.l2_path_lengths):>7}")
            if args.out:
                write_report(rep, args.out / f"seed{seed}")


if __name__ == "__main__":
    main()
