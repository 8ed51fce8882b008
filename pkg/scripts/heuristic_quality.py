"""Error of the AM heuristic against the exact distance on random instances.

Prints the error statistics (avg, std, P0, max of 100 * (AM - exact) / exact)
for every initialization, plus the iteration-count distribution.

    python scripts/heuristic_quality.py --instances 200 --n 6 --lifetime 8
"""

from __future__ import annotations

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass

from dtgw import DtgwOptions, am_heuristic, error_stats, exact_dtgw, random_temporal_graph
from dtgw.distance import INITS
from dtgw.experiments import make_rng


@dataclass
class QualityConfig:
    instances: int = 100
    n: int = 6
    lifetime: int = 8
    density_low: float = 0.2
    density_high: float = 0.4
    seed: int = 707


def run(cfg: QualityConfig) -> dict:
    rng = make_rng(cfg.seed)
    pairs = {init: [] for init in INITS}
    iterations = {init: Counter() for init in INITS}
    for k in range(cfg.instances):
        g = random_temporal_graph(cfg.n, cfg.lifetime, float(rng.uniform(cfg.density_low, cfg.density_high)), 2 * k)
        h = random_temporal_graph(cfg.n, cfg.lifetime, float(rng.uniform(cfg.density_low, cfg.density_high)), 2 * k + 1)
        exact = exact_dtgw(g, h).distance
        for init in INITS:
            res = am_heuristic(g, h, DtgwOptions(init=init))
            pairs[init].append((res.distance, exact))
            iterations[init][res.iterations] += 1
    return {
        "config": asdict(cfg),
        "errors": {init: error_stats(p).as_dict() for init, p in pairs.items()},
        "iterations": {init: dict(sorted(c.items())) for init, c in iterations.items()},
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(QualityConfig()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    args = parser.parse_args(argv)
    print(json.dumps(run(QualityConfig(**vars(args))), indent=2))


if __name__ == "__main__":
    main()
