"""Closed forms against their oracles over a randomized sweep.

Compares the D family and the commutant with their kernel oracles and builds
the integrable system for every spec, printing one summary row per kind.
"""

import argparse
import time
from collections import defaultdict
from dataclasses import dataclass

from hamfactor.dsolver import compare_with_oracle
from hamfactor.integrability import IntegrityError, build_integrable, compare_commutant
from hamfactor.sampling import random_specs


@dataclass
class SweepConfig:
    n: int = 300
    seed: int = 0
    max_dim: int = 10
    integrable: bool = True


def sweep(cfg: SweepConfig) -> dict:
    rows = defaultdict(lambda: {"specs": 0, "d_bad": 0, "comm_bad": 0, "sys_bad": 0})
    for spec in random_specs(cfg.n, seed=cfg.seed, max_dim=cfg.max_dim):
        key = "+".join(b.kind for b in spec.blocks)
        row = rows[spec.blocks[0].kind if len(spec.blocks) == 1 else "mixed"]
        row["specs"] += 1
        row["d_bad"] += not compare_with_oracle(spec).agree
        row["comm_bad"] += not compare_commutant(spec).agree
        if cfg.integrable:
            try:
                build_integrable(spec, seed=cfg.seed)
            except IntegrityError as exc:
                row["sys_bad"] += 1
                print(f"transcript failure on {key}: {exc}")
    return dict(rows)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=SweepConfig.n)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--max-dim", type=int, default=SweepConfig.max_dim)
    ap.add_argument("--no-integrable", action="store_true")
    a = ap.parse_args()
    cfg = SweepConfig(a.n, a.seed, a.max_dim, not a.no_integrable)
    t0 = time.perf_counter()
    rows = sweep(cfg)
    print(f"{'kind':<16}{'specs':>7}{'D bad':>7}{'comm bad':>10}{'sys bad':>9}")
    for kind, r in sorted(rows.items()):
        print(f"{kind:<16}{r['specs']:>7}{r['d_bad']:>7}{r['comm_bad']:>10}{r['sys_bad']:>9}")
    print(f"{cfg.n} specs in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
