"""Randomised heredity sweep: persistence on valid models, detection on mutated ones."""

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from gen import mutate_heredity, random_formula, random_ihl  # noqa: E402
from knormas.intuitionistic import check_persistence, validate_heredity  # noqa: E402


@dataclass
class SweepConfig:
    models: int = 500
    formulas: int = 10
    depth: int = 3
    max_states: int = 4
    max_points: int = 3
    mutants: int = 100
    seed: int = 0


def main(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    start = time.perf_counter()
    checks = violations = 0
    for _ in range(cfg.models):
        m, g = random_ihl(rng, cfg.max_states, cfg.max_points)
        for _ in range(cfg.formulas):
            f = random_formula(rng, cfg.depth)
            checks += 1
            found = check_persistence(m, g, f)
            violations += len(found)
            for w, d, v in found:
                print(f"persistence fails for {f} at {w}:{d} -> {v}")
    caught = made = 0
    while made < cfg.mutants:
        mutant = mutate_heredity(rng, random_ihl(rng, cfg.max_states, cfg.max_points)[0])
        if mutant is None:
            continue
        made += 1
        caught += any(v.kind.endswith("not-monotone") for v in validate_heredity(mutant))
    print(f"{cfg.models} models, {checks} formula checks, {violations} violations")
    print(f"{caught}/{made} mutants caught")
    print(f"{time.perf_counter() - start:.2f}s")
    return int(violations > 0 or caught < made)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for field, default in vars(SweepConfig()).items():
        ap.add_argument("--" + field.replace("_", "-"), type=int, default=default)
    sys.exit(main(SweepConfig(**vars(ap.parse_args()))))
