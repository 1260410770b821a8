"""Count root matrices rho for every exponent vector up to a bound and compare with prod p_i p_j."""

import argparse
import itertools
from dataclasses import dataclass

from nonsimple import certify as C
from nonsimple.phase import PhaseMatrix


@dataclass
class Config:
    n: int = 3
    max_p: int = 4
    max_count: int = 10**4
    z: str = "1/2"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=Config.n)
    parser.add_argument("--max-p", type=int, default=Config.max_p)
    parser.add_argument("--max-count", type=int, default=Config.max_count)
    parser.add_argument("--z", default=Config.z, help="phase used for every z_ij")
    cfg = Config(**vars(parser.parse_args()))
    z = PhaseMatrix.from_upper(cfg.n, {(i, j): cfg.z for i in range(cfg.n) for j in range(i + 1, cfg.n)})
    print(f"{'p':<16}{'expected':>10}{'found':>10}")
    bad = 0
    for p in itertools.product(range(1, cfg.max_p + 1), repeat=cfg.n):
        expected = C.root_count(p)
        if expected > cfg.max_count:
            continue
        found = len(set(C.solve_root_system(z, p)))
        bad += found != expected
        print(f"{str(p):<16}{expected:>10}{found:>10}")
    print("mismatches:", bad)


if __name__ == "__main__":
    main()
