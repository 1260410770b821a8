"""Time certify_nonsimple_power + validation on random rational instances."""

import argparse
import random
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from nonsimple import certify as C
from nonsimple.phase import Phase, PhaseMatrix


@dataclass
class Config:
    instances: int = 200
    min_n: int = 2
    max_n: int = 4
    max_p: int = 5
    max_den: int = 12
    dim_cap: int = 4096
    seed: int = 0


def random_instance(rng: random.Random, cfg: Config):
    n = rng.randint(cfg.min_n, cfg.max_n)
    p = [rng.randint(1, cfg.max_p) for _ in range(n)]
    if all(x == 1 for x in p):
        p[rng.randrange(n)] = rng.randint(2, max(2, cfg.max_p))
    z = PhaseMatrix.from_upper(n, {(i, j): Phase(Fraction(rng.randrange(60), rng.randint(1, cfg.max_den)))
                                   for i in range(n) for j in range(i + 1, n)})
    return z, p


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    instances = [random_instance(rng, cfg) for _ in range(cfg.instances)]
    methods = {"monomial_rep": 0, "cited": 0}
    invalid = 0
    start = time.perf_counter()
    for z, p in instances:
        cert = C.certify_nonsimple_power(z, p, dim_cap=cfg.dim_cap)
        methods[cert.leg("nonzero")["method"]] += 1
        invalid += not C.validate_certificate(cert)
    return {"seconds": round(time.perf_counter() - start, 3), "invalid": invalid, **methods}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    for f in fields(Config):
        parser.add_argument(f"--{f.name.replace('_', '-')}", type=int, default=f.default)
    cfg = Config(**vars(parser.parse_args()))
    print(asdict(cfg))
    print(run(cfg))


if __name__ == "__main__":
    main()
