"""Build and validate certificates for the worked examples; write them to an output directory."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from nonsimple import certify as C
from nonsimple.cli import describe, load_member
from nonsimple.phase import parse_phm
from nonsimple.words import Generator, parse_presentation, parse_relations

DATA = Path(__file__).resolve().parent.parent / "data"


@dataclass
class Config:
    data: Path = DATA
    out: Path = Path("certificates")
    max_depth: int = 4


def build(cfg: Config) -> dict[str, C.Certificate]:
    d = cfg.data
    certs = {"intro": C.certify_nonsimple_power(parse_phm((d / "minus1.phm").read_text()), (2, 1))}
    target = parse_presentation((d / "final_target.pres").read_text())
    family = [load_member((d / f).read_text()) for f in ("final_plus.pres", "final_minus.pres")]
    certs["final"] = C.certify_nonsimple_general(target, family, max_depth=cfg.max_depth)
    bz = parse_presentation((d / "bz.pres").read_text())
    unitary = tuple(Generator(g.name) for g in bz.generators)
    certs["bz"] = C.certify_via_power_quotient(bz, parse_relations((d / "bz_added.rels").read_text(), unitary))
    certs["torus_half"] = C.certify_torus(parse_phm((d / "minus1.phm").read_text()))
    certs["torus_symbolic"] = C.certify_torus(parse_phm((d / "symbolic.phm").read_text()))
    return certs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Config.out)
    parser.add_argument("--max-depth", type=int, default=Config.max_depth)
    args = parser.parse_args()
    cfg = Config(out=args.out, max_depth=args.max_depth)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for name, cert in build(cfg).items():
        (cfg.out / f"{name}.json").write_text(cert.to_json())
        print(f"== {name}: {'valid' if C.validate_certificate(cert) else 'INVALID'}")
        print(describe(cert))


if __name__ == "__main__":
    main()
