"""Random oracle/wp agreement campaign.

Draws seeded random networks and loop-free triples, compares the oracle
with the weakest precondition at every (valuation, state) pair and writes
one CSV row per seed.

    python scripts/crosscheck_campaign.py --seeds 200 --out campaign.csv
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import asdict, fields

from grnhoare.programs import print_program
from grnhoare.random_models import RandomConfig, random_network, random_triple
from grnhoare.solver import count_valuations, cross_check


def campaign(seeds, cfg: RandomConfig):
    for seed in seeds:
        rng = random.Random(seed)
        net = random_network(rng, cfg)
        triple = random_triple(rng, net, cfg)
        t0 = time.perf_counter()
        bad = cross_check(net, triple)
        yield {
            "seed": seed,
            "variables": len(net.var_names),
            "parameters": len(net.param_symbols),
            "valuations": count_valuations(net),
            "disagreements": len(bad),
            "seconds": round(time.perf_counter() - t0, 4),
            "program": print_program(triple.program),
        }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--out", default="-", help="CSV path, - for stdout")
    for f in fields(RandomConfig):
        ap.add_argument(f"--{f.name.replace('_', '-')}", type=int, default=getattr(RandomConfig, f.name))
    args = ap.parse_args(argv)
    cfg = RandomConfig(**{f.name: getattr(args, f.name) for f in fields(RandomConfig)})

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = None
    total = bad = 0
    for row in campaign(range(args.start, args.start + args.seeds), cfg):
        if writer is None:
            writer = csv.DictWriter(out, fieldnames=list(row))
            writer.writeheader()
        writer.writerow(row)
        total += row["valuations"]
        bad += row["disagreements"]
    if out is not sys.stdout:
        out.close()
    print(f"# {args.seeds} networks, {total} valuations, {bad} disagreements, config {asdict(cfg)}",
          file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
