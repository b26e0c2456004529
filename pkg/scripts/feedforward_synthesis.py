"""Parameter synthesis on the feedforward loop for the bundled triples.

Runs each triple in models/ against the feedforward network in both modes
and prints how many valuations survive plus a compact constraint.

    python scripts/feedforward_synthesis.py [--jobs N]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from grnhoare import format_assertion, load_network, load_triple, solve_triple
from grnhoare.programs import has_while
from grnhoare.solver import cross_check

MODELS = Path(__file__).resolve().parent.parent / "models"

CASES = [
    ("p1", "feedforward.net"),
    ("p2", "feedforward.net"),
    ("p3", "feedforward_pinned.net"),
    ("p4", "feedforward_pinned.net"),
]


def run_case(name, net_file, jobs):
    net = load_network(MODELS / net_file)
    triple = load_triple(MODELS / f"{name}.triple", net)
    row = {"triple": name, "network": Path(net_file).stem}
    for mode in ("wp", "oracle"):
        t0 = time.perf_counter()
        report = solve_triple(net, triple, mode, jobs=jobs, network_id=row["network"])
        row[mode] = (len(report.consistent), report.total, len(report.undetermined),
                     time.perf_counter() - t0)
        row["constraint"] = format_assertion(report.constraint())
    # cross_check is defined for loop-free programs only
    row["disagreements"] = None if has_while(triple.program) else len(cross_check(net, triple))
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", "-j", type=int, default=1)
    args = ap.parse_args()
    for name, net_file in CASES:
        row = run_case(name, net_file, args.jobs)
        wp, orc = row["wp"], row["oracle"]
        print(f"{row['triple']} on {row['network']}")
        print(f"  wp     : {wp[0]}/{wp[1]} consistent ({wp[3]:.3f}s)")
        print(f"  oracle : {orc[0]}/{orc[1]} consistent, {orc[2]} undetermined ({orc[3]:.3f}s)")
        if row["disagreements"] is not None:
            print(f"  per-state disagreements: {row['disagreements']}")
        print(f"  constraint: {row['constraint']}")


if __name__ == "__main__":
    main()
