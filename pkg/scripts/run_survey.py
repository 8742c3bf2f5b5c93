"""Consistency survey over many topologies, with a class/outcome summary table.

    python scripts/run_survey.py --k 4                      # all 4096 topologies
    python scripts/run_survey.py --k 7 --random 300 --density 0.25
"""

import argparse
import json
import time
from collections import Counter
from fractions import Fraction

from tim.oracle import exhaustive_survey, sampled_survey, summarize


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, required=True)
    ap.add_argument("--random", type=int, help="sample this many topologies instead of enumerating")
    ap.add_argument("--density", type=Fraction, default=Fraction(1, 4))
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", help="JSON-lines file for the individual records")
    args = ap.parse_args()

    start = time.perf_counter()
    if args.random:
        records = list(sampled_survey(args.k, args.random, args.density, args.seed))
    else:
        records = list(exhaustive_survey(args.k, args.seed))
    elapsed = time.perf_counter() - start

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(r.to_json_obj(), sort_keys=True) + "\n")

    table = Counter((r.cls.value, str(r.bound.value), r.outcome) for r in records)
    print(f"{'class':<18}{'bound':>8}  {'outcome':<15}{'count':>7}")
    for (cls, bound, outcome), n in sorted(table.items()):
        print(f"{cls:<18}{bound:>8}  {outcome:<15}{n:>7}")
    summary = summarize(records)
    print(f"{summary['records']} topologies in {elapsed:.1f}s, {summary['flagged']} flagged")
    for r in records:
        if r.flags:
            print(f"  #{r.index} {r.topology.to_json()}: {r.flags}")


if __name__ == "__main__":
    main()
