#!/usr/bin/env python3
"""Run the suite over a range of q and write one RunReport per q, plus a summary table."""
import argparse
import json
import os
import sys

from sidonpolar.suite import run_suite, write_atomic

DESK = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="*", default=DESK)
    ap.add_argument("--out", default="reports")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    worst = 0
    for q in args.q:
        rep = run_suite(q, jobs=args.jobs)
        path = os.path.join(args.out, f"suite_q{q}.json")
        write_atomic(path, rep.to_json().encode())
        failed = [c.claim_id for c in rep.certificates if c.passed is False]
        open_ = [c.claim_id for c in rep.certificates if c.passed is None]
        secs = sum(rep.timings.values())
        print(f"q={q:>3}  exit={rep.exit_code}  certs={len(rep.certificates):>3}  {secs:6.2f}s  "
              f"fail={failed or '-'}  inconclusive={open_ or '-'}")
        worst = max(worst, rep.exit_code)
    summary = {q: json.load(open(os.path.join(args.out, f"suite_q{q}.json")))["params"] for q in args.q}
    write_atomic(os.path.join(args.out, "params.json"), json.dumps(summary, indent=2).encode())
    return worst


if __name__ == "__main__":
    sys.exit(main())
