"""Fast vs naive CB throughput on the line_bound benchmark job.

    python3 scripts/benchmark.py [--record]

--record writes the measured ratio to tests/data/perf_baseline.json, which the
acceptance suite prints next to its own measurement.
"""

import argparse
import json
import platform
from pathlib import Path

from cbkit.search import SearchJob, benchmark_candidates, cb_throughput

BASELINE = Path(__file__).resolve().parent.parent / "tests" / "data" / "perf_baseline.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--record", action="store_true")
    args = ap.parse_args()

    job = SearchJob(mode="line_bound", N=3, m_max=4, trials=args.trials, seed=0)
    cands = benchmark_candidates(job)
    fast = max(cb_throughput(cands, "fast")[0] for _ in range(args.repeats))
    naive = max(cb_throughput(cands, "naive")[0] for _ in range(args.repeats))
    out = {"job": job.to_json(), "candidates": len(cands), "fast_per_s": round(fast, 1),
           "naive_per_s": round(naive, 1), "ratio": round(fast / naive, 2),
           "python": platform.python_version()}
    print(json.dumps(out, indent=2, sort_keys=True))
    if args.record:
        BASELINE.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
