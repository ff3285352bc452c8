"""Run the searches behind the point-set bounds and summarize each as one line.

    python3 scripts/run_search.py [--trials 2000] [--workers 4] [--out results.json]
"""

import argparse
import json
import time

from cbkit.search import SearchJob, run_search


def jobs(trials):
    for m in range(1, 5):
        yield SearchJob(mode="line_bound", N=3, m_min=m, m_max=m, trials=trials, seed=m)
    for m in range(1, 7):
        yield SearchJob(mode="conic_bound", N=3, m_min=m, m_max=m, r_max=5 * m // 2 + 1,
                        trials=trials, seed=10 + m)
    for m in range(1, 5):
        yield SearchJob(mode="cubic_containment", N=2, m_min=m, m_max=m, r_max=3 * m + 1,
                        trials=trials, seed=20 + m)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()
    results = []
    for job in jobs(args.trials):
        t0 = time.perf_counter()
        out = run_search(job, workers=args.workers)
        dt = time.perf_counter() - t0
        extra = f" cubic={out.cubic}" if job.mode == "cubic_containment" else ""
        print(f"{job.mode:18} m={job.m_min} cb_sets={out.cb_sets_found:6d} "
              f"violations={len(out.violations)}{extra} ({dt:.1f}s)")
        results.append({"job": job.to_json(), "outcome": out.to_json()})
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=1, sort_keys=True)


if __name__ == "__main__":
    main()
