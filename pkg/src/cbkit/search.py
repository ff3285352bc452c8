"""Seeded searches that stress-test implications about CB point sets over F_p.

Modes:
  line_bound         CB(m) => r >= m+2, and CB(m) with r <= 2m+1 => collinear
  conic_bound        CB(m) with r <= floor(5m/2 + 1) => on a line, two lines or a smooth conic,
                     and in the two-line case each line carries >= m+1 points
  line_counts        only the two-line count condition
  cubic_containment  exploratory: CB(m) planar sets with r <= floor(3m + 1), is S on a plane cubic?

Results over a finite field are evidence for that field only.
"""

from __future__ import annotations

import logging
import multiprocessing as mp
import time
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field as dc_field
from random import Random

from .cb import cb_check
from .curves import classify_degree2, on_plane_cubic
from .fields import GF, PrimeField
from .linalg import rank
from .generators import CI_FAMILIES, FiberFactory, GENERATORS, gen_random
from .projective import PointSet

log = logging.getLogger(__name__)

MODES = ("line_bound", "conic_bound", "line_counts", "cubic_containment")


@dataclass
class SearchJob:
    mode: str = "line_bound"
    p: int = 101
    N: int = 2
    m_min: int = 1
    m_max: int = 4
    r_min: int = 2
    r_max: int = 12
    trials: int = 1000
    seed: int = 0
    generators: dict = dc_field(default_factory=lambda: {"ci_fibers": 3, "projection_fibers": 1})
    cubic_degree: int = 3
    cb_method: str = "fast"
    corrupt_implication: bool = False  # fault injection: report implications that hold

    def validate(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "cubic_containment" and self.cubic_degree != 3:
            raise ValueError("only plane cubics are supported")
        if not 1 <= self.m_min <= self.m_max:
            raise ValueError("bad m range")
        if not 2 <= self.r_min <= self.r_max:
            raise ValueError("bad r range")
        if self.p <= 2 * max(self.m_max, self.r_max):
            raise ValueError("characteristic guard: need p > 2 max(m, r)")
        if self.N < 2:
            raise ValueError("ambient dimension must be >= 2")
        for g in self.generators:
            if g not in GENERATORS:
                raise ValueError(f"unknown generator {g!r}")
        if not any(w > 0 for w in self.generators.values()):
            raise ValueError("no generator has positive weight")
        if self.cb_method not in ("fast", "naive"):
            raise ValueError("cb_method must be fast or naive")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "SearchJob":
        known = set(cls.__dataclass_fields__)
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown job fields: {sorted(extra)}")
        job = cls(**obj)
        job.validate()
        return job


@dataclass
class SearchOutcome:
    trials_run: int = 0
    candidates: int = 0
    cb_sets_found: int = 0
    violations: list = dc_field(default_factory=list)
    histogram: dict = dc_field(default_factory=dict)  # "m=.., r=.." -> {kind: count}
    per_generator: dict = dc_field(default_factory=dict)
    cubic: dict = dc_field(default_factory=dict)  # containment data (cubic_containment mode)
    candidate_counterexamples: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        out["evidence"] = "finite-field search; field-specific evidence only"
        return out


@dataclass
class TrialResult:
    index: int
    generator: str
    family: str
    m: int
    r: int | None
    cb: bool = False
    kind: str | None = None
    violations: list = dc_field(default_factory=list)
    cubic: bool | None = None
    counterexample: dict | None = None


def _trial_rng(seed: int, index: int) -> Random:
    return Random(f"{seed}/{index}")


def _pick_generator(job: SearchJob, rng: Random) -> str:
    names = sorted(g for g, w in job.generators.items() if w > 0)
    weights = [job.generators[g] for g in names]
    return rng.choices(names, weights)[0]


def _candidate(job: SearchJob, F: PrimeField, factory: FiberFactory, gen: str, m: int, rng: Random):
    for _ in range(8):
        if gen == "ci_fibers":
            fam = rng.choice(sorted(CI_FAMILIES))
            pts = CI_FAMILIES[fam](m, job.N, F, rng)
        elif gen == "projection_fibers":
            res = factory.fiber(m, rng, job.r_max)
            pts, fam = (res[0], res[1]["kind"]) if res else (None, "projection")
        else:
            fam = "random"
            pts = gen_random(m, job.N, F, rng, job.r_min, job.r_max)
        if pts is None or not job.r_min <= len(pts) <= job.r_max:
            continue
        try:
            return fam, PointSet(pts, F)
        except ValueError:
            continue  # repeated points
    return None, None


def _record(job, index, gen, fam, m, S, cb, cls, what):
    return {
        "seed": job.seed,
        "trial": index,
        "generator": gen,
        "family": fam,
        "m": m,
        "r": len(S),
        "points": S.to_json(),
        "cb_holds": cb,
        "class": None if cls is None else cls.kind,
        "per_line_counts": None if cls is None else cls.per_line_counts,
        "violated": what,
    }


def _check(job: SearchJob, index: int, gen: str, fam: str, m: int, S: PointSet, res: TrialResult):
    r = len(S)
    flip = job.corrupt_implication
    cls = None

    def need_class():
        nonlocal cls
        if cls is None:
            cls = classify_degree2(S)
            res.kind = cls.kind
        return cls

    def verdict(conclusion: bool, what: str):
        if conclusion == flip:
            res.violations.append(_record(job, index, gen, fam, m, S, True, need_class(), what))

    verdict(r >= m + 2, "CB(m) set with fewer than m+2 points")
    if job.mode == "line_bound":
        if r <= 2 * m + 1:
            verdict(need_class().kind == "line", "CB(m) set with r <= 2m+1 not collinear")
    elif job.mode in ("conic_bound", "line_counts"):
        if 2 * r <= 5 * m + 2:
            c = need_class()
            if job.mode == "conic_bound":
                verdict(c.kind != "none", "CB(m) set with r <= 5m/2+1 not on a curve of degree <= 2")
            if c.kind == "two_lines":
                verdict(min(c.per_line_counts) >= m + 1, "two-line CB(m) set with a line carrying <= m points")
    else:
        if r <= 3 * m + 1:
            planar = S.coordinate_matrix()
            if rank(planar) <= 3:
                res.cubic = on_plane_cubic(S)
                if not res.cubic:
                    res.counterexample = _record(job, index, gen, fam, m, S, True, None,
                                                 "planar CB(m) set within the bound not on a plane cubic")
    if res.kind is None and job.mode != "cubic_containment":
        res.kind = need_class().kind


def run_trial(job: SearchJob, index: int, F: PrimeField, factory: FiberFactory) -> TrialResult:
    rng = _trial_rng(job.seed, index)
    m = rng.randint(job.m_min, job.m_max)
    gen = _pick_generator(job, rng)
    fam, S = _candidate(job, F, factory, gen, m, rng)
    res = TrialResult(index, gen, fam or "none", m, None if S is None else len(S))
    if S is None:
        return res
    res.cb = cb_check(S, m, method=job.cb_method, witness=False).holds
    if res.cb:
        _check(job, index, gen, fam, m, S, res)
    return res


def _run_chunk(args):
    job_dict, indices = args
    job = SearchJob(**job_dict)
    F = GF(job.p)
    factory = FiberFactory(F, job.seed)
    return [run_trial(job, i, F, factory) for i in indices]


def _merge(job: SearchJob, results: list[TrialResult]) -> SearchOutcome:
    out = SearchOutcome()
    hist = defaultdict(Counter)
    per_gen = defaultdict(Counter)
    cubic = Counter()
    for res in sorted(results, key=lambda r: r.index):
        out.trials_run += 1
        per_gen[res.generator]["trials"] += 1
        if res.r is None:
            per_gen[res.generator]["no_candidate"] += 1
            continue
        out.candidates += 1
        if not res.cb:
            continue
        out.cb_sets_found += 1
        per_gen[res.generator]["cb_sets"] += 1
        hist[f"m={res.m},r={res.r}"][res.kind or "unclassified"] += 1
        out.violations.extend(res.violations)
        if res.cubic is not None:
            cubic["contained" if res.cubic else "not_contained"] += 1
        if res.counterexample is not None:
            out.candidate_counterexamples.append(res.counterexample)
    out.histogram = {k: dict(sorted(v.items())) for k, v in sorted(hist.items())}
    out.per_generator = {k: dict(sorted(v.items())) for k, v in sorted(per_gen.items())}
    if job.mode == "cubic_containment":
        out.cubic = dict(sorted(cubic.items()))
    return out


def run_search(job: SearchJob, workers: int = 1, stats: dict | None = None) -> SearchOutcome:
    """Run all trials; the outcome depends only on the job, not on `workers`."""
    job.validate()
    t0 = time.perf_counter()
    indices = list(range(job.trials))
    if workers <= 1 or job.trials < 2 * workers:
        results = _run_chunk((job.to_json(), indices))
    else:
        chunks = [indices[k::workers] for k in range(workers)]
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
        with ctx.Pool(workers) as pool:
            parts = pool.map(_run_chunk, [(job.to_json(), c) for c in chunks])
        results = [r for part in parts for r in part]
    out = _merge(job, results)
    elapsed = time.perf_counter() - t0
    if stats is not None:
        stats["seconds"] = elapsed
        stats["trials_per_second"] = job.trials / elapsed if elapsed > 0 else float("inf")
    log.info("search: %d trials in %.2fs", job.trials, elapsed)
    return out


def cubic_containment_explore(job: SearchJob, workers: int = 1) -> SearchOutcome:
    if job.mode != "cubic_containment":
        raise ValueError("job mode must be cubic_containment")
    return run_search(job, workers)


def replay(record: dict) -> dict:
    """Recompute the CB verdict and curve class of a reproducer record."""
    S = PointSet.from_json(record["points"])
    cb = cb_check(S, record["m"]).holds
    cls = classify_degree2(S)
    return {"cb_holds": cb, "class": cls.kind, "per_line_counts": cls.per_line_counts}


# -- CB throughput benchmark -----------------------------------------------------

def benchmark_candidates(job: SearchJob) -> list[tuple[PointSet, int]]:
    """The candidate sets a job would check, without checking them."""
    job.validate()
    F = GF(job.p)
    factory = FiberFactory(F, job.seed)
    out = []
    for i in range(job.trials):
        rng = _trial_rng(job.seed, i)
        m = rng.randint(job.m_min, job.m_max)
        gen = _pick_generator(job, rng)
        _, S = _candidate(job, F, factory, gen, m, rng)
        if S is not None:
            out.append((S, m))
    return out


def cb_throughput(cands: list[tuple[PointSet, int]], method: str) -> tuple[float, list[bool]]:
    """Checks per second of one CB method on fixed candidates, with the verdicts."""
    t0 = time.perf_counter()
    verdicts = [cb_check(S, m, method=method, witness=False).holds for S, m in cands]
    dt = time.perf_counter() - t0
    return (len(cands) / dt if dt > 0 else float("inf")), verdicts
