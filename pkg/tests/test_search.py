import json

import pytest

from cbkit.search import SearchJob, benchmark_candidates, cb_throughput, replay, run_search


def test_job_validation():
    with pytest.raises(ValueError):
        SearchJob(mode="nonsense").validate()
    with pytest.raises(ValueError, match="characteristic guard"):
        SearchJob(p=13, r_max=12).validate()
    with pytest.raises(ValueError):
        SearchJob.from_json({"mode": "line_bound", "bogus": 1})
    with pytest.raises(ValueError):
        SearchJob(generators={"ci_fibers": 0}).validate()


def test_job_json_roundtrip():
    job = SearchJob(mode="conic_bound", m_max=6, r_max=16, trials=10, seed=4)
    assert SearchJob.from_json(json.loads(json.dumps(job.to_json()))) == job


@pytest.mark.parametrize("mode", ["line_bound", "conic_bound", "line_counts"])
def test_small_searches_find_cb_sets_without_violations(mode):
    out = run_search(SearchJob(mode=mode, N=3, trials=300, seed=1))
    assert out.cb_sets_found > 50
    assert out.ok and out.violations == []
    assert out.histogram


def test_search_is_deterministic_and_worker_independent():
    job = SearchJob(mode="conic_bound", trials=120, seed=9)
    a = run_search(job).to_json()
    b = run_search(job, workers=2).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_fault_injection_reports_replayable_violations():
    out = run_search(SearchJob(mode="line_bound", trials=100, seed=2, corrupt_implication=True))
    assert not out.ok
    rec = out.violations[0]
    again = replay(rec)
    assert again["cb_holds"] is True and again["class"] == rec["class"]


def test_cubic_containment_reports_data_not_violations():
    out = run_search(SearchJob(mode="cubic_containment", N=2, trials=300, seed=3))
    assert out.ok
    assert sum(out.cubic.values()) > 0
    for rec in out.candidate_counterexamples:
        assert rec["r"] <= 3 * rec["m"] + 1


def test_fast_and_naive_agree_on_benchmark_candidates():
    cands = benchmark_candidates(SearchJob(mode="line_bound", N=3, trials=150, seed=5))
    _, fast = cb_throughput(cands, "fast")
    _, naive = cb_throughput(cands, "naive")
    assert fast == naive
