import json

import pytest

from pureres import drivers
from pureres.verdict import FAIL, PASS, Verdict


def test_koszul_report_is_deterministic():
    a = drivers.verify_koszul(2, 1, seed=3)
    b = drivers.verify_koszul(2, 1, seed=3)
    assert a.passed and a.dumps() == b.dumps()
    obj = json.loads(a.dumps())
    assert "wall_time" not in obj and obj["parameters"]["seeds"] == [3]
    assert "wall_time" in a.to_json(timing=True)


def test_koszul_report_content():
    rep = drivers.verify_koszul(3, 1)
    claims = {v.claim: v for v in rep.verdicts}
    assert claims["rank F_2 = binom(3,2)"].computed == 3
    assert claims["hd(F_2)"].computed == 2
    assert all(v.status == PASS for v in rep.verdicts)


def test_reseed_on_failed_simplicity(monkeypatch):
    calls = []

    def run(seed):
        calls.append(seed)
        ok = seed > 10
        return [Verdict("X is simple", 1 if ok else 2, 1)], {}

    rep = drivers._with_reseed("demo", {}, 10, run)
    assert calls == [10, 11] and rep.parameters["seeds"] == [10, 11] and rep.passed
    calls.clear()
    rep = drivers._with_reseed("demo", {}, 5, run)
    # a second failure is reported, not retried again
    assert calls == [5, 6] and rep.status == FAIL


def test_anyhd_small():
    rep = drivers.verify_anyhd(4, 2)
    assert rep.passed, rep.dumps()
    hd = next(v for v in rep.verdicts if v.claim == "hd(E_2)")
    assert list(hd.provenance["witness"]) == [2, -4, 1]
    assert rep.parameters["degrees"] == [2]


def test_anyhd_schedule_too_tight_is_an_error():
    from pureres.errors import ScheduleTooTight
    with pytest.raises(ScheduleTooTight):
        drivers.verify_anyhd(4, 2, degrees=[1])


def test_gorenstein_rejects_bad_parameters():
    with pytest.raises(ValueError):
        drivers.verify_gorenstein(2, 1)
    with pytest.raises(ValueError):
        drivers.verify_koszul(1, 1)


def test_explore_records_observations_only():
    rep = drivers.explore([2, 3, 4, 6])
    assert rep.verdicts == []
    assert rep.observations[0] == {"herzog_kuhl_betti": ["9", "16", "9", "1"]}
    assert rep.observations[1]["terms"] == [[1, -6], [9, -4], [16, -3], [9, -2], [1, 0]]
    assert [o["hd"] for o in rep.observations[2:]] == [1, 2]
    rep = drivers.explore([1, 2, 4])
    assert rep.observations[0] == {"herzog_kuhl_betti": ["8/3", "2", "1/3"]}
    assert "integral" in rep.observations[1]["outcome"]
    with pytest.raises(ValueError):
        drivers.explore([1, 2])
