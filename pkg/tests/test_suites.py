"""Tests for suites module."""

import json
from collections import Counter

import pytest

from packcover.errors import InternalError, InvalidParameter, TheoremViolation
from packcover.generators import element_names
from packcover.matroid import MatroidPair, make_uniform
from packcover.suites import (
    FAILED,
    PASSED,
    SKIPPED,
    SUITES,
    TEMPLATE_TREES,
    Instance,
    InstanceResult,
    InstanceSkipped,
    Report,
    Suite,
    SuiteSpec,
    instance_from_dict,
    instance_to_dict,
    minimize_counterexample,
    replay_counterexample,
    run_instance,
    run_suite,
    spot_check_tacticians,
)


def _fails_with_a(instance):
    if "a" in instance.subject.ground:
        raise TheoremViolation("a is present", instance.subject)
    return Counter({"fine": 1})


def _skips(instance):
    raise InstanceSkipped("degenerate")


def _pair_on(names):
    m = make_uniform(1, names)
    return MatroidPair(m, m)


@pytest.fixture
def broken_suite(monkeypatch):
    """A suite whose check fails whenever the element a is present."""
    suite = Suite(
        "broken",
        "fails on a",
        (3,),
        lambda spec: 2,
        lambda spec, index: Instance(index, _pair_on(element_names(3 - index))),
        _fails_with_a,
    )
    monkeypatch.setitem(SUITES, "broken", suite)
    return suite


def test_spec_defaults():
    """Test a spec falls back to the suite's sizes."""
    spec = SuiteSpec("5sets")
    assert spec.size_list == (1, 2, 3, 4)
    assert spec.to_dict() == {
        "suite": "5sets",
        "sizes": [1, 2, 3, 4],
        "nodes": 3,
        "trials": 100,
        "seed": 0,
    }


def test_spec_sorts_sizes():
    """Test sizes are deduplicated and sorted."""
    assert SuiteSpec("lemma27", sizes=(6, 5, 6)).sizes == (5, 6)


@pytest.mark.parametrize(
    "kwargs,message",
    [
        ({"suite": "nope"}, "Unknown suite"),
        ({"suite": "5sets", "sizes": (0,)}, "Sizes must lie"),
        ({"suite": "5sets", "sizes": (99,)}, "Sizes must lie"),
        ({"suite": "game", "nodes": 0}, "Node count"),
        ({"suite": "5sets", "trials": -1}, "Trial count"),
        ({"suite": "5sets", "seed": 1 << 64}, "64-bit"),
        ({"suite": "5sets", "seed": -1}, "64-bit"),
        ({"suite": "5sets", "workers": 0}, "Worker count"),
    ],
)
def test_spec_validation(kwargs, message):
    """Test invalid specs are rejected."""
    with pytest.raises(InvalidParameter, match=message):
        SuiteSpec(**kwargs)


def test_blockstr_report():
    """Test the blockstr sweep passes and reports its checks."""
    report = run_suite(SuiteSpec("blockstr"))
    assert report.ok
    assert report.instances == report.passed == 1
    assert report.outcomes["checked"] == 4096
    text = report.to_text()
    assert text.startswith("blockstr: PASS")
    assert "Fingerprint: " in text


def test_report_json_is_reproducible():
    """Test two runs give identical JSON without timing."""
    first = run_suite(SuiteSpec("blockstr")).to_json()
    second = run_suite(SuiteSpec("blockstr")).to_json()
    assert first == second
    data = json.loads(first)
    assert "wall_time" not in data
    assert data["spec"]["suite"] == "blockstr"


def test_timing_adds_wall_time():
    """Test wall time appears only when asked for."""
    data = run_suite(SuiteSpec("blockstr", timing=True)).to_dict()
    assert data["wall_time"] >= 0
    assert data["fingerprint"] == run_suite(SuiteSpec("blockstr")).fingerprint()


def test_5sets_on_one_element():
    """Test the cited arenas and every pair on one element."""
    report = run_suite(SuiteSpec("5sets", sizes=(1,)))
    assert report.ok
    assert report.instances == 9
    assert report.outcomes == Counter(
        {"value-1": 2, "value-2": 2, "value-3": 2, "value-4": 2, "value-5": 1}
    )


def test_leq_on_small_catalog():
    """Test the computed order's Hasse diagram has six edges."""
    report = run_suite(SuiteSpec("leq", sizes=(1, 2)))
    assert report.ok
    assert report.outcomes["hasse-edges"] == 6


def test_packing_covering_suite():
    """Test the partition sweep on the two-element catalog."""
    report = run_suite(SuiteSpec("packing-covering", sizes=(2,)))
    assert report.ok
    assert report.instances == 25


def test_spot_check_tacticians():
    """Test the tactician sweep on two-element arenas."""
    report = spot_check_tacticians(SuiteSpec("5sets", sizes=(2,)))
    assert report.suite == "tacticians"
    assert report.ok
    assert report.instances == 25


def test_run_instance_failure_is_minimized(broken_suite):
    """Test a failing instance is reported with a shrunken copy."""
    result = run_instance(SuiteSpec("broken"), 0)
    assert result.status == FAILED
    found = result.counterexample
    assert found["error"] == "TheoremViolation"
    assert found["instance"]["index"] == 0
    assert found["minimized"]["text"] == "ground a\nM uniform 1\n"


def test_run_suite_reports_first_counterexample(broken_suite):
    """Test the failing run keeps the counterexample with the lowest index."""
    report = run_suite(SuiteSpec("broken"))
    assert not report.ok
    assert report.failed == 2
    assert report.counterexample["instance"]["index"] == 0
    assert "Counterexample (instance 0)" in report.to_text()


def test_skipped_instances(monkeypatch):
    """Test skipped instances are counted with their reason."""
    suite = Suite(
        "skips",
        "always skips",
        (),
        lambda spec: 3,
        lambda spec, index: Instance(index, None),
        _skips,
    )
    monkeypatch.setitem(SUITES, "skips", suite)
    report = run_suite(SuiteSpec("skips"))
    assert report.ok
    assert report.skipped == 3
    assert report.outcomes == Counter({"skipped:degenerate": 3})


def test_minimize_keeps_named_elements(broken_suite):
    """Test elements named in the parameters are never deleted."""
    instance = Instance(0, _pair_on(("e", "a", "b")), {"f": "b"})
    smallest = minimize_counterexample(broken_suite, instance)
    assert set(smallest.subject.ground) == {"a", "b"}


def test_instance_dict_round_trip():
    """Test serialized instances rebuild with their parameters."""
    instance = Instance(4, _pair_on(("e", "a", "b")), {"G": frozenset({"a"}), "f": "b"})
    data = instance_to_dict("lemma27", instance)
    assert data["kind"] == "pair"
    assert data["params"] == {"G": ["a"], "f": "b"}
    rebuilt = instance_from_dict(data)
    assert rebuilt.subject == instance.subject
    assert rebuilt.params == instance.params
    assert instance_to_dict("lemma27", rebuilt)["fingerprint"] == data["fingerprint"]


def test_replay_counterexample(broken_suite):
    """Test a replayed counterexample fails again and a good instance does not."""
    failing = run_instance(SuiteSpec("broken"), 0).counterexample["instance"]
    assert replay_counterexample(failing)
    good = instance_to_dict("packing-covering", Instance(0, _pair_on(("e", "a"))))
    assert not replay_counterexample(good)


def test_report_add_prefers_lower_index():
    """Test merging keeps the earliest counterexample."""
    report = Report(SuiteSpec("blockstr"))
    for index in (5, 2, 7):
        found = {"instance": {"index": index}}
        report.add(InstanceResult(index, FAILED, counterexample=found))
    report.add(InstanceResult(8, PASSED, Counter({"x": 1})))
    report.add(InstanceResult(9, SKIPPED))
    assert report.counterexample["instance"]["index"] == 2
    assert (report.passed, report.failed, report.skipped) == (1, 3, 1)


def _rejects_a(instance):
    if "a" in instance.subject.ground:
        raise InvalidParameter("a is not allowed")
    return Counter({"fine": 1})


def _violates_with_a(instance):
    ground = instance.subject.ground
    if len(ground) == 1:
        raise InternalError("one element left")
    if "a" in ground:
        raise TheoremViolation("a is present", instance.subject)
    return Counter({"fine": 1})


def _suite_with(monkeypatch, check):
    suite = Suite(
        "rejects",
        "fails on a",
        (3,),
        lambda spec: 2,
        lambda spec, index: Instance(index, _pair_on(element_names(3 - index))),
        check,
    )
    monkeypatch.setitem(SUITES, "rejects", suite)
    return suite


def test_run_suite_records_other_errors(monkeypatch):
    """Test an argument error inside a check fails the instance, not the run."""
    _suite_with(monkeypatch, _rejects_a)
    report = run_suite(SuiteSpec("rejects"))
    assert not report.ok
    assert report.instances == report.failed == 2
    found = report.counterexample
    assert found["error"] == "InvalidParameter"
    assert found["message"] == "a is not allowed"
    assert found["minimized"]["text"] == "ground a\nM uniform 1\n"


def test_minimize_keeps_the_error_type(monkeypatch):
    """Test shrinking stops before the failure changes kind."""
    suite = _suite_with(monkeypatch, _violates_with_a)
    instance = Instance(0, _pair_on(("e", "a", "b")))
    smallest = minimize_counterexample(suite, instance, TheoremViolation)
    assert set(smallest.subject.ground) == {"a", "b"}
    result = run_instance(SuiteSpec("rejects"), 0)
    assert result.counterexample["error"] == "TheoremViolation"
    assert result.counterexample["minimized"]["text"] == "ground a b\nM uniform 1\n"


def test_roundtrip_on_templates():
    """Test every template converts both ways with constructed tactics only."""
    report = run_suite(SuiteSpec("roundtrip", trials=0))
    assert report.ok
    assert report.instances == report.passed == len(TEMPLATE_TREES)
    assert set(report.outcomes) == {"construction", "promises"}


def test_game_on_templates():
    """Test game winners agree with attainability on every template."""
    report = run_suite(SuiteSpec("game", trials=0))
    assert report.ok
    assert report.instances == len(TEMPLATE_TREES)


@pytest.mark.parametrize("suite,choices", [("lemma27", 4), ("lemma17", 3)])
def test_lemma_suites_sweep_every_choice(suite, choices):
    """Test the two-element catalog is checked against every subset choice."""
    report = run_suite(SuiteSpec(suite, sizes=(2,)))
    assert report.ok
    assert report.instances == 25 * choices


def test_lemma_instances_are_disjoint():
    """Test catalog instances name disjoint sets avoiding e."""
    spec = SuiteSpec("lemma27", sizes=(3,))
    suite = SUITES["lemma27"]
    seen = set()
    for index in range(suite.count(spec)):
        params = suite.build(spec, index).params
        G, H, J = params["G"], params["H"], params["J"]
        assert not (G & H or G & J or H & J)
        assert "e" not in G | H | J
        seen.add((G, H, J))
    assert (frozenset({"a"}), frozenset({"b"}), frozenset()) in seen
    assert (frozenset(), frozenset(), frozenset({"a", "b"})) in seen


def test_runchains_reaches_shared_ends():
    """Test bases sharing the end of a chain are swept."""
    report = run_suite(SuiteSpec("runchains", sizes=(2,)))
    assert report.ok
    assert report.instances == 25
    assert report.outcomes["chains-shared-end"] > 0


def test_tom_minor_suite():
    """Test node-wise minors on small random trees."""
    report = run_suite(SuiteSpec("tom-minor", sizes=(3,), nodes=2, trials=5))
    assert report.ok
    assert report.instances == 5
