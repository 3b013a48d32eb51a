from fractions import Fraction

import pytest

import kpthermo as kp


def test_builtin_fixture_roundtrip():
    names = kp.builtin_names()
    assert "example_d1" in names and "halfspace" in names
    t = kp.builtin("example_d1")
    assert t.states == ["1", "2"]
    assert t.num_generators == 6
    back = kp.theory_from_json(t.to_json())
    assert back.to_json() == t.to_json()


def test_check_kp_verdicts_are_exact():
    t = kp.builtin("example_d1")
    verdict = kp.check_kp(t)
    assert verdict["verdict"] == "compliant"
    beta = kp.fractions_of(verdict["beta"])
    assert beta["1"] >= beta["2"]
    assert Fraction(verdict["slack"]) == Fraction(1, 2)

    violating = kp.make_theory(["a", "b"], [({}, {"a": "1"}, True)])
    bad = kp.check_kp(violating)
    assert bad["verdict"] == "violating"
    assert sum(kp.fractions_of(bad["heating"]).values()) == 1


def test_membership_and_witness():
    t = kp.builtin("example_d1")
    w = kp.member(t, {}, {"1": "-1", "2": "1"})
    assert w is not None
    assert kp.member(t, {}, {"1": "1", "2": "-1"}) is None


def test_hotness_relations():
    hs = kp.builtin("halfspace")
    assert kp.hotter_than(hs, "2", "1")
    assert not kp.hotter_than(hs, "1", "2")
    report = kp.order_report(hs)
    assert len(report["classes"]) == 2
    assert len(report["strict"]) == 1

    transfer = kp.builtin("two_state_transfer")
    assert kp.weakly_hotter(transfer, "1", "2")
    assert not kp.strongly_hotter(transfer, "1", "2")


def test_carnot_ratio_is_exact():
    hs = kp.builtin("halfspace")
    assert kp.carnot_ratio(hs, "2", "1") == Fraction(2)
    assert kp.carnot_ratio(kp.builtin("example_d1"), "2", "1") is None


def test_uniqueness_and_halfspace_queries():
    hs = kp.builtin("halfspace")
    assert kp.temp_unique(hs)
    assert not kp.temp_unique(kp.builtin("example_d1"))
    eta, beta = {"2": "1"}, {"1": "2", "2": "1"}
    assert kp.cd_feasible(hs, eta, beta)
    assert kp.cd_pair_unique(hs, eta, beta)
    assert kp.halfspace_equals(hs, eta, beta)
    assert kp.q_set_coincides(hs)
    assert kp.entropy_unique(hs)


def test_scale_classification_matches_the_closed_form():
    t = kp.builtin("example_d1")
    v = kp.classify_scale(t, {"1": "1", "2": "1"})
    assert v == {"clausius": True, "strong_clausius": True, "clausius_duhem": False}
    assert kp.example_d1_oracle("0", "9/4", "2", "1")
    assert not kp.example_d1_oracle("0", "2", "2", "1")

    w = kp.density_witness(t, {"1": "1", "2": "1"}, "1/10")
    assert w is not None
    beta = kp.fractions_of(w["beta"])
    assert beta["1"] > beta["2"]
    assert kp.density_witness(t, {"1": "1", "2": "1"}, "0") is None


def test_conjunction_imparts_order():
    target = kp.make_theory(["x", "y"], [])
    probe = kp.make_halfspace(["p1", "p2"], {"p2": "1"}, {"p1": "2", "p2": "1"})
    joined = kp.conjoin(target, probe, [("x", "p1"), ("y", "p2")])
    assert kp.hotter_than(joined, "y", "x")


def test_errors_surface_as_exceptions():
    with pytest.raises(ValueError):
        kp.builtin("nope")
    with pytest.raises(ValueError):
        kp.make_theory(["a"], [({"a": "1"}, {}, True)])  # dm total != 0
