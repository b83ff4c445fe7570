"""Reports: witnesses, entailment, independence, and the product shortcut."""

import json
from fractions import Fraction

import pytest

from ptl import parse
from ptl.checker import (
    SATISFIED,
    VIOLATED,
    CheckReport,
    Theory,
    check_independent,
    check_shortcut,
    entails,
    globally_satisfies,
    satisfies,
)
from ptl.errors import LengthMismatch
from ptl.values import GroundAction


# ---------- satisfies ----------

def test_satisfied_comparison_records_its_probability(coin):
    report = satisfies(coin, "s0", parse("Q[toss(c)](heads(c)) = 1/2"))
    assert report.verdict == SATISFIED
    assert report.ok
    assert report.numeric == Fraction(1, 2)


def test_violated_comparison_still_records_the_probability(coin):
    report = satisfies(coin, "s0", parse("Q[toss(c)](heads(c)) = 2/3"))
    assert report.verdict == VIOLATED
    assert not report.ok
    assert report.numeric == Fraction(1, 2)


def test_bare_probability_formula_is_recorded(coin):
    report = satisfies(coin, "s0", parse("Q[toss(c)](heads(c))"))
    assert report.verdict == SATISFIED
    assert report.numeric == Fraction(1, 2)


def test_witness_drills_through_box(twosucc):
    report = satisfies(twosucc, "s0", parse("box[a] in(u)"))
    assert report.verdict == VIOLATED
    assert report.witness is not None
    # the failure is located at the offending successor, not the root
    assert report.witness["state"] == "v"
    assert report.witness["trail"]


def test_witness_drills_through_quantifiers_and_conjunction(montyhall):
    formula = parse("forall w : state . @w (~ (P(d1) /\\ O(d3) /\\ C(d1)))")
    report = satisfies(montyhall, "s0", formula)
    assert report.verdict == VIOLATED
    assert report.witness["state"] == "c1_p1_o3"
    steps = [step.get("step") for step in report.witness["trail"]]
    assert "instantiate" in steps


def test_error_verdict_on_disabled_q(coin):
    report = satisfies(coin, "sh", parse("Q[toss(c)](heads(c)) = 1/2"))
    assert report.verdict == "error"
    assert "toss" in report.message


def test_globally_satisfies_reports_the_first_bad_state(twosucc):
    report = globally_satisfies(twosucc, parse("~ hit"))
    assert report.verdict == VIOLATED
    assert report.details["violating_state"] == "u"
    good = globally_satisfies(twosucc, parse("hit \\/ in(s0)"))
    assert good.verdict == SATISFIED


# ---------- entailment ----------

def theory_of(*pairs):
    return Theory("t", dict(pairs))


def test_entailment_over_a_model_family(twotoss):
    theory = theory_of(("fair", parse("Q[t(c)](H(c)) = 1/2")))
    conclusion = parse("dia[t(c)]{1/2} H(c)")
    report = entails([twotoss], theory, conclusion)
    assert report.verdict == SATISFIED
    assert report.details["models_checked"] == 1
    assert report.details["models_satisfying_theory"] == 1


def test_entailment_violated_names_the_countermodel(dice12):
    # localize to the start state so the theory is evaluable everywhere
    theory = theory_of(("sixth", parse("@s0 (Q[roll](Picked(3)) = 1/6)")))
    conclusion = parse("@s0 (dia[roll]{1/6} Picked(3))")
    report = entails([dice12], theory, conclusion)
    assert report.verdict == VIOLATED
    assert report.details["model"] == "dice12"


def test_entailment_is_vacuous_without_a_satisfying_model(coin):
    theory = theory_of(("biased", parse("Q[toss(c)](heads(c)) = 9/10")))
    report = entails([coin], theory, parse("false"))
    assert report.verdict == SATISFIED
    assert any("vacuous" in w for w in report.warnings)


def test_entailment_only_draws_on_theory_models(twotoss):
    # a biased sibling fails the fairness theory and is set aside
    from conftest import corpus_text
    from ptl import parse_model, validate_model

    biased_text = (
        corpus_text("twotoss.ptlm")
        .replace("model twotoss", "model skewed")
        .replace("sh @ 1/2", "sh @ 1/3")
        .replace("st @ 1/2", "st @ 2/3")
    )
    skewed = validate_model(parse_model(biased_text, source="skewed"))
    theory = theory_of(("fair", parse("Q[t(c)](H(c)) = 1/2")))
    conclusion = parse("dia[t(c)]{1/2} H(c)")
    report = entails([skewed, twotoss], theory, conclusion)
    assert report.verdict == SATISFIED
    assert report.details["models_checked"] == 2
    assert report.details["models_satisfying_theory"] == 1


def test_entailment_surfaces_evaluation_errors(coin):
    # the one-shot coin cannot evaluate an unlocalized Q at its leaves
    theory = theory_of(("fair", parse("Q[toss(c)](heads(c)) = 1/2")))
    report = entails([coin], theory, parse("true"))
    assert report.verdict == "error"
    assert "axiom fair" in report.message


# ---------- independence ----------

def test_repeated_fair_tosses_are_independent(twotoss):
    t = GroundAction("t", ("c",))
    report = check_independent(twotoss, t, t, [parse("H(c)")])
    assert report.verdict == SATISFIED


def test_flipping_coin_steps_are_dependent(magicalcoin):
    t = GroundAction("t")
    report = check_independent(magicalcoin, t, t, [parse("H")])
    assert report.verdict == VIOLATED
    w = report.witness
    assert w["from_state"] == "s0"
    assert report.details["expected"] != report.details["actual"]


def test_independence_defaults_to_all_ground_atoms(twotoss):
    t = GroundAction("t", ("c",))
    report = check_independent(twotoss, t, t)
    assert report.verdict == SATISFIED


# ---------- the product shortcut ----------

def test_shortcut_agrees_on_independent_steps(twotoss):
    t = GroundAction("t", ("c",))
    report = check_shortcut(twotoss, [t, t], [parse("H(c)"), parse("T(c)")])
    assert report.verdict == SATISFIED
    assert report.numeric == Fraction(1, 4)
    assert report.details["product"] == "1/4"


def test_shortcut_fails_when_one_draw_carries_both_events(bag5):
    # five objects: the shape and color of a single draw are dependent
    d = GroundAction("d")
    report = check_shortcut(bag5, [d], [parse("S"), parse("B")])
    assert report.verdict == VIOLATED
    assert report.numeric == Fraction(1, 5)
    assert report.details["product"] == "6/25"


def test_shortcut_holds_across_two_draws_with_replacement(bag5):
    d = GroundAction("d")
    report = check_shortcut(bag5, [d, d], [parse("S"), parse("B")])
    assert report.verdict == SATISFIED
    assert report.numeric == Fraction(6, 25)
    assert not report.warnings


def test_shortcut_single_action_warns_about_coincidence(bag4):
    d = GroundAction("d")
    report = check_shortcut(bag4, [d], [parse("S"), parse("B")])
    assert report.verdict == SATISFIED
    assert report.numeric == Fraction(1, 4)
    assert any("coincidental" in w for w in report.warnings)


def test_shortcut_rejects_mismatched_lengths(twotoss):
    t = GroundAction("t", ("c",))
    with pytest.raises(LengthMismatch):
        check_shortcut(twotoss, [t, t], [parse("H(c)")])


# ---------- report serialization ----------

def test_report_round_trips_through_json(coin):
    report = satisfies(coin, "s0", parse("Q[toss(c)](heads(c)) = 2/3"))
    blob = json.dumps(report.to_dict(), sort_keys=True, indent=2)
    back = CheckReport.from_dict(json.loads(blob))
    assert back.verdict == report.verdict
    assert back.numeric == report.numeric
    assert back.witness == report.witness
    assert back.warnings == report.warnings


def test_report_numeric_stays_rational_in_json(magicalcoin):
    report = satisfies(magicalcoin, "s0", parse("Q[t; t](H; T) = 1/2"))
    data = report.to_dict()
    assert data["numeric"] == "1/2"
    assert CheckReport.from_dict(data).numeric == Fraction(1, 2)
