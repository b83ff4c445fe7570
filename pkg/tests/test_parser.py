"""Surface syntax: parsing, printing, and the round-trip guarantee.

The round-trip law used throughout: parsing, printing, and parsing again
yields a term alpha-equal to the first parse, with every rational literal
preserved exactly.
"""

from fractions import Fraction

import pytest

from conftest import CORPUS, corpus_text

from ptl import parse, parse_formula, parse_formula_file, parse_model, validate_model
from ptl.errors import ParseError
from ptl.model import serialize_model
from ptl.parser import parse_rational, parse_type
from ptl.printer import print_formula
from ptl.syntax import (
    ACTION,
    BOOL,
    NUM,
    OBJ,
    PROP,
    STATE,
    Arrow,
    Box,
    Diamond,
    DiamondAnn,
    Lam,
    ListT,
    QTrace,
    RatLit,
    Sym,
    alpha_eq,
    desugar,
    spine,
)

FORMULA_FILES = [
    "coin.ptl",
    "twotoss.ptl",
    "magicalcoin.ptl",
    "bag.ptl",
    "dice.ptl",
    "twosucc.ptl",
    "montyhall.ptl",
    "conjecture.ptl",
    "disambiguation.ptl",
]

MODEL_FILES = [
    "coin.ptlm",
    "biasedcoin.ptlm",
    "twotoss.ptlm",
    "magicalcoin.ptlm",
    "bag4.ptlm",
    "bag5.ptlm",
    "dice12.ptlm",
    "twosucc.ptlm",
    "montyhall.ptlm",
]


def round_trips(text):
    first = parse_formula(text)
    printed = print_formula(first)
    second = parse_formula(printed)
    return alpha_eq(desugar(first), desugar(second))


# ---------- formulas ----------

def test_parse_rational_forms():
    assert parse_rational("2/3") == Fraction(2, 3)
    assert parse_rational("7") == Fraction(7)
    assert parse_rational("0.25") == Fraction(1, 4)
    # decimals are exact, never floats
    assert parse_rational("0.1") == Fraction(1, 10)


def test_parse_rational_rejects_junk():
    for bad in ("", "1/0", "one", "1.2.3"):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_parse_type_forms():
    assert parse_type("bool") == BOOL
    assert parse_type("prop") == PROP
    assert parse_type("action") == ACTION
    assert parse_type("state -> bool") == PROP
    assert parse_type("obj -> prop") == Arrow(OBJ, PROP)
    assert parse_type("[obj]") == ListT(OBJ)
    # arrows associate to the right
    assert parse_type("obj -> obj -> prop") == Arrow(OBJ, Arrow(OBJ, PROP))


def test_connective_precedence():
    # ~ binds tightest, then /\, \/, ->, <-> loosest
    e = parse("~ p /\\ q \\/ r -> s")
    head, args = spine(e)
    assert head.symbol.name == "->"
    left_head, _ = spine(args[0])
    assert left_head.symbol.name == "\\/"


def test_implication_is_right_associative():
    e = parse("p -> q -> r")
    _, args = spine(e)
    inner_head, _ = spine(args[1])
    assert inner_head.symbol.name == "->"


def test_q_brackets_take_action_sequence():
    e = parse("Q[t; t](H)")
    head, args = spine(e)
    assert head.symbol.name == "Q"
    # single proposition: a Q application over a two-action list
    from ptl.syntax import uncons_list
    acts = uncons_list(args[0])
    assert acts is not None and len(acts) == 2


def test_q_trace_form():
    e = parse("Q[t; t](H; T)")
    assert isinstance(e, QTrace)
    assert len(e.actions) == 2 and len(e.props) == 2


def test_q_trace_keeps_lengths_for_the_typechecker():
    # mismatched action/proposition counts parse; the typechecker rejects them
    e = parse("Q[t; t](H; T; H)")
    assert isinstance(e, QTrace)
    assert len(e.actions) == 2 and len(e.props) == 3


def test_modalities_parse():
    assert isinstance(parse("box[t] H"), Box)
    assert isinstance(parse("dia[t] H"), Diamond)
    ann = parse("dia[t]{1/2} H")
    assert isinstance(ann, DiamondAnn)
    assert ann.prob.value == Fraction(1, 2)


def test_at_operator_prefixes_a_state():
    e = parse("@s0 H")
    head, args = spine(e)
    assert head.symbol.name == "@"
    assert args[0].symbol.name == "s0"


def test_membership_versus_hybrid_in():
    member = parse("x in (a :: nil)")
    head, _ = spine(member)
    assert head.symbol.kind == "list"
    hybrid = parse("in(s0)")
    head2, _ = spine(hybrid)
    assert head2.symbol.kind != "list"


def test_binder_sugar_desugars_to_guarded_quantifiers():
    e = parse("forall x in (a :: nil) . P(x)")
    head, args = spine(e)
    assert head.symbol.name == "forall"
    assert isinstance(args[0], Lam)


def test_gt_and_neq_are_parse_time_sugar():
    gt = parse("Q[t](H) > 1/2")
    head, args = spine(gt)
    assert head.symbol.name == "<"
    assert isinstance(args[0], RatLit)  # operands flipped
    neq = parse("1 != 2")
    head, _ = spine(neq)
    assert head.symbol.name == "~"


def test_minus_is_list_element_removal():
    e = parse("(a :: nil) - a")
    head, _ = spine(e)
    assert head.symbol.name == "-" and head.symbol.kind == "list"


def test_lambda_and_application():
    e = parse("(lam x : num . x + 1)(2)")
    f = parse("(λx : num . x + 1)(2)")
    assert alpha_eq(e, f)
    g = parse("R(1, 2)")
    h = parse("R(1)(2)")
    assert alpha_eq(g, h)


def test_unicode_aliases_match_ascii():
    pairs = [
        ("∀x : obj . P(x) ∧ ⊤", "forall x : obj . P(x) /\\ true"),
        ("¬(p ∨ q) → ⊥", "~ (p \\/ q) -> false"),
        ("◇[t] H ∧ □[t] H", "dia[t] H /\\ box[t] H"),
        ("x ∈ (a :: nil)", "x in (a :: nil)"),
        ("1 ≠ 2", "1 != 2"),
        ("∃s : state . in(s)", "exists s : state . in(s)"),
    ]
    for uni, ascii_ in pairs:
        assert alpha_eq(desugar(parse_formula(uni)), desugar(parse_formula(ascii_)))


def test_comments_and_blank_lines_are_skipped():
    text = """
    -- leading comment
    Q[t](H) = 1/2  -- trailing comment
    """
    e = parse(text)
    head, _ = spine(e)
    assert head.symbol.name == "="


def test_double_dash_comment_needs_following_whitespace():
    # '-- x' comments out the rest of the line;  '--x' does not, it is
    # two element removals with a missing operand
    parse("(a :: nil) - a -- the rest is ignored")
    with pytest.raises(ParseError):
        parse("(a :: nil) --x")


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse("Q[t](H) = = 1")
    assert "1:" in str(exc.value)


def test_formula_file_definitions_keep_order():
    text = "def a := Q[t](H) = 1/2\n\ndef b :=\n  box[t] H ->\n  dia[t] H\n"
    defs = parse_formula_file(text, source="inline")
    assert list(defs) == ["a", "b"]


def test_formula_file_rejects_duplicates_and_empty():
    with pytest.raises(ParseError):
        parse_formula_file("def a := p\ndef a := q\n", source="dup")
    with pytest.raises(ParseError):
        parse_formula_file("-- nothing here\n", source="empty")


# ---------- round-trips (every corpus formula and model) ----------

@pytest.mark.parametrize("name", FORMULA_FILES)
def test_corpus_formulas_round_trip(name):
    defs = parse_formula_file(corpus_text(name), source=name)
    assert defs
    for label, expr in defs.items():
        printed = print_formula(expr)
        again = parse_formula(printed)
        assert alpha_eq(desugar(expr), desugar(again)), f"{name}#{label}: {printed}"


@pytest.mark.parametrize("name", MODEL_FILES)
def test_corpus_models_round_trip(name):
    model = validate_model(parse_model(corpus_text(name), source=name))
    printed = serialize_model(model)
    again = validate_model(parse_model(printed, source=name + " (printed)"))
    assert again.name == model.name
    assert again.objects == model.objects
    assert again.initial == model.initial
    assert again.atoms == model.atoms
    assert again.actions == model.actions
    assert again.valuation == model.valuation
    # transition probabilities survive bit for bit
    assert again.frame == model.frame
    assert {n: (t, v) for n, (t, v) in again.rigid.items()} == {
        n: (t, v) for n, (t, v) in model.rigid.items()
    }


def test_rationals_survive_round_trips_exactly():
    texts = [
        "Q[t](H) = 355/113",
        "Q[t](H) = 0.142857",
        "dia[t]{999999999999/1000000000000} H",
    ]
    for text in texts:
        assert round_trips(text)


@pytest.mark.parametrize(
    "text",
    [
        "Q[h; p(d1); o; s](V) > Q[h; p(d1); o; nos](V)",
        "forall d in D . (G(d) <-> ~ C(d))",
        "exists n : Picked . ~ (n = 3)",
        "@s0 (Q[t](H) = 1/2)",
        "box[t] (H \\/ T) /\\ dia[t]{1/2} H",
        "|(D - d1) - d2| = 1",
        "(lam x : obj . C(x))(d1)",
        "Q[t; t](H; T) = Q[t](H) * Q[t](T)",
        "in(s0) \\/ ~ in(s0)",
        "forall b : bool . b = b",
    ],
)
def test_assorted_forms_round_trip(text):
    assert round_trips(text)


# ---------- model text ----------

def test_parse_model_sections(coin):
    assert coin.name == "coin"
    assert coin.initial == "s0"
    assert set(coin.frame.states) == {"s0", "sh", "st"}
    assert coin.objects == ("c",)


def test_model_rejects_malformed_transition():
    text = corpus_text("coin.ptlm").replace("@ 1/2", "@", 1)
    with pytest.raises(ParseError):
        parse_model(text, source="broken")


def test_model_rejects_unknown_section():
    with pytest.raises(ParseError):
        parse_model("model m\nwidgets\n  a b\n", source="bad")
