"""Text and JSON codecs, and the expression language."""

import json

import jsonschema
import pytest
from hypothesis import given

from signseq.codec import (
    NUMBER_SCHEMA, ParseError, number_from_json, number_to_json, parse_number,
    validate_number_json,
)
from signseq.expr import EvalError, Context, evaluate, format_expr, format_value, parse_expr
from signseq.logatomic import convention, la_lambda
from signseq.maps import mo, struct_params, v_of, xi_va
from signseq.number import ZERO_NUMBER, bounded, cmp, drop, expand, neg

from conftest import numbers


def _tails():
    v = v_of(struct_params(ZERO_NUMBER))
    first = expand(v, 1)[0][0][1]
    return [
        v,
        neg(v),
        xi_va(struct_params(ZERO_NUMBER), v),
        mo(v),
        drop(v, first),
        v_of(struct_params(parse_number("[+1, -1]"))),
        la_lambda(parse_number("[+1, -1]")),
    ]


# -- text -----------------------------------------------------------------------

@given(numbers)
def test_text_round_trip(x):
    assert parse_number(x.text()) == x
    assert parse_number(x.text()).text() == x.text()


@pytest.mark.parametrize("x", _tails(), ids=lambda x: x.text()[:40])
def test_text_round_trip_with_tails(x):
    y = parse_number(x.text())
    assert y.text() == x.text()
    assert y.len == x.len and y.tau == x.tau
    with bounded():
        assert cmp(x, y) == 0


@pytest.mark.parametrize("text, col", [
    ("[+w, ", 6),
    ("[+w -1]", 5),
    ("[*1]", 2),
    ("[+w+w^(2)]", 5),
])
def test_text_errors_carry_positions(text, col):
    with pytest.raises(ParseError) as exc:
        parse_number(text)
    assert exc.value.lineno == 1
    assert exc.value.offset == col


def test_multiline_position():
    with pytest.raises(ParseError) as exc:
        parse_number("[+1,\n  -]")
    assert exc.value.lineno == 2


# -- JSON -----------------------------------------------------------------------

@given(numbers)
def test_json_round_trip(x):
    d = json.loads(json.dumps(number_to_json(x)))
    validate_number_json(d)
    assert number_from_json(d) == x


@pytest.mark.parametrize("x", _tails(), ids=lambda x: x.text()[:40])
def test_json_round_trip_with_tails(x):
    d = number_to_json(x)
    validate_number_json(d)
    y = number_from_json(d)
    assert y.text() == x.text()


@pytest.mark.parametrize("bad", [
    {"segments": [], "len": "0"},
    {"segments": [{"run": {"sign": 2, "len": "1"}}], "len": "1", "tau": "1"},
    {"segments": [{"run": {"sign": 1, "len": "1"}, "tail": {}}], "len": "1", "tau": "1"},
    {"segments": [{"tail": {"kind": "Drop", "lead": "0", "neg": False}}], "len": "1", "tau": "1"},
])
def test_schema_rejects_malformed_documents(bad):
    with pytest.raises(jsonschema.ValidationError):
        validate_number_json(bad)


def test_schema_is_a_valid_schema():
    jsonschema.Draft202012Validator.check_schema(NUMBER_SCHEMA)


# -- expressions ----------------------------------------------------------------

@pytest.mark.parametrize("src, want", [
    ("mo([+1, -1])", "[+w, -w^(2)]"),
    ("mo([+1, -w])", "[+w, -w^(3)]"),
    ("kappa([-1])", "[+w, -w^(4)]"),
    ("lambda([-1])", "[+w, -w^(3)]"),
    ("eps(w)", "eps(w)"),
    ("eps([])", "[+eps(0)]"),
    ("let h = [+1, -1]; cat(h, h)", "[+1, -1, +1, -1]"),
    ("moinv(mo([-2, +w]))", "[-2, +w]"),
    ("tau([+w, -1, +3])", "w+3"),
    ("cmp([+w], [+w, +1])", "lt"),
    ("rep([+1, -1], 2)", "[+1, -1, +1, -1]"),
    ("scale(w, [+1, -1])", "[+w, -w]"),
    ("simplest([+1], [+2])", "[+2, -1]"),
    ("shift([-1], 1)", "[]"),
])
def test_expression_values(src, want):
    assert format_value(evaluate(src)) == want


@pytest.mark.parametrize("src", [
    "mo([+1, -1])",
    "let x = [+w, -1]; lambda(cat(x, [-w]))",
    "cmp(eps(0), w^(w)+1)",
    "xiomega([], [-1, +2])",
    "rep([-1], 3)",
])
def test_expression_print_parse_identity(src):
    prog = parse_expr(src)
    assert format_expr(prog) == src
    assert parse_expr(format_expr(prog)) == prog


@pytest.mark.parametrize("src", ["mo(", "mo([+1)", "let = 3; x", "mo([+1]) junk", "-x"])
def test_expression_syntax_errors(src):
    with pytest.raises(ParseError):
        parse_expr(src)


@pytest.mark.parametrize("src", ["nosuch([])", "mo()", "y", "moinv([+2])", "rep([+1], w)"])
def test_expression_evaluation_errors(src):
    with pytest.raises(EvalError):
        evaluate(src)


def test_context_tracks_convention_use():
    ctx = Context(convention("s1-infix"))
    evaluate("mo([+1])", ctx)
    assert not ctx.used_convention
    evaluate("rho([+1, -1])", ctx)
    assert ctx.used_convention
