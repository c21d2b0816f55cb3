"""Audit harness: corpus generation, oracles, reports and replay."""

import json

import jsonschema
import pytest

from signseq import audit as au
from signseq.logatomic import CONVENTIONS, convention
from signseq.maps import eps, mo, struct_params, xi_va, xi_va_omega
from signseq.number import ZERO_NUMBER, bounded
from signseq.codec import parse_number as N

SMALL = au.gen_corpus(au.PRESETS["small"])
CONFIRMATORY = [s for s, suite in au.SUITES.items() if not suite.uses_convention]


# -- corpus -----------------------------------------------------------------------

def _expected_size(letters: int, max_runs: int) -> int:
    # zero, plus two leading signs times letters^k length choices for k runs
    return 1 + sum(2 * letters ** k for k in range(1, max_runs + 1))


@pytest.mark.parametrize("params_text, letters, runs", [
    ("alphabet=1;max_runs=1", 1, 1),
    ("alphabet=1,w;max_runs=2", 2, 2),
    ("small", 2, 2),
    ("alphabet=1,2,w;max_runs=3", 3, 3),
])
def test_corpus_size(params_text, letters, runs):
    assert len(au.gen_corpus(au.parse_corpus_params(params_text)).numbers) == _expected_size(letters, runs)


def test_default_corpus_size():
    assert _expected_size(len(au.DEFAULT_ALPHABET), 4) == 9361


def test_tiny_corpus_is_zero_and_plus_minus_one():
    c = au.gen_corpus(au.parse_corpus_params("alphabet=1;max_runs=1"))
    assert sorted(x.text() for x in c.numbers) == ["[+1]", "[-1]", "[]"]


def test_corpus_numbers_are_distinct_and_alternating():
    texts = [x.text() for x in SMALL.numbers]
    assert len(set(texts)) == len(texts)
    for x in SMALL.numbers:
        signs = [s.sign for s in x.segments]
        assert all(a != b for a, b in zip(signs, signs[1:]))


@pytest.mark.parametrize("bad", [
    "nosuch", "max_runs=x", "pairs=-1", "alphabet=0", "alphabet=w+w^(2)",
    "families=huge", "colour=red",
])
def test_bad_corpus_parameters(bad):
    with pytest.raises(ValueError):
        au.parse_corpus_params(bad)


def test_params_text_round_trips():
    p = au.parse_corpus_params("small;pairs=7;seed=3")
    assert au.parse_corpus_params(p.text()) == p


# -- oracles ----------------------------------------------------------------------

def test_ordinal_model():
    M = au.OrdModel.of
    assert (M(1) + M(1, 0)).text() == "w"
    assert (M(1, 1) * M(1, 0)).text() == "w^(2)"
    assert (M(1, 0) * M(1, 1)).text() == "w^(2)+w"
    assert M(1, 0, 0).cmp(M(5, 5)) == 1


@pytest.mark.parametrize("sigma", [1, -1])
def test_oracle_iterate_eps_chain(sigma):
    chain, detail = au.oracle_iterate(mo, eps, ZERO_NUMBER, sigma, 3)
    assert detail is None and len(chain) == 4
    assert chain[0] == (N("[+eps(0), +1]") if sigma > 0 else N("[+eps(0), -1]"))


@pytest.mark.parametrize("sigma", [1, -1])
def test_oracle_iterate_v_chain(sigma):
    p = struct_params(ZERO_NUMBER)
    with bounded():
        chain, detail = au.oracle_iterate(lambda x: xi_va(p, x), lambda z: xi_va_omega(p, z),
                                          ZERO_NUMBER, sigma, 2)
    assert detail is None and len(chain) == 3


def test_oracle_iterate_reports_a_broken_chain():
    # a bound that does not extend a_0 fails at once
    chain, detail = au.oracle_iterate(lambda x: x, lambda z: N("[-1]"), ZERO_NUMBER, 1, 2)
    assert detail is not None and "bound" in detail


# -- suites and reports --------------------------------------------------------

@pytest.mark.parametrize("name", CONFIRMATORY)
def test_confirmatory_suites_pass_on_small_corpus(name):
    report = au.run_suite(name, SMALL)
    assert report.cases and report.exit_code == 0, report.text()
    assert report.convention is None


def test_arbitration_suites_record_convention():
    report = au.run_suite("BOUNDARY", SMALL, convention("s0-infix"))
    assert report.convention == "s0-infix"


def test_shifted_exponent_fails_boundary_on_small_corpus():
    report = au.run_suite("BOUNDARY", SMALL, convention("s1-plain"))
    assert report.exit_code == 1
    assert any("not below the right grid value" in (c.detail or "") for c in report.failures())


def test_empty_corpus_gives_empty_report():
    report = au.run_suite("OMEGA-MAP", au.gen_corpus(au.PRESETS["empty"]))
    assert report.cases == [] and report.exit_code == 0
    assert report.to_json()["summary"]["cases"] == 0


def test_budget_exhaustion_is_its_own_verdict():
    report = au.run_suite("V-FIXED", SMALL, budget_runs=8)
    assert report.counts()["budget"] == len(report.cases) and report.exit_code == 2


def test_unknown_suite():
    with pytest.raises(ValueError):
        au.run_suite("NOPE", SMALL)


@pytest.mark.parametrize("name", sorted(CONVENTIONS))
def test_reports_are_deterministic_valid_and_replayable(name):
    conv = convention(name)
    a = au.run_suite("LAMBDA-SHIFT", SMALL, conv)
    b = au.run_suite("LAMBDA-SHIFT", SMALL, conv)
    assert a.dumps() == b.dumps()
    doc = json.loads(a.dumps())
    jsonschema.validate(doc, au.REPORT_SCHEMA)
    rows = au.replay(doc)
    assert len(rows) == len(a.failures())
    assert all(recorded == got for _, recorded, got, _ in rows)


def test_report_text_lists_failures():
    report = au.run_suite("BOUNDARY", SMALL, convention("s1-plain"))
    text = report.text(max_failures=2)
    assert text.count("FAIL ") == 2 and "more non-passing" in text


def test_replay_rejects_a_malformed_report():
    with pytest.raises(jsonschema.ValidationError):
        au.replay({"schema": "something-else"})
