"""Log-atomic parametrisation: positions, lambda, recognisers and the conventions."""

import pytest
from hypothesis import given, strategies as st

from signseq.codec import parse_number as N
from signseq.logatomic import (
    CONVENTIONS, DEFAULT_CONVENTION, DomainError, Grid, Interval, OutOfInterval,
    PatternMismatch, convention, la_decompose, la_E, la_g_piece, la_h_piece,
    la_interval_embed, la_interval_inverse, la_is_log_atomic, la_lambda,
    la_rebuild, la_rho, la_shift,
)
from signseq.maps import iota, mo
from signseq.number import Number, Run, ZERO_NUMBER, bounded, cmp, concat, is_initial
from signseq.ordinal import ONE, Ordinal, parse_ordinal as P

from conftest import tail_free_numbers

indices = tail_free_numbers(max_runs=4, lengths=st.sampled_from(
    ["1", "2", "w", "w+1", "w*2+3", "w^(2)"]).map(P))
small_a = tail_free_numbers(max_runs=2, lengths=st.sampled_from(["1", "2", "w"]).map(P))


# -- positions ------------------------------------------------------------------

@pytest.mark.parametrize("text, pos", [
    ("[]", Grid(ZERO_NUMBER, 0)),
    ("[-2]", Grid(ZERO_NUMBER, -2)),
    ("[+w]", Grid(N("[+1]"), 0)),
    ("[+w+3]", Grid(N("[+1]"), 3)),
    ("[+1, -1]", Interval(ZERO_NUMBER, -1, ZERO_NUMBER)),
    ("[-1, +1]", Interval(ZERO_NUMBER, 0, ZERO_NUMBER)),
    ("[+w, -2, +1, -1]", Interval(N("[+1]"), 1, N("[-1]"))),
])
def test_decompose_examples(text, pos):
    assert la_decompose(N(text)) == pos
    assert la_rebuild(pos) == N(text)


@given(indices)
def test_decompose_rebuild_identity(z):
    assert la_rebuild(la_decompose(z)) == z


@given(small_a, st.integers(-3, 3), small_a)
def test_interval_embedding_round_trips(a, n, t):
    x = la_interval_embed(a, n, t)
    assert la_interval_inverse(a, n, x) == t


def test_interval_inverse_rejects_other_intervals():
    with pytest.raises(OutOfInterval):
        la_interval_inverse(ZERO_NUMBER, 0, N("[+1, -1]"))


@given(indices, st.integers(-2, 2))
def test_shift_moves_along_the_grid(z, k):
    assert la_shift(la_shift(z, k), -k) == z


# -- lambda anchors -----------------------------------------------------------

def test_lambda_anchors():
    assert la_lambda(ZERO_NUMBER) == N("[+w]")
    assert la_lambda(N("[-1]")) == N("[+w, -w^(3)]")   # log w
    assert la_lambda(N("[+w]")) == N("[+eps(0)]")


@pytest.mark.parametrize("a", ["[]", "[+1]", "[-1]", "[+1, -1]", "[+w]"])
@pytest.mark.parametrize("n", [0, -1, -2, -5])
def test_lambda_on_nonpositive_grid_is_kappa_formula(a, n):
    x = N(a)
    z = la_rebuild(Grid(x, n))
    tail = Number((Run(-1, Ordinal.of(-n)),)) if n else ZERO_NUMBER
    assert la_lambda(z) == mo(mo(concat(iota(x), tail)))


@pytest.mark.parametrize("name", sorted(CONVENTIONS))
def test_rho_is_monotone_on_the_nonpositive_grid(name):
    conv = convention(name)
    zs = [la_rebuild(Grid(ZERO_NUMBER, n)) for n in range(-4, 1)]
    rs = [la_rho(z, conv) for z in zs]
    assert all(cmp(u, v) < 0 for u, v in zip(rs, rs[1:]))


def test_E_domain():
    assert la_E(N("[+w]")) == N("[+eps(0)]")
    with pytest.raises(DomainError):
        la_E(N("[+3]"))
    with pytest.raises(DomainError):
        la_E(N("[+eps(0)]"))


def test_unknown_convention_name():
    with pytest.raises(ValueError):
        convention("s2-plain")


# -- recogniser ----------------------------------------------------------------

@pytest.mark.parametrize("z", ["[]", "[-1]", "[-3]", "[+w]", "[+w, -1]", "[+w*2, -2]"])
def test_lambda_values_are_recognised(z):
    verdict, found = la_is_log_atomic(la_lambda(N(z)))
    assert verdict is True and found == N(z)


@pytest.mark.parametrize("x", ["[+w, -w^(2)]", "[+2]", "[-1]", "[+w^(w)*2]"])
def test_non_log_atomic_numbers_are_rejected(x):
    assert la_is_log_atomic(N(x)) == (False, None)


def test_interval_values_are_recognised():
    z = N("[+1, -1]")
    assert la_is_log_atomic(la_lambda(z)) == (True, z)


# -- piecewise rewrites against index shifts ---------------------------------

@pytest.mark.parametrize("name", sorted(CONVENTIONS))
@pytest.mark.parametrize("z", ["[-1, +1]", "[-2, +1]", "[+w, -1, +1, -1]"])
def test_h_piece_matches_index_shift(name, z):
    conv = convention(name)
    x = N(z)
    pos = la_decompose(x)
    with bounded():
        got = la_h_piece(pos.a, pos.n, la_rho(x, conv))
        want = mo(la_rho(la_shift(x, -1), conv))
        assert cmp(got, want) == 0


def test_h_piece_needs_its_interval():
    with pytest.raises(PatternMismatch):
        la_h_piece(ZERO_NUMBER, -1, N("[+1]"))


def test_g_piece_agrees_at_the_first_interval_verbatim():
    x = N("[-1, +1]")
    pos = la_decompose(x)
    with bounded():
        got = la_g_piece(pos.a, -pos.n, mo(la_rho(x)))
        assert cmp(got, la_rho(la_shift(x, 1))) == 0


# -- concrete counterexamples the audit reports --------------------------------

def test_verbatim_lambda_loses_simplicity_at_plus_two():
    # lambda_[+2] should be an initial segment of lambda_[+2, -1]
    with bounded():
        assert not is_initial(la_lambda(N("[+2]")), la_lambda(N("[+2, -1]")))


def test_verbatim_g_piece_disagrees_with_shift():
    x = N("[+1, -1]")
    pos = la_decompose(x)
    with bounded():
        got = la_g_piece(pos.a, -pos.n, mo(la_rho(x)))
        assert cmp(got, la_rho(la_shift(x, 1))) != 0


def test_shifted_exponent_breaks_the_boundary():
    conv = convention("s1-plain")
    with bounded():
        r = la_rho(N("[+1, -1]"), conv)
        assert cmp(r, la_rho(N("[+1]"), conv)) >= 0


def test_default_convention_is_verbatim():
    assert DEFAULT_CONVENTION.name == "paper-verbatim"


# -- external anchors: exp w = w^w and exp(w^w) = w^(w^w) ------------------------

@pytest.mark.parametrize("name, exp_w_ok", [
    ("paper-verbatim", False), ("s0-infix", False), ("s1-plain", True), ("s1-infix", True),
])
def test_exp_omega_anchor_by_convention(name, exp_w_ok):
    conv = convention(name)
    lam1 = la_lambda(N("[+1]"), conv)           # exp(lambda_0) = exp(w)
    lam2 = la_lambda(N("[+2]"), conv)           # exp(exp(w))
    assert (lam1 == N("[+w^(w)]")) == exp_w_ok
    assert (lam2 == N("[+w^(w^(w))]")) == exp_w_ok


@pytest.mark.parametrize("name", sorted(CONVENTIONS))
def test_no_convention_gives_rho_eps0_plus_one(name):
    # exp(lambda_[+w]) = exp(eps_0) should have rho = eps_0 + 1
    assert la_rho(N("[+w, +1]"), convention(name)) != N("[+eps(0)+1]")
