"""Sign-sequence numbers: finite oracles first, then transfinite behaviour."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given

from signseq.codec import parse_number as N
from signseq.maps import struct_params, v_of, xi_va
from signseq.number import (
    BudgetExceeded, InvalidRun, Number, Run, ZERO_NUMBER, bounded, budget, cmp,
    concat, drop, normalize, dyadic_value, expand, flat, from_ordinal, is_initial, neg,
    repeat, restrict, scale_left, sign_at, simplest_between, to_ordinal,
)
from signseq.ordinal import NEGINF, OMEGA, ONE, Ordinal, ord_add, parse_ordinal as P

from conftest import numbers


# -- oracle: finite sign lists and their dyadic values --------------------------

def value_of(signs):
    """Dyadic value of a finite sign list, by the birthday-tree walk."""
    x, step, changed = Fraction(0), Fraction(1), False
    for k, s in enumerate(signs):
        if not changed and (k == 0 or s == signs[0]):
            x += s
        else:
            changed = True
            step /= 2
            x += s * step
    return x


def to_number(signs) -> Number:
    runs = []
    for s in signs:
        if runs and runs[-1][0] == s:
            runs[-1][1] += 1
        else:
            runs.append([s, 1])
    return Number(tuple(Run(s, Ordinal.of(n)) for s, n in runs))


ALL_FINITE = [tuple(p) for n in range(6) for p in itertools.product((1, -1), repeat=n)]


def test_oracle_sanity():
    assert value_of([1, -1]) == Fraction(1, 2)
    assert value_of([-1, -1, 1]) == Fraction(-3, 2)
    assert len({value_of(s) for s in ALL_FINITE}) == len(ALL_FINITE)


def test_order_matches_dyadic_values():
    nums = [to_number(s) for s in ALL_FINITE]
    vals = [value_of(s) for s in ALL_FINITE]
    for x, vx in zip(nums, vals):
        assert dyadic_value(x) == vx
        for y, vy in zip(nums[::3], vals[::3]):
            assert cmp(x, y) == (vx > vy) - (vx < vy)


def test_initial_segment_matches_list_prefix():
    for s in ALL_FINITE[::2]:
        for t in ALL_FINITE[::5]:
            assert is_initial(to_number(s), to_number(t)) == (t[:len(s)] == s)


def test_simplest_between_matches_brute_force():
    by_birth = sorted(ALL_FINITE, key=len)
    for s, t in itertools.combinations(ALL_FINITE[:31], 2):
        lo, hi = sorted((value_of(s), value_of(t)))
        if lo == hi:
            continue
        want = next((c for c in by_birth if lo < value_of(c) < hi), None)
        if want is None or len(want) >= 5:
            continue   # the simplest may lie beyond the enumerated birthdays
        a, b = sorted((s, t), key=value_of)
        got = simplest_between(to_number(a), to_number(b))
        assert got == to_number(want), (s, t)


@pytest.mark.parametrize("signs", ALL_FINITE[1::7])
def test_restrict_sign_at_neg_concat_on_lists(signs):
    x = to_number(signs)
    for k in range(len(signs) + 1):
        assert restrict(x, Ordinal.of(k)) == to_number(signs[:k])
    for k, s in enumerate(signs):
        assert sign_at(x, Ordinal.of(k)) == s
    assert neg(x) == to_number(tuple(-s for s in signs))
    assert concat(x, x) == to_number(signs + signs)
    assert repeat(x, 3) == to_number(signs * 3)


# -- normal form and construction -----------------------------------------------

def test_runs_are_merged_and_checked():
    assert N("[+1, +w]") == N("[+w]")
    assert N("[+w, +1]").text() == "[+w+1]"
    with pytest.raises(InvalidRun):
        Run(2, ONE)
    with pytest.raises(InvalidRun):
        normalize([Run(1, P("0"))])


def test_ordinals_embed_as_plus_runs():
    for t in ["0", "3", "w^(2)+1", "eps(0)"]:
        assert to_ordinal(from_ordinal(P(t))) == P(t)
    assert from_ordinal(P("0")) == ZERO_NUMBER


def test_transfinite_concat_and_scale():
    assert scale_left(OMEGA, N("[+1, -1]")) == N("[+w, -w]")
    assert concat(N("[+w]"), N("[+1, -1]")).text() == "[+w+1, -1]"
    assert flat(N("[+3, -1]")) == N("[+2, -1]")
    assert flat(N("[-1]")) is NEGINF


def test_transfinite_order_is_lexicographic():
    # -1 < (absent) < +1 at the first difference
    assert N("[+w]") < N("[+w, +1]")
    assert N("[+w, -1]") < N("[+w]")
    assert N("[+w]") > N("[+5]")
    assert N("[+w, -w]") < N("[+w, -3]")
    assert is_initial(N("[+w]"), N("[+w+2, -1]"))
    assert not is_initial(N("[+w, -1]"), N("[+w+1]"))


@given(numbers, numbers)
def test_order_is_antisymmetric_and_consistent_with_neg(x, y):
    c = cmp(x, y)
    assert cmp(y, x) == -c
    assert cmp(neg(y), neg(x)) == c
    assert (c == 0) == (x == y)


@given(numbers, numbers)
def test_concat_extends(x, y):
    z = concat(x, y)
    assert is_initial(x, z)
    assert z.len == ord_add(x.len, y.len)
    assert drop(z, x.len) == y


@given(numbers, numbers)
def test_simplest_between_is_between_and_initial(x, y):
    if cmp(x, y) == 0:
        return
    lo, hi = (x, y) if x < y else (y, x)
    s = simplest_between(lo, hi)
    assert lo < s < hi
    # anything strictly between has s as an initial segment
    for z in (concat(s, N("[+1]")), concat(s, N("[-1]"))):
        if lo < z < hi:
            assert is_initial(s, z)


# -- symbolic tails --------------------------------------------------------------

def test_tail_equality_needs_a_horizon():
    p = struct_params(ZERO_NUMBER)
    v = v_of(p)
    w = xi_va(p, v)              # same sign sequence, different presentation
    with pytest.raises(BudgetExceeded):
        cmp(w, v)
    with bounded():
        assert cmp(w, v) == 0


def test_budget_scopes_tail_expansion():
    v = v_of(struct_params(ZERO_NUMBER))
    runs, more = expand(v, 4)
    assert more and len(runs) == 4
    with budget(2):
        with pytest.raises(BudgetExceeded):
            restrict(v, runs[3][1])


def test_drop_inside_a_tail_is_lazy():
    v = v_of(struct_params(ZERO_NUMBER))
    runs, _ = expand(v, 4)
    d = drop(v, runs[0][1])
    assert d.text().startswith("[Drop(")
    assert expand(d, 3)[0] == runs[1:4]
    assert concat(restrict(v, runs[0][1]), d).len == v.len
