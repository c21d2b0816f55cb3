"""Surreal numbers as sign sequences: explicit runs plus lazily expanded tails.

A ``Number`` is a tuple of segments.  A segment is either a ``Run`` (a sign
repeated an ordinal number of times) or a ``TailSeg``: an infinite
alternating run stream produced by a ``TailSource``, optionally negated and
with extra length ``lead`` prepended to its first run.

Every tail stream used here has plus total = minus total = total length
(an additively principal ordinal), which is what makes lengths and tau of
tails available without expansion.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .ordinal import (
    NEGINF, ONE, ZERO, Ordinal, OrdinalError, ord_add, ord_cmp, ord_eps,
    ord_left_sub, ord_min, ord_mul, ord_pow_omega, parse_ordinal,
)

__all__ = [
    "NumberError", "InvalidRun", "BudgetExceeded", "UnsupportedConcat",
    "UnsupportedScale", "NotAnOrdinal", "NotFinite", "Run", "TailSource",
    "VSource", "MoSource", "DropSource", "v_source", "mo_source",
    "drop_source", "expand", "TailSeg", "Number", "ZERO_NUMBER", "run_image",
    "get_budget", "set_budget", "budget", "bounded", "normalize", "num",
    "from_ordinal", "to_ordinal", "concat", "neg", "scale_left", "repeat",
    "restrict", "sign_at", "cmp", "is_initial", "tau", "flat",
    "simplest_between", "dyadic_value", "length", "drop",
]


class NumberError(ValueError):
    pass


class InvalidRun(NumberError):
    pass


class BudgetExceeded(NumberError):
    """Lazy tail expansion needed more runs than the configured budget."""


class UnsupportedConcat(NumberError):
    pass


class UnsupportedScale(NumberError):
    pass


class NotAnOrdinal(NumberError):
    pass


class NotFinite(NumberError):
    pass


# -- expansion budget -------------------------------------------------------

DEFAULT_BUDGET = 64
BOUNDED_HORIZON = 32
_state = threading.local()


def get_budget() -> int:
    return getattr(_state, "budget", DEFAULT_BUDGET)


def set_budget(n: int) -> None:
    if n < 1:
        raise ValueError("budget must be positive")
    _state.budget = n


@contextmanager
def budget(n: int):
    old = get_budget()
    set_budget(n)
    try:
        yield
    finally:
        _state.budget = old


def _horizon() -> Optional[int]:
    return getattr(_state, "horizon", None)


@contextmanager
def bounded(horizon: int = BOUNDED_HORIZON):
    """Within this block, two tails that agree on their first ``horizon`` runs
    and end at the same position with the same tau are treated as equal
    (used by audits comparing tails built along different routes)."""
    old = _horizon()
    _state.horizon = horizon
    try:
        yield
    finally:
        _state.horizon = old


# -- segments -----------------------------------------------------------------

@dataclass(frozen=True)
class Run:
    sign: int
    len: Ordinal

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidRun(f"bad sign {self.sign}")


@lru_cache(maxsize=1 << 16)
def run_image(sign: int, length: Ordinal, t: Ordinal) -> Tuple[int, Ordinal]:
    """Image of one run under the omega-map run rule, at plus-count ``t``."""
    if sign > 0:
        return 1, ord_pow_omega(ord_add(t, length))
    return -1, ord_mul(ord_pow_omega(ord_add(t, ONE)), length)


class TailSource:
    """An infinite alternating run stream with memoized expansion."""

    key: tuple
    total: Ordinal

    def __init__(self):
        self._runs: List[Tuple[int, Ordinal]] = []
        self._lock = threading.RLock()

    def _generate(self, i: int) -> Tuple[int, Ordinal]:
        raise NotImplementedError

    def run(self, i: int) -> Tuple[int, Ordinal]:
        runs = self._runs
        if i < len(runs):
            return runs[i]
        with self._lock:
            while len(runs) <= i:
                runs.append(self._generate(len(runs)))
        return runs[i]

    def __eq__(self, other):
        return isinstance(other, TailSource) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


_SOURCES: dict = {}


class VSource(TailSource):
    """Run stream of V(a), the simplest fixed point of v -> [+d, -(d*w*d)] + mo(v).

    Only ``sigma`` (and hence delta) matters for the stream; ``a`` is kept
    for display.  Runs follow r0 = +delta, r1 = -(delta*w*delta) and
    r(i+2) = image of r(i) under the omega-map run rule at the plus-count
    of V before r(i): mo(V) shifted by two runs is V itself.
    """

    def __init__(self, sigma: Ordinal, a: Optional["Number"] = None):
        super().__init__()
        self.sigma = sigma
        self.a = a
        self.delta = ord_pow_omega(ord_add(sigma, ONE))
        self.key = ("V", sigma)
        if sigma.is_zero():
            sub = ZERO
        else:
            sub = ord_add(sigma.terms[0][0].t, ONE)
        self.total = ord_eps(sub)
        self._taus: List[Ordinal] = [ZERO]

    def _generate(self, i):
        if i == 0:
            r = (1, self.delta)
        elif i == 1:
            r = (-1, ord_mul(ord_mul(self.delta, ord_pow_omega(ONE)), self.delta))
        else:
            s, l = self.run(i - 2)
            r = run_image(s, l, self._taus[i - 2])
        taus = self._taus
        while len(taus) <= i + 1:
            taus.append(None)
        taus[i + 1] = ord_add(taus[i], r[1]) if r[0] > 0 else taus[i]
        return r


class MoSource(TailSource):
    """Omega-map image of a tail segment, started at plus-count ``start``."""

    def __init__(self, inner: "TailSeg", start: Ordinal):
        super().__init__()
        self.inner = inner
        self.start = start
        self.key = ("mo", inner.key, start)
        self.total = ord_pow_omega(ord_add(start, inner.tau))
        self._taus: List[Ordinal] = [start]

    def _generate(self, i):
        s, l = self.inner.run(i)
        t = self._taus[i]
        self._taus.append(ord_add(t, l) if s > 0 else t)
        return run_image(s, l, t)


class DropSource(TailSource):
    """What is left of a tail segment after its first ``at`` signs."""

    def __init__(self, seg: "TailSeg", at: Ordinal):
        super().__init__()
        self.seg = seg
        self.at = at
        self.key = ("drop", seg.key, at)
        self.total = ord_left_sub(at, seg.len)
        pos, k = ZERO, 0
        limit = get_budget()
        while True:
            if k >= limit:
                raise BudgetExceeded(f"cutting a tail at {at} needs more than {limit} runs")
            sign, l = seg.run(k)
            end = ord_add(pos, l)
            if ord_cmp(end, at) > 0:
                break
            pos, k = end, k + 1
        self._skip = k
        self._head = (sign, ord_left_sub(ord_left_sub(pos, at), l))

    def _generate(self, i):
        return self._head if i == 0 else self.seg.run(self._skip + i)


def drop_source(seg: "TailSeg", at: Ordinal) -> DropSource:
    key = ("drop", seg.key, at)
    src = _SOURCES.get(key)
    if src is None:
        src = _SOURCES.setdefault(key, DropSource(seg, at))
    return src


def v_source(sigma: Ordinal, a: Optional["Number"] = None) -> VSource:
    ident = (("V", sigma), None if a is None else a.text())
    src = _SOURCES.get(ident)
    if src is None:
        src = VSource(sigma, a)
        canon = _SOURCES.setdefault(("V", sigma), src)
        # the run stream depends on sigma only: share the expansion cache
        src._runs, src._taus, src._lock = canon._runs, canon._taus, canon._lock
        src = _SOURCES.setdefault(ident, src)
    return src


def mo_source(inner: "TailSeg", start: Ordinal) -> MoSource:
    key = ("mo", inner.key, start)
    src = _SOURCES.get(key)
    if src is None:
        src = _SOURCES.setdefault(key, MoSource(inner, start))
    return src


@dataclass(frozen=True)
class TailSeg:
    source: TailSource
    lead: Ordinal = ZERO
    neg: bool = False

    @property
    def key(self) -> tuple:
        return (self.source.key, self.lead, self.neg)

    @property
    def first_sign(self) -> int:
        s = self.source.run(0)[0]
        return -s if self.neg else s

    def run(self, i: int) -> Tuple[int, Ordinal]:
        s, l = self.source.run(i)
        if self.neg:
            s = -s
        if i == 0 and self.lead:
            l = ord_add(self.lead, l)
        return s, l

    @property
    def len(self) -> Ordinal:
        return ord_add(self.lead, self.source.total)

    @property
    def tau(self) -> Ordinal:
        if self.first_sign > 0:
            return ord_add(self.lead, self.source.total)
        return self.source.total

    def __eq__(self, other):
        return isinstance(other, TailSeg) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


Segment = Union[Run, TailSeg]


def _with_lead(seg: TailSeg, lead: Ordinal) -> TailSeg:
    first = seg.source.run(0)[1]
    if ord_add(lead, first) == first:
        lead = ZERO
    return TailSeg(seg.source, lead, seg.neg)


def _sign_of(seg: Segment) -> int:
    return seg.sign if isinstance(seg, Run) else seg.first_sign


def _normalize(segs: Sequence[Segment], allow_zero: bool) -> Tuple[Segment, ...]:
    out: List[Segment] = []
    last_sign = 0          # sign of out[-1] when it is a run, else 0
    tails = 0
    for seg in segs:
        if type(seg) is Run:
            if not seg.len.terms:
                if allow_zero:
                    continue
                raise InvalidRun("run of length 0")
            if last_sign == seg.sign:
                out[-1] = Run(seg.sign, ord_add(out[-1].len, seg.len))
            else:
                out.append(seg)
                last_sign = seg.sign
        elif isinstance(seg, TailSeg):
            tails += 1
            if tails > 1:
                raise UnsupportedConcat("a number may hold at most one symbolic tail")
            if last_sign and last_sign == seg.first_sign:
                prev = out.pop()
                seg = _with_lead(seg, ord_add(prev.len, seg.lead))
            out.append(seg)
            last_sign = 0
        else:
            raise TypeError(f"not a segment: {seg!r}")
    return tuple(out)


class Number:
    """Immutable surreal number given by its sign sequence."""

    __slots__ = ("segments", "_len", "_tau", "_hash", "_plain")

    def __init__(self, segments: Tuple[Segment, ...] = ()):
        self.segments = segments
        self._plain = all(type(s) is Run for s in segments)
        self._len = None
        self._tau = None
        self._hash = None

    @property
    def len(self) -> Ordinal:
        if self._len is None:
            total = ZERO
            for seg in self.segments:
                total = ord_add(total, seg.len)
            self._len = total
        return self._len

    @property
    def tau(self) -> Ordinal:
        if self._tau is None:
            total = ZERO
            for seg in self.segments:
                if isinstance(seg, Run):
                    if seg.sign > 0:
                        total = ord_add(total, seg.len)
                else:
                    total = ord_add(total, seg.tau)
            self._tau = total
        return self._tau

    def is_zero(self) -> bool:
        return not self.segments

    def is_tail_free(self) -> bool:
        return self._plain

    def runs(self) -> List[Tuple[int, Ordinal]]:
        if not self.is_tail_free():
            raise NumberError("number has a symbolic tail")
        return [(s.sign, s.len) for s in self.segments]

    def sign(self) -> int:
        return _sign_of(self.segments[0]) if self.segments else 0

    # equality and order
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Number):
            return NotImplemented
        if self.segments == other.segments:
            return True
        if self.is_tail_free() and other.is_tail_free():
            return False
        return cmp(self, other) == 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.len, self.tau))
        return self._hash

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0

    def __neg__(self):
        return neg(self)

    def __add__(self, other):
        # sign-sequence concatenation, not surreal addition
        return concat(self, other)

    def text(self) -> str:
        return "[" + ", ".join(_segment_text(s) for s in self.segments) + "]"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Number({self.text()!r})"


ZERO_NUMBER = Number(())


def normalize(segs: Sequence[Segment]) -> Number:
    """Build a number from raw segments (merging runs, folding runs into tails)."""
    return Number(_normalize(segs, allow_zero=False))


def _build(segs: Sequence[Segment]) -> Number:
    return Number(_normalize(segs, allow_zero=True))


def num(*runs: Tuple[int, Union[int, Ordinal, str]]) -> Number:
    """Convenience constructor: num((1, 1), (-1, 'w')) is [+1, -w]."""
    segs = []
    for s, l in runs:
        if isinstance(l, str):
            l = parse_ordinal(l)
        elif isinstance(l, int):
            l = Ordinal.of(l)
        segs.append(Run(s, l))
    return normalize(segs)


def _tail_text(seg: TailSeg) -> str:
    src = seg.source
    if isinstance(src, VSource):
        body = f"V(a={src.a.text()})" if src.a is not None else f"V(sigma={src.sigma})"
    elif isinstance(src, MoSource):
        body = f"Mo({_tail_text(src.inner)}, tau0={src.start})"
    elif isinstance(src, DropSource):
        body = f"Drop({_tail_text(src.seg)}, at={src.at})"
    else:
        body = f"Tail({src.key!r})"
    if seg.lead:
        body = body[:-1] + f", lead={seg.lead})"
    return "-" + body if seg.neg else body


def _segment_text(seg: Segment) -> str:
    if isinstance(seg, Run):
        return ("+" if seg.sign > 0 else "-") + str(seg.len)
    return _tail_text(seg)


# -- lockstep cursor ----------------------------------------------------------

class _Cursor:
    """Walks a number run by run; ``rem`` is what is left of the current run."""

    __slots__ = ("segs", "si", "ti", "sign", "rem", "seg_end", "tau_end", "limit")

    def __init__(self, x: Number):
        self.segs = x.segments
        self.seg_end = ZERO
        self.tau_end = ZERO
        self.limit = get_budget()
        self._enter(0)

    def _enter(self, si: int):
        self.si = si
        self.ti = 0
        if si >= len(self.segs):
            self.sign, self.rem = 0, None
            return
        seg = self.segs[si]
        self.seg_end = ord_add(self.seg_end, seg.len)
        if isinstance(seg, Run):
            self.sign, self.rem = seg.sign, seg.len
            if seg.sign > 0:
                self.tau_end = ord_add(self.tau_end, seg.len)
        else:
            self.tau_end = ord_add(self.tau_end, seg.tau)
            self.sign, self.rem = seg.run(0)

    def in_tail(self) -> bool:
        return self.si < len(self.segs) and isinstance(self.segs[self.si], TailSeg)

    def skip_segment(self):
        self._enter(self.si + 1)

    def advance(self, m: Ordinal):
        rem = ord_left_sub(m, self.rem)
        if rem:
            self.rem = rem
            return
        seg = self.segs[self.si]
        if isinstance(seg, Run):
            self._enter(self.si + 1)
            return
        self.ti += 1
        if self.ti >= self.limit:
            raise BudgetExceeded(f"tail expansion exceeded {self.limit} runs")
        self.sign, self.rem = seg.run(self.ti)


def _first_difference_runs(xs, ys) -> Optional[Tuple[int, int]]:
    for i in range(min(len(xs), len(ys))):
        rx, ry = xs[i], ys[i]
        if rx.sign != ry.sign:
            return rx.sign, ry.sign
        c = ord_cmp(rx.len, ry.len)
        if c < 0:
            return (xs[i + 1].sign if i + 1 < len(xs) else 0), ry.sign
        if c > 0:
            return rx.sign, (ys[i + 1].sign if i + 1 < len(ys) else 0)
    if len(xs) == len(ys):
        return None
    if len(xs) < len(ys):
        return 0, ys[len(xs)].sign
    return xs[len(ys)].sign, 0


def _first_difference(x: Number, y: Number) -> Optional[Tuple[int, int]]:
    """Signs (x[a], y[a]) at the first position a where x and y differ
    (0 meaning "past the end"), or None when x = y."""
    if x.is_tail_free() and y.is_tail_free():
        return _first_difference_runs(x.segments, y.segments)
    cx, cy = _Cursor(x), _Cursor(y)
    horizon = _horizon()
    while True:
        if cx.sign != cy.sign:
            return cx.sign, cy.sign
        if cx.sign == 0:
            return None
        if cx.in_tail() and cy.in_tail():
            tx, ty = cx.segs[cx.si], cy.segs[cy.si]
            same = (tx.source.key == ty.source.key and tx.neg == ty.neg
                    and cx.ti == cy.ti and cx.rem == cy.rem)
            if not same and horizon is not None:
                same = (cx.ti >= horizon and cy.ti >= horizon
                        and cx.seg_end == cy.seg_end and cx.tau_end == cy.tau_end)
            if same:
                cx.skip_segment()
                cy.skip_segment()
                continue
        m = ord_min(cx.rem, cy.rem)
        cx.advance(m)
        cy.advance(m)


def cmp(x: Number, y: Number) -> int:
    """Lexicographic order of sign sequences (with 0 past the end): -1, 0 or 1."""
    if x.segments == y.segments:
        return 0
    d = _first_difference(x, y)
    if d is None:
        return 0
    return -1 if d[0] < d[1] else 1


def is_initial(x: Number, y: Number) -> bool:
    """x is an initial segment of y."""
    if x.segments == y.segments or not x.segments:
        return True
    d = _first_difference(x, y)
    return d is None or d[0] == 0


def length(x: Number) -> Ordinal:
    return x.len


def tau(x: Number) -> Ordinal:
    return x.tau


def _tail_runs(seg: TailSeg, limit: Optional[int] = None) -> Iterator[Tuple[int, Ordinal]]:
    limit = get_budget() if limit is None else limit
    for i in range(limit):
        yield seg.run(i)
    raise BudgetExceeded(f"tail expansion exceeded {limit} runs")


def restrict(x: Number, alpha: Ordinal) -> Number:
    """The initial segment of x of length min(alpha, len x)."""
    out: List[Segment] = []
    rem = alpha
    for seg in x.segments:
        if rem.is_zero():
            break
        if ord_cmp(seg.len, rem) <= 0:
            out.append(seg)
            rem = ord_left_sub(seg.len, rem)
            continue
        if isinstance(seg, Run):
            out.append(Run(seg.sign, rem))
            break
        for s, l in _tail_runs(seg):
            if ord_cmp(l, rem) >= 0:
                out.append(Run(s, rem))
                break
            out.append(Run(s, l))
            rem = ord_left_sub(l, rem)
        break
    return _build(out)


def sign_at(x: Number, alpha: Ordinal) -> int:
    """x[alpha], or 0 when alpha >= len x."""
    rem = alpha
    for seg in x.segments:
        if ord_cmp(seg.len, rem) <= 0:
            rem = ord_left_sub(seg.len, rem)
            continue
        if isinstance(seg, Run):
            return seg.sign
        for s, l in _tail_runs(seg):
            if ord_cmp(l, rem) > 0:
                return s
            rem = ord_left_sub(l, rem)
    return 0


def expand(x: Number, limit: int) -> Tuple[List[Tuple[int, Ordinal]], bool]:
    """Explicit runs of x, expanding each tail to at most ``limit`` runs.
    The flag tells whether some tail was cut off."""
    out: List[Tuple[int, Ordinal]] = []
    cut = False
    for seg in x.segments:
        if isinstance(seg, Run):
            out.append((seg.sign, seg.len))
        else:
            out.extend(seg.run(i) for i in range(limit))
            cut = True
            break
    return out, cut


# -- arithmetic on sign sequences ---------------------------------------------

def concat(*xs: Number) -> Number:
    """Sign-sequence concatenation x0 + x1 + ... (written with a dot-plus)."""
    segs: List[Segment] = []
    for x in xs:
        segs.extend(x.segments)
    return _build(segs)


def neg(x: Number) -> Number:
    out = []
    for seg in x.segments:
        if isinstance(seg, Run):
            out.append(Run(-seg.sign, seg.len))
        else:
            out.append(TailSeg(seg.source, seg.lead, not seg.neg))
    return Number(tuple(out))


def scale_left(alpha: Ordinal, x: Number) -> Number:
    """alpha * x: every sign repeated alpha times."""
    if alpha.is_zero():
        raise UnsupportedScale("left factor must be positive")
    if not x.is_tail_free():
        raise UnsupportedScale("cannot scale a number with a symbolic tail")
    return Number(tuple(Run(s.sign, ord_mul(alpha, s.len)) for s in x.segments))


def repeat(x: Number, n: int) -> Number:
    """x * n for an integer n (n copies of x, or of -x when n < 0)."""
    if not x.is_tail_free():
        raise UnsupportedScale("cannot repeat a number with a symbolic tail")
    base = x if n >= 0 else neg(x)
    return _build(list(base.segments) * abs(n))


def from_ordinal(alpha: Ordinal) -> Number:
    return ZERO_NUMBER if alpha.is_zero() else Number((Run(1, alpha),))


def to_ordinal(x: Number) -> Ordinal:
    if x.is_zero():
        return ZERO
    if len(x.segments) == 1 and isinstance(x.segments[0], Run) and x.segments[0].sign > 0:
        return x.segments[0].len
    raise NotAnOrdinal(f"{x} has a minus sign")


def flat(x: Number):
    """The y with x = [+1] + y when x > 0, else NEGINF."""
    if x.sign() <= 0:
        return NEGINF
    head, rest = x.segments[0], x.segments[1:]
    if isinstance(head, Run):
        l = ord_left_sub(ONE, head.len)
        return Number(((Run(1, l),) if l else ()) + rest)
    if head.lead:
        return Number((_with_lead(head, ord_left_sub(ONE, head.lead)),) + rest)
    if head.run(0)[1].is_finite():
        raise NumberError("cannot strip a sign from a tail with a finite first run")
    return x


def drop(x: Number, alpha: Ordinal) -> Number:
    """The y with x = restrict(x, alpha) + y, for alpha <= len x."""
    rem = alpha
    segs = list(x.segments)
    for i, seg in enumerate(segs):
        if rem.is_zero():
            return _build(segs[i:])
        if ord_cmp(seg.len, rem) <= 0:
            rem = ord_left_sub(seg.len, rem)
            continue
        if isinstance(seg, Run):
            return _build([Run(seg.sign, ord_left_sub(rem, seg.len))] + segs[i + 1:])
        return _build([_drop_in_tail(seg, rem)] + segs[i + 1:])
    if rem:
        raise NumberError(f"cannot drop {alpha} signs from a number of length {x.len}")
    return ZERO_NUMBER


def _drop_in_tail(seg: TailSeg, alpha: Ordinal) -> TailSeg:
    if ord_cmp(alpha, seg.lead) <= 0:
        return _with_lead(seg, ord_left_sub(alpha, seg.lead))
    into = ord_left_sub(seg.lead, alpha)
    first = seg.source.run(0)[1]
    if ord_cmp(into, first) < 0 and ord_left_sub(into, first) == first:
        return TailSeg(seg.source, ZERO, seg.neg)
    return TailSeg(drop_source(seg, alpha))


def _first_diff_pos(a: Number, b: Number) -> Ordinal:
    """Length of the longest common initial segment (tail-free inputs)."""
    pos = ZERO
    for ra, rb in zip(a.segments, b.segments):
        if ra.sign != rb.sign:
            return pos
        if ra.len != rb.len:
            return ord_add(pos, ord_min(ra.len, rb.len))
        pos = ord_add(pos, ra.len)
    return pos


def _simplest_beyond(c: Number, side: int) -> Number:
    """Simplest y with y < c (side = -1) or y > c (side = +1)."""
    if c.sign() == -side:
        return ZERO_NUMBER
    if c.is_zero():
        return Number((Run(side, ONE),))
    k = c.segments[0].len
    if len(c.segments) == 1:
        k = ord_add(k, ONE)
    return Number((Run(side, k),))


def simplest_between(a: Number, b: Number) -> Number:
    """The unique simplest number strictly between a < b (tail-free inputs)."""
    if not (a.is_tail_free() and b.is_tail_free()):
        raise NumberError("simplest_between needs tail-free bounds")
    if cmp(a, b) >= 0:
        raise NumberError(f"need a < b, got {a} and {b}")
    p = _first_diff_pos(a, b)
    if p != a.len and p != b.len:
        return restrict(a, p)
    if p == a.len:
        rest = drop(b, ord_add(p, ONE))
        return concat(a, Number((Run(1, ONE),)), _simplest_beyond(rest, -1))
    rest = drop(a, ord_add(p, ONE))
    return concat(b, Number((Run(-1, ONE),)), _simplest_beyond(rest, 1))


def dyadic_value(x: Number) -> Fraction:
    """Conway value of a finite sign sequence."""
    if not x.is_tail_free() or not x.len.is_finite():
        raise NotFinite(f"{x} does not have finite length")
    signs = []
    for s in x.segments:
        signs.extend([s.sign] * s.len.finite_value())
    v = Fraction(0)
    step = Fraction(1)
    changed = False
    for s in signs:
        if not changed and s != signs[0]:
            changed = True
        if changed:
            step /= 2
        v += s * step
    return v
