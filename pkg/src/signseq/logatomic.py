"""The rho/lambda pipeline for log-atomic numbers.

An index z is located against the grid w*a + n (``Grid``) or inside one of
the unit intervals I(a, n) = (w*a - (n+1), w*a - n) (``Interval``).  rho is
evaluated piecewise on those positions, and lambda_z = mo(mo(rho_z)).

The defining formulas admit two binary readings (tower index of the exp grid
formula, and an optional [+1, -delta] infix on right intervals).  They are
carried as a ``Convention`` so the audit can measure each one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .maps import (
    NotAMonomial, StructParams, iota, mo, mo_inv, struct_params, xi_va_omega,
)
from .number import (
    BudgetExceeded, Number, NumberError, Run, TailSeg, VSource, ZERO_NUMBER,
    bounded, cmp, concat, drop, is_initial, neg, scale_left,
)
from .ordinal import (
    ONE, OMEGA, ZERO, Eps, Ordinal, OrdinalError, Pow, eps_pow_omega,
    ord_add, ord_cmp, ord_div_omega, ord_eps, ord_flat, ord_left_div_pow,
    ord_left_sub, ord_mul, ord_pow_omega, ord_split,
)

__all__ = [
    "Grid", "Interval", "Convention", "CONVENTIONS", "DEFAULT_CONVENTION",
    "PatternMismatch", "DomainError", "OutOfInterval", "theta", "tower",
    "la_decompose", "la_rebuild", "la_interval_embed", "la_interval_inverse",
    "la_rho", "la_lambda", "la_E", "la_shift", "la_h_piece", "la_g_piece",
    "la_is_log_atomic", "iota_inv", "convention",
]


class PatternMismatch(NumberError):
    pass


class DomainError(NumberError):
    pass


class OutOfInterval(NumberError):
    pass


@dataclass(frozen=True)
class Grid:
    """z = w*a + n (with a trailing run of -|n| when n < 0)."""
    a: Number
    n: int


@dataclass(frozen=True)
class Interval:
    """z is the image of t under the parametrisation of I(a, n)."""
    a: Number
    n: int
    t: Number


Position = Union[Grid, Interval]


@dataclass(frozen=True)
class Convention:
    exp_shift: int = 0
    right_infix: bool = False

    @property
    def name(self) -> str:
        for k, v in CONVENTIONS.items():
            if v == self:
                return k
        return f"s{self.exp_shift}-{'infix' if self.right_infix else 'plain'}"


CONVENTIONS = {
    "paper-verbatim": Convention(0, False),
    "s1-plain": Convention(1, False),
    "s0-infix": Convention(0, True),
    "s1-infix": Convention(1, True),
}
DEFAULT_CONVENTION = CONVENTIONS["paper-verbatim"]


def convention(name: str) -> Convention:
    try:
        return CONVENTIONS[name]
    except KeyError:
        raise ValueError(f"unknown convention {name!r}; "
                         f"choose from {', '.join(CONVENTIONS)}") from None


def _runs(*pairs) -> Number:
    return concat(*(Number((Run(s, l),)) for s, l in pairs if l))


def _nat(n: int) -> Ordinal:
    return Ordinal.of(n)


def theta(a: Number) -> Number:
    return scale_left(OMEGA, a) if a.segments else ZERO_NUMBER


def tower(y: Ordinal, m: int) -> Ordinal:
    """m-fold omega-exponentiation of the ordinal y."""
    for _ in range(m):
        y = ord_pow_omega(y)
    return y


# -- positions ----------------------------------------------------------------

def la_decompose(z: Number) -> Position:
    if not z.is_tail_free():
        raise NumberError("la_decompose needs a tail-free index")
    segs = list(z.segments)
    prefix: List[Run] = []
    rest: List[Run] = []
    for i, seg in enumerate(segs):
        lim, k = ord_split(seg.len)
        if k == 0:
            prefix.append(seg)
            continue
        if lim:
            prefix.append(Run(seg.sign, lim))
        rest = [Run(seg.sign, _nat(k))] + segs[i + 1:]
        break
    a = Number(tuple(Run(r.sign, ord_div_omega(r.len)) for r in prefix))
    if not rest:
        return Grid(a, 0)
    s, k = rest[0].sign, rest[0].len.finite_value()
    after = Number(tuple(rest[1:]))
    if after.is_zero():
        return Grid(a, s * k)
    t = drop(after, ONE)
    return Interval(a, -k, t) if s > 0 else Interval(a, k - 1, t)


def la_interval_embed(a: Number, n: int, t: Number) -> Number:
    if n >= 0:
        return concat(theta(a), _runs((-1, _nat(n + 1)), (1, ONE)), t)
    return concat(theta(a), _runs((1, _nat(-n)), (-1, ONE)), t)


def la_interval_inverse(a: Number, n: int, x: Number) -> Number:
    pos = la_decompose(x)
    if not (isinstance(pos, Interval) and pos.n == n and pos.a == a):
        raise OutOfInterval(f"{x} is not in I(a={a}, n={n})")
    return pos.t


def _grid_number(a: Number, n: int) -> Number:
    if n == 0:
        return theta(a)
    return concat(theta(a), _runs((1 if n > 0 else -1, _nat(abs(n)))))


def la_rebuild(pos: Position) -> Number:
    if isinstance(pos, Grid):
        return _grid_number(pos.a, pos.n)
    return la_interval_embed(pos.a, pos.n, pos.t)


def la_shift(z: Number, k: int) -> Number:
    """Index shift: lambda of the result is exp^k of lambda_z."""
    pos = la_decompose(z)
    if isinstance(pos, Grid):
        return la_rebuild(Grid(pos.a, pos.n + k))
    return la_rebuild(Interval(pos.a, pos.n - k, pos.t))


# -- rho and lambda -----------------------------------------------------------

def _grid_rho(a: Number, n: int, conv: Convention) -> Number:
    ia = iota(a)
    if n <= 0:
        return concat(ia, _runs((-1, _nat(-n))))
    p = struct_params(a)
    beta = tower(ord_add(p.sigma, ONE), n - conv.exp_shift)
    return concat(ia, _runs((1, beta)))


def _rho_at(pos: Position, conv: Convention) -> Number:
    if isinstance(pos, Grid):
        return _grid_rho(pos.a, pos.n, conv)
    a, n, t = pos.a, pos.n, pos.t
    p = struct_params(a)
    v = xi_va_omega(p, t)
    if n >= 0:
        return concat(iota(a), _runs((-1, _nat(n + 1)), (1, ONE), (-1, p.delta)), v)
    base = _grid_rho(a, -n - 1, conv)
    if conv.right_infix:
        return concat(base, _runs((1, ONE), (-1, p.delta)), v)
    return concat(base, v)


def la_rho(z: Number, conv: Convention = DEFAULT_CONVENTION) -> Number:
    return _rho_at(la_decompose(z), conv)


def la_lambda(z: Number, conv: Convention = DEFAULT_CONVENTION) -> Number:
    return mo(mo(la_rho(z, conv)))


def la_E(x: Number, conv: Convention = DEFAULT_CONVENTION) -> Number:
    """Alias of lambda on positive infinite x of length below eps_0."""
    if not x.is_tail_free() or x.sign() <= 0 or x.segments[0].len.is_finite():
        raise DomainError(f"E needs x greater than every integer, got {x}")
    if ord_cmp(x.len, ord_eps(ZERO)) >= 0:
        raise DomainError(f"E needs length below eps(0), got {x.len}")
    return la_lambda(x, conv)


# -- piecewise log/exp rewrites -----------------------------------------------

def _strip(x: Number, p: Number) -> Number:
    if not is_initial(p, x):
        raise PatternMismatch(f"{p} is not an initial segment of {x}")
    return drop(x, p.len)


def _starts_with(x: Number, sign: int, length: Ordinal) -> bool:
    return is_initial(_runs((sign, length)), x)


def la_h_piece(a: Number, n: int, x: Number) -> Number:
    """Sign-sequence rewrite of h on I(a, n), n >= 0, where log w^(w^x) = w^(h(x))."""
    if n < 0:
        raise PatternMismatch("h rewrite needs n >= 0")
    p = struct_params(a)
    left = concat(iota(a), _runs((-1, _nat(n + 1))))
    rest = _strip(x, left)
    if rest.sign() <= 0:
        raise PatternMismatch(f"{x} does not continue with +1 after {left}")
    z = drop(rest, ONE)
    if _starts_with(z, -1, p.delta):
        u = drop(z, p.delta)
        return concat(mo(concat(iota(a), _runs((-1, _nat(n + 2))))), _runs((1, ONE)), u)
    return concat(mo(left), _runs((-1, ONE)), z)


def la_g_piece(a: Number, n: int, x: Number, conv: Convention = DEFAULT_CONVENTION) -> Number:
    """Sign-sequence rewrite of g on K(a, n), where exp w^(w^y) = w^(w^(g(w^y)))."""
    if n < 0:
        raise PatternMismatch("g rewrite needs n >= 0")
    p = struct_params(a)
    if n == 0:
        rest = _strip(x, mo(iota(a)))
        if _starts_with(rest, -1, p.delta):
            z = drop(rest, p.delta)
            if z.sign() <= 0:
                raise PatternMismatch("case (d) needs z > 0")
            return concat(iota(a), z)
        if rest.sign() >= 0:
            raise PatternMismatch(f"{x} does not continue with -1")
        return concat(iota(a), _runs((1, ONE)), drop(rest, ONE))
    rest = _strip(x, mo(_grid_rho(a, n - 1, conv)))
    beta = tower(ord_add(p.sigma, ONE), n + 1 - conv.exp_shift)
    if _starts_with(rest, 1, beta):
        z = drop(rest, beta)
        if z.sign() >= 0:
            raise PatternMismatch("case (b) needs z < 0")
        return concat(_grid_rho(a, n + 1, conv), _runs((-1, ONE)), z)
    if rest.sign() <= 0:
        raise PatternMismatch(f"{x} does not continue with +1")
    return concat(_grid_rho(a, n, conv), _runs((1, ONE)), drop(rest, ONE))


# -- recognising log-atomic numbers -------------------------------------------

def iota_inv(r: Number) -> Optional[Number]:
    """The a with iota(a) = r, or None."""
    if not r.is_tail_free():
        return None
    out = []
    t = ZERO
    try:
        for seg in r.segments:
            if seg.sign < 0:
                out.append(Run(-1, ord_div_omega(seg.len)))
                continue
            terms = seg.len.terms
            if len(terms) != 1 or not isinstance(terms[0][0], Eps) or terms[0][1] != 1:
                return None
            new_t = ord_add(ONE, terms[0][0].t)
            alpha = ord_left_sub(t, new_t)
            if alpha.is_zero():
                return None
            out.append(Run(1, alpha))
            t = new_t
    except OrdinalError:
        return None
    a = Number(tuple(out))
    return a if iota(a).segments == r.segments else None


def _tower_index(y: Ordinal, target: Ordinal, limit: int = 64) -> Optional[int]:
    for m in range(limit):
        c = ord_cmp(y, target)
        if c == 0:
            return m
        if c > 0:
            return None
        y = ord_pow_omega(y)
    return None


def _grid_candidates(r: Number, conv: Convention) -> List[Grid]:
    segs = r.segments
    if not segs:
        return [Grid(ZERO_NUMBER, 0)]
    body, last = Number(segs[:-1]), segs[-1]
    out: List[Grid] = []
    if last.sign < 0:
        lim, k = ord_split(last.len)
        a = iota_inv(concat(body, _runs((-1, lim))))
        if a is not None:
            out.append(Grid(a, -k))
        return out
    a = iota_inv(r)
    if a is not None:
        out.append(Grid(a, 0))
    L = last.len
    splits = [(body, L)]
    head = L.terms[0][0]
    if isinstance(head, Eps):
        e = ord_eps(head.t)
        splits.append((concat(body, _runs((1, e))), ord_left_sub(e, L)))
    y = L
    while len(y.terms) == 1 and y.terms[0][1] == 1 and isinstance(y.terms[0][0], Pow):
        y = y.terms[0][0].e
        if len(y.terms) == 2 and isinstance(y.terms[0][0], Eps) and y.terms[0][1] == 1 and y.terms[1] == ONE.terms[0]:
            splits.append((concat(body, _runs((1, ord_eps(y.terms[0][0].t)))), L))
    for base, beta in splits:
        a = iota_inv(base)
        if a is None or beta.is_zero():
            continue
        m = _tower_index(ord_add(struct_params(a).sigma, ONE), beta)
        if m is not None and m + conv.exp_shift >= 1:
            out.append(Grid(a, m + conv.exp_shift))
    return out


def _phi_inverse(after: List, e_sub: Ordinal) -> Optional[Number]:
    out = []
    t = ZERO
    try:
        for seg in after:
            if not isinstance(seg, Run):
                return None
            if seg.sign > 0:
                terms = seg.len.terms
                if len(terms) != 1 or not isinstance(terms[0][0], Eps) or terms[0][1] != 1:
                    return None
                new_t = ord_left_sub(e_sub, terms[0][0].t)
                alpha = ord_left_sub(t, new_t)
                if alpha.is_zero():
                    return None
                out.append(Run(1, alpha))
                t = new_t
            else:
                e = ord_mul(ord_eps(ord_add(e_sub, t)), OMEGA)
                out.append(Run(-1, ord_left_div_pow(e, seg.len)))
    except OrdinalError:
        return None
    return Number(tuple(out))


def _interval_candidates(r: Number, conv: Convention) -> List[Interval]:
    segs = r.segments
    idx = [i for i, s in enumerate(segs) if isinstance(s, TailSeg)]
    if len(idx) != 1:
        return []
    i = idx[0]
    tail = segs[i]
    src = tail.source
    if not isinstance(src, VSource) or tail.neg:
        return []
    p = StructParams(src.sigma, src.delta)
    t = _phi_inverse(list(segs[i + 1:]), p.eps_sub)
    if t is None:
        return []
    q = concat(Number(segs[:i]), _runs((1, tail.lead)))
    out: List[Interval] = []
    qs = q.segments
    if len(qs) >= 2 and qs[-1] == Run(-1, p.delta) and qs[-2].sign > 0:
        lim, k = ord_split(qs[-2].len)
        if k >= 1:
            r0 = concat(Number(qs[:-2]), _runs((1, ord_add(lim, _nat(k - 1)))))
            if r0.segments and r0.segments[-1].sign < 0:
                lim2, k2 = ord_split(r0.segments[-1].len)
                a = iota_inv(concat(Number(r0.segments[:-1]), _runs((-1, lim2))))
                if a is not None and k2 >= 1:
                    out.append(Interval(a, k2 - 1, t))
            for g in _grid_candidates(r0, conv):
                if g.n >= 0:
                    out.append(Interval(g.a, -g.n - 1, t))
    s = p.sigma
    for extra in (ZERO, s, ord_add(s, ONE), ord_add(ord_mul(s, _nat(2)), ONE)):
        for g in _grid_candidates(concat(q, _runs((1, extra))), conv):
            if g.n >= 0:
                out.append(Interval(g.a, -g.n - 1, t))
    return out


def la_is_log_atomic(x: Number, conv: Convention = DEFAULT_CONVENTION
                     ) -> Tuple[Optional[bool], Optional[Number]]:
    """(True, z) when x = lambda_z, (False, None) when x is not log-atomic,
    (None, None) when tails prevent a decision."""
    try:
        r = mo_inv(mo_inv(x))
    except NotAMonomial:
        return (None, None) if not x.is_tail_free() else (False, None)
    except BudgetExceeded:
        return None, None
    cands = _grid_candidates(r, conv) if r.is_tail_free() else _interval_candidates(r, conv)
    unknown = False
    for pos in cands:
        try:
            z = la_rebuild(pos)
            with bounded():
                if la_rho(z, conv) == r:
                    return True, z
        except BudgetExceeded:
            unknown = True
        except NumberError:
            continue
    if unknown or not r.is_tail_free():
        # a tail that matched no candidate may still be an unusual spelling
        return (None, None) if unknown else (False, None)
    return False, None
