"""Parametrisation maps on sign sequences.

omega-map (mo), its inverse, the eps-map, iota, kappa, and the V_a
structures with their fixed-point parametrisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .number import (
    Number, NumberError, Run, TailSeg, MoSource, ZERO_NUMBER, _build,
    concat, mo_source, run_image, v_source,
)
from .ordinal import (
    ONE, ZERO, Ordinal, OrdinalError, eps_pow_omega, ord_add, ord_cmp,
    ord_eps, ord_flat, ord_left_div_pow, ord_left_sub, ord_mul, ord_pow_omega,
    OMEGA, Pow,
)

__all__ = [
    "NotAMonomial", "mo", "mo_inv", "eps", "iota", "kappa", "StructParams",
    "struct_params", "xi_va", "v_of", "xi_va_omega", "mo_iterate",
]


class NotAMonomial(NumberError):
    pass


def _tail_free(z: Number, what: str):
    if not z.is_tail_free():
        raise NumberError(f"{what} needs a tail-free argument, got {z}")


def mo(z: Number) -> Number:
    """The omega-map z -> w^z, by the run rule (runs after a leading +1)."""
    if z.is_tail_free():
        # images alternate like z; a first plus image absorbs the leading 1
        out: list = [] if z.segments and z.segments[0].sign > 0 else [Run(1, ONE)]
        t = ZERO
        for seg in z.segments:
            s, l = run_image(seg.sign, seg.len, t)
            out.append(Run(s, l))
            if s > 0:
                t = ord_add(t, seg.len)
        return Number(tuple(out))
    segs: list = [Run(1, ONE)]
    t = ZERO
    for seg in z.segments:
        if isinstance(seg, Run):
            s, l = run_image(seg.sign, seg.len, t)
            segs.append(Run(s, l))
            if seg.sign > 0:
                t = ord_add(t, seg.len)
        else:
            segs.append(TailSeg(mo_source(seg, t)))
            t = ord_add(t, seg.tau)
    return _build(segs)


def mo_iterate(z: Number, n: int) -> Number:
    for _ in range(n):
        z = mo(z)
    return z


def mo_inv(m: Number) -> Number:
    """The z with mo(z) = m; NotAMonomial when there is none."""
    if m.sign() <= 0:
        raise NotAMonomial(f"{m} is not a monomial")
    head, rest = m.segments[0], list(m.segments[1:])
    if isinstance(head, Run):
        l = ord_left_sub(ONE, head.len)
        segs = ([Run(1, l)] if l else []) + rest
    else:
        segs = [TailSeg(head.source, ZERO, head.neg)] + rest
    out: list = []
    t = ZERO
    try:
        for seg in segs:
            if isinstance(seg, TailSeg):
                src = seg.source
                if not isinstance(src, MoSource) or seg.neg or seg.lead or src.start != t:
                    raise NotAMonomial(f"{m}: tail is not an omega-map image")
                out.append(src.inner)
                t = ord_add(t, src.inner.tau)
            elif seg.sign > 0:
                terms = seg.len.terms
                if len(terms) != 1 or terms[0][1] != 1:
                    raise NotAMonomial(f"{m}: plus run {seg.len} is not a power of w")
                alpha = ord_left_sub(t, _exponent_of(seg.len))
                if alpha.is_zero():
                    raise NotAMonomial(f"{m}: plus run {seg.len} too short")
                out.append(Run(1, alpha))
                t = ord_add(t, alpha)
            else:
                alpha = ord_left_div_pow(ord_add(t, ONE), seg.len)
                out.append(Run(-1, alpha))
    except OrdinalError as exc:
        raise NotAMonomial(f"{m} is not a monomial: {exc}") from None
    z = _build(out)
    if mo(z).segments != m.segments:
        raise NotAMonomial(f"{m} is not a monomial")
    return z


def _exponent_of(a: Ordinal) -> Ordinal:
    """e with a = w^e, for a single-term a (w^(eps_t) = eps_t)."""
    head = a.terms[0][0]
    return head.e if isinstance(head, Pow) else a


def eps(z: Number) -> Number:
    """The eps-map: parametrisation of the fixed points of mo."""
    _tail_free(z, "eps")
    segs: list = [Run(1, ord_eps(ZERO))]
    t = ZERO
    for seg in z.segments:
        if seg.sign > 0:
            t = ord_add(t, seg.len)
            segs.append(Run(1, ord_eps(t)))
        else:
            segs.append(Run(-1, ord_mul(eps_pow_omega(t), seg.len)))
    return _build(segs)


def iota(z: Number) -> Number:
    """The iota-map: plus runs give eps of the flattened plus-count, minus runs -(w*len)."""
    _tail_free(z, "iota")
    segs: list = []
    t = ZERO
    for seg in z.segments:
        if seg.sign > 0:
            t = ord_add(t, seg.len)
            segs.append(Run(1, ord_eps(ord_flat(t))))
        else:
            segs.append(Run(-1, ord_mul(OMEGA, seg.len)))
    return _build(segs)


def kappa(a: Number) -> Number:
    return mo(mo(iota(a)))


@dataclass(frozen=True)
class StructParams:
    sigma: Ordinal
    delta: Ordinal
    a: Optional[Number] = field(default=None, compare=False)

    @property
    def eps_sub(self) -> Ordinal:
        """The t with V(a) of total length eps_t."""
        if self.sigma.is_zero():
            return ZERO
        return ord_add(self.sigma.terms[0][0].t, ONE)


def struct_params(a: Number) -> StructParams:
    _tail_free(a, "struct_params")
    sigma = ord_eps(ord_flat(a.tau))
    return StructParams(sigma, ord_pow_omega(ord_add(sigma, ONE)), a)


def _v_prefix(p: StructParams) -> Number:
    d = p.delta
    return Number((Run(1, d), Run(-1, ord_mul(ord_mul(d, OMEGA), d))))


def xi_va(p: StructParams, v: Number) -> Number:
    """One application of the parametrisation of V_a: [+d, -(d*w*d)] + mo(v)."""
    return concat(_v_prefix(p), mo(v))


def v_of(p: StructParams) -> Number:
    """V(a), the simplest fixed point of xi_va, as a symbolic tail."""
    return Number((TailSeg(v_source(p.sigma, p.a)),))


def xi_va_omega(p: StructParams, z: Number) -> Number:
    """Parametrisation of the xi_va-fixed numbers: V(a) followed by Phi(z)."""
    _tail_free(z, "xi_va_omega")
    base = p.eps_sub
    segs: list = list(v_of(p).segments)
    t = ZERO
    for seg in z.segments:
        if seg.sign > 0:
            t = ord_add(t, seg.len)
            segs.append(Run(1, ord_eps(ord_add(base, t))))
        else:
            segs.append(Run(-1, ord_mul(eps_pow_omega(ord_add(base, t)), seg.len)))
    return _build(segs)
