"""Ordinals below the first fixed point of t -> eps_t, in Cantor normal form.

An ordinal is a finite sum of addends ``head * coeff`` with strictly
decreasing heads.  A head is either ``Pow(e)`` (omega^e) or ``Eps(t)``
(eps_t).  Since omega^(eps_t) = eps_t, a ``Pow`` head never carries an
exponent that is itself a single eps term; that keeps the form unique, so
structural equality coincides with ordinal equality.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Tuple, Union

__all__ = [
    "Ordinal", "Pow", "Eps", "NEGINF", "NegInf", "ExtOrdinal",
    "ZERO", "ONE", "TWO", "OMEGA", "OrdinalError", "OrdinalParseError",
    "ord_cmp", "ord_add", "ord_mul", "ord_pow_omega", "eps_pow_omega",
    "ord_eps", "ord_left_sub", "ord_split", "ord_div_omega",
    "ord_left_div_pow", "ord_flat", "ord_max", "ord_min", "parse_ordinal",
]


class OrdinalError(ArithmeticError):
    """Raised for undefined ordinal operations (e.g. left subtraction a > b)."""


class OrdinalParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0,
                 normalized: str | None = None):
        self.text = text
        self.pos = pos
        self.normalized = normalized
        if text:
            message = f"{message} at column {pos + 1} of {text!r}"
        if normalized is not None:
            message += f"; normal form is {normalized!r}"
        super().__init__(message)


class NegInf:
    """The extended value -infinity, below every ordinal."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEGINF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (NegInf, ())


NEGINF = NegInf()


# Ordinals and their heads are hash-consed: equal values are the same object,
# so equality is usually an identity test.  The structural fallbacks in
# __eq__ keep equality correct for any instance that escapes the tables.
_HEADS: dict = {}
_ORDINALS: dict = {}


class Pow:
    __slots__ = ("e", "_hash")

    def __new__(cls, e: "Ordinal"):
        key = ("w", e)
        h = _HEADS.get(key)
        if h is None:
            h = object.__new__(cls)
            h.e = e
            h._hash = hash(key)
            h = _HEADS.setdefault(key, h)
        return h

    def __eq__(self, other):
        return self is other or (isinstance(other, Pow) and self.e == other.e)

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Pow, (self.e,))

    def __repr__(self):
        return f"Pow({self.e!s})"


class Eps:
    __slots__ = ("t", "_hash")

    def __new__(cls, t: "Ordinal"):
        key = ("eps", t)
        h = _HEADS.get(key)
        if h is None:
            h = object.__new__(cls)
            h.t = t
            h._hash = hash(key)
            h = _HEADS.setdefault(key, h)
        return h

    def __eq__(self, other):
        return self is other or (isinstance(other, Eps) and self.t == other.t)

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Eps, (self.t,))

    def __repr__(self):
        return f"Eps({self.t!s})"


Head = Union[Pow, Eps]
Term = Tuple[Head, int]


class Ordinal:
    """Immutable ordinal in normal form.  Use the module constructors."""

    __slots__ = ("terms", "_hash")

    def __new__(cls, terms: Tuple[Term, ...] = ()):
        o = _ORDINALS.get(terms)
        if o is None:
            o = object.__new__(cls)
            o.terms = terms
            o._hash = hash(terms)
            o = _ORDINALS.setdefault(terms, o)
        return o

    # -- constructors -----------------------------------------------------
    @staticmethod
    def of(n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError(f"negative ordinal {n}")
        return _nat(n)

    @staticmethod
    def parse(text: str, strict: bool = True) -> "Ordinal":
        return parse_ordinal(text, strict=strict)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _is_unit(self.terms[0][0]))

    def is_limit(self) -> bool:
        return bool(self.terms) and not _is_unit(self.terms[-1][0])

    def is_epsilon(self) -> bool:
        return len(self.terms) == 1 and isinstance(self.terms[0][0], Eps) and self.terms[0][1] == 1

    def finite_value(self) -> int:
        if not self.terms:
            return 0
        if not self.is_finite():
            raise OrdinalError(f"{self} is not finite")
        return self.terms[0][1]

    # -- dunders ----------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, int):
            return self.is_finite() and self.finite_value() == other
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._hash == other._hash and self.terms == other.terms

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return ord_cmp(self, _coerce(other)) < 0

    def __le__(self, other):
        return ord_cmp(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return ord_cmp(self, _coerce(other)) > 0

    def __ge__(self, other):
        return ord_cmp(self, _coerce(other)) >= 0

    def __add__(self, other):
        return ord_add(self, _coerce(other))

    def __radd__(self, other):
        return ord_add(_coerce(other), self)

    def __mul__(self, other):
        return ord_mul(self, _coerce(other))

    def __rmul__(self, other):
        return ord_mul(_coerce(other), self)

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return _format(self)

    def __repr__(self):
        return f"Ordinal({_format(self)!r})"

    def __reduce__(self):
        return (parse_ordinal, (str(self),))


def _coerce(x) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        return Ordinal.of(x)
    raise TypeError(f"not an ordinal: {x!r}")


ExtOrdinal = Union[Ordinal, NegInf]

ZERO = Ordinal()
_UNIT = Pow(ZERO)
ONE = Ordinal(((_UNIT, 1),))
TWO = Ordinal(((_UNIT, 2),))
OMEGA = Ordinal(((Pow(ONE), 1),))


def _nat(n: int) -> Ordinal:
    return ZERO if n == 0 else Ordinal(((_UNIT, n),))


def _is_unit(h: Head) -> bool:
    return isinstance(h, Pow) and not h.e.terms


def _exponent(h: Head) -> Ordinal:
    """The e with h = omega^e."""
    if isinstance(h, Pow):
        return h.e
    return Ordinal(((h, 1),))


# -- comparison -------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _cmp_head(a: Head, b: Head) -> int:
    if a == b:
        return 0
    if isinstance(a, Pow) and isinstance(b, Pow):
        return ord_cmp(a.e, b.e)
    if isinstance(a, Eps) and isinstance(b, Eps):
        return ord_cmp(a.t, b.t)
    # omega^e vs eps_t: omega^e < eps_t iff e < eps_t (never equal in normal form)
    if isinstance(a, Pow):
        return -1 if ord_cmp(a.e, Ordinal(((b, 1),))) < 0 else 1
    return 1 if ord_cmp(b.e, Ordinal(((a, 1),))) < 0 else -1


def ord_cmp(a: ExtOrdinal, b: ExtOrdinal) -> int:
    """Three-way comparison; returns -1, 0 or 1.  NEGINF sorts below everything."""
    if a is NEGINF or b is NEGINF:
        return (a is not NEGINF) - (b is not NEGINF)
    if a is b:
        return 0
    ta, tb = a.terms, b.terms
    for (ha, ca), (hb, cb) in zip(ta, tb):
        c = _cmp_head(ha, hb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(ta) > len(tb)) - (len(ta) < len(tb))


def ord_max(a: Ordinal, b: Ordinal) -> Ordinal:
    return a if ord_cmp(a, b) >= 0 else b


def ord_min(a: Ordinal, b: Ordinal) -> Ordinal:
    return a if ord_cmp(a, b) <= 0 else b


# -- arithmetic -------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum a + b (concatenation of order types)."""
    if not b.terms:
        return a
    if not a.terms:
        return b
    hb, cb = b.terms[0]
    kept = []
    for h, c in a.terms:
        s = _cmp_head(h, hb)
        if s > 0:
            kept.append((h, c))
        elif s == 0:
            kept.append((h, c + cb))
            return Ordinal(tuple(kept) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


@lru_cache(maxsize=1 << 16)
def ord_pow_omega(x: Ordinal) -> Ordinal:
    """omega^x, collapsing to eps_t when x = eps_t."""
    if x.is_epsilon():
        return x
    return Ordinal(((Pow(x), 1),))


def _pow_head(x: Ordinal) -> Head:
    return ord_pow_omega(x).terms[0][0]


@lru_cache(maxsize=1 << 16)
def ord_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal product a * b (b copies of a)."""
    if not a.terms or not b.terms:
        return ZERO
    lead = _exponent(a.terms[0][0])
    out = ZERO
    for h, c in b.terms:
        x = _exponent(h)
        if not x.terms:
            h0, c0 = a.terms[0]
            part = Ordinal(((h0, c0 * c),) + a.terms[1:])
        else:
            part = Ordinal(((_pow_head(ord_add(lead, x)), c),))
        out = ord_add(out, part)
    return out


def ord_eps(t: ExtOrdinal) -> Ordinal:
    """eps_t, with eps_{-inf} = 0."""
    if t is NEGINF:
        return ZERO
    return Ordinal(((Eps(t), 1),))


@lru_cache(maxsize=1 << 16)
def eps_pow_omega(t: ExtOrdinal) -> Ordinal:
    """(eps_t)^omega = omega^(eps_t * omega)."""
    return ord_pow_omega(ord_mul(ord_eps(t), OMEGA))


@lru_cache(maxsize=1 << 16)
def ord_left_sub(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique c with a + c = b.  Raises OrdinalError when a > b."""
    ta, tb = a.terms, b.terms
    for i, (ha, ca) in enumerate(ta):
        if i >= len(tb):
            raise OrdinalError(f"left subtraction {a} from {b}: {a} > {b}")
        hb, cb = tb[i]
        s = _cmp_head(ha, hb)
        if s > 0:
            raise OrdinalError(f"left subtraction {a} from {b}: {a} > {b}")
        if s < 0:
            return Ordinal(tb[i:])
        if ca != cb:
            if ca > cb:
                raise OrdinalError(f"left subtraction {a} from {b}: {a} > {b}")
            return Ordinal(((hb, cb - ca),) + tb[i + 1:])
    return Ordinal(tb[len(ta):])


def ord_split(a: Ordinal) -> Tuple[Ordinal, int]:
    """Split a = limitPart + n with limitPart zero or a limit."""
    if a.terms and _is_unit(a.terms[-1][0]):
        return Ordinal(a.terms[:-1]), a.terms[-1][1]
    return a, 0


@lru_cache(maxsize=1 << 16)
def ord_left_div_pow(e: Ordinal, a: Ordinal) -> Ordinal:
    """The unique q with omega^e * q = a; OrdinalError if there is none."""
    out = []
    for h, c in a.terms:
        x = _exponent(h)
        if ord_cmp(e, x) > 0:
            raise OrdinalError(f"{a} is not a left multiple of w^({e})")
        out.append((_pow_head(ord_left_sub(e, x)), c))
    return Ordinal(tuple(out))


def ord_div_omega(a: Ordinal) -> Ordinal:
    """The unique l with omega * l = a, for a zero or a limit."""
    return ord_left_div_pow(ONE, a)


def ord_flat(a: ExtOrdinal) -> ExtOrdinal:
    """The b with 1 + b = a, or NEGINF when a is 0 (or -inf)."""
    if a is NEGINF or not a.terms:
        return NEGINF
    return ord_left_sub(ONE, a)


def iter_terms(a: Ordinal) -> Iterator[Term]:
    return iter(a.terms)


# -- text form --------------------------------------------------------------

def _format_head(h: Head) -> str:
    if isinstance(h, Eps):
        return f"eps({_format(h.t)})"
    if not h.e.terms:
        return "1"
    if h.e == ONE:
        return "w"
    return f"w^({_format(h.e)})"


def _format(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for h, c in a.terms:
        if _is_unit(h):
            parts.append(str(c))
        elif c == 1:
            parts.append(_format_head(h))
        else:
            parts.append(f"{_format_head(h)}*{c}")
    return "+".join(parts)


class _OrdParser:
    """Recursive descent over the canonical text form.

    Tree-level checks reject non-normal spellings (``w^(1)``, ``1+w``,
    ``w*1`` ...) and report the normal form of what was written.
    """

    def __init__(self, text: str, pos: int = 0, strict: bool = True):
        self.text = text
        self.pos = pos
        self.strict = strict
        self.problem: Tuple[str, int] | None = None

    def _flag(self, msg: str, pos: int):
        if self.problem is None:
            self.problem = (msg, pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            raise OrdinalParseError(f"expected {s!r}", self.text, self.pos)
        self.pos += len(s)

    def nat(self) -> int:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise OrdinalParseError("expected a natural number", self.text, start)
        return int(self.text[start:self.pos])

    def sum(self) -> Ordinal:
        value = ZERO
        prev: Head | None = None
        while True:
            tpos = self.pos
            term = self.term()
            if term.terms:
                head = term.terms[0][0]
                if prev is not None and _cmp_head(head, prev) >= 0:
                    self._flag("addends must have strictly decreasing heads", tpos)
                prev = head
            elif self.peek("+") or value.terms:
                self._flag("zero addend", tpos)
            value = ord_add(value, term)
            if not self.peek("+"):
                return value
            self.pos += 1

    def term(self) -> Ordinal:
        self.ws()
        if self.peek("w"):
            self.pos += 1
            if self.peek("^"):
                self.pos += 1
                self.expect("(")
                epos = self.pos
                e = self.sum()
                self.expect(")")
                if e == ZERO or e == ONE or e.is_epsilon():
                    self._flag(f"exponent {e} is not allowed under w^", epos)
                base = ord_pow_omega(e)
            else:
                base = OMEGA
        elif self.peek("eps"):
            self.pos += 3
            self.expect("(")
            if self.peek("-inf"):
                self.pos += 4
                self.expect(")")
                base = ZERO
            else:
                base = ord_eps(self.sum())
                self.expect(")")
        else:
            n = self.nat()
            if self.peek("*"):
                raise OrdinalParseError("coefficient on a natural number", self.text, self.pos)
            return _nat(n)
        if self.peek("*"):
            self.pos += 1
            kpos = self.pos
            k = self.nat()
            if k < 2:
                self._flag("coefficient must be at least 2", kpos)
            if k == 0:
                return ZERO
            base = Ordinal(((base.terms[0][0], k),)) if base.terms else ZERO
        return base


def parse_ordinal(text: str, strict: bool = True) -> Ordinal:
    """Parse the text form (``0``, ``7``, ``w``, ``w^(T)*k``, ``eps(T)``, sums)."""
    p = _OrdParser(text, strict=strict)
    value = p.sum()
    p.ws()
    if p.pos != len(text):
        raise OrdinalParseError("unexpected trailing input", text, p.pos)
    if strict and p.problem is not None:
        msg, pos = p.problem
        raise OrdinalParseError(f"non-normal ordinal: {msg}", text, pos, normalized=str(value))
    return value
