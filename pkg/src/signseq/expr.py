"""Expression language used by the command line.

    let h = [+1, -1]; lambda(cat(h, [-w]))

Literals are ordinals (``w^(2)+3``), integers (``-2``) and run literals
(``[+w, -1]``).  Everything else is a prefix call; see ``FUNCTIONS``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from . import logatomic as la
from .codec import ParseError, read_number, read_ordinal, _skip_ws
from .maps import eps, iota, kappa, mo, mo_inv, struct_params, v_of, xi_va, xi_va_omega
from .number import (
    Number, NumberError, ZERO_NUMBER, cmp, concat, flat, from_ordinal, neg,
    repeat, restrict, scale_left, sign_at, simplest_between, to_ordinal,
)
from .ordinal import NEGINF, NegInf, Ordinal, OrdinalError, ord_eps

__all__ = [
    "Lit", "Var", "Call", "Program", "parse_expr", "format_expr",
    "evaluate", "EvalError", "format_value", "FUNCTIONS", "Context",
]


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Lit:
    value: Any
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Any, ...]
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Program:
    bindings: Tuple[Tuple[str, Any], ...]
    body: Any


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_DELIM = ",);"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def ws(self):
        self.pos = _skip_ws(self.text, self.pos)

    def error(self, msg: str, pos: Optional[int] = None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def expect(self, s: str):
        self.ws()
        if not self.text.startswith(s, self.pos):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def ident(self) -> str:
        self.ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.error("expected a name")
        self.pos = m.end()
        return m.group()

    def program(self) -> Program:
        bindings = []
        while True:
            self.ws()
            m = _IDENT.match(self.text, self.pos)
            if not (m and m.group() == "let"):
                break
            self.pos = m.end()
            name = self.ident()
            self.expect("=")
            bindings.append((name, self.expr()))
            self.expect(";")
        body = self.expr()
        self.ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return Program(tuple(bindings), body)

    def _at_delim(self, pos: int) -> bool:
        pos = _skip_ws(self.text, pos)
        return pos == len(self.text) or self.text[pos] in _DELIM

    def expr(self):
        self.ws()
        start = self.pos
        text = self.text
        if start >= len(text):
            self.error("unexpected end of input")
        c = text[start]
        if c == "[":
            value, self.pos = read_number(text, start)
            return Lit(value, start)
        if c == "-":
            m = re.compile(r"-\s*(\d+)").match(text, start)
            if not m or not self._at_delim(m.end()):
                self.error("expected a negative integer")
            self.pos = m.end()
            return Lit(-int(m.group(1)), start)
        if c.isdigit() or text.startswith(("w", "eps("), start):
            try:
                value, end = read_ordinal(text, start)
            except ParseError:
                if c.isdigit():
                    raise
            else:
                if self._at_delim(end):
                    self.pos = end
                    return Lit(value, start)
                if c.isdigit():
                    self.error("unexpected input after ordinal", end)
        name = self.ident()
        self.ws()
        if not text.startswith("(", self.pos):
            return Var(name, start)
        self.pos += 1
        args = []
        self.ws()
        if text.startswith(")", self.pos):
            self.pos += 1
            return Call(name, tuple(args), start)
        while True:
            args.append(self.expr())
            self.ws()
            if text.startswith(",", self.pos):
                self.pos += 1
                continue
            self.expect(")")
            return Call(name, tuple(args), start)


def parse_expr(text: str) -> Program:
    """Parse a program; raises ParseError (a SyntaxError) with line/column."""
    return _Parser(text).program()


def _format_node(node) -> str:
    if isinstance(node, Lit):
        return format_value(node.value)
    if isinstance(node, Var):
        return node.name
    return f"{node.name}({', '.join(_format_node(a) for a in node.args)})"


def format_expr(prog: Program) -> str:
    lets = "".join(f"let {n} = {_format_node(e)}; " for n, e in prog.bindings)
    return lets + _format_node(prog.body)


def format_value(v) -> str:
    if isinstance(v, Number):
        return v.text()
    if isinstance(v, NegInf):
        return "-inf"
    return str(v)


# -- evaluation -----------------------------------------------------------------

@dataclass
class Context:
    convention: la.Convention = la.DEFAULT_CONVENTION
    used_convention: bool = False

    def conv(self) -> la.Convention:
        self.used_convention = True
        return self.convention


def as_number(v) -> Number:
    if isinstance(v, Number):
        return v
    if isinstance(v, Ordinal):
        return from_ordinal(v)
    if isinstance(v, int):
        return from_ordinal(Ordinal.of(abs(v))) if v >= 0 else neg(from_ordinal(Ordinal.of(-v)))
    raise EvalError(f"expected a number, got {format_value(v)}")


def as_ordinal(v) -> Ordinal:
    if isinstance(v, Ordinal):
        return v
    if isinstance(v, int) and v >= 0:
        return Ordinal.of(v)
    if isinstance(v, Number):
        return to_ordinal(v)
    raise EvalError(f"expected an ordinal, got {format_value(v)}")


def as_int(v) -> int:
    if isinstance(v, int):
        return v
    if isinstance(v, Ordinal) and v.is_finite():
        return v.finite_value()
    if isinstance(v, Number) and v.is_tail_free() and len(v.segments) <= 1 \
            and (not v.segments or v.segments[0].len.is_finite()):
        return v.sign() * (v.segments[0].len.finite_value() if v.segments else 0)
    raise EvalError(f"expected an integer, got {format_value(v)}")


def _cmp_word(x, y) -> str:
    return ("lt", "eq", "gt")[cmp(as_number(x), as_number(y)) + 1]


def _eps(x):
    if isinstance(x, Ordinal):
        return ord_eps(x)
    return eps(as_number(x))


def _isla(ctx, x) -> str:
    verdict, z = la.la_is_log_atomic(as_number(x), ctx.conv())
    if verdict is None:
        return "unknown"
    return f"true {z.text()}" if verdict else "false"


N = as_number
# name -> (min args, max args or None, implementation(ctx, *args))
FUNCTIONS: Dict[str, Tuple[int, Optional[int], Callable]] = {
    "cat": (1, None, lambda c, *xs: concat(*(N(x) for x in xs))),
    "neg": (1, 1, lambda c, x: neg(N(x))),
    "scale": (2, 2, lambda c, a, x: scale_left(as_ordinal(a), N(x))),
    "rep": (2, 2, lambda c, x, n: repeat(N(x), as_int(n))),
    "mo": (1, 1, lambda c, x: mo(N(x))),
    "moinv": (1, 1, lambda c, x: mo_inv(N(x))),
    "eps": (1, 1, lambda c, x: _eps(x)),
    "iota": (1, 1, lambda c, x: iota(N(x))),
    "kappa": (1, 1, lambda c, x: kappa(N(x))),
    "rho": (1, 1, lambda c, x: la.la_rho(N(x), c.conv())),
    "lambda": (1, 1, lambda c, x: la.la_lambda(N(x), c.conv())),
    "E": (1, 1, lambda c, x: la.la_E(N(x), c.conv())),
    "shift": (2, 2, lambda c, x, k: la.la_shift(N(x), as_int(k))),
    "tau": (1, 1, lambda c, x: N(x).tau),
    "len": (1, 1, lambda c, x: N(x).len),
    "flat": (1, 1, lambda c, x: flat(N(x))),
    "simplest": (2, 2, lambda c, a, b: simplest_between(N(a), N(b))),
    "cmp": (2, 2, lambda c, a, b: _cmp_word(a, b)),
    "restrict": (2, 2, lambda c, x, a: restrict(N(x), as_ordinal(a))),
    "sign": (2, 2, lambda c, x, a: sign_at(N(x), as_ordinal(a))),
    "V": (1, 1, lambda c, a: v_of(struct_params(N(a)))),
    "xi": (2, 2, lambda c, a, v: xi_va(struct_params(N(a)), N(v))),
    "xiomega": (2, 2, lambda c, a, z: xi_va_omega(struct_params(N(a)), N(z))),
    "isla": (1, 1, _isla),
}


def _eval(node, env: Dict[str, Any], ctx: Context):
    if isinstance(node, Lit):
        return node.value
    if isinstance(node, Var):
        if node.name not in env:
            raise EvalError(f"unbound name {node.name!r}")
        return env[node.name]
    entry = FUNCTIONS.get(node.name)
    if entry is None:
        raise EvalError(f"unknown function {node.name!r}")
    lo, hi, fn = entry
    if len(node.args) < lo or (hi is not None and len(node.args) > hi):
        raise EvalError(f"{node.name} takes {lo}" + ("" if hi == lo else f" to {hi or 'any'}")
                        + f" arguments, got {len(node.args)}")
    args = [_eval(a, env, ctx) for a in node.args]
    if any(isinstance(a, NegInf) for a in args):
        raise EvalError(f"{node.name}: argument is -inf")
    try:
        return fn(ctx, *args)
    except (NumberError, OrdinalError) as exc:
        raise EvalError(f"{node.name}: {type(exc).__name__}: {exc}") from exc


def evaluate(prog: Union[Program, str], ctx: Optional[Context] = None):
    if isinstance(prog, str):
        prog = parse_expr(prog)
    ctx = ctx or Context()
    env: Dict[str, Any] = {}
    for name, e in prog.bindings:
        env[name] = _eval(e, env, ctx)
    return _eval(prog.body, env, ctx)
