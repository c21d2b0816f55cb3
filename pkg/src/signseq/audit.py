"""Exact-oracle audit harness.

A suite enumerates cases from a corpus and checks each one exactly.  A case
verdict is ``pass``, ``fail`` (with a serialised counterexample) or
``budget`` when a symbolic tail needed more runs than the expansion budget.
Reports are sorted by case key and are deterministic for a given suite,
corpus, convention and budget.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import jsonschema

from . import logatomic as la
from .codec import parse_number
from .maps import (
    eps, iota, kappa, mo, mo_inv, struct_params, v_of, xi_va, xi_va_omega,
)
from .number import (
    BudgetExceeded, Number, NumberError, Run, ZERO_NUMBER, bounded, budget,
    cmp, concat, expand, from_ordinal, get_budget, is_initial, neg, num,
    restrict,
)
from .ordinal import (
    ONE, OMEGA, ZERO, Ordinal, OrdinalError, ord_add, ord_cmp, ord_eps,
    ord_flat, ord_mul, ord_pow_omega, ord_split, parse_ordinal,
)

__all__ = [
    "CorpusParams", "Corpus", "gen_corpus", "parse_corpus_params", "SUITES",
    "AuditReport", "CaseResult", "run_suite", "replay", "oracle_iterate",
    "REPORT_SCHEMA", "REPORT_VERSION", "OrdModel",
]

REPORT_VERSION = 1


# -- corpus -----------------------------------------------------------------

DEFAULT_ALPHABET = ("1", "2", "3", "w", "w+1", "w*2", "w^(2)", "w^(w)")


@dataclass(frozen=True)
class CorpusParams:
    """Parameters of a corpus.

    ``alphabet`` and ``max_runs`` fix the enumerated numbers.  Suites whose
    per-case cost grows quickly (iteration chains, nested tails) use only
    the numbers with at most ``heavy_runs`` runs.  ``pairs`` is the sample
    size of pair checks, drawn with ``seed``.
    """
    alphabet: Tuple[str, ...] = DEFAULT_ALPHABET
    max_runs: int = 4
    heavy_runs: int = 2
    pairs: int = 100_000
    seed: int = 1
    families: str = "full"
    empty: bool = False

    def text(self) -> str:
        if self.empty:
            return "empty"
        return (f"alphabet={','.join(self.alphabet)};max_runs={self.max_runs};"
                f"heavy_runs={self.heavy_runs};pairs={self.pairs};seed={self.seed};"
                f"families={self.families}")


PRESETS = {
    "default": CorpusParams(),
    "small": CorpusParams(alphabet=("1", "w"), max_runs=2, heavy_runs=1, pairs=400,
                          families="small"),
    "empty": CorpusParams(empty=True),
}


def parse_corpus_params(text: str) -> CorpusParams:
    """``default``, ``small``, ``empty`` or ``key=value;...`` (optionally after a preset)."""
    parts = [p.strip() for p in text.split(";") if p.strip()]
    params = PRESETS["default"]
    if parts and "=" not in parts[0]:
        name = parts.pop(0)
        if name not in PRESETS:
            raise ValueError(f"unknown corpus preset {name!r}")
        params = PRESETS[name]
    changes: Dict[str, Any] = {}
    for part in parts:
        key, _, value = part.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "alphabet":
            items = tuple(v.strip() for v in value.split(",") if v.strip())
            for item in items:
                o = parse_ordinal(item)
                if o.is_zero() or str(o) != item:
                    raise ValueError(f"alphabet entry {item!r} must be a nonzero ordinal in normal form")
            changes[key] = items
        elif key == "families":
            if value not in ("full", "small"):
                raise ValueError("families must be 'full' or 'small'")
            changes[key] = value
        elif key in ("max_runs", "heavy_runs", "pairs", "seed"):
            try:
                changes[key] = int(value)
            except ValueError:
                raise ValueError(f"{key} must be an integer, got {value!r}") from None
            if changes[key] < 0:
                raise ValueError(f"{key} must be non-negative")
        else:
            raise ValueError(f"unknown corpus parameter {key!r}")
    return replace(params, **changes)


def _a_family(which: str = "full") -> Tuple[Number, ...]:
    """Index families: 0, +-1, +-2, +-1/2 and some w-scaled values."""
    if which == "small":
        return ZERO_NUMBER, num((1, 1)), num((-1, 1)), num((1, 1), (-1, 1))
    return (
        ZERO_NUMBER, num((1, 1)), num((-1, 1)), num((1, 2)), num((-1, 2)),
        num((1, 1), (-1, 1)), num((-1, 1), (1, 1)),
        num((1, "w")), num((-1, "w")), num((1, "w"), (-1, "w")),
    )


@dataclass(frozen=True)
class Corpus:
    params: CorpusParams
    numbers: Tuple[Number, ...]
    heavy: Tuple[Number, ...]
    a_family: Tuple[Number, ...]
    n_range: Tuple[int, ...]
    t_values: Tuple[Number, ...]

    @property
    def is_empty(self) -> bool:
        return not self.numbers

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.params.seed}:{salt}")


def _enumerate(alphabet: Tuple[Ordinal, ...], max_runs: int) -> List[Number]:
    out = [ZERO_NUMBER]
    for k in range(1, max_runs + 1):
        for first in (1, -1):
            for lengths in itertools.product(alphabet, repeat=k):
                out.append(Number(tuple(
                    Run(first if i % 2 == 0 else -first, l) for i, l in enumerate(lengths))))
    return out


def gen_corpus(params: CorpusParams = PRESETS["default"]) -> Corpus:
    """All alternating run lists over the alphabet with at most ``max_runs`` runs."""
    if params.empty:
        return Corpus(params, (), (), (), (), ())
    alphabet = tuple(parse_ordinal(a) for a in params.alphabet)
    numbers = tuple(_enumerate(alphabet, params.max_runs))
    heavy = tuple(x for x in numbers if len(x.segments) <= params.heavy_runs)
    if params.families == "small":
        t_values = tuple(_enumerate((ONE, OMEGA), 1))
        n_range = tuple(range(-2, 3))
    else:
        t_values = tuple(_enumerate(tuple(parse_ordinal(a) for a in ("1", "2", "w")), 2))
        n_range = tuple(range(-4, 5))
    return Corpus(params, numbers, heavy, _a_family(params.families), n_range, t_values)


# -- ordinal oracle -----------------------------------------------------------

@dataclass(frozen=True)
class OrdModel:
    """Ordinal below w^6 as natural coefficients, ``coef[i]`` of w^i.

    Addition and multiplication are written from the textbook absorption
    rules and share no code with the normal-form implementation.
    """
    coef: Tuple[int, ...] = (0,) * 6

    @staticmethod
    def of(*high_to_low: int) -> "OrdModel":
        c = list(reversed(high_to_low)) + [0] * (6 - len(high_to_low))
        return OrdModel(tuple(c))

    def lead(self) -> int:
        for i in range(5, -1, -1):
            if self.coef[i]:
                return i
        return -1

    def __add__(self, other: "OrdModel") -> "OrdModel":
        h = other.lead()
        if h < 0:
            return self
        c = list(other.coef)
        c[h] += self.coef[h]
        for i in range(h + 1, 6):
            c[i] = self.coef[i]
        return OrdModel(tuple(c))

    def __mul__(self, other: "OrdModel") -> "OrdModel":
        e = self.lead()
        out = OrdModel()
        if e < 0:
            return out
        for i in range(5, -1, -1):
            m = other.coef[i]
            if not m:
                continue
            if i == 0:
                # x * m: only the leading coefficient is multiplied
                c = list(self.coef)
                c[e] *= m
                term = OrdModel(tuple(c))
            else:
                if e + i > 5:
                    raise OverflowError("product beyond w^6")
                c = [0] * 6
                c[e + i] = m
                term = OrdModel(tuple(c))
            out = out + term
        return out

    def cmp(self, other: "OrdModel") -> int:
        for a, b in zip(reversed(self.coef), reversed(other.coef)):
            if a != b:
                return -1 if a < b else 1
        return 0

    def text(self) -> str:
        parts = []
        for i in range(5, -1, -1):
            k = self.coef[i]
            if not k:
                continue
            base = {0: "", 1: "w"}.get(i, f"w^({i})")
            if i == 0:
                parts.append(str(k))
            else:
                parts.append(base if k == 1 else f"{base}*{k}")
        return "+".join(parts) or "0"

    def to_ordinal(self) -> Ordinal:
        return parse_ordinal(self.text())


def _model_below_w3(rng: random.Random, top: int = 4) -> OrdModel:
    return OrdModel.of(rng.randint(0, top), rng.randint(0, top), rng.randint(0, top))


# -- case plumbing --------------------------------------------------------------

def _encode(v: Any) -> Any:
    if isinstance(v, Number):
        return {"number": v.text()}
    if isinstance(v, Ordinal):
        return {"ordinal": str(v)}
    if isinstance(v, (int, str)) or v is None:
        return v
    raise TypeError(f"cannot serialise {v!r}")


def _decode(v: Any) -> Any:
    if isinstance(v, dict):
        if "number" in v:
            return parse_number(v["number"])
        return parse_ordinal(v["ordinal"])
    return v


Inputs = Dict[str, Any]
CheckFn = Callable[[Inputs, la.Convention], Optional[str]]


@dataclass(frozen=True)
class Suite:
    """``cases`` yields (key, inputs); ``check`` returns None or a failure detail."""
    name: str
    cases: Callable[[Corpus], Iterator[Tuple[str, Inputs]]]
    check: CheckFn
    uses_convention: bool = False


def _fmt(x: Any) -> str:
    return x.text() if isinstance(x, Number) else str(x)


def _expect_eq(what: str, got: Any, want: Any) -> Optional[str]:
    if isinstance(got, Number) and isinstance(want, Number):
        same = got.segments == want.segments
    else:
        same = got == want
    return None if same else f"{what}: got {_fmt(got)}, expected {_fmt(want)}"


def _first(*details: Optional[str]) -> Optional[str]:
    for d in details:
        if d is not None:
            return d
    return None


def _sample_pairs(rng: random.Random, xs: Tuple[Number, ...], count: int,
                  ys: Optional[Tuple[Number, ...]] = None) -> Iterator[Tuple[Number, Number]]:
    ys = xs if ys is None else ys
    if not xs or not ys:
        return
    for _ in range(count):
        yield xs[rng.randrange(len(xs))], ys[rng.randrange(len(ys))]


def _prefixes(x: Number) -> List[Number]:
    """Proper initial segments of x cut at run boundaries and inside runs."""
    out = []
    pos = ZERO
    for seg in x.segments:
        lim, k = ord_split(seg.len)
        if lim and k:
            out.append(restrict(x, ord_add(pos, lim)))
        if not seg.len.is_zero() and (lim or k > 1):
            out.append(restrict(x, ord_add(pos, ONE)))
        pos = ord_add(pos, seg.len)
        out.append(restrict(x, pos))
    out = [p for p in out if p.len != x.len]
    return [ZERO_NUMBER] + out


def _embedding_pair(f: Callable[[Number], Number], x: Number, y: Number) -> Optional[str]:
    want = cmp(x, y)
    got = cmp(f(x), f(y))
    if got != want:
        return f"order not preserved: cmp(x, y) = {want}, cmp(f(x), f(y)) = {got}"
    if is_initial(x, y) and not is_initial(f(x), f(y)):
        return "initial segment not preserved"
    return None


def _embedding_prefixes(f: Callable[[Number], Number], x: Number) -> Optional[str]:
    fx = f(x)
    for p in _prefixes(x):
        if not is_initial(f(p), fx):
            return f"f({p.text()}) is not an initial segment of f(x) = {fx.text()}"
    return None


def _memo(fn: Callable[[Number], Number]) -> Callable[[Number], Number]:
    cache: Dict[Any, Number] = {}

    def wrapped(x: Number) -> Number:
        key = x.segments
        if key not in cache:
            cache[key] = fn(x)
        return cache[key]
    return wrapped


_mo = _memo(mo)
_iota = _memo(iota)


def _ordinal_sample() -> List[Ordinal]:
    """216 ordinals below w^3 plus a few larger ones."""
    out = [OrdModel.of(a, b, c).to_ordinal()
           for a in range(6) for b in range(6) for c in range(6)]
    out += [parse_ordinal(s) for s in ("w^(w)", "w^(w)*2+1", "w^(w+1)", "eps(0)", "eps(0)+1", "eps(1)")]
    return out


# -- ORD-ORACLE ---------------------------------------------------------------

def _ord_cases(corpus: Corpus):
    rng = corpus.rng("ord")
    for i in range(min(corpus.params.pairs, 10_000)):
        x, y = _model_below_w3(rng), _model_below_w3(rng)
        yield f"pair:{i:06d}", {"x": x.text(), "y": y.text()}


def _model_parse(text: str) -> OrdModel:
    c = [0] * 6
    for part in text.split("+"):
        if part == "0":
            continue
        base, _, k = part.partition("*")
        if base.isdigit():
            c[0] += int(base)
            continue
        e = 1 if base == "w" else int(base[3:-1])
        c[e] += int(k or 1)
    return OrdModel(tuple(c))


def _ord_check(inputs: Inputs, conv) -> Optional[str]:
    mx, my = _model_parse(inputs["x"]), _model_parse(inputs["y"])
    x, y = mx.to_ordinal(), my.to_ordinal()
    return _first(
        _expect_eq("sum", ord_add(x, y), (mx + my).to_ordinal()),
        _expect_eq("product", ord_mul(x, y), (mx * my).to_ordinal()),
        _expect_eq("cmp", ord_cmp(x, y), mx.cmp(my)),
    )


# -- OMEGA-MAP ----------------------------------------------------------------

def _map_suite_cases(corpus: Corpus, anchors: List[Tuple[str, Inputs]]):
    """Anchors, then one case per corpus element, then sampled pairs."""
    yield from anchors
    for i, x in enumerate(corpus.numbers):
        yield f"elem:{i:06d}", {"kind": "elem", "x": x}
    rng = corpus.rng("pairs")
    for i, (x, y) in enumerate(_sample_pairs(rng, corpus.numbers, corpus.params.pairs)):
        yield f"pair:{i:06d}", {"kind": "pair", "x": x, "y": y}


def _omega_cases(corpus: Corpus):
    anchors = [
        ("anchor:half", {"kind": "anchor", "x": num((1, 1), (-1, 1)), "want": num((1, "w"), (-1, "w^(2)"))}),
        ("anchor:log", {"kind": "anchor", "x": num((1, 1), (-1, "w")), "want": num((1, "w"), (-1, "w^(3)"))}),
    ]
    anchors += [(f"ordinal:{i:04d}", {"kind": "ordinal", "alpha": a})
                for i, a in enumerate(_ordinal_sample())]
    return _map_suite_cases(corpus, anchors)


def _omega_check(inputs: Inputs, conv) -> Optional[str]:
    kind = inputs["kind"]
    if kind == "anchor":
        return _expect_eq("mo", mo(inputs["x"]), inputs["want"])
    if kind == "ordinal":
        a = inputs["alpha"]
        return _expect_eq("mo of ordinal", mo(from_ordinal(a)), from_ordinal(ord_pow_omega(a)))
    x = inputs["x"]
    if kind == "elem":
        return _first(_expect_eq("mo_inv(mo(x))", mo_inv(_mo(x)), x),
                      _embedding_prefixes(_mo, x))
    return _embedding_pair(_mo, x, inputs["y"])


# -- PADDING ------------------------------------------------------------------

def _limit_head(y: Number) -> bool:
    """The largest ordinal initial segment of y is a limit (so y starts with +limit)."""
    if y.sign() <= 0:
        return False
    lim, k = ord_split(y.segments[0].len)
    return k == 0


def _padding_cases(corpus: Corpus):
    ys = tuple(y for y in corpus.numbers if _limit_head(y))
    rng = corpus.rng("padding")
    for i, (x, y) in enumerate(_sample_pairs(rng, corpus.numbers, corpus.params.pairs, ys)):
        yield f"pair:{i:06d}", {"x": x, "y": y}


def _padding_check(inputs: Inputs, conv) -> Optional[str]:
    x, y = inputs["x"], inputs["y"]
    if not _limit_head(y):
        return f"hypothesis fails for y = {y.text()}"
    left = mo(concat(x, y))
    right = concat(_mo(x), mo(concat(from_ordinal(x.tau), y)))
    return _expect_eq("w^(x+y) against w^x + w^(tau_x + y)", left, right)


# -- EPS-FIXED ----------------------------------------------------------------

def oracle_iterate(step: Callable[[Number], Number], closed: Callable[[Number], Number],
                   u: Number, sigma: int, n: int) -> Tuple[List[Number], Optional[str]]:
    """Iterate a_0 = closed(u) + sigma, a_(k+1) = step(a_k) for k < n.

    Each a_k must be an initial segment of a_(k+1) and of closed(u + sigma).
    Returns the chain and None, or the chain so far and a failure detail.
    """
    s = num((sigma, 1))
    bound = closed(concat(u, s))
    chain = [concat(closed(u), s)]
    for k in range(n + 1):
        a = chain[-1]
        if not is_initial(a, bound):
            return chain, f"a_{k} = {a.text()} is not an initial segment of the bound {bound.text()}"
        if k == n:
            break
        nxt = step(a)
        if not is_initial(a, nxt):
            return chain, f"a_{k} is not an initial segment of a_{k + 1} = {nxt.text()}"
        chain.append(nxt)
    return chain, None


def _eps_cases(corpus: Corpus):
    for i, a in enumerate(_ordinal_sample()):
        yield f"ordinal:{i:04d}", {"kind": "ordinal", "alpha": a}
    for i, z in enumerate(corpus.numbers):
        yield f"fixed:{i:06d}", {"kind": "fixed", "z": z}
    for i, u in enumerate(corpus.heavy):
        for s in (1, -1):
            yield f"iterate:{i:06d}:{'+-'[s < 0]}", {"kind": "iterate", "u": u, "sigma": s, "n": 8}


def _eps_check(inputs: Inputs, conv) -> Optional[str]:
    kind = inputs["kind"]
    if kind == "ordinal":
        a = inputs["alpha"]
        return _expect_eq("eps of ordinal", eps(from_ordinal(a)), from_ordinal(ord_eps(a)))
    if kind == "fixed":
        e = eps(inputs["z"])
        return _expect_eq("mo(eps(z))", mo(e), e)
    return oracle_iterate(mo, eps, inputs["u"], inputs["sigma"], inputs["n"])[1]


# -- IOTA-KAPPA ---------------------------------------------------------------

def _iota_cases(corpus: Corpus):
    anchors = [
        ("anchor:kappa0", {"kind": "kappa", "x": ZERO_NUMBER, "want": num((1, "w"))}),
        ("anchor:kappa1", {"kind": "kappa", "x": num((1, 1)), "want": num((1, "eps(0)"))}),
        ("anchor:kappa-1", {"kind": "kappa", "x": num((-1, 1)), "want": num((1, "w"), (-1, "w^(4)"))}),
    ]
    return _map_suite_cases(corpus, anchors)


def _iota_check(inputs: Inputs, conv) -> Optional[str]:
    kind = inputs["kind"]
    if kind == "kappa":
        return _expect_eq("kappa", kappa(inputs["x"]), inputs["want"])
    if kind == "elem":
        return _embedding_prefixes(_iota, inputs["x"])
    return _embedding_pair(_iota, inputs["x"], inputs["y"])


# -- V-FIXED ------------------------------------------------------------------

V_RUNS = 32
_V_CACHE: Dict[Tuple[Ordinal, int], Optional[str]] = {}


def _v_fixed(p) -> Optional[str]:
    v = v_of(p)
    w = xi_va(p, v)
    got = expand(w, V_RUNS)[0][:V_RUNS]
    want = expand(v, V_RUNS)[0][:V_RUNS]
    if got != want:
        k = next(i for i, (g, h) in enumerate(zip(got, want)) if g != h)
        return f"run {k} of xi(V) is {got[k]}, of V is {want[k]}"
    d = _first(_expect_eq("length of xi(V)", w.len, v.len),
               _expect_eq("tau of xi(V)", w.tau, v.tau))
    if d:
        return d
    x = ZERO_NUMBER
    for n in range(1, 9):
        x = xi_va(p, x)
        if not is_initial(x, v):
            return f"xi^{n}(0) = {x.text()} is not an initial segment of V"
    return None


def _vfixed_cases(corpus: Corpus):
    for i, a in enumerate(corpus.numbers):
        yield f"a:{i:06d}", {"a": a}


def _vfixed_check(inputs: Inputs, conv) -> Optional[str]:
    a = inputs["a"]
    p = struct_params(a)
    d = _expect_eq("tau(V(a))", v_of(p).tau,
                   ord_eps(ord_flat(concat(a, num((1, 1))).tau)))
    if d:
        return d
    # V(a) depends on sigma only, so the run checks are shared
    key = (p.sigma, get_budget())
    if key not in _V_CACHE:
        _V_CACHE[key] = _v_fixed(p)
    return _V_CACHE[key]


# -- THFORMULA ----------------------------------------------------------------

def _th_cases(corpus: Corpus):
    for ai, a in enumerate(corpus.a_family):
        for zi, z in enumerate(corpus.heavy):
            yield f"fixed:{ai:02d}:{zi:06d}", {"kind": "fixed", "a": a, "z": z}
        # chains of nested tails are costly: iterate from the small t set
        for zi, z in enumerate(corpus.t_values):
            for s in (1, -1):
                yield (f"iterate:{ai:02d}:{zi:06d}:{'+-'[s < 0]}",
                       {"kind": "iterate", "a": a, "u": z, "sigma": s, "n": 8})
        rng = corpus.rng(f"th:{ai}")
        count = min(corpus.params.pairs, 20 * len(corpus.heavy))
        for i, (x, y) in enumerate(_sample_pairs(rng, corpus.heavy, count)):
            yield f"pair:{ai:02d}:{i:06d}", {"kind": "pair", "a": a, "x": x, "y": y}


def _th_check(inputs: Inputs, conv) -> Optional[str]:
    p = struct_params(inputs["a"])
    f = lambda z: xi_va_omega(p, z)
    kind = inputs["kind"]
    with bounded():
        if kind == "fixed":
            w = f(inputs["z"])
            if cmp(xi_va(p, w), w) != 0:
                return f"xi moves {w.text()}"
            return _first(_expect_eq("length", xi_va(p, w).len, w.len),
                          _embedding_prefixes(f, inputs["z"]))
        if kind == "iterate":
            return oracle_iterate(lambda x: xi_va(p, x), f, inputs["u"],
                                  inputs["sigma"], inputs["n"])[1]
        return _embedding_pair(f, inputs["x"], inputs["y"])


# -- LAMBDA-GRID --------------------------------------------------------------

def _grid_cases(corpus: Corpus):
    yield "anchor:0", {"kind": "anchor", "z": ZERO_NUMBER, "want": num((1, "w"))}
    yield "anchor:-1", {"kind": "anchor", "z": num((-1, 1)), "want": num((1, "w"), (-1, "w^(3)"))}
    for i, a in enumerate(corpus.numbers):
        for n in corpus.n_range:
            if n <= 0:
                yield f"grid:{i:06d}:{n:+d}", {"kind": "grid", "a": a, "n": n}


def _grid_check(inputs: Inputs, conv) -> Optional[str]:
    if inputs["kind"] == "anchor":
        return _expect_eq("lambda", la.la_lambda(inputs["z"], conv), inputs["want"])
    a, n = inputs["a"], inputs["n"]
    z = la.la_rebuild(la.Grid(a, n))
    pos = la.la_decompose(z)
    if not (isinstance(pos, la.Grid) and pos.n == n and pos.a.segments == a.segments):
        return f"{z.text()} decomposes to {pos}"
    want = mo(mo(concat(iota(a), la._runs((-1, Ordinal.of(-n))))))
    return _expect_eq("lambda", la.la_lambda(z, conv), want)


# -- LAMBDA-SHIFT and BOUNDARY --------------------------------------------------

def _positions(corpus: Corpus) -> Iterator[Tuple[str, la.Position]]:
    for ai, a in enumerate(corpus.a_family):
        for n in corpus.n_range:
            yield f"{ai:02d}:{n:+d}:grid", la.Grid(a, n)
            for ti, t in enumerate(corpus.t_values):
                yield f"{ai:02d}:{n:+d}:{ti:03d}", la.Interval(a, n, t)


def _shift_cases(corpus: Corpus):
    indices = []
    for key, pos in _positions(corpus):
        z = la.la_rebuild(pos)
        indices.append(z)
        yield f"mono:{key}", {"kind": "mono", "z": z}
        if isinstance(pos, la.Interval):
            if pos.n >= 0:
                yield f"h:{key}", {"kind": "h", "z": z}
            if pos.n <= 0:
                yield f"g:{key}", {"kind": "g", "z": z}
    rng = corpus.rng("shift")
    count = min(corpus.params.pairs, 4 * len(indices))
    for i, (x, y) in enumerate(_sample_pairs(rng, tuple(indices), count)):
        yield f"pair:{i:06d}", {"kind": "pair", "x": x, "y": y}


def _bounded_eq(what: str, got: Number, want: Number) -> Optional[str]:
    if cmp(got, want) == 0 and got.len == want.len:
        return None
    return f"{what}: got {got.text()}, expected {want.text()}"


_LAMBDA_CACHE: Dict[Tuple[la.Convention, Any], Number] = {}


def _lambda_memo(z: Number, conv: la.Convention) -> Number:
    key = (conv, z.segments)
    if key not in _LAMBDA_CACHE:
        _LAMBDA_CACHE[key] = la.la_lambda(z, conv)
    return _LAMBDA_CACHE[key]


def _shift_check(inputs: Inputs, conv: la.Convention) -> Optional[str]:
    lam = lambda z: _lambda_memo(z, conv)
    kind = inputs["kind"]
    with bounded():
        if kind == "pair":
            return _embedding_pair(lam, inputs["x"], inputs["y"])
        z = inputs["z"]
        if kind == "mono":
            return _embedding_prefixes(lam, z)
        pos = la.la_decompose(z)
        if not isinstance(pos, la.Interval):
            return f"{z.text()} is not in a unit interval"
        rho = la.la_rho(z, conv)
        try:
            if kind == "h":
                # log w^(w^rho_z) = w^(w^rho_(z-1)), i.e. h(rho_z) = mo(rho_(z-1))
                got = la.la_h_piece(pos.a, pos.n, rho)
                want = mo(la.la_rho(la.la_shift(z, -1), conv))
            else:
                # exp w^(w^(mo rho_z)) = w^(w^rho_(z+1))
                got = la.la_g_piece(pos.a, -pos.n, mo(rho), conv)
                want = la.la_rho(la.la_shift(z, 1), conv)
        except la.PatternMismatch as exc:
            return f"pattern mismatch: {exc}"
        return _bounded_eq(f"{kind} piece", got, want)


def _boundary_cases(corpus: Corpus):
    for key, pos in _positions(corpus):
        if isinstance(pos, la.Interval):
            yield f"interval:{key}", {"kind": "interval", "z": la.la_rebuild(pos)}
        elif pos.n < max(corpus.n_range):
            yield f"grid:{key}", {"kind": "grid", "a": pos.a, "n": pos.n}


def _boundary_check(inputs: Inputs, conv: la.Convention) -> Optional[str]:
    rho_grid = lambda a, n: la.la_rho(la.la_rebuild(la.Grid(a, n)), conv)
    with bounded():
        if inputs["kind"] == "grid":
            a, n = inputs["a"], inputs["n"]
            lo, hi = rho_grid(a, n), rho_grid(a, n + 1)
            if cmp(lo, hi) >= 0:
                return f"rho at grid n={n} is {lo.text()}, not below rho at n={n + 1}: {hi.text()}"
            return None
        z = inputs["z"]
        pos = la.la_decompose(z)
        # I(a, n) lies between the grid points w*a - (n+1) and w*a - n
        lo, hi = rho_grid(pos.a, -(pos.n + 1)), rho_grid(pos.a, -pos.n)
        r = la.la_rho(z, conv)
        if cmp(lo, r) >= 0:
            return f"rho_z = {r.text()} is not above the left grid value {lo.text()}"
        if cmp(r, hi) >= 0:
            return f"rho_z = {r.text()} is not below the right grid value {hi.text()}"
        return None


# -- ROUNDTRIP ----------------------------------------------------------------

def _roundtrip_cases(corpus: Corpus):
    for i, z in enumerate(corpus.numbers):
        yield f"elem:{i:06d}", {"kind": "elem", "z": z}
    for key, pos in _positions(corpus):
        if isinstance(pos, la.Interval) and key.endswith(":000"):
            yield f"tail:{key}", {"kind": "tail", "z": la.la_rebuild(pos)}


def _text_json_roundtrip(x: Number) -> Optional[str]:
    from .codec import number_from_json, number_to_json, validate_number_json
    text = x.text()
    back = parse_number(text)
    if back.segments != x.segments or back.text() != text:
        return f"text form {text} parses to {back.text()}"
    doc = number_to_json(x)
    try:
        validate_number_json(doc)
    except jsonschema.ValidationError as exc:
        return f"JSON form of {text} is invalid: {exc.message}"
    back = number_from_json(json.loads(json.dumps(doc)), validate=False)
    if back.segments != x.segments:
        return f"JSON form of {text} reads back as {back.text()}"
    return None


def _expr_roundtrip(text: str) -> Optional[str]:
    from .expr import format_expr, parse_expr
    printed = format_expr(parse_expr(text))
    return None if printed == text else f"expression {text!r} prints as {printed!r}"


def _roundtrip_check(inputs: Inputs, conv: la.Convention) -> Optional[str]:
    z = inputs["z"]
    if inputs["kind"] == "elem":
        pos = la.la_decompose(z)
        back = la.la_rebuild(pos)
        return _first(
            _expect_eq("rebuild(decompose(z))", back, z),
            _text_json_roundtrip(z),
            _expr_roundtrip(f"let x = {z.text()}; lambda(cat(x, neg(x), w^(2)+1))"),
        )
    # symbolic tails: V(a) with its fixed-point parametrisation, and mo images
    r = la.la_rho(z, conv)
    return _first(_text_json_roundtrip(r), _text_json_roundtrip(mo(mo(r))),
                  _text_json_roundtrip(neg(r)), _expr_roundtrip(f"mo({r.text()})"))


# -- suites, reports and replay -------------------------------------------------

SUITES: Dict[str, Suite] = {s.name: s for s in (
    Suite("ORD-ORACLE", _ord_cases, _ord_check),
    Suite("OMEGA-MAP", _omega_cases, _omega_check),
    Suite("PADDING", _padding_cases, _padding_check),
    Suite("EPS-FIXED", _eps_cases, _eps_check),
    Suite("IOTA-KAPPA", _iota_cases, _iota_check),
    Suite("V-FIXED", _vfixed_cases, _vfixed_check),
    Suite("THFORMULA", _th_cases, _th_check),
    Suite("LAMBDA-GRID", _grid_cases, _grid_check),
    Suite("LAMBDA-SHIFT", _shift_cases, _shift_check, uses_convention=True),
    Suite("BOUNDARY", _boundary_cases, _boundary_check, uses_convention=True),
    Suite("ROUNDTRIP", _roundtrip_cases, _roundtrip_check, uses_convention=True),
)}

VERDICTS = ("pass", "fail", "budget")


@dataclass(frozen=True)
class CaseResult:
    key: str
    verdict: str
    detail: Optional[str] = None
    inputs: Optional[Dict[str, Any]] = None   # serialised, kept for non-pass cases

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"key": self.key, "verdict": self.verdict}
        if self.verdict != "pass":
            out["detail"] = self.detail
            out["inputs"] = self.inputs
        return out


@dataclass
class AuditReport:
    suite: str
    convention: Optional[str]
    corpus: str
    budget: int
    cases: List[CaseResult] = field(default_factory=list)

    def counts(self) -> Dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for c in self.cases:
            out[c.verdict] += 1
        return out

    @property
    def exit_code(self) -> int:
        counts = self.counts()
        if counts["fail"]:
            return 1
        return 2 if counts["budget"] else 0

    def failures(self) -> List[CaseResult]:
        return [c for c in self.cases if c.verdict != "pass"]

    def to_json(self) -> Dict[str, Any]:
        counts = self.counts()
        return {
            "schema": "signseq-audit-report",
            "schema_version": REPORT_VERSION,
            "suite": self.suite,
            "convention": self.convention,
            "corpus": self.corpus,
            "budget": self.budget,
            "summary": dict(cases=len(self.cases), **counts),
            "cases": [c.to_json() for c in self.cases],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    def text(self, max_failures: int = 20) -> str:
        counts = self.counts()
        lines = [
            f"suite: {self.suite}",
            f"convention: {self.convention or '-'}",
            f"corpus: {self.corpus}",
            f"budget: {self.budget}",
            f"cases: {len(self.cases)}  pass: {counts['pass']}  "
            f"fail: {counts['fail']}  budget: {counts['budget']}",
        ]
        bad = self.failures()
        for c in bad[:max_failures]:
            lines.append(f"{c.verdict.upper()} {c.key}: {c.detail}")
            for name, value in sorted((c.inputs or {}).items()):
                shown = value if not isinstance(value, dict) else next(iter(value.values()))
                lines.append(f"    {name} = {shown}")
        if len(bad) > max_failures:
            lines.append(f"... {len(bad) - max_failures} more non-passing cases in the JSON report")
        return "\n".join(lines) + "\n"


REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "signseq/audit-report/v1",
    "type": "object",
    "required": ["schema", "schema_version", "suite", "convention", "corpus",
                 "budget", "summary", "cases"],
    "properties": {
        "schema": {"const": "signseq-audit-report"},
        "schema_version": {"const": REPORT_VERSION},
        "suite": {"enum": sorted(SUITES)},
        "convention": {"type": ["string", "null"]},
        "corpus": {"type": "string"},
        "budget": {"type": "integer", "minimum": 1},
        "summary": {
            "type": "object",
            "required": ["cases", *VERDICTS],
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "cases": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["key", "verdict"],
                "properties": {
                    "key": {"type": "string"},
                    "verdict": {"enum": list(VERDICTS)},
                    "detail": {"type": ["string", "null"]},
                    "inputs": {"type": ["object", "null"]},
                },
                "if": {"properties": {"verdict": {"enum": ["fail", "budget"]}}},
                "then": {"required": ["detail", "inputs"]},
            },
        },
    },
}


def run_case(suite: Suite, inputs: Inputs, conv: la.Convention) -> Tuple[str, Optional[str]]:
    """Verdict and detail of one case; module errors count as failures."""
    try:
        detail = suite.check(inputs, conv)
    except BudgetExceeded as exc:
        return "budget", str(exc)
    except (NumberError, OrdinalError) as exc:
        return "fail", f"{type(exc).__name__}: {exc}"
    return ("pass", None) if detail is None else ("fail", detail)


def run_suite(name: str, corpus: Corpus, conv: la.Convention = la.DEFAULT_CONVENTION,
              budget_runs: Optional[int] = None) -> AuditReport:
    """Run every case of a suite; cases are independent and sorted by key."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    suite = SUITES[name]
    budget_runs = get_budget() if budget_runs is None else budget_runs
    report = AuditReport(name, conv.name if suite.uses_convention else None,
                         corpus.params.text(), budget_runs)
    if corpus.is_empty:
        return report
    results = []
    with budget(budget_runs):
        for key, inputs in suite.cases(corpus):
            verdict, detail = run_case(suite, inputs, conv)
            enc = None if verdict == "pass" else {k: _encode(v) for k, v in inputs.items()}
            results.append(CaseResult(key, verdict, detail, enc))
    report.cases = sorted(results, key=lambda c: c.key)
    return report


def load_report(doc: Dict[str, Any]) -> AuditReport:
    jsonschema.validate(doc, REPORT_SCHEMA)
    report = AuditReport(doc["suite"], doc["convention"], doc["corpus"], doc["budget"])
    report.cases = [CaseResult(c["key"], c["verdict"], c.get("detail"), c.get("inputs"))
                    for c in doc["cases"]]
    return report


def replay(doc: Dict[str, Any]) -> List[Tuple[str, str, str, Optional[str]]]:
    """Re-run every non-passing case of a report.

    Returns (key, recorded verdict, replayed verdict, replayed detail) rows.
    """
    report = load_report(doc)
    suite = SUITES[report.suite]
    conv = la.convention(report.convention) if report.convention else la.DEFAULT_CONVENTION
    rows = []
    with budget(report.budget):
        for case in report.failures():
            inputs = {k: _decode(v) for k, v in case.inputs.items()}
            verdict, detail = run_case(suite, inputs, conv)
            rows.append((case.key, case.verdict, verdict, detail))
    return rows
