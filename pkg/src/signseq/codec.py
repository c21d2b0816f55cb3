"""Text and JSON forms of numbers.

Text: ``[+w, -w^(3)]``; the zero number is ``[]``.  Tails appear as segments
``V(a=[...])`` (or ``V(sigma=ORD)``), ``Mo(TAIL, tau0=ORD)`` and
``Drop(TAIL, at=ORD)`` (the tail after its first ORD signs), optionally
negated with a leading ``-`` and carrying ``lead=ORD`` as a last argument.
"""

from __future__ import annotations

from typing import Any, Dict, Optional, Tuple

import jsonschema

from .maps import struct_params
from .number import (
    DropSource, MoSource, Number, NumberError, Run, TailSeg, VSource, _build,
    _with_lead, drop_source, mo_source, v_source,
)
from .ordinal import ZERO, Ordinal, ord_cmp, OrdinalParseError, _OrdParser, parse_ordinal

__all__ = [
    "ParseError", "read_ordinal", "read_number", "parse_number",
    "number_to_json", "number_from_json", "NUMBER_SCHEMA", "validate_number_json",
    "line_col",
]

SCHEMA_VERSION = 1


def line_col(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class ParseError(SyntaxError):
    """Positioned syntax error (1-based line and column)."""

    def __init__(self, message: str, text: str, pos: int):
        line, col = line_col(text, pos)
        self.pos = pos
        super().__init__(f"{message} at line {line}, column {col}")
        self.lineno = line
        self.offset = col
        self.text = text

    def __str__(self):
        return self.msg


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _expect(text: str, pos: int, s: str) -> int:
    pos = _skip_ws(text, pos)
    if not text.startswith(s, pos):
        raise ParseError(f"expected {s!r}", text, pos)
    return pos + len(s)


def read_ordinal(text: str, pos: int) -> Tuple[Ordinal, int]:
    """Read a strict ordinal literal starting at ``pos``."""
    p = _OrdParser(text, pos)
    try:
        value = p.sum()
    except OrdinalParseError as exc:
        raise ParseError(f"bad ordinal: {exc.args[0].split(' at column')[0]}", text, exc.pos) from None
    if p.problem is not None:
        msg, at = p.problem
        raise ParseError(f"non-normal ordinal ({msg}); normal form is {value}", text, at)
    return value, p.pos


def _read_tail(text: str, pos: int) -> Tuple[TailSeg, int]:
    pos = _skip_ws(text, pos)
    negated = False
    if text.startswith("-", pos):
        negated = True
        pos = _skip_ws(text, pos + 1)
    start = pos
    if text.startswith("V(", pos):
        pos = _skip_ws(text, pos + 2)
        if text.startswith("sigma", pos):
            pos = _expect(text, pos + 5, "=")
            sigma, pos = read_ordinal(text, pos)
            src = v_source(sigma)
        else:
            pos = _expect(text, pos, "a")
            pos = _expect(text, pos, "=")
            a, pos = read_number(text, pos)
            try:
                src = v_source(struct_params(a).sigma, a)
            except NumberError as exc:
                raise ParseError(str(exc), text, start) from None
    elif text.startswith("Mo(", pos):
        inner, pos = _read_tail(text, pos + 3)
        pos = _expect(text, pos, ",")
        pos = _expect(text, pos, "tau0")
        pos = _expect(text, pos, "=")
        tau0, pos = read_ordinal(text, pos)
        src = mo_source(inner, tau0)
    elif text.startswith("Drop(", pos):
        inner, pos = _read_tail(text, pos + 5)
        pos = _expect(text, pos, ",")
        pos = _expect(text, pos, "at")
        pos = _expect(text, pos, "=")
        at, pos = read_ordinal(text, pos)
        if at.is_zero() or ord_cmp(at, inner.len) >= 0:
            raise ParseError(f"cut position {at} is not inside the tail", text, start)
        src = drop_source(inner, at)
    else:
        raise ParseError("expected a run or a tail", text, pos)
    lead = ZERO
    pos = _skip_ws(text, pos)
    if text.startswith(",", pos):
        pos = _expect(text, pos + 1, "lead")
        pos = _expect(text, pos, "=")
        lead, pos = read_ordinal(text, pos)
    pos = _expect(text, pos, ")")
    return _with_lead(TailSeg(src, ZERO, negated), lead), pos


def read_number(text: str, pos: int) -> Tuple[Number, int]:
    """Read a run literal ``[...]`` starting at ``pos``."""
    pos = _expect(text, pos, "[")
    segs = []
    pos = _skip_ws(text, pos)
    if text.startswith("]", pos):
        return Number(()), pos + 1
    while True:
        pos = _skip_ws(text, pos)
        at = pos
        if text.startswith("+", pos):
            length, pos = read_ordinal(text, pos + 1)
            segs.append((Run(1, length), at))
        elif text.startswith("-", pos) and not text.startswith(("V(", "Mo("), _skip_ws(text, pos + 1)):
            length, pos = read_ordinal(text, pos + 1)
            segs.append((Run(-1, length), at))
        else:
            tail, pos = _read_tail(text, pos)
            segs.append((tail, at))
        pos = _skip_ws(text, pos)
        if text.startswith(",", pos):
            pos += 1
            continue
        pos = _expect(text, pos, "]")
        break
    for seg, at in segs:
        if isinstance(seg, Run) and seg.len.is_zero():
            raise ParseError("run of length 0", text, at)
    try:
        return _build([s for s, _ in segs]), pos
    except NumberError as exc:
        raise ParseError(str(exc), text, segs[-1][1]) from None


def parse_number(text: str) -> Number:
    x, pos = read_number(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ParseError("unexpected trailing input", text, pos)
    return x


# -- JSON -----------------------------------------------------------------------

def _tail_json(seg: TailSeg) -> Dict[str, Any]:
    src = seg.source
    if isinstance(src, VSource):
        out: Dict[str, Any] = {"kind": "V", "a": None if src.a is None else src.a.text(),
                               "sigma": str(src.sigma)}
    elif isinstance(src, MoSource):
        out = {"kind": "MoImage", "inner": _tail_json(src.inner), "tau0": str(src.start)}
    elif isinstance(src, DropSource):
        out = {"kind": "Drop", "inner": _tail_json(src.seg), "at": str(src.at)}
    else:
        raise NumberError(f"cannot serialise tail {src.key!r}")
    out["lead"] = str(seg.lead)
    out["neg"] = seg.neg
    return out


def number_to_json(x: Number) -> Dict[str, Any]:
    segs = []
    for seg in x.segments:
        if isinstance(seg, Run):
            segs.append({"run": {"sign": seg.sign, "len": str(seg.len)}})
        else:
            segs.append({"tail": _tail_json(seg)})
    return {"segments": segs, "len": str(x.len), "tau": str(x.tau)}


def _tail_from_json(d: Dict[str, Any]) -> TailSeg:
    if d["kind"] == "V":
        if d.get("a") is not None:
            a = parse_number(d["a"])
            src = v_source(struct_params(a).sigma, a)
        else:
            src = v_source(parse_ordinal(d["sigma"]))
    elif d["kind"] == "Drop":
        src = drop_source(_tail_from_json(d["inner"]), parse_ordinal(d["at"]))
    else:
        src = mo_source(_tail_from_json(d["inner"]), parse_ordinal(d["tau0"]))
    return _with_lead(TailSeg(src, ZERO, bool(d.get("neg", False))),
                      parse_ordinal(d.get("lead", "0")))


def number_from_json(d: Dict[str, Any], validate: bool = True) -> Number:
    if validate:
        validate_number_json(d)
    segs = []
    for item in d["segments"]:
        if "run" in item:
            segs.append(Run(item["run"]["sign"], parse_ordinal(item["run"]["len"])))
        else:
            segs.append(_tail_from_json(item["tail"]))
    return _build(segs)


_ORD = {"type": "string", "minLength": 1}

NUMBER_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "signseq/number/v1",
    "type": "object",
    "required": ["segments", "len", "tau"],
    "additionalProperties": False,
    "properties": {
        "segments": {
            "type": "array",
            "items": {
                "type": "object",
                "minProperties": 1,
                "maxProperties": 1,
                "additionalProperties": False,
                "properties": {
                    "run": {
                        "type": "object",
                        "required": ["sign", "len"],
                        "additionalProperties": False,
                        "properties": {"sign": {"enum": [1, -1]}, "len": _ORD},
                    },
                    "tail": {"$ref": "#/$defs/tail"},
                },
            },
        },
        "len": _ORD,
        "tau": _ORD,
    },
    "$defs": {
        "tail": {
            "type": "object",
            "required": ["kind", "lead", "neg"],
            "properties": {
                "kind": {"enum": ["V", "MoImage", "Drop"]},
                "a": {"type": ["string", "null"]},
                "sigma": _ORD,
                "inner": {"$ref": "#/$defs/tail"},
                "tau0": _ORD,
                "at": _ORD,
                "lead": _ORD,
                "neg": {"type": "boolean"},
            },
            "allOf": [
                {"if": {"properties": {"kind": {"const": "V"}}},
                 "then": {"required": ["sigma"]}},
                {"if": {"properties": {"kind": {"const": "MoImage"}}},
                 "then": {"required": ["inner", "tau0"]}},
                {"if": {"properties": {"kind": {"const": "Drop"}}},
                 "then": {"required": ["inner", "at"]}},
            ],
        }
    },
}


_VALIDATOR = jsonschema.Draft202012Validator(NUMBER_SCHEMA)


def validate_number_json(d: Any) -> None:
    """Raise jsonschema.ValidationError unless d matches NUMBER_SCHEMA."""
    _VALIDATOR.validate(d)
