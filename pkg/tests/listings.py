"""Parser for the coefficient listings transcribed verbatim into ``tests/data``."""

from __future__ import annotations

import re
from pathlib import Path

from tropinv.multipoly import MultiPoly

DATA = Path(__file__).parent / "data"

_NAME = re.compile(r"c_\{(\d+)(?:,\d)?\}:?=")
_TERM = re.compile(r"([+-]?)(\d*)((?:a_\{\d\}(?:\^\{?\d+\}?)?)+|(?=[+-]|$))")
_FACTOR = re.compile(r"a_\{(\d)\}(?:\^\{?(\d+)\}?)?")


def _clean(text: str) -> str:
    text = re.sub(r"\\(begin|end)\{[a-z*]+\}", "", text)
    for junk in ("\\\\", "&", "{}", "\n", " ", "\t"):
        text = text.replace(junk, "")
    return text


def parse_body(body: str, nvars: int) -> MultiPoly:
    body = body.rstrip(",.")
    terms: dict[tuple[int, ...], int] = {}
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse listing near {body[pos:pos + 30]!r}")
        sign, coef, factors = m.groups()
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        e = [0] * nvars
        for var, power in _FACTOR.findall(factors):
            e[int(var) - 1] += int(power) if power else 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
        pos = m.end()
    return MultiPoly(nvars, terms)


def load_listing(name: str, nvars: int) -> dict[int, MultiPoly]:
    """Map coefficient index ``k`` (coefficient of ``x^(r-k)``) to its polynomial."""
    text = _clean((DATA / name).read_text())
    names = list(_NAME.finditer(text))
    out = {}
    for m, nxt in zip(names, names[1:] + [None]):
        body = text[m.end(): nxt.start() if nxt else len(text)]
        out[int(m.group(1))] = parse_body(body, nvars)
    return out
