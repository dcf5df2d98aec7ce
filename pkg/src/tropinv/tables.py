"""Half-space tables for degrees 3, 4 and 5.

Each row names a tree type, the Newton half-spaces its invariants satisfy
and closed forms for twice the internal edge lengths as linear forms in the
valuations ``b_k`` of the coefficients of ``F_{K_2}``.  A row also carries
a shape template: a nested tree with named internal nodes and, where one
shape hosts several filtration types, the height relations of each.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import InputError
from .valued_field import INF, TropVal

__all__ = ["LinearForm", "HalfSpace", "Shape", "Row", "TABLES", "SHAPES", "rows_for"]


@dataclass(frozen=True)
class LinearForm:
    """``sum coeffs[k] * b_k`` over the ``F_{K_2}`` valuations."""

    coeffs: tuple[tuple[int, Fraction], ...]
    text: str

    @classmethod
    def parse(cls, text: str) -> "LinearForm":
        """Parse ``"(2b3 - 3b2)/2"``, ``"b10 - 2b9 + b8"`` and the like."""
        s = text.replace(" ", "").replace("−", "-")
        den = Fraction(1)
        m = re.fullmatch(r"\((.*)\)/(\d+)", s)
        if m:
            s, den = m.group(1), Fraction(int(m.group(2)))
        coeffs: dict[int, Fraction] = {}
        pos = 0
        for m in re.finditer(r"([+-]?)(\d*)b(\d+)", s):
            if m.start() != pos:
                raise InputError(f"cannot parse linear form {text!r}")
            pos = m.end()
            c = Fraction(int(m.group(2)) if m.group(2) else 1)
            if m.group(1) == "-":
                c = -c
            k = int(m.group(3))
            coeffs[k] = coeffs.get(k, Fraction(0)) + c / den
        if pos != len(s) or not coeffs:
            raise InputError(f"cannot parse linear form {text!r}")
        return cls(tuple(sorted((k, c) for k, c in coeffs.items() if c)), text)

    def __call__(self, b) -> TropVal:
        total = Fraction(0)
        for k, c in self.coeffs:
            if b[k] is INF:
                return INF
            total += c * b[k]
        return total

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class HalfSpace:
    """``I(P_{i,s}, P_{j,s})`` for the invariants of ``K_s``."""

    s: int
    i: int
    j: int

    def __str__(self) -> str:
        if self.s == 2:
            return f"I(P{self.i},P{self.j})"
        return f"I(P{self.i},{self.s},P{self.j},{self.s})"


@dataclass(frozen=True)
class Shape:
    """A nested template ``(name, [children])`` with integer leaves.

    ``edges`` names the internal edges in the order the length formulas use
    them, as ``(parent, child)`` node names.  ``relations`` maps a sub-label
    to a predicate on node heights when one shape hosts several filtration
    types.
    """

    template: tuple
    edges: tuple[tuple[str, str], ...] = ()
    relations: Mapping[str, Callable[[dict], bool]] = field(default_factory=dict)

    def nodes(self) -> list[str]:
        out: list[str] = []

        def walk(n) -> None:
            if isinstance(n, int):
                return
            out.append(n[0])
            for c in n[1]:
                walk(c)

        walk(self.template)
        return out

    def parents(self) -> dict[str, str | None]:
        out: dict[str, str | None] = {}

        def walk(n, parent: str | None) -> None:
            if isinstance(n, int):
                return
            out[n[0]] = parent
            for c in n[1]:
                walk(c, n[0])

        walk(self.template, None)
        return out

    def instantiate(self, heights: Mapping[str, Fraction]):
        """The nested tree with the given node heights."""

        def walk(n):
            if isinstance(n, int):
                return n
            return (heights[n[0]], [walk(c) for c in n[1]])

        return walk(self.template)

    def valid(self, heights: Mapping[str, Fraction], sub: str | None = None) -> bool:
        for node, parent in self.parents().items():
            if parent is not None and not heights[node] > heights[parent]:
                return False
        if sub is not None and sub in self.relations:
            return self.relations[sub](heights)
        return True


@dataclass(frozen=True)
class Row:
    """One tree type.

    ``lengths[k]`` is twice the length of the ``k``-th edge of the shape.
    ``printed`` keeps the published closed forms where they differ; some of
    those measure the gap between consecutive branch heights rather than
    an edge.  ``None`` means the published forms agree with ``lengths``.
    """

    label: str
    halfspaces: tuple[HalfSpace, ...]
    lengths: tuple[LinearForm, ...]
    shape: str
    subs: tuple[str | None, ...] = (None,)
    printed: tuple[str, ...] | None = None

    @property
    def published(self) -> tuple[str, ...]:
        return tuple(f.text for f in self.lengths) if self.printed is None else self.printed

    def to_json(self) -> dict:
        edges = SHAPES[self.shape].edges
        return {
            "type": self.label,
            "halfspaces": [{"graph": f"K{h.s}", "i": h.i, "j": h.j} for h in self.halfspaces],
            "lengths": [
                {"edge": f"e{k + 1}", "between": list(edges[k]), "formula": f"2l(e{k + 1}) = {f.text}",
                 "coefficients": {f"b{i}": str(c) for i, c in f.coeffs}}
                for k, f in enumerate(self.lengths)
            ],
            "published": list(self.published),
        }


def _hs(*pairs: tuple[int, int], s: int = 2) -> tuple[HalfSpace, ...]:
    return tuple(HalfSpace(s, i, j) for i, j in pairs)


def _lf(*texts: str) -> tuple[LinearForm, ...]:
    return tuple(LinearForm.parse(t) for t in texts)


# shape templates; "R" is the node nearest the infinite leaf
SHAPES: dict[str, Shape] = {
    # three leaves
    "3:I": Shape(("R", [1, 2, 3])),
    "3:II": Shape(("R", [1, ("N", [2, 3])]), (("R", "N"),)),
    # four leaves
    "4:I": Shape(("R", [1, 2, 3, 4])),
    "4:II.1": Shape(("R", [1, ("N", [2, 3, 4])]), (("R", "N"),)),
    "4:II.2": Shape(("R", [1, 2, ("N", [3, 4])]), (("R", "N"),)),
    "4:III.1": Shape(("R", [1, ("N", [2, ("M", [3, 4])])]), (("R", "N"), ("N", "M"))),
    "4:III.2": Shape(("R", [("A", [1, 2]), ("B", [3, 4])]), (("R", "A"), ("R", "B")),
                     {"eq": lambda h: h["A"] == h["B"], "lt": lambda h: h["A"] < h["B"]}),
    # five leaves
    "5:I": Shape(("R", [1, 2, 3, 4, 5])),
    "5:II": Shape(("R", [1, 2, ("N", [3, 4, 5])]), (("R", "N"),)),
    "5:III.1": Shape(("R", [1, 2, 3, ("N", [4, 5])]), (("R", "N"),)),
    "5:III.2": Shape(("R", [1, ("N", [2, 3, 4, 5])]), (("R", "N"),)),
    "5:IV.1": Shape(("R", [1, 2, ("N", [3, ("M", [4, 5])])]), (("R", "N"), ("N", "M"))),
    "5:IV.2": Shape(("R", [("P", [1, 2]), ("T", [3, 4, 5])]), (("R", "T"), ("R", "P")),
                    {"1": lambda h: h["P"] == h["T"], "2": lambda h: h["P"] < h["T"],
                     "3": lambda h: h["P"] > h["T"]}),
    "5:IV.3": Shape(("R", [1, ("N", [2, ("M", [3, 4, 5])])]), (("R", "N"), ("N", "M"))),
    "5:V.1": Shape(("R", [1, ("N", [2, 3, ("M", [4, 5])])]), (("R", "N"), ("N", "M"))),
    "5:V.2": Shape(("R", [1, ("A", [2, 3]), ("B", [4, 5])]), (("R", "A"), ("R", "B")),
                   {"eq": lambda h: h["A"] == h["B"], "lt": lambda h: h["A"] < h["B"]}),
    "5:VI.1": Shape(("R", [1, ("N", [2, ("M", [3, ("L", [4, 5])])])]),
                    (("R", "N"), ("N", "M"), ("M", "L"))),
    "5:VI.2": Shape(("R", [("A", [1, 2]), ("C", [3, ("D", [4, 5])])]),
                    (("R", "A"), ("R", "C"), ("C", "D")),
                    {"1": lambda h: h["A"] < h["C"], "2": lambda h: h["A"] == h["C"],
                     "3": lambda h: h["C"] < h["A"] < h["D"], "4": lambda h: h["A"] == h["D"],
                     "5": lambda h: h["A"] > h["D"]}),
    "5:VII": Shape(("R", [1, ("O", [("A", [2, 3]), ("B", [4, 5])])]),
                   (("R", "O"), ("O", "A"), ("O", "B")),
                   {"eq": lambda h: h["A"] == h["B"], "lt": lambda h: h["A"] < h["B"]}),
}


TABLES: dict[int, tuple[Row, ...]] = {
    3: (
        Row("I", _hs((0, 3)), (), "3:I"),
        Row("II", _hs((1, 3)), _lf("(2b3 - 3b2)/2"), "3:II"),
    ),
    4: (
        Row("I", _hs((0, 6)), (), "4:I"),
        Row("II.1", _hs((3, 6), (0, 3)), _lf("(b6 - 2b3)/3"), "4:II.1"),
        Row("II.2", _hs((1, 6)), _lf("(5b6 - 6b5)/5"), "4:II.2"),
        Row("III.1", _hs((3, 6), (1, 3)), _lf("(3b5 - 5b3)/6", "(2b6 - 3b5 + b3)/2"), "4:III.1"),
        Row("III.2", _hs((2, 6)), _lf("(4b5 - 5b4)/4", "(4b6 - 4b5 - b4)/4"), "4:III.2", ("eq", "lt")),
    ),
    5: (
        Row("I", _hs((0, 10)), (), "5:I"),
        Row("II", _hs((3, 10), (0, 3)), _lf("(7b10 - 10b7)/21"), "5:II"),
        # no printed lengths for III.1 and V.2; these are derived
        Row("III.1", _hs((1, 10)), _lf("(9b10 - 10b9)/9"), "5:III.1", printed=()),
        Row("III.2", _hs((6, 10), (0, 6)), _lf("(2b10 - 5b4)/12"), "5:III.2"),
        Row("IV.1", _hs((3, 10), (1, 3)), _lf("(7b9 - 9b7)/14", "(2b10 - 3b9 + b7)/2"), "5:IV.1"),
        Row("IV.2.1", _hs((4, 10), (0, 4)), _lf("(3b10 - 5b6)/12", "(3b10 - 5b6)/12"), "5:IV.2", ("1",)),
        Row("IV.2.2", _hs((4, 10), (0, 3), (3, 4)), _lf("(2b10 - 2b7 - b6)/6", "(6b7 - 7b6)/6"),
            "5:IV.2", ("2",), printed=("(b10 - 4b7 + 3b6)/3", "(6b7 - 7b6)/6")),
        Row("IV.2.3", _hs((4, 10), (1, 4)) + _hs((4, 10), s=3), _lf("(2b9 - 3b6)/6", "(6b10 - 6b9 - b6)/6"),
            "5:IV.2", ("3",), printed=("(2b9 - 3b6)/6", "(3b10 - 4b9 + b6)/3")),
        Row("IV.3", _hs((6, 10), (0, 3), (3, 6)), _lf("(4b7 - 7b4)/12", "(b10 - 2b7 + b4)/3"), "5:IV.3",
            printed=("(b10 - 2b7 + b4)/3", "(4b7 - 7b4)/12")),
        Row("V.1", _hs((6, 10), (1, 6)), _lf("(4b9 - 9b4)/20", "(5b10 - 6b9 + b4)/5"), "5:V.1"),
        Row("V.2", _hs((2, 10)), _lf("(8b9 - 9b8)/8", "(8b10 - 8b9 - b8)/8"), "5:V.2", ("eq", "lt"),
            printed=()),
        Row("VI.1", _hs((6, 10), (3, 6), (1, 3)),
            _lf("(4b7 - 7b4)/12", "(3b9 - 5b7 + 2b4)/6", "(2b10 - 3b9 + b7)/2"), "5:VI.1"),
        Row("VI.2.1", _hs((4, 10), (3, 4), (1, 3)),
            _lf("(6b7 - 7b6)/6", "(3b9 - 3b7 - b6)/6", "(2b10 - 3b9 + b7)/2"), "5:VI.2", ("1",),
            printed=("(6b7 - 7b6)/6", "(b9 - 3b7 + 2b6)/2", "(2b10 - 3b9 + b7)/2")),
        Row("VI.2.2", _hs((4, 10), (1, 4)) + _hs((3, 10), s=3),
            _lf("(2b9 - 3b6)/6", "(2b9 - 3b6)/6", "(3b10 - 4b9 + b6)/3"), "5:VI.2", ("2",)),
        Row("VI.2.3", _hs((4, 10), (2, 4), (1, 2)) + _hs((6, 10), (3, 6), s=3),
            _lf("(6b9 - 6b8 - b6)/6", "(3b8 - 4b6)/6", "(2b10 - 2b9 - b8 + b6)/2"), "5:VI.2", ("3",),
            printed=("(2b9 - 3b8 + b6)/2", "(3b8 - 4b6)/6", "b10 - 2b9 + b8")),
        Row("VI.2.4", _hs((4, 10), (2, 4), (0, 2)),
            _lf("(3b10 - 3b8 - b6)/6", "(3b8 - 4b6)/6", "(b10 - 2b8 + b6)/2"), "5:VI.2", ("4",),
            printed=("(b10 - 2b8 + b6)/2", "(3b8 - 4b6)/6", "(b10 - 2b8 + b6)/2")),
        Row("VI.2.5", _hs((4, 10), (2, 4), (1, 2)) + _hs((6, 10), (4, 6), s=3),
            _lf("(6b10 - 6b9 - b6)/6", "(3b8 - 4b6)/6", "(2b9 - 3b8 + b6)/2"), "5:VI.2", ("5",),
            printed=("b10 - 2b9 + b8", "(3b8 - 4b6)/6", "(2b9 - 3b8 + b6)/2")),
        Row("VII", _hs((6, 10), (2, 6)), _lf("(b8 - 2b4)/4", "(4b9 - 5b8 + b4)/4", "(4b10 - 4b9 - b8 + b4)/4"),
            "5:VII", ("eq", "lt"), printed=("(b8 - 2b4)/4", "(4b9 - 4b8 - b4)/4", "(4b10 - 4b9 - b4)/4")),
    ),
}


def rows_for(d: int) -> tuple[Row, ...]:
    if d not in TABLES:
        raise InputError(f"tables exist for d in {sorted(TABLES)}, got {d}")
    return TABLES[d]
