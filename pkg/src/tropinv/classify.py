"""Recover the tree of a polynomial from its tropical invariants.

Two routes are provided.  :func:`classify_table` looks the invariants of
``F_{K_2}`` (and of ``F_{K_3}`` for ``d = 5``) up in the hard-coded
half-space tables.  :func:`classify_general` enumerates every filtration
type of the given degree, keeps those whose pair heights reproduce the
``F_{K_2}`` Newton polygon, and then walks up the branch heights testing
the minimizing value of the weighted graphs attached to each candidate.

Neither route looks at the roots: the input is the coefficient list
``a = [a_1, ..., a_d]`` with ``f = x^d - a_1 x^(d-1) + a_2 x^(d-2) - ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable, Sequence

from . import cache
from .errors import CapabilityError, InconsistencyError, InputError, NotSeparableError
from .newton import NewtonInput, NewtonPolygon, halfspace_contains, lower_hull, polygon_from_root_valuations
from .sympoly import EdgeWeightedGraph, evaluate_tropical_invariants, orbit
from .tables import Row, SHAPES, rows_for
from .tree import (
    FiltrationType,
    MarkedTree,
    admissible_heights,
    branch_heights,
    enumerate_filtration_types,
    filtration_type,
    weight_construction,
)
from .valued_field import INF, FieldElement, TropVal, common_model, format_trop

__all__ = [
    "JTrop",
    "Edge",
    "ClassificationResult",
    "j_trop",
    "tropical_invariants",
    "predicted_valuations",
    "classify_table",
    "classify_general",
    "table_label",
    "GENERAL_MAX_D",
]

GENERAL_MAX_D = 6

B = list[TropVal]


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class JTrop:
    """Valuations of ``c_2``, ``c_3`` of ``F_{K_2}`` for a cubic and the resulting type."""

    val_c2: TropVal
    val_c3: TropVal
    verdict: str
    length2: Fraction | None

    @property
    def valuation(self) -> TropVal:
        """``val(c_2^3 / c_3^2) = 3 b_2 - 2 b_3``."""
        return INF if self.val_c2 is INF else 3 * self.val_c2 - 2 * self.val_c3


@dataclass(frozen=True)
class Edge:
    """Internal edge between nodes at heights ``lower < upper``.

    ``leaves`` is the number of leaves beyond the edge.  ``formula`` is the
    table expression for ``2 * length`` when one was used.
    """

    lower: Fraction
    upper: Fraction
    leaves: int
    formula: str | None = None

    @property
    def length(self) -> Fraction:
        return self.upper - self.lower

    def to_json(self) -> dict:
        out = {"from": format_trop(self.lower), "to": format_trop(self.upper),
               "length": format_trop(self.length), "leaves": self.leaves}
        if self.formula is not None:
            out["formula"] = f"2l = {self.formula}"
        return out


@dataclass
class ClassificationResult:
    label: str
    filtration: FiltrationType
    heights: list[Fraction]
    edges: list[Edge]
    tree: MarkedTree
    invariants: dict[str, B]
    method: str
    variant: str | None = None
    steps: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if filtration_type(self.tree) != self.filtration:
            raise InconsistencyError("reconstructed tree does not have the reported filtration type")

    def to_json(self) -> dict:
        out = {
            "type": self.label,
            "variant": self.variant,
            "method": self.method,
            "filtration": str(self.filtration),
            "branch_heights": [format_trop(h) for h in self.heights],
            "edges": [e.to_json() for e in self.edges],
            "tree": {"nested": _nested_json(self.tree.nested()), **self.tree.to_json()},
            "invariants": {k: [format_trop(x) for x in v] for k, v in sorted(self.invariants.items())},
        }
        if self.steps:
            out["steps"] = self.steps
        return out


def _nested_json(n):
    if isinstance(n, int):
        return n
    return {"height": format_trop(n[0]), "children": [_nested_json(c) for c in n[1]]}


# ---------------------------------------------------------------------------
# invariants


def _check_coefficients(a: Sequence[FieldElement], d: int | None = None) -> int:
    if not a:
        raise InputError("empty coefficient list")
    common_model(a)
    if d is not None and len(a) != d:
        raise InputError(f"expected {d} coefficients, got {len(a)}")
    return len(a)


def tropical_invariants(a: Sequence[FieldElement], graph: EdgeWeightedGraph,
                        cache_dir: Path | str | None = None) -> B:
    """``b_k = val(c_k(a))`` for the generating polynomial of ``graph``."""
    F = cache.get(graph, cache_dir)
    b = evaluate_tropical_invariants(F, a)
    if b[-1] is INF:
        raise NotSeparableError("the constant coefficient vanishes: f has a repeated root")
    return b


def j_trop(a: Sequence[FieldElement], cache_dir: Path | str | None = None) -> JTrop:
    """Type of a cubic from ``j_trop = c_2^3 / c_3^2``: II iff ``3 b_2 < 2 b_3``."""
    _check_coefficients(a, 3)
    b = tropical_invariants(a, EdgeWeightedGraph.complete(3, 2), cache_dir)
    b2, b3 = b[2], b[3]
    if b2 is not INF and 3 * b2 < 2 * b3:
        return JTrop(b2, b3, "II", (2 * b3 - 3 * b2) / 2)
    return JTrop(b2, b3, "I", None)


def predicted_valuations(t: MarkedTree, graph: EdgeWeightedGraph) -> list[Fraction]:
    """Root valuations of ``F_G`` for a polynomial with tree ``t``: one per orbit element."""
    if graph.d != t.d:
        raise InputError("graph and tree have different numbers of vertices")
    return sorted(sum((2 * w * t.dist(i, j) for (i, j), w in h.weights), Fraction(0)) for h in orbit(graph))


def _complete_valuations(t: MarkedTree, s: int) -> list[Fraction]:
    # faster than the orbit route for complete graphs
    return sorted(sum((2 * t.dist(i, j) for i, j in combinations(S, 2)), Fraction(0))
                  for S in combinations(range(1, t.d + 1), s))


# ---------------------------------------------------------------------------
# table route


def _matching_rows(rows: Sequence[Row], b2: B, b3: Callable[[], B]) -> list[Row]:
    n2 = NewtonInput(b2)
    out = []
    for row in rows:
        ok = True
        for h in row.halfspaces:
            inp = n2 if h.s == 2 else NewtonInput(b3())
            if not halfspace_contains(h.i, h.j, inp):
                ok = False
                break
        if ok:
            out.append(row)
    return out


def _edges_of(t: MarkedTree) -> list[Edge]:
    out: list[Edge] = []

    def walk(n, parent: Fraction | None) -> int:
        if isinstance(n, int):
            return 1
        count = sum(walk(c, n[0]) for c in n[1])
        if parent is not None:
            out.append(Edge(parent, n[0], count))
        return count

    walk(t.nested(), None)
    return sorted(out, key=lambda e: (e.lower, e.upper, e.leaves))


def _reconstruct(row: Row, d: int, b2: B) -> tuple[MarkedTree, str | None, list[Edge]]:
    """Node heights from the root height and the row's length forms."""
    poly = lower_hull(NewtonInput(b2))
    shape = SHAPES[row.shape]
    heights = {"R": poly.root_valuations()[0] / 2}
    edges: list[Edge] = []
    pending = list(zip(shape.edges, row.lengths))
    while pending:
        rest = []
        for (p, c), form in pending:
            if p not in heights:
                rest.append(((p, c), form))
                continue
            two_l = form(b2)
            if two_l is INF or two_l <= 0:
                raise InconsistencyError(f"row {row.label}: length {form.text} is not positive")
            heights[c] = heights[p] + two_l / 2
            edges.append(Edge(heights[p], heights[c], _leaves_below(shape.template, c), form.text))
        if len(rest) == len(pending):
            raise InconsistencyError(f"shape {row.shape}: edges do not reach every node")
        pending = rest
    subs = [s for s in row.subs if shape.valid(heights, s)]
    if len(subs) != 1:
        raise InconsistencyError(f"row {row.label}: heights {heights} fit {len(subs)} variants")
    tree = MarkedTree.from_nested(shape.instantiate(heights))
    return tree, (subs[0] if len(row.subs) > 1 else None), edges


def _leaves_below(template, name: str) -> int:
    def find(n):
        if isinstance(n, int):
            return None
        if n[0] == name:
            return n
        for c in n[1]:
            hit = find(c)
            if hit is not None:
                return hit
        return None

    def count(n) -> int:
        return 1 if isinstance(n, int) else sum(count(c) for c in n[1])

    return count(find(template))


def _table_lookup(d: int, b2: B, b3: Callable[[], B]) -> tuple[Row, MarkedTree, str | None, list[Edge]]:
    rows = _matching_rows(rows_for(d), b2, b3)
    if len(rows) != 1:
        raise InconsistencyError(
            f"{len(rows)} table rows match the invariants" + (f": {[r.label for r in rows]}" if rows else ""))
    row = rows[0]
    tree, variant, edges = _reconstruct(row, d, b2)
    return row, tree, variant, edges


def _same_valuations(poly: NewtonPolygon, predicted: list[Fraction]) -> bool:
    return poly.root_valuations() == predicted


def classify_table(a: Sequence[FieldElement], d: int | None = None,
                   cache_dir: Path | str | None = None) -> ClassificationResult:
    """Classify a polynomial of degree 3, 4 or 5 by the half-space tables.

    The reconstructed tree is checked against the observed Newton polygons:
    its pair heights must reproduce the root valuations of ``F_{K_2}``
    (and those of ``F_{K_3}`` whenever they were needed).
    """
    d = _check_coefficients(a, d)
    if d not in (3, 4, 5):
        raise InputError(f"tables cover d = 3, 4, 5, got {d}")
    invariants: dict[str, B] = {"K2": tropical_invariants(a, EdgeWeightedGraph.complete(d, 2), cache_dir)}

    def b3() -> B:
        if "K3" not in invariants:
            invariants["K3"] = tropical_invariants(a, EdgeWeightedGraph.complete(d, 3), cache_dir)
        return invariants["K3"]

    row, tree, variant, edges = _table_lookup(d, invariants["K2"], b3)
    if not _same_valuations(lower_hull(NewtonInput(invariants["K2"])), _complete_valuations(tree, 2)):
        raise InconsistencyError(f"row {row.label}: reconstructed tree does not reproduce the K2 polygon")
    if "K3" in invariants and not _same_valuations(lower_hull(NewtonInput(invariants["K3"])),
                                                   _complete_valuations(tree, 3)):
        raise InconsistencyError(f"row {row.label}: reconstructed tree does not reproduce the K3 polygon")
    return ClassificationResult(row.label, filtration_type(tree), branch_heights(tree), edges, tree,
                                invariants, "table", variant)


def table_label(t: MarkedTree) -> tuple[str, str | None]:
    """Table row (and variant) of a tree with 3 to 5 leaves, read off its predicted invariants."""
    if t.d not in (3, 4, 5):
        raise InputError(f"tables cover d = 3, 4, 5, got {t.d}")
    b2 = _hull_b(_complete_valuations(t, 2))
    row, _, variant, _ = _table_lookup(t.d, b2, lambda: _hull_b(_complete_valuations(t, 3)))
    return row.label, variant


def _hull_b(vals: list[Fraction]) -> B:
    """Valuations ``b_k`` on the lower hull of a monic polynomial with the given root valuations."""
    poly = polygon_from_root_valuations(vals)
    out: B = [Fraction(0)] * (poly.r + 1)
    pts = poly.vertices
    for (i, y), (j, z) in zip(pts, pts[1:]):
        for k in range(i, j + 1):
            out[poly.r - k] = y + (z - y) * Fraction(k - i, j - i)
    return out


# ---------------------------------------------------------------------------
# general route


@lru_cache(maxsize=None)
def _representatives(d: int) -> tuple[MarkedTree, ...]:
    return tuple(enumerate_filtration_types(d))


def _candidates(d: int, poly: NewtonPolygon) -> list[MarkedTree]:
    """Filtration types whose pair heights reproduce the ``F_{K_2}`` root valuations."""
    observed = poly.root_valuations()
    levels = sorted(set(observed))
    out = []
    for rep in _representatives(d):
        hs = branch_heights(rep)
        if len(hs) != len(levels):
            continue
        # representatives use heights 0..m; map rank k to the k-th observed level
        t = MarkedTree([[x if x is INF else levels[int(x)] / 2 for x in row] for row in rep.D], check=False)
        if _complete_valuations(t, 2) == observed:
            out.append(t)
    return out


def _minimal(poly: NewtonPolygon) -> tuple[Fraction, int]:
    return poly.minimal_segment()


def classify_general(a: Sequence[FieldElement], d: int | None = None,
                     cache_dir: Path | str | None = None) -> ClassificationResult:
    """Classify by enumerating filtration types and testing minimizing values.

    For every surviving candidate and every level ``i`` the maximal
    ``c``-trivial subtree just above the ``i``-th branch height carries a
    weighted graph whose generating polynomial must have minimal root
    valuation ``M`` with multiplicity ``m``.  When that polynomial is
    beyond the symbolic budget the unweighted complete graph on the same
    number of vertices is used instead, and the candidate must reproduce
    its whole root-valuation multiset.
    """
    d = _check_coefficients(a, d)
    if not 2 <= d <= GENERAL_MAX_D:
        raise CapabilityError(f"general classification covers 2 <= d <= {GENERAL_MAX_D}, got {d}")
    invariants: dict[str, B] = {"K2": tropical_invariants(a, EdgeWeightedGraph.complete(d, 2), cache_dir)}
    polys: dict[str, NewtonPolygon] = {"K2": lower_hull(NewtonInput(invariants["K2"]))}
    survivors = _candidates(d, polys["K2"])
    steps: list[dict] = [{"graph": "K2", "survivors": len(survivors)}]

    def observed(name: str, g: EdgeWeightedGraph) -> NewtonPolygon:
        if name not in polys:
            invariants[name] = tropical_invariants(a, g, cache_dir)
            polys[name] = lower_hull(NewtonInput(invariants[name]))
        return polys[name]

    level = 0
    while len(survivors) > 1:
        hs = branch_heights(survivors[0])
        if level >= len(hs):
            raise InconsistencyError(f"{len(survivors)} filtration types survive every level")
        kept = []
        for t in survivors:
            wc = weight_construction(t, admissible_heights(t)[level])
            g = wc.graph()
            name = "G(" + g.canonical().key() + ")"
            try:
                poly = observed(name, g)
            except CapabilityError:
                s = len(wc.leaves)
                name = f"K{s}"
                poly = observed(name, EdgeWeightedGraph.complete(d, s))
                ok = _same_valuations(poly, _complete_valuations(t, s))
            else:
                ok = _minimal(poly) == (wc.M, wc.multiplicity)
            if ok:
                kept.append(t)
            steps.append({"level": level, "graph": name, "candidate": str(filtration_type(t)), "kept": ok})
        survivors = kept
        level += 1
    if not survivors:
        raise InconsistencyError("no filtration type matches the invariants")
    tree = survivors[0]
    label, variant = (table_label(tree) if d in (3, 4, 5) else (str(filtration_type(tree)), None))
    return ClassificationResult(label, filtration_type(tree), branch_heights(tree), _edges_of(tree), tree,
                                invariants, "general", variant, steps)
