"""Skeleta of the curves ``y^n = f(x)`` from the tree of ``f``.

The tree of ``f`` spans the roots and the point at infinity inside the
Berkovich line; ``-log|f|`` has slope ``delta`` on each direction, equal
to the number of roots beyond it.  The cyclic cover of degree ``n``
restricted to that tree is determined by these slopes:

* a vertex with slopes ``delta_z`` has ``n_v = gcd(n, delta_z ...)``
  preimages, each a cyclic cover of degree ``k = n / n_v`` of a line;
* an edge with slope ``delta`` has ``n_e = gcd(n, delta)`` preimages, each
  shrunk by ``n / n_e``;
* the genus of a preimage follows from Riemann-Hurwitz for that cover.

``n`` is taken at face value; coprimality with the residue characteristic
is the caller's business.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InconsistencyError, InputError
from .tree import MarkedTree
from .valued_field import format_trop

__all__ = [
    "SlopedVertex",
    "SlopedEdge",
    "SlopedTree",
    "GraphVertex",
    "GraphEdge",
    "Ray",
    "WeightedMetricGraph",
    "slopes",
    "edge_count",
    "vertex_count",
    "curve_genus",
    "build_skeleton",
    "minimal_model",
    "potential_good_reduction",
    "skeleton_report",
]


# ---------------------------------------------------------------------------
# slopes on the tree


@dataclass(frozen=True)
class SlopedEdge:
    """Tree edge from ``parent`` up to ``child`` (vertex indices)."""

    parent: int
    child: int
    length: Fraction
    delta: int


@dataclass(frozen=True)
class SlopedVertex:
    """Internal node of the tree.

    ``directions`` lists ``(kind, target, delta)`` for every tangent
    direction: ``"up"`` toward a child node, ``"leaf"`` toward a root of
    ``f`` (``target`` is its label), ``"down"`` toward the parent and
    ``"inf"`` toward infinity at the root vertex.
    """

    index: int
    height: Fraction
    parent: int | None
    directions: tuple[tuple[str, int, int], ...]

    @property
    def deltas(self) -> list[int]:
        return [dlt for _, _, dlt in self.directions]


@dataclass(frozen=True)
class SlopedTree:
    d: int
    vertices: tuple[SlopedVertex, ...]
    edges: tuple[SlopedEdge, ...]

    def check_balance(self) -> None:
        """At every vertex the slope toward infinity is the sum of the others."""
        for v in self.vertices:
            down = sum(dlt for kind, _, dlt in v.directions if kind in ("down", "inf"))
            rest = sum(dlt for kind, _, dlt in v.directions if kind not in ("down", "inf"))
            if down != rest:
                raise InconsistencyError(f"slopes unbalanced at vertex {v.index}: {down} != {rest}")


def slopes(t: MarkedTree) -> SlopedTree:
    """Vertices (root first, then depth-first) and edges with their slopes."""
    verts: list[SlopedVertex] = []
    edges: list[SlopedEdge] = []

    def count(n) -> int:
        return 1 if isinstance(n, int) else sum(count(c) for c in n[1])

    def walk(n, parent: int | None) -> int:
        idx = len(verts)
        verts.append(None)  # type: ignore[arg-type]  # placeholder keeps preorder indices
        dirs: list[tuple[str, int, int]] = []
        if parent is None:
            dirs.append(("inf", 0, t.d))
        else:
            dirs.append(("down", parent, count(n)))
        for c in n[1]:
            if isinstance(c, int):
                dirs.append(("leaf", c, 1))
            else:
                k = walk(c, idx)
                dlt = count(c)
                dirs.append(("up", k, dlt))
                edges.append(SlopedEdge(idx, k, Fraction(c[0]) - Fraction(n[0]), dlt))
        verts[idx] = SlopedVertex(idx, Fraction(n[0]), parent, tuple(dirs))
        return idx

    walk(t.nested(), None)
    st = SlopedTree(t.d, tuple(verts), tuple(sorted(edges, key=lambda e: (e.parent, e.child))))
    st.check_balance()
    return st


def edge_count(delta: int, n: int) -> int:
    """Number of edges over a tree edge of slope ``delta``."""
    if delta < 1 or n < 1:
        raise InputError("slope and n must be positive")
    return gcd(delta, n)


def vertex_count(deltas: Sequence[int], n: int) -> int:
    """Number of vertices over a tree vertex with the given direction slopes."""
    if n < 1 or not deltas or any(x < 1 for x in deltas):
        raise InputError("slopes and n must be positive")
    g = n
    for x in deltas:
        g = gcd(g, x)
    return g


def curve_genus(d: int, n: int) -> int:
    """Genus of ``y^n = f(x)`` for separable ``f`` of degree ``d`` (Riemann-Hurwitz)."""
    if d < 1 or n < 1:
        raise InputError("d and n must be positive")
    two_g = -2 * n + d * (n - 1) + (n - gcd(n, d)) + 2
    return two_g // 2


# ---------------------------------------------------------------------------
# weighted metric graphs


@dataclass(frozen=True)
class GraphVertex:
    """``over`` is the tree vertex below, ``residue`` indexes the preimage."""

    id: str
    genus: int
    over: int
    residue: int


@dataclass(frozen=True)
class GraphEdge:
    u: str
    v: str
    length: Fraction
    over: int = -1
    residue: int = 0


@dataclass(frozen=True)
class Ray:
    """Unbounded direction toward a root (``label`` = its index) or toward infinity (``label`` = 0)."""

    vertex: str
    label: int


@dataclass
class WeightedMetricGraph:
    vertices: list[GraphVertex]
    edges: list[GraphEdge]
    rays: list[Ray] = field(default_factory=list)
    expansion: dict[int, int] = field(default_factory=dict)

    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def total_genus(self) -> int:
        return sum(v.genus for v in self.vertices)

    def genera(self) -> list[int]:
        return sorted(v.genus for v in self.vertices)

    def valence(self, vid: str) -> int:
        """Edge ends at ``vid``; a loop counts twice, rays are ignored."""
        return sum((e.u == vid) + (e.v == vid) for e in self.edges)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict[str, set[str]] = {v.id: set() for v in self.vertices}
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        seen = {self.vertices[0].id}
        stack = [self.vertices[0].id]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(adj)

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "genus": v.genus} for v in self.vertices],
            "edges": [{"u": e.u, "v": e.v, "length": format_trop(e.length)} for e in self.edges],
            "betti": self.betti,
        }

    def to_dot(self, name: str = "skeleton") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v.id}" [label="g={v.genus}"];')
        for e in self.edges:
            lines.append(f'  "{e.u}" -- "{e.v}" [label="{format_trop(e.length)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _vid(index: int, residue: int) -> str:
    return f"v{index}.{residue}"


def build_skeleton(t: MarkedTree, n: int) -> WeightedMetricGraph:
    """The full skeleton over the tree of ``t`` for ``y^n = f(x)``.

    Preimages of a vertex with ``n_v`` lifts are indexed by residues modulo
    ``n_v`` (cosets of the stabilizer ``n_v Z / n Z``).  The edge lift with
    residue ``r`` modulo ``n_e`` joins the lifts ``r mod n_u`` and
    ``r mod n_w`` of its endpoints.
    """
    if n < 1:
        raise InputError("n must be positive")
    st = slopes(t)
    nv = {v.index: vertex_count(v.deltas, n) for v in st.vertices}
    verts: list[GraphVertex] = []
    rays: list[Ray] = []
    for v in st.vertices:
        k = n // nv[v.index]
        # Riemann-Hurwitz for a degree k cyclic cover of a line branched along the directions
        branch = sum(k - gcd(dlt, n) // nv[v.index] for dlt in v.deltas)
        two_g = 2 - 2 * k + branch
        if two_g < 0 or two_g % 2:
            raise InconsistencyError(f"vertex {v.index}: 2g = {two_g} is not a nonnegative even number")
        for r in range(nv[v.index]):
            verts.append(GraphVertex(_vid(v.index, r), two_g // 2, v.index, r))
        for kind, target, dlt in v.directions:
            if kind == "leaf" or kind == "inf":
                for r in range(gcd(dlt, n)):
                    rays.append(Ray(_vid(v.index, r % nv[v.index]), target))
    edges: list[GraphEdge] = []
    expansion: dict[int, int] = {}
    for k, e in enumerate(st.edges):
        ne = edge_count(e.delta, n)
        expansion[k] = n // ne
        for r in range(ne):
            edges.append(GraphEdge(_vid(e.parent, r % nv[e.parent]), _vid(e.child, r % nv[e.child]),
                                   e.length * ne / n, k, r))
    g = WeightedMetricGraph(verts, edges, rays, expansion)
    if not g.is_connected():
        raise InconsistencyError("lifted skeleton is disconnected")
    expected = curve_genus(t.d, n)
    if g.total_genus + g.betti != expected:
        raise InconsistencyError(
            f"genus check failed: vertex genera {g.total_genus} + betti {g.betti} != g(X_n) = {expected}")
    return g


def minimal_model(g: WeightedMetricGraph) -> WeightedMetricGraph:
    """Prune genus-0 leaves, then smooth genus-0 vertices of valence two, until stable.

    Rays are dropped.  A lone genus-0 vertex carrying a single loop stays.
    """
    if not g.is_connected():
        raise InputError("minimal model needs a connected graph")
    verts = {v.id: v for v in g.vertices}
    edges = list(g.edges)
    changed = True
    while changed:
        changed = False
        for vid in sorted(verts):
            if verts[vid].genus or len(verts) == 1:
                continue
            incident = [e for e in edges if vid in (e.u, e.v)]
            val = sum((e.u == vid) + (e.v == vid) for e in incident)
            if val <= 1:
                edges = [e for e in edges if e not in incident]
                del verts[vid]
                changed = True
                break
            if val == 2 and len(incident) == 2:
                a, b = incident
                x = a.v if a.u == vid else a.u
                y = b.v if b.u == vid else b.u
                edges = [e for e in edges if e is not a and e is not b]
                edges.append(GraphEdge(min(x, y), max(x, y), a.length + b.length))
                del verts[vid]
                changed = True
                break
    order = {v.id: k for k, v in enumerate(g.vertices)}
    vs = sorted(verts.values(), key=lambda v: order[v.id])
    es = sorted(edges, key=lambda e: (order[e.u], order[e.v], e.length))
    return WeightedMetricGraph(vs, es)


def potential_good_reduction(t: MarkedTree) -> bool:
    """True iff every pair of roots joins at the same height (trivial phylogenetic type)."""
    vals = {t.dist(i, j) for i in range(1, t.d + 1) for j in range(i + 1, t.d + 1)}
    return len(vals) <= 1


def skeleton_report(t: MarkedTree, n: int) -> dict:
    full = build_skeleton(t, n)
    return {
        "n": n,
        "genus": curve_genus(t.d, n),
        "full": full.to_json(),
        "minimal": minimal_model(full).to_json(),
        "potential_good_reduction": potential_good_reduction(t),
    }
