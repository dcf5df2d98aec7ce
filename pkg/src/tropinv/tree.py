"""Marked tree filtrations stored as join-depth matrices.

A tree on leaves ``1..d`` is the symmetric matrix ``D`` with
``D[i][j] = val(alpha_i - alpha_j)``: two leaves lie in the same branch at
height ``c`` exactly when ``D[i][j] >= c``.  The ultrametric inequality
``D[i][j] >= min(D[i][k], D[k][j])`` makes this an equivalence relation.

Leaves are numbered from 1 in every public function; the matrix itself is
0-indexed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence, Union

from .errors import DomainError, InconsistencyError, InputError
from .sympoly import EdgeWeightedGraph
from .valued_field import INF, TropVal, format_trop, parse_trop

__all__ = [
    "MarkedTree",
    "FiltrationType",
    "PhylogeneticType",
    "WeightConstruction",
    "Nested",
    "branch_heights",
    "partition_at",
    "admissible_heights",
    "max_c_trivial_subtree",
    "weight_construction",
    "filtration_type",
    "phylo_type",
    "isomorphic",
    "subtree_multiplicity",
    "enumerate_filtration_types",
]

Partition = tuple[tuple[int, ...], ...]
# a nested description: a leaf label, or (height, [children])
Nested = Union[int, tuple[Union[int, Fraction], Sequence["Nested"]]]


def _canon_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@dataclass(frozen=True)
class MarkedTree:
    """Join depths of ``d`` distinct leaves; the diagonal is ``INF``."""

    d: int
    D: tuple[tuple[TropVal, ...], ...]

    def __init__(self, D: Sequence[Sequence[TropVal]], check: bool = True):
        d = len(D)
        if d < 2:
            raise InputError("a tree needs at least two leaves")
        rows = []
        for i, row in enumerate(D):
            if len(row) != d:
                raise InputError("distance matrix must be square")
            out = []
            for j, x in enumerate(row):
                if i == j:
                    out.append(INF)
                elif x is INF:
                    raise DomainError(f"leaves {i + 1} and {j + 1} coincide")
                else:
                    out.append(Fraction(x))
            rows.append(tuple(out))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "D", tuple(rows))
        if check:
            self._check()

    def _check(self) -> None:
        D, d = self.D, self.d
        for i in range(d):
            for j in range(i + 1, d):
                if D[i][j] != D[j][i]:
                    raise InputError(f"matrix not symmetric at ({i + 1},{j + 1})")
        for i, j, k in combinations(range(d), 3):
            # in an ultrametric the two smallest of every triangle agree
            x, y, z = sorted((D[i][j], D[j][k], D[i][k]))
            if x != y:
                raise InconsistencyError(
                    f"leaves {i + 1},{j + 1},{k + 1} violate the ultrametric inequality")

    @classmethod
    def from_nested(cls, node: Nested) -> "MarkedTree":
        """Build from ``(height, [children])`` with integer leaf labels ``1..d``.

        Heights must increase strictly from a node to its internal children.

        >>> t = MarkedTree.from_nested((0, [1, (1, [2, 3])]))
        >>> t.dist(2, 3), t.dist(1, 2)
        (Fraction(1, 1), Fraction(0, 1))
        """
        joins: dict[tuple[int, int], Fraction] = {}

        def walk(n: Nested, floor: Fraction | None) -> list[int]:
            if isinstance(n, int):
                return [n]
            h, children = Fraction(n[0]), n[1]
            if floor is not None and h <= floor:
                raise InputError("heights must increase away from the root")
            if len(children) < 2:
                raise InputError("internal nodes need at least two children")
            groups = [walk(c, h) for c in children]
            for g1, g2 in combinations(groups, 2):
                for a in g1:
                    for b in g2:
                        joins[(min(a, b), max(a, b))] = h
            return [x for g in groups for x in g]

        leaves = walk(node, None)
        d = len(leaves)
        if sorted(leaves) != list(range(1, d + 1)):
            raise InputError(f"leaf labels must be 1..{d} exactly once")
        D = [[INF if i == j else joins[(min(i, j) + 1, max(i, j) + 1)] for j in range(d)] for i in range(d)]
        return cls(D)

    def dist(self, i: int, j: int) -> TropVal:
        """Join depth of leaves ``i`` and ``j`` (1-based)."""
        return self.D[i - 1][j - 1]

    @cached_property
    def base_height(self) -> Fraction:
        return min(self.D[i][j] for i in range(self.d) for j in range(i + 1, self.d))

    def relabel(self, perm: Sequence[int]) -> "MarkedTree":
        """Leaf ``i`` becomes leaf ``perm[i-1]`` (1-based images)."""
        d = self.d
        inv = [0] * d
        for i, p in enumerate(perm):
            inv[p - 1] = i
        return MarkedTree([[self.D[inv[i]][inv[j]] for j in range(d)] for i in range(d)], check=False)

    def restrict(self, leaves: Sequence[int]) -> "MarkedTree":
        """Induced tree on ``leaves`` (1-based), relabeled ``1..len(leaves)`` in the given order."""
        idx = [x - 1 for x in leaves]
        return MarkedTree([[self.D[i][j] for j in idx] for i in idx], check=False)

    def shifted(self, amount: Fraction) -> "MarkedTree":
        return MarkedTree([[x if x is INF else x + amount for x in row] for row in self.D], check=False)

    def scaled(self, factor: Fraction) -> "MarkedTree":
        if factor <= 0:
            raise InputError("scale factor must be positive")
        return MarkedTree([[x if x is INF else x * factor for x in row] for row in self.D], check=False)

    @cached_property
    def shape(self) -> tuple:
        """Canonical nested form ``(height, children)``; leaves are ``()``.

        Two trees have equal shapes iff some relabeling matches their matrices.
        """
        return _shape(self.D, tuple(range(self.d)))

    def nested(self) -> Nested:
        """The tree as ``(height, [children])`` with the original leaf labels."""
        return _nested(self.D, list(range(self.d)))

    def to_json(self) -> dict:
        return {"d": self.d, "matrix": [[format_trop(x) for x in row] for row in self.D]}

    @classmethod
    def from_json(cls, obj: dict) -> "MarkedTree":
        try:
            D = [[parse_trop(str(x)) for x in row] for row in obj["matrix"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad tree JSON: {exc}") from None
        t = cls(D)
        if "d" in obj and obj["d"] != t.d:
            raise InputError("tree JSON: d disagrees with the matrix size")
        return t


def _blocks_above(D, leaves: Sequence[int], h: Fraction) -> list[list[int]]:
    """Group ``leaves`` by the relation ``D > h``."""
    blocks: list[list[int]] = []
    for x in leaves:
        for b in blocks:
            if D[x][b[0]] > h:
                b.append(x)
                break
        else:
            blocks.append([x])
    return blocks


def _shape(D, leaves: tuple[int, ...]) -> tuple:
    if len(leaves) == 1:
        return ()
    h = min(D[i][j] for i, j in combinations(leaves, 2))
    kids = sorted(_shape(D, tuple(b)) for b in _blocks_above(D, leaves, h))
    return (h, tuple(kids))


def _nested(D, leaves: list[int]) -> Nested:
    if len(leaves) == 1:
        return leaves[0] + 1
    h = min(D[i][j] for i, j in combinations(leaves, 2))
    return (h, [_nested(D, b) for b in _blocks_above(D, leaves, h)])


# ---------------------------------------------------------------------------
# heights and partitions


def branch_heights(t: MarkedTree) -> list[Fraction]:
    """Distinct join depths in increasing order; the first is the base height."""
    return sorted({t.D[i][j] for i in range(t.d) for j in range(i + 1, t.d)})


def partition_at(t: MarkedTree, c: TropVal) -> Partition:
    """Blocks of leaves (1-based) whose pairwise join depths are ``>= c``."""
    blocks: list[list[int]] = []
    for x in range(t.d):
        for b in blocks:
            if t.D[x][b[0]] >= c:
                b.append(x)
                break
        else:
            blocks.append([x])
    return _canon_partition([y + 1 for y in b] for b in blocks)


def admissible_heights(t: MarkedTree) -> list[Fraction]:
    """One admissible ``c`` just above each branch height.

    The value sits halfway to the next branch height, or one unit above the
    top height.
    """
    hs = branch_heights(t)
    out = [(a + b) / 2 for a, b in zip(hs, hs[1:])]
    out.append(hs[-1] + 1)
    return out


def max_c_trivial_subtree(t: MarkedTree, c: TropVal) -> tuple[int, ...]:
    """Smallest leaf of every block of the partition just above ``c``.

    ``c`` must avoid the branch heights: there the number of branches jumps
    and the maximal subtree is not well defined.
    """
    if c is INF:
        raise DomainError("height must be finite")
    if Fraction(c) in set(branch_heights(t)):
        raise DomainError(f"c = {format_trop(c)} is a branch height")
    return tuple(b[0] for b in partition_at(t, c))


# ---------------------------------------------------------------------------
# type invariants


def _ranked(shape: tuple, rank: dict) -> tuple:
    if not shape:
        return ()
    return (rank[shape[0]], tuple(sorted(_ranked(k, rank) for k in shape[1])))


def _unheighted(shape: tuple) -> tuple:
    if not shape:
        return ()
    return (0, tuple(sorted(_unheighted(k) for k in shape[1])))


def _shape_str(shape: tuple) -> str:
    if not shape:
        return "*"
    return "[" + ",".join(_shape_str(k) for k in shape[1]) + "]"


@dataclass(frozen=True)
class FiltrationType:
    """The chain of leaf partitions, from one block to singletons, heights forgotten.

    ``partitions`` keeps the labels of the tree it came from.  Equality and
    hashing use ``key``, which ignores leaf labels.
    """

    partitions: tuple[Partition, ...] = field(compare=False)
    key: tuple

    def __str__(self) -> str:
        return " | ".join(" ".join("{" + ",".join(map(str, b)) + "}" for b in p) for p in self.partitions)

    @property
    def levels(self) -> int:
        """Number of branch heights."""
        return len(self.partitions) - 1


@dataclass(frozen=True)
class PhylogeneticType:
    """Rooted combinatorial shape with the root on the side of the infinite leaf."""

    canonical: str

    def __str__(self) -> str:
        return self.canonical


def filtration_type(t: MarkedTree) -> FiltrationType:
    hs = branch_heights(t)
    parts = [partition_at(t, h) for h in hs]
    parts.append(tuple((i,) for i in range(1, t.d + 1)))
    rank = {h: k for k, h in enumerate(hs)}
    return FiltrationType(tuple(parts), _ranked(t.shape, rank))


def phylo_type(t: MarkedTree) -> PhylogeneticType:
    return PhylogeneticType(_shape_str(_unheighted(t.shape)))


def isomorphic(t1: MarkedTree, t2: MarkedTree) -> bool:
    """Is there a leaf relabeling carrying one matrix onto the other?"""
    return t1.d == t2.d and t1.shape == t2.shape


def find_isomorphism(t1: MarkedTree, t2: MarkedTree) -> tuple[int, ...] | None:
    """A permutation ``p`` with ``t1.relabel(p) == t2``, by brute force (small ``d``)."""
    if not isomorphic(t1, t2):
        return None
    for perm in permutations(range(1, t1.d + 1)):
        if t1.relabel(perm).D == t2.D:
            return perm
    raise InconsistencyError("equal shapes but no matching relabeling")


def subtree_multiplicity(t: MarkedTree, leaves: Sequence[int]) -> int:
    """Number of leaf subsets of the same size whose induced tree matches ``leaves``' (heights included)."""
    target = t.restrict(leaves).shape
    return sum(1 for s in combinations(range(1, t.d + 1), len(leaves)) if t.restrict(s).shape == target)


# ---------------------------------------------------------------------------
# weighted graphs attached to truncations


@dataclass(frozen=True)
class WeightConstruction:
    """Weighted complete graph on a maximal ``c``-trivial subtree.

    ``heights`` are the branch heights ``a_0 < ... < a_m`` of the subtree;
    ``C[i]`` (``1 <= i <= m``) is the weight sum over the edges joined at
    height ``>= a_i`` when that level was processed (``C[0]`` is unused and
    set to ``None``); ``weights`` is the final weight map on pairs of leaves.
    """

    tree: MarkedTree
    c: Fraction
    leaves: tuple[int, ...]
    heights: tuple[Fraction, ...]
    C: tuple[int | None, ...]
    weights: dict[tuple[int, int], int]
    M: Fraction
    multiplicity: int

    def graph(self) -> EdgeWeightedGraph:
        """The weighted graph inside ``K_d`` (on the tree's leaf labels)."""
        return EdgeWeightedGraph(self.tree.d, self.weights)

    def compact_graph(self) -> tuple[EdgeWeightedGraph, tuple[int, ...]]:
        """The same graph relabeled onto ``1..s``, with ``s = len(leaves)``, inside ``K_d``.

        Returns the graph and the map ``new label -> tree leaf``.
        """
        pos = {x: k + 1 for k, x in enumerate(self.leaves)}
        g = EdgeWeightedGraph(self.tree.d, {(pos[i], pos[j]): w for (i, j), w in self.weights.items()})
        return g, self.leaves

    def check(self) -> None:
        """Strict decrease of ``C`` and the off-subtree weight bound; raises on failure."""
        m = len(self.heights) - 1
        for i in range(1, m):
            if not self.C[i] > self.C[i + 1]:
                raise InconsistencyError(f"C_{i} = {self.C[i]} does not exceed C_{i + 1} = {self.C[i + 1]}")
        for (x, y), w in self.weights.items():
            dxy = self.tree.dist(x, y)
            for i in range(1, m + 1):
                if dxy < self.heights[i] and not w > self.C[i]:
                    raise InconsistencyError(f"weight {w} on {{{x},{y}}} does not exceed C_{i} = {self.C[i]}")


def weight_construction(t: MarkedTree, c: TropVal, multiplicity: bool = True) -> WeightConstruction:
    """Recursive weights on the maximal ``c``-trivial subtree.

    Start with weight 1 everywhere.  Walking down from the top height
    ``a_m``, let ``C_i`` be the current weight sum over the pairs joined at
    height ``>= a_i``, and raise every pair joined exactly at ``a_{i-1}``
    to ``C_i + 1``.  The minimizing value is ``M = sum 2 k(e) d_e``.
    """
    leaves = max_c_trivial_subtree(t, c)
    pairs = list(combinations(leaves, 2))
    hs = tuple(sorted({t.dist(i, j) for i, j in pairs})) if pairs else (t.base_height,)
    m = len(hs) - 1
    w = {e: 1 for e in pairs}
    C: list[int | None] = [None] * (m + 1)
    for i in range(m, 0, -1):
        C[i] = sum(k for e, k in w.items() if t.dist(*e) >= hs[i])
        for e in pairs:
            if t.dist(*e) == hs[i - 1]:
                w[e] = C[i] + 1
    M = sum(2 * k * t.dist(*e) for e, k in w.items())
    mult = subtree_multiplicity(t, leaves) if multiplicity else 0
    wc = WeightConstruction(t, Fraction(c), leaves, hs, tuple(C), w, Fraction(M), mult)
    wc.check()
    return wc


# ---------------------------------------------------------------------------
# enumeration


def _refinements(p: Partition) -> Iterator[Partition]:
    """Every partition strictly finer than ``p``."""
    def split(block: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if len(block) == 1:
            yield [block]
            return
        first, rest = block[0], block[1:]
        for sub in split(rest):
            yield [(first,)] + sub
            for k in range(len(sub)):
                yield sub[:k] + [tuple(sorted((first,) + sub[k]))] + sub[k + 1:]

    def combos(blocks: list[tuple[int, ...]]) -> Iterator[list[tuple[int, ...]]]:
        if not blocks:
            yield []
            return
        for head in split(blocks[0]):
            for tail in combos(blocks[1:]):
                yield head + tail

    for q in combos(list(p)):
        q = _canon_partition(q)
        if q != p:
            yield q


def enumerate_filtration_types(d: int) -> list[MarkedTree]:
    """One representative tree per filtration type on ``d`` leaves.

    Representatives use integer heights ``0, 1, ..., m``; the list is sorted
    by number of branch heights, then by the canonical key.
    """
    if not 2 <= d <= 7:
        raise InputError("filtration types are enumerated for 2 <= d <= 7")
    top: Partition = (tuple(range(1, d + 1)),)
    bottom: Partition = tuple((i,) for i in range(1, d + 1))
    found: dict[tuple, MarkedTree] = {}

    def tree_of(chain: list[Partition]) -> MarkedTree:
        # pair (i, j) joins at the last level where they share a block
        D = [[INF] * d for _ in range(d)]
        for level, p in enumerate(chain):
            for b in p:
                for i, j in combinations(b, 2):
                    D[i - 1][j - 1] = D[j - 1][i - 1] = Fraction(level)
        return MarkedTree(D, check=False)

    def extend(chain: list[Partition]) -> None:
        last = chain[-1]
        if last == bottom:
            t = tree_of(chain[:-1])
            found.setdefault(filtration_type(t).key, t)
            return
        for q in _refinements(last):
            extend(chain + [q])

    extend([top])
    return sorted(found.values(), key=lambda t: (len(branch_heights(t)), repr(filtration_type(t).key)))
