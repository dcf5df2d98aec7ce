"""Ground truth from explicit roots: distance matrices, trees and expansions.

Nothing here factors a polynomial.  Roots are supplied (or generated from
a prescribed tree) and everything else is computed from them.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InconsistencyError, InputError, NotSeparableError
from .tree import MarkedTree, Nested
from .valued_field import (
    INF,
    FieldElement,
    FieldModel,
    PAdicRational,
    PuiseuxElement,
    TropVal,
    common_model,
)

__all__ = [
    "distance_matrix",
    "tree_from_roots",
    "expand_to_coefficients",
    "random_nested",
    "roots_for_tree",
    "random_roots",
]


def distance_matrix(roots: Sequence[FieldElement]) -> list[list[TropVal]]:
    """``D[i][j] = val(roots[i] - roots[j])``, with ``INF`` on the diagonal."""
    common_model(roots)
    d = len(roots)
    D: list[list[TropVal]] = [[INF] * d for _ in range(d)]
    for i, j in combinations(range(d), 2):
        v = (roots[i] - roots[j]).val()
        if v is INF:
            raise NotSeparableError(f"roots {i + 1} and {j + 1} coincide")
        D[i][j] = D[j][i] = v
    return D


def tree_from_roots(roots: Sequence[FieldElement]) -> MarkedTree:
    if len(roots) < 2:
        raise InputError("need at least two roots")
    try:
        return MarkedTree(distance_matrix(roots))
    except InconsistencyError as exc:
        raise InconsistencyError(f"valuations of root differences are not ultrametric: {exc}") from None


def expand_to_coefficients(roots: Sequence[FieldElement]) -> list[FieldElement]:
    """``[a_1, ..., a_d]`` with ``a_k = e_k(roots)``, so ``f = x^d - a_1 x^(d-1) + a_2 x^(d-2) - ...``."""
    model = common_model(roots)
    e: list[FieldElement] = [model.one()]
    for r in roots:
        # multiply the running product by (1 + r y) in the generating function of e_k
        nxt = list(e) + [model.zero()]
        for k in range(len(e), 0, -1):
            nxt[k] = nxt[k] + e[k - 1] * r
        e = nxt
    return e[1:]


# ---------------------------------------------------------------------------
# random instances


def _random_blocks(items: list[int], rng: random.Random) -> list[list[int]]:
    while True:
        k = rng.randint(2, len(items))
        blocks: dict[int, list[int]] = {}
        for x in items:
            blocks.setdefault(rng.randrange(k), []).append(x)
        if len(blocks) >= 2:
            return [blocks[i] for i in sorted(blocks)]


def random_nested(d: int, rng: random.Random, heights: Sequence[Fraction] | None = None) -> Nested:
    """A random tree on leaves ``1..d`` with node heights drawn from ``heights``.

    The default height pool is ``0, 1, ..., 4``.  A node placed at the top
    available height becomes a star.
    """
    pool = sorted(Fraction(h) for h in (heights if heights is not None else range(5)))
    leaves = list(range(1, d + 1))
    rng.shuffle(leaves)

    def build(items: list[int], floor: Fraction | None) -> Nested:
        if len(items) == 1:
            return items[0]
        cands = [h for h in pool if floor is None or h > floor]
        if not cands:
            raise InputError("height pool too small for this tree")
        h = rng.choice(cands)
        if not any(x > h for x in pool):
            return (h, list(items))
        return (h, [build(b, h) for b in _random_blocks(items, rng)])

    return build(leaves, None)


def roots_for_tree(node: Nested, model: FieldModel, rng: random.Random,
                   noise: bool = True, shift: bool = True) -> list[FieldElement]:
    """Roots whose join depths realize the nested tree exactly.

    Every node at height ``h`` gives its children pairwise distinct unit
    digits ``u``; a leaf is the sum of ``u * pi^h`` along its path, where
    ``pi`` is ``t`` or ``p``.  Optional noise adds terms beyond the deepest
    node on each path and an overall shift by a random element.
    """
    if model.kind == "padic":
        p = model.p

        def mono(u: int, h: Fraction) -> PAdicRational:
            if h.denominator != 1:
                raise InputError("p-adic realizations need integer heights")
            return PAdicRational(Fraction(u) * Fraction(p) ** int(h), p)

        def digits(k: int) -> list[int]:
            if k > p:
                raise InputError(f"p = {p} is too small for a node with {k} children")
            return rng.sample(range(p), k)
    else:
        def mono(u: int, h: Fraction) -> PuiseuxElement:
            return PuiseuxElement.monomial(u, h)

        def digits(k: int) -> list[int]:
            return rng.sample([x for x in range(-9, 10)], k)

    out: dict[int, FieldElement] = {}

    def walk(n: Nested, acc: FieldElement, depth: Fraction | None) -> None:
        if isinstance(n, int):
            if noise and depth is not None:
                acc = acc + mono(rng.choice([1, 2, 3]), depth + rng.choice([1, 2]))
            out[n] = acc
            return
        h = Fraction(n[0])
        for child, u in zip(n[1], digits(len(n[1]))):
            walk(child, acc + mono(u, h) if u else acc, h)

    start = model.zero()
    if shift:
        # a common translation leaves every difference unchanged
        start = model.from_rational(rng.randint(-20, 20))
        if model.kind != "padic":
            start = start + mono(rng.randint(1, 5), Fraction(rng.choice([-1, 1, 3]), 2))
    walk(node, start, None)
    return [out[i] for i in sorted(out)]


def random_roots(d: int, rng: random.Random, model: FieldModel | None = None,
                 heights: Sequence[Fraction] | None = None) -> list[FieldElement]:
    """Roots realizing a random tree on ``d`` leaves."""
    from .valued_field import PUISEUX

    return roots_for_tree(random_nested(d, rng, heights), model or PUISEUX, rng)
