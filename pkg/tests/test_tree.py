import random
from collections import Counter
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from tropinv.errors import DomainError, InconsistencyError
from tropinv.newton import NewtonInput, lower_hull
from tropinv.oracle import expand_to_coefficients, random_nested, roots_for_tree
from tropinv.sympoly import evaluate_tropical_invariants, generating_polynomial, orbit
from tropinv.tree import (
    MarkedTree,
    admissible_heights,
    branch_heights,
    enumerate_filtration_types,
    filtration_type,
    find_isomorphism,
    isomorphic,
    max_c_trivial_subtree,
    partition_at,
    phylo_type,
    weight_construction,
)
from tropinv.valued_field import INF, PUISEUX, PuiseuxElement as P

# the three five-leaf trees of the weight-construction example, heights (a0, a1, a2)
TREE_I = (0, [(1, [(2, [1, 2]), 3]), (1, [4, 5])])
TREE_II = (0, [(2, [1, 2]), (1, [3, 4, 5])])
TREE_III = (0, [(1, [1, 2]), (2, [3, 4, 5])])


def tree(nested):
    return MarkedTree.from_nested(nested)


def orbit_valuations(g, roots):
    """val of every orbit element of the pre-invariant, straight from the roots."""
    return sorted(sum((2 * w * (roots[i - 1] - roots[j - 1]).val() for (i, j), w in h.weights), Fraction(0))
                  for h in orbit(g))


@st.composite
def trees(draw, dmin=3, dmax=5):
    d = draw(st.integers(dmin, dmax))
    rng = random.Random(draw(st.integers(0, 10**9)))
    pool = sorted(set(draw(st.lists(st.fractions(min_value=-3, max_value=6, max_denominator=4),
                                    min_size=2, max_size=5, unique=True))))
    return tree(random_nested(d, rng, pool))


# -- heights and partitions ------------------------------------------------------


def test_branch_heights_examples():
    assert branch_heights(MarkedTree([[INF, 0, 0], [0, INF, 0], [0, 0, INF]])) == [0]
    assert branch_heights(tree(TREE_I)) == [0, 1, 2]
    assert branch_heights(tree((0, [(1, [1, 2]), 3]))) == [0, 1]


def test_partition_at_examples():
    t = tree(TREE_I)
    assert partition_at(t, -5) == ((1, 2, 3, 4, 5),)
    assert partition_at(t, 3) == ((1,), (2,), (3,), (4,), (5,))
    assert partition_at(t, Fraction(3, 2)) == ((1, 2), (3,), (4,), (5,))
    assert partition_at(t, 1) == ((1, 2, 3), (4, 5))


@given(trees(), st.fractions(min_value=-4, max_value=7), st.fractions(min_value=0, max_value=3))
def test_partition_at_is_monotone(t, c, step):
    coarse, fine = partition_at(t, c), partition_at(t, c + step)
    assert all(any(set(b) <= set(B) for B in coarse) for b in fine)


def test_max_c_trivial_subtree_examples():
    for nested in (TREE_I, TREE_II, TREE_III):
        t = tree(nested)
        assert len(max_c_trivial_subtree(t, Fraction(1, 2))) == 2
        assert max_c_trivial_subtree(t, 3) == (1, 2, 3, 4, 5)
    assert max_c_trivial_subtree(tree(TREE_I), Fraction(3, 2)) == (1, 3, 4, 5)
    assert len(max_c_trivial_subtree(tree(TREE_II), Fraction(3, 2))) == 4
    assert len(max_c_trivial_subtree(tree(TREE_III), Fraction(3, 2))) == 3
    with pytest.raises(DomainError):
        max_c_trivial_subtree(tree(TREE_I), 1)


# -- the weight construction --------------------------------------------------------


def test_weights_tree_i_middle():
    wc = weight_construction(tree(TREE_I), Fraction(3, 2))
    assert wc.leaves == (1, 3, 4, 5)
    assert wc.C[1] == 2
    ones = {(1, 3), (4, 5)}
    assert all(w == (1 if e in ones else 3) for e, w in wc.weights.items())
    assert wc.M == 2 * (1 + 1) * 1 + 2 * 3 * 4 * 0


def test_weights_tree_i_top():
    t = tree(TREE_I)
    wc = weight_construction(t, 3)
    assert wc.C[2] == 1 and wc.C[1] == 7
    expected = {(1, 2): 1, (1, 3): 2, (2, 3): 2, (4, 5): 2}
    for e, w in wc.weights.items():
        assert w == expected.get(e, 8)
    # 2 * (1*a2 + 2*3*a1 + 8*6*a0) at heights (0, 1, 2)
    assert wc.M == 16


def test_minimizing_value_from_roots():
    # leaves 1,2 share the deepest pair, as in the tree above
    roots = [P.parse(x) for x in ("t + t^2", "t + 2*t^2", "2*t", "1", "1 + t")]
    t = MarkedTree([[INF if i == j else (roots[i] - roots[j]).val() for j in range(5)] for i in range(5)])
    assert isomorphic(t, tree(TREE_I))
    wc = weight_construction(t, 3)
    g = wc.graph()
    direct = sum((2 * w * (roots[i - 1] - roots[j - 1]).val() for (i, j), w in g.weights), Fraction(0))
    assert direct == wc.M == 16
    vals = orbit_valuations(g, roots)
    assert vals[0] == 16 and vals.count(16) == wc.multiplicity == 1


def test_weights_tree_ii_middle():
    wc = weight_construction(tree(TREE_II), Fraction(3, 2))
    assert wc.leaves == (1, 3, 4, 5)
    assert wc.C[1] == 3
    heavy = {(1, 3), (1, 4), (1, 5)}
    assert all(w == (4 if e in heavy else 1) for e, w in wc.weights.items())
    # 24 a0 + 6 a1 at heights (0, 1)
    assert wc.M == 6


@settings(max_examples=100)
@given(trees())
def test_decreasing_c_and_off_subtree_bound(t):
    for c in admissible_heights(t):
        wc = weight_construction(t, c)
        m = len(wc.heights) - 1
        assert all(wc.C[i] > wc.C[i + 1] for i in range(1, m))
        for (x, y), w in wc.weights.items():
            for i in range(1, m + 1):
                if t.dist(x, y) < wc.heights[i]:
                    assert w > wc.C[i]


def test_check_rejects_bad_weights():
    wc = weight_construction(tree(TREE_I), 3)
    bad = type(wc)(wc.tree, wc.c, wc.leaves, wc.heights, wc.C, {**wc.weights, (1, 4): 1}, wc.M, wc.multiplicity)
    with pytest.raises(InconsistencyError):
        bad.check()


@settings(max_examples=100)
@given(trees(), st.integers(0, 10**9))
def test_minimizing_value_is_attained_with_multiplicity(t, seed):
    roots = roots_for_tree(t.nested(), PUISEUX, random.Random(seed))
    for c in admissible_heights(t):
        wc = weight_construction(t, c)
        vals = orbit_valuations(wc.graph(), roots)
        assert vals[0] == wc.M
        assert vals.count(wc.M) == wc.multiplicity


@pytest.mark.parametrize("d", [3, 4])
def test_minimizing_value_through_generating_polynomial(d):
    """The same statement read off the Newton polygon of the evaluated invariant."""
    rng = random.Random(d)
    checked = 0
    for _ in range(40):
        nested = random_nested(d, rng, [Fraction(h, 2) for h in range(-2, 7)])
        t = tree(nested)
        a = expand_to_coefficients(roots_for_tree(nested, PUISEUX, rng))
        for c in admissible_heights(t):
            wc = weight_construction(t, c)
            g = wc.graph()
            if len(orbit(g)) * g.degree() > 48:
                continue
            F = generating_polynomial(g)
            poly = lower_hull(NewtonInput(evaluate_tropical_invariants(F, a)))
            assert poly.minimal_segment() == (wc.M, wc.multiplicity)
            checked += 1
    assert checked >= 20


# -- types -------------------------------------------------------------------------


def test_phylo_versus_filtration_types():
    t2, t3 = tree(TREE_II), tree(TREE_III)
    assert phylo_type(t2) == phylo_type(t3)
    assert filtration_type(t2) != filtration_type(t3)
    assert phylo_type(tree(TREE_I)) != phylo_type(t2)


def test_f1_f2_trees_not_isomorphic():
    assert not isomorphic(tree(TREE_I), tree(TREE_II))


@given(trees(), st.permutations(range(1, 6)))
def test_relabeling_is_isomorphism(t, perm):
    p = [x for x in perm if x <= t.d]
    u = t.relabel(p)
    assert isomorphic(t, u)
    q = find_isomorphism(t, u)
    assert t.relabel(q).D == u.D
    assert filtration_type(t) == filtration_type(u) and phylo_type(t) == phylo_type(u)


@given(trees(), st.fractions(min_value=-5, max_value=5), st.fractions(min_value=Fraction(1, 3), max_value=4))
def test_filtration_type_ignores_heights(t, shift, factor):
    assert filtration_type(t.shifted(shift)) == filtration_type(t)
    assert filtration_type(t.scaled(factor)) == filtration_type(t)


def test_json_round_trip():
    t = tree(TREE_I)
    assert MarkedTree.from_json(t.to_json()) == t


def test_rejects_non_ultrametric():
    with pytest.raises(InconsistencyError):
        MarkedTree([[INF, 0, 1], [0, INF, 2], [1, 2, INF]])


# -- enumeration, checked against a separate chain count ------------------------------


def _set_partitions(n):
    """All set partitions of 0..n-1 as restricted growth strings."""
    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            yield from rec(prefix + [b], max(top, b))
    yield from rec([0], 0)


def _chain_types(n):
    parts = list(_set_partitions(n))
    blocks = {p: frozenset(frozenset(i for i in range(n) if p[i] == b) for b in set(p)) for p in parts}
    finer = {p: [q for q in parts if q != p and all(any(x <= y for y in blocks[p]) for x in blocks[q])]
             for p in parts}
    top, bottom = (0,) * n, tuple(range(n))

    def form(chain, leaves, level):
        # canonical nested form: the block of ``leaves`` split along the chain
        while level < len(chain) and len({chain[level][i] for i in leaves}) == 1:
            level += 1
        if len(leaves) == 1:
            return ()
        groups = {}
        for i in leaves:
            groups.setdefault(chain[level][i], []).append(i)
        return (level, tuple(sorted(form(chain, g, level + 1) for g in groups.values())))

    seen = set()

    def walk(chain):
        if chain[-1] == bottom:
            seen.add(form(chain, list(range(n)), 0))
            return
        for q in finer[chain[-1]]:
            walk(chain + [q])

    walk([top])
    return len(seen)


@pytest.mark.parametrize("d,count", [(2, 1), (3, 2), (4, 6), (5, 20)])
def test_enumeration_counts(d, count):
    assert len(enumerate_filtration_types(d)) == count == _chain_types(d)


def test_enumeration_count_six():
    assert len(enumerate_filtration_types(6)) == 90
