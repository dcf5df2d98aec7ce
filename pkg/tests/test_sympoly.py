import random
from fractions import Fraction
from itertools import combinations
from math import factorial, prod

import pytest
from hypothesis import assume, given, settings, strategies as st

from tropinv import cache
from tropinv.errors import CapabilityError, DomainError, InputError
from tropinv.multipoly import MultiPoly
from tropinv.newton import NewtonInput, lower_hull
from tropinv.oracle import expand_to_coefficients, random_roots
from tropinv.sympoly import (
    EdgeWeightedGraph,
    elem_sym_reduce,
    evaluate_coefficient,
    evaluate_tropical_invariants,
    generating_polynomial,
    generating_polynomial_direct,
    orbit,
    pre_invariant,
    stabilizer_order,
)
from tropinv.valued_field import INF, PuiseuxElement

from listings import load_listing, parse_body


def K(d, s=2):
    return EdgeWeightedGraph.complete(d, s)


def elementary_values(roots):
    e = [1]
    for r in roots:
        e = [1] + [e[k] + e[k - 1] * r for k in range(1, len(e))] + [e[-1] * r]
    return e[1:]


def orbit_values(g, roots):
    return [prod((roots[i - 1] - roots[j - 1]) ** (2 * w) for (i, j), w in h.weights) for h in orbit(g)]


def coefficients_from_values(vals):
    """Coefficients of prod (x - v), highest power first."""
    c = [1]
    for v in vals:
        c = c + [0]
        for k in range(len(c) - 1, 0, -1):
            c[k] -= v * c[k - 1]
    return c


# -- MultiPoly ----------------------------------------------------------------


def test_multipoly_ring_and_order():
    x, y = MultiPoly.variables(2)
    p = (x + y) ** 2
    assert p == x * x + 2 * x * y + y * y
    assert p.total_degree() == 2
    assert list(p.sorted_exponents()) == sorted(p.sorted_exponents(), key=lambda e: (-sum(e), tuple(-v for v in e)))
    assert (p - p) == MultiPoly.zero(2) and not (p - p)
    assert MultiPoly(2, {(1, 0): 0}) == MultiPoly.zero(2)


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3), st.permutations([0, 1, 2]))
def test_multipoly_elementary_symmetric(vals, perm):
    for k in range(1, 4):
        e = MultiPoly.elementary(3, k)
        assert e.is_symmetric()
        assert e.evaluate(vals) == e.evaluate([vals[i] for i in perm])


# -- pre-invariants and orbits --------------------------------------------------


def test_pre_invariant_examples():
    a1, a2 = MultiPoly.variables(2)
    assert pre_invariant(EdgeWeightedGraph(2, {(1, 2): 1})) == a1 ** 2 - 2 * a1 * a2 + a2 ** 2
    x = MultiPoly.variables(3)
    sq = lambda i, j: (x[i] - x[j]) ** 2
    assert pre_invariant(K(3, 3)) == sq(0, 1) * sq(0, 2) * sq(1, 2)
    w = {(1, 2): 1, (1, 3): 2, (2, 3): 2, (4, 5): 2}
    w.update({(i, j): 8 for i in (1, 2, 3) for j in (4, 5)})
    g = EdgeWeightedGraph(5, w)
    assert g.degree() == 2 * (1 + 6 + 48) == 110
    assert pre_invariant(g).weighted_degrees([1] * 5) == {110}


def example_weighted_graphs():
    """The three weighted graphs of the five-leaf weight construction example."""
    w1 = {(1, 3): 1, (4, 5): 1}
    w1.update({e: 3 for e in combinations((1, 3, 4, 5), 2) if e not in w1})
    w2 = {(3, 4): 1, (3, 5): 1, (4, 5): 1, (1, 3): 4, (1, 4): 4, (1, 5): 4}
    w3 = {(1, 2): 1, (1, 3): 2, (2, 3): 2, (4, 5): 2}
    w3.update({(i, j): 8 for i in (1, 2, 3) for j in (4, 5)})
    return [EdgeWeightedGraph(5, w) for w in (w1, w2, w3)]


def distinct_permuted_polynomials(g):
    from itertools import permutations
    base = pre_invariant(g)
    return len({base.permute([p - 1 for p in perm]) for perm in permutations(range(1, g.d + 1))})


def test_orbit_sizes():
    assert len(orbit(K(5, 2))) == 10
    assert len(orbit(K(5, 3))) == 10 and stabilizer_order(K(5, 3)) == 12
    # the published degrees are 60, 20 and 60; the first and third graphs are also
    # fixed by (13), (45) resp. (12), so their orbits have 15 and 30 elements
    g1, g2, g3 = example_weighted_graphs()
    assert [stabilizer_order(g) for g in (g1, g2, g3)] == [8, 6, 4]
    assert [len(orbit(g)) for g in (g1, g2, g3)] == [15, 20, 30]
    assert distinct_permuted_polynomials(g1) == 15
    assert distinct_permuted_polynomials(g2) == 20


@given(st.dictionaries(st.sampled_from(list(combinations(range(1, 5), 2))), st.integers(1, 3), min_size=1))
def test_orbit_stabilizer_law(w):
    g = EdgeWeightedGraph(4, w)
    assert len(orbit(g)) * stabilizer_order(g) == factorial(4)


def test_graph_parse():
    assert EdgeWeightedGraph.parse(4, "K3") == K(4, 3)
    assert EdgeWeightedGraph.parse(4, "1-2:2,3-4") == EdgeWeightedGraph(4, {(1, 2): 2, (3, 4): 1})
    with pytest.raises(InputError):
        EdgeWeightedGraph(3, {(1, 4): 1})
    with pytest.raises(InputError):
        EdgeWeightedGraph(3, {(1, 2): 0})


# -- symmetric reduction ----------------------------------------------------------


def test_elem_sym_reduce_examples():
    x1, x2 = MultiPoly.variables(2)
    a1, a2 = MultiPoly.variables(2)
    assert elem_sym_reduce(x1 ** 2 + x2 ** 2) == a1 ** 2 - 2 * a2
    assert elem_sym_reduce((x1 - x2) ** 2) == a1 ** 2 - 4 * a2
    with pytest.raises(DomainError):
        elem_sym_reduce(x1)


def test_d3_c2_from_listing():
    F = generating_polynomial(K(3))
    assert F.coeffs[2] == parse_body("a_{1}^4-6a_{2}a_{1}^2+9a_{2}^2", 3)


# -- generating polynomials ---------------------------------------------------------


def test_d3_listing_and_discriminant():
    F = generating_polynomial(K(3))
    listing = load_listing("listing_d3_k2.tex", 3)
    assert F.degree == 3
    for k, p in listing.items():
        assert F.coeffs[k] == p
    # the constant coefficient is -prod (alpha_i - alpha_j)^2 for the sign convention of F
    a1, a2, a3 = MultiPoly.variables(3)
    disc = a1 ** 2 * a2 ** 2 - 4 * a2 ** 3 - 4 * a1 ** 3 * a3 + 18 * a1 * a2 * a3 - 27 * a3 ** 2
    assert F.coeffs[3] == -disc


def test_d4_listing():
    F = generating_polynomial(K(4))
    listing = load_listing("listing_d4_k2.tex", 4)
    assert F.degree == 6 and sorted(listing) == [3, 4, 5, 6]
    for k, p in listing.items():
        assert F.coeffs[k] == p


@pytest.mark.parametrize("d,s", [(3, 2), (4, 2), (4, 3), (5, 2)])
def test_two_routes_agree(d, s):
    g = K(d, s)
    assert generating_polynomial(g).coeffs == generating_polynomial_direct(g).coeffs


def test_k3_in_degree5_counts():
    F = cache.get(K(5, 3))
    assert F.degree == 10
    counts = {i: len(F.coeffs[10 - i]) for i in (4, 6, 7)}
    assert counts == {4: 955, 6: 284, 7: 123}


def test_capability_guard():
    heavy = EdgeWeightedGraph(5, {(1, 2): 1, (1, 3): 2, (2, 3): 2})
    with pytest.raises(CapabilityError):
        generating_polynomial(heavy)
    with pytest.raises(CapabilityError):
        generating_polynomial(K(7))


@pytest.mark.parametrize("d,s", [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3)])
def test_permutation_invariance(d, s):
    F = cache.get(K(d, s))
    rng = random.Random(d * 10 + s)
    for _ in range(100 // (d + s)):
        roots = [rng.randint(-30, 30) for _ in range(d)]
        perm = roots[:]
        rng.shuffle(perm)
        e1, e2 = elementary_values(roots), elementary_values(perm)
        v1 = [c.evaluate(e1) for c in F.coeffs]
        assert v1 == [c.evaluate(e2) for c in F.coeffs]
        assert v1 == coefficients_from_values(orbit_values(K(d, s), roots))


@st.composite
def small_graphs(draw):
    d = draw(st.integers(2, 4))
    edges = list(combinations(range(1, d + 1), 2))
    w = draw(st.dictionaries(st.sampled_from(edges), st.integers(1, 2 if d < 4 else 1), min_size=1))
    return EdgeWeightedGraph(d, w)


@settings(max_examples=100)
@given(small_graphs(), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_round_trip_on_random_graphs(g, roots):
    # keep each example cheap: orbit size times pre-invariant degree bounds the top weight
    assume(len(orbit(g)) * g.degree() <= 48)
    F = generating_polynomial(g)
    roots = roots[:g.d]
    e = elementary_values(roots)
    assert [c.evaluate(e) for c in F.coeffs] == coefficients_from_values(orbit_values(g, roots))


def test_round_trip_symbolic():
    """Substituting a_i = e_i(alpha) gives back the orbit product's coefficients."""
    for g in (K(3), K(4), K(4, 3)):
        F = generating_polynomial(g)
        elem = [MultiPoly.elementary(g.d, k) for k in range(1, g.d + 1)]
        direct = [MultiPoly.constant(g.d, 1)]
        for h in orbit(g):
            f = pre_invariant(h)
            direct = [direct[0]] + [direct[k] - f * direct[k - 1] for k in range(1, len(direct))] + [-(f * direct[-1])]
        assert [c.compose(elem) for c in F.coeffs] == direct


# -- tropical invariants ------------------------------------------------------------


P = PuiseuxElement.parse


def test_evaluate_examples():
    F3 = cache.get(K(3))
    assert evaluate_tropical_invariants(F3, [P("0"), P("-1"), P("0")]) == [0, 0, 0, 0]
    roots = [P("t"), P("-t"), P("1")]
    b = evaluate_tropical_invariants(F3, expand_to_coefficients(roots))
    assert b[2] == 0 and b[3] == 2
    # c_1 = -(sum of squared differences); zero when the first two coefficients vanish
    a = [P("0"), P("0"), P("1")]
    b = evaluate_tropical_invariants(F3, a)
    assert b[1] is INF


def test_fast_valuation_matches_field_arithmetic():
    F = cache.get(K(4))
    rng = random.Random(7)
    for _ in range(4):
        a = expand_to_coefficients(random_roots(4, rng))
        fast = evaluate_tropical_invariants(F, a)
        slow = [evaluate_coefficient(c, a).val() for c in F.coeffs]
        assert fast == slow


@pytest.mark.parametrize("d,s", [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3)])
def test_newton_polygon_consistency(d, s):
    g = K(d, s)
    F = cache.get(g)
    rng = random.Random(100 + d * 10 + s)
    for _ in range(10):
        roots = random_roots(d, rng)
        direct = sorted(sum((2 * w * (roots[i - 1] - roots[j - 1]).val() for (i, j), w in h.weights), Fraction(0))
                        for h in orbit(g))
        b = evaluate_tropical_invariants(F, expand_to_coefficients(roots))
        assert lower_hull(NewtonInput(b)).root_valuations() == direct
