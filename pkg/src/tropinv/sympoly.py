"""Edge-weighted graphs, their pre-invariants and generating polynomials.

For an edge-weighted graph ``(G, k)`` on ``{1..d}`` the pre-invariant is
``I = prod_{i<j} (alpha_i - alpha_j)^(2 k(ij))``.  Its ``S_d``-orbit is the
root set of the monic generating polynomial ``F = prod (x - sigma(I))``,
whose coefficients are symmetric in the roots and therefore polynomials in
``a_i = e_i(alpha)``.

Two independent constructions of ``F`` are provided:

* :func:`generating_polynomial` works through power sums: the orbit power
  sums are written in monomial symmetric functions, converted to power sums
  of the roots by Moebius inversion over set partitions, and then to the
  ``a_i`` by Newton's identities.
* :func:`generating_polynomial_direct` multiplies the orbit factors with
  coefficients in the ``alpha_i`` and reduces each coefficient by
  leading-monomial elimination (:func:`elem_sym_reduce`).

The first is fast enough for ``d = 5`` and the complete graph on three
vertices; the second serves as a cross-check on small cases.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, groupby, permutations
from typing import Iterable, Mapping, Sequence

try:  # GMP multiplication is much faster on the large packed integers below
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int

from .errors import CapabilityError, DomainError, InconsistencyError, InputError
from .multipoly import MultiPoly
from .valued_field import (
    INF,
    FieldElement,
    PAdicRational,
    PuiseuxElement,
    TropVal,
    common_model,
    ord_p,
)

__all__ = [
    "EdgeWeightedGraph",
    "GeneratingPolynomial",
    "pre_invariant",
    "orbit",
    "stabilizer_order",
    "elem_sym_reduce",
    "generating_polynomial",
    "generating_polynomial_direct",
    "evaluate_coefficient",
    "evaluate_tropical_invariants",
    "tropical_valuation",
    "ORBIT_MAX_D",
    "SYMBOLIC_MAX_D",
]

ORBIT_MAX_D = 7
SYMBOLIC_MAX_D = 6
# number of weighted partitions of the top coefficient weight with parts <= d
# above which symbolic expansion is refused
SYMBOLIC_MONOMIAL_BUDGET = 12000

Edge = tuple[int, int]


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class EdgeWeightedGraph:
    """Nonnegative integer weights on the edges of the complete graph ``K_d``.

    Vertices are ``1..d``; a weight of zero means the edge is absent and is
    never stored.
    """

    d: int
    weights: tuple[tuple[Edge, int], ...]

    def __init__(self, d: int, weights: Mapping[Edge, int] | Iterable[tuple[Edge, int]]):
        items = weights.items() if isinstance(weights, Mapping) else weights
        clean: dict[Edge, int] = {}
        for (i, j), w in items:
            if i == j:
                raise InputError(f"loop at vertex {i}")
            i, j = min(i, j), max(i, j)
            if not (1 <= i and j <= d):
                raise InputError(f"edge {{{i},{j}}} outside vertex range 1..{d}")
            if not isinstance(w, int) or w < 0:
                raise InputError(f"weights are nonnegative integers, got {w!r}")
            if w:
                clean[(i, j)] = clean.get((i, j), 0) + w
        if d < 2:
            raise InputError("a graph needs at least two vertices")
        if not clean:
            raise InputError("at least one edge must have positive weight")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "weights", tuple(sorted(clean.items())))

    @classmethod
    def complete(cls, d: int, s: int, weight: int = 1) -> "EdgeWeightedGraph":
        """``K_s`` on vertices ``1..s`` inside ``K_d``, all weights equal."""
        if not 2 <= s <= d:
            raise InputError(f"need 2 <= s <= d, got s={s}, d={d}")
        return cls(d, {e: weight for e in combinations(range(1, s + 1), 2)})

    @classmethod
    def parse(cls, d: int, text: str) -> "EdgeWeightedGraph":
        """``"K2"``, ``"K3"``, ... or an edge list ``"1-2:1,1-3:2"`` (weight optional)."""
        s = text.strip()
        if s[:1] in "Kk" and s[1:].isdigit():
            return cls.complete(d, int(s[1:]))
        weights: dict[Edge, int] = {}
        if "{" in s:
            found = re.findall(r"\{\s*(\d+)\s*,\s*(\d+)\s*\}(?:\s*:\s*(\d+))?", s)
            if not found or re.sub(r"\{\s*\d+\s*,\s*\d+\s*\}(?:\s*:\s*\d+)?|[\s,]", "", s):
                raise InputError(f"cannot parse graph {text!r}")
            for i, j, w in found:
                key = (min(int(i), int(j)), max(int(i), int(j)))
                weights[key] = weights.get(key, 0) + (int(w) if w else 1)
            return cls(d, weights)
        for part in s.split(","):
            part = part.strip().strip("{}")
            if not part:
                continue
            edge, _, w = part.partition(":")
            ends = edge.replace("{", "").replace("}", "").replace(" ", "")
            sep = "-" if "-" in ends else ","
            try:
                i, j = (int(x) for x in ends.split(sep))
                weight = int(w) if w else 1
            except ValueError:
                raise InputError(f"cannot parse edge {part!r}") from None
            weights[(i, j)] = weights.get((min(i, j), max(i, j)), 0) + weight
        return cls(d, weights)

    @property
    def weight_map(self) -> dict[Edge, int]:
        return dict(self.weights)

    def weight(self, i: int, j: int) -> int:
        return self.weight_map.get((min(i, j), max(i, j)), 0)

    def support(self) -> list[int]:
        """Vertices touched by a positive-weight edge."""
        return sorted({v for e, _ in self.weights for v in e})

    def degree(self) -> int:
        """Total degree of the pre-invariant in the roots."""
        return 2 * sum(w for _, w in self.weights)

    def relabel(self, perm: Sequence[int]) -> "EdgeWeightedGraph":
        """Apply the vertex map ``v -> perm[v - 1]`` (1-based images)."""
        return EdgeWeightedGraph(self.d, {(perm[i - 1], perm[j - 1]): w for (i, j), w in self.weights})

    def key(self) -> str:
        """The header form ``{i,j}:w`` joined by commas, sorted by edge."""
        return ",".join(f"{{{i},{j}}}:{w}" for (i, j), w in self.weights)

    def canonical(self) -> "EdgeWeightedGraph":
        """Smallest relabeling under a fixed total order; equal for isomorphic graphs."""
        return _canonical(self)

    def __str__(self) -> str:
        return f"G(d={self.d}; {self.key()})"


@lru_cache(maxsize=None)
def _canonical(g: EdgeWeightedGraph) -> EdgeWeightedGraph:
    if g.d > ORBIT_MAX_D:
        raise CapabilityError(f"relabeling search limited to d <= {ORBIT_MAX_D}")
    best = None
    for perm in permutations(range(1, g.d + 1)):
        h = g.relabel(perm)
        # heavier edges first on small labels gives a readable representative
        key = tuple(sorted(((i, j), -w) for (i, j), w in h.weights))
        key = (len(h.weights), key)
        if best is None or key < best[0]:
            best = (key, h)
    return best[1]


def pre_invariant(g: EdgeWeightedGraph) -> MultiPoly:
    """Fully expanded ``prod (alpha_i - alpha_j)^(2 k(ij))`` in ``alpha_1..alpha_d``."""
    terms = _pre_invariant_packed(g.weights, g.d)
    bits = _bits_for(g.degree())
    return MultiPoly._raw(g.d, {_unpack(k, g.d, bits): c for k, c in terms.items()})


def _pre_invariant_packed(weights: tuple[tuple[Edge, int], ...], nvars: int,
                          relabel: Mapping[int, int] | None = None) -> dict[int, int]:
    """Pre-invariant as a packed dictionary; variables are 0-based after ``relabel``."""
    degree = 2 * sum(w for _, w in weights)
    bits = _bits_for(degree)
    poly = {0: 1}
    for (i, j), w in weights:
        a = (relabel[i] if relabel else i - 1)
        b = (relabel[j] if relabel else j - 1)
        n = 2 * w
        sa, sb = 1 << (bits * a), 1 << (bits * b)
        factor = {}
        for m in range(n + 1):
            # binomial expansion of (x_a - x_b)^n
            factor[m * sa + (n - m) * sb] = math.comb(n, m) * (-1) ** (n - m)
        poly = _pmul(poly, factor)
    return poly


def stabilizer_order(g: EdgeWeightedGraph) -> int:
    if g.d > ORBIT_MAX_D:
        raise CapabilityError(f"orbit enumeration limited to d <= {ORBIT_MAX_D}")
    target = g.weights
    return sum(1 for perm in permutations(range(1, g.d + 1)) if g.relabel(perm).weights == target)


def orbit(g: EdgeWeightedGraph) -> list[EdgeWeightedGraph]:
    """All distinct relabelings of ``g``, in first-seen order over ``itertools.permutations``."""
    if g.d > ORBIT_MAX_D:
        raise CapabilityError(f"orbit enumeration limited to d <= {ORBIT_MAX_D}")
    seen: dict[tuple, EdgeWeightedGraph] = {}
    for perm in permutations(range(1, g.d + 1)):
        h = g.relabel(perm)
        seen.setdefault(h.weights, h)
    return list(seen.values())


# ---------------------------------------------------------------------------
# packed dictionaries: exponent vectors stored as one int, ``bits`` per slot


def _bits_for(max_exponent: int) -> int:
    return max(2, (max_exponent + 1).bit_length())


def _pack(e: Sequence[int], bits: int) -> int:
    k = 0
    for x in reversed(e):
        k = (k << bits) | x
    return k


def _unpack(k: int, n: int, bits: int) -> tuple[int, ...]:
    mask = (1 << bits) - 1
    out = []
    for _ in range(n):
        out.append(k & mask)
        k >>= bits
    return tuple(out)


def _pmul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    acc: defaultdict[int, int] = defaultdict(int)
    for k2, c2 in b.items():
        for k1, c1 in a.items():
            acc[k1 + k2] += c1 * c2
    return {k: v for k, v in acc.items() if v}


def _padd(a: dict[int, int], b: dict[int, int], scale: int = 1) -> dict[int, int]:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + scale * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


# ---------------------------------------------------------------------------
# symmetric reduction by leading-monomial elimination


def elem_sym_reduce(p: MultiPoly, verify: bool = True) -> MultiPoly:
    """Write a symmetric polynomial in ``alpha`` as a polynomial in ``a_i = e_i(alpha)``.

    Repeatedly removes the lex-leading term ``c * alpha^lam`` by subtracting
    ``c * e_1^(lam_1-lam_2) ... e_n^(lam_n)``.  The lex order strictly
    decreases, so the loop terminates.
    """
    n = p.nvars
    if not p.is_symmetric():
        raise DomainError("elem_sym_reduce needs a symmetric polynomial")
    elem = [MultiPoly.elementary(n, k) for k in range(1, n + 1)]
    powers: dict[tuple[int, int], MultiPoly] = {}

    def epow(i: int, k: int) -> MultiPoly:
        if (i, k) not in powers:
            powers[(i, k)] = elem[i] ** k
        return powers[(i, k)]

    rest = p
    out: dict[tuple[int, ...], int] = {}
    while rest:
        lam, c = rest.lex_leading()
        expo = tuple(lam[i] - (lam[i + 1] if i + 1 < n else 0) for i in range(n))
        if any(x < 0 for x in expo):
            raise InconsistencyError("leading exponent is not a partition")
        prod = MultiPoly.constant(n, c)
        for i, k in enumerate(expo):
            if k:
                prod = prod * epow(i, k)
        rest = rest - prod
        out[expo] = out.get(expo, 0) + c
    q = MultiPoly(n, out)
    if verify and q.compose(elem) != p:
        raise InconsistencyError("symmetric reduction failed its substitution check")
    return q


# ---------------------------------------------------------------------------
# generating polynomials


@dataclass(frozen=True)
class GeneratingPolynomial:
    """``F = sum_{i=0}^{r} coeffs[r-i] x^i`` with ``coeffs[0] = 1``.

    ``coeffs[k]`` is ``(-1)^k e_k`` of the orbit of the pre-invariant,
    written in ``a_1..a_d``.
    """

    d: int
    graph: EdgeWeightedGraph
    coeffs: tuple[MultiPoly, ...] = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient_weight(self, k: int) -> int:
        """Every monomial of ``coeffs[k]`` has weighted degree ``k * deg(I)``."""
        return k * self.graph.degree()

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[0] != MultiPoly.constant(self.d, 1):
            raise InconsistencyError("generating polynomial must be monic")


def _check_symbolic_budget(g: EdgeWeightedGraph, r: int) -> None:
    if g.d > SYMBOLIC_MAX_D:
        raise CapabilityError(f"symbolic expansion limited to d <= {SYMBOLIC_MAX_D}")
    top = r * g.degree()
    count = _partitions_bounded(top, g.d)
    if count > SYMBOLIC_MONOMIAL_BUDGET:
        raise CapabilityError(
            f"generating polynomial for {g} has degree {r} and top weight {top} "
            f"({count} possible monomials); above the symbolic budget"
        )


@lru_cache(maxsize=None)
def _partitions_bounded(n: int, k: int) -> int:
    """Number of partitions of ``n`` into parts of size at most ``k``."""
    if n == 0:
        return 1
    if n < 0 or k == 0:
        return 0
    return _partitions_bounded(n, k - 1) + _partitions_bounded(n - k, k)


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _monomial_to_powersums(lam: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """``m_lam`` as a combination of products of power sums ``p_nu``.

    Uses ``prod(mult!) * m_lam = sum_pi mu(pi) prod_B p_{|lam_B|}`` with
    ``mu(pi) = prod (-1)^(|B|-1) (|B|-1)!``.
    """
    parts = [x for x in lam if x]
    denom = 1
    for _, grp in groupby(sorted(parts)):
        denom *= math.factorial(len(list(grp)))
    acc: defaultdict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for part in _set_partitions(list(range(len(parts)))):
        mu = 1
        for block in part:
            mu *= (-1) ** (len(block) - 1) * math.factorial(len(block) - 1)
        nu = tuple(sorted((sum(parts[i] for i in block) for block in part), reverse=True))
        acc[nu] += Fraction(mu, denom)
    return tuple((nu, c) for nu, c in acc.items() if c)


def _power_sums_in_a(d: int, top: int, bits: int) -> list[dict[int, int]]:
    """Power sums ``s_j`` of the roots in terms of ``a_i = e_i``, ``j <= top``."""
    unit = [1 << (bits * i) for i in range(d)]
    s: list[dict[int, int]] = [{0: d}]
    for j in range(1, top + 1):
        acc: dict[int, int] = {}
        for i in range(1, min(j, d) + 1):
            sign = 1 if i % 2 else -1
            if i < j:
                acc = _padd(acc, {k + unit[i - 1]: c for k, c in s[j - i].items()}, sign)
            else:
                acc = _padd(acc, {unit[i - 1]: j}, sign)
        s.append(acc)
    return s


def _eval_powersum_products(terms: dict[tuple[int, ...], Fraction], s: list[dict[int, int]]) -> dict[int, Fraction]:
    """Evaluate ``sum c_nu prod_i s_{nu_i}``; denominators are cleared once up front."""
    den = 1
    for c in terms.values():
        den = math.lcm(den, c.denominator)
    out = _eval_powersum_int({nu: int(c * den) for nu, c in terms.items()}, s)
    return {k: Fraction(v, den) for k, v in out.items() if v}


def _eval_powersum_int(terms: dict[tuple[int, ...], int], s: list[dict[int, int]]) -> dict[int, int]:
    # group by leading index so each s_x multiplies one combined cofactor
    out: dict[int, int] = {}
    groups: defaultdict[int, dict[tuple[int, ...], int]] = defaultdict(dict)
    for nu, c in terms.items():
        if not nu:
            out[0] = out.get(0, 0) + c
        else:
            groups[nu[0]][nu[1:]] = groups[nu[0]].get(nu[1:], 0) + c
    for x, sub in groups.items():
        out = _padd(out, _pmul(s[x], _eval_powersum_int(sub, s)))
    return {k: v for k, v in out.items() if v}


def _orbit_power_sum_terms(g: EdgeWeightedGraph, k: int, stab: int, ipow: dict[int, int],
                           nsupport: int, bits_i: int) -> dict[tuple[int, ...], Fraction]:
    """``P_k = sum over the orbit of sigma(I)^k`` as a power-sum combination."""
    d = g.d
    by_shape: defaultdict[tuple[int, ...], int] = defaultdict(int)
    for key, c in ipow.items():
        lam = tuple(sorted(_unpack(key, nsupport, bits_i), reverse=True))
        by_shape[lam] += c
    out: defaultdict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for lam, c in by_shape.items():
        if not c:
            continue
        full = lam + (0,) * (d - nsupport)
        fix = 1
        for _, grp in groupby(sorted(full)):
            fix *= math.factorial(len(list(grp)))
        coef = Fraction(c * fix, stab)
        for nu, mc in _monomial_to_powersums(lam):
            out[nu] += coef * mc
    return {nu: c for nu, c in out.items() if c}


def generating_polynomial(g: EdgeWeightedGraph) -> GeneratingPolynomial:
    """Symbolic ``F_{G,k}`` through orbit power sums and Newton's identities."""
    stab = stabilizer_order(g)
    r = math.factorial(g.d) // stab
    _check_symbolic_budget(g, r)
    d = g.d
    deg_i = g.degree()
    top = r * deg_i
    bits = _bits_for(top)
    support = g.support()
    relabel = {v: i for i, v in enumerate(support)}
    ns = len(support)
    bits_i = _bits_for(top)
    base = _pre_invariant_packed(g.weights, ns, relabel)
    # repack base with the wider slot so powers cannot overflow
    base = {_pack(_unpack(key, ns, _bits_for(deg_i)), bits_i): c for key, c in base.items()}
    s = _power_sums_in_a(d, top, bits)

    P: list[dict[int, int]] = [{0: r}]
    ipow = {0: 1}
    for k in range(1, r + 1):
        ipow = _pmul(ipow, base)
        terms = _orbit_power_sum_terms(g, k, stab, ipow, ns, bits_i)
        value = _eval_powersum_products(terms, s)
        if any(v.denominator != 1 for v in value.values()):
            raise InconsistencyError(f"orbit power sum P_{k} is not integral")
        P.append({key: int(v) for key, v in value.items()})

    # Newton's identities: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} P_i
    E: list[dict[int, int]] = [{0: 1}]
    for k in range(1, r + 1):
        acc: dict[int, int] = {}
        for i in range(1, k + 1):
            acc = _padd(acc, _pmul(E[k - i], P[i]), 1 if i % 2 else -1)
        quotient = {}
        for key, v in acc.items():
            q, rem = divmod(v, k)
            if rem:
                raise InconsistencyError(f"Newton identity for e_{k} is not integral")
            quotient[key] = q
        E.append(quotient)

    coeffs = []
    for k, ek in enumerate(E):
        sign = -1 if k % 2 else 1
        coeffs.append(MultiPoly._raw(d, {_unpack(key, d, bits): sign * c for key, c in ek.items()}))
    return GeneratingPolynomial(d, g, tuple(coeffs))


def generating_polynomial_direct(g: EdgeWeightedGraph) -> GeneratingPolynomial:
    """``F_{G,k}`` by multiplying orbit factors over ``Z[alpha]`` and reducing at the end.

    Much slower than :func:`generating_polynomial`; meant for small cases.
    """
    if g.d > SYMBOLIC_MAX_D:
        raise CapabilityError(f"symbolic expansion limited to d <= {SYMBOLIC_MAX_D}")
    d = g.d
    factors = [pre_invariant(h) for h in orbit(g)]
    # coefficients of prod (x - I_j), highest power first
    E = [MultiPoly.constant(d, 1)]
    for f in factors:
        nxt = [E[0]]
        for k in range(1, len(E)):
            nxt.append(E[k] - f * E[k - 1])
        nxt.append(-(f * E[-1]))
        E = nxt
    return GeneratingPolynomial(d, g, tuple(elem_sym_reduce(c) for c in E))


# ---------------------------------------------------------------------------
# evaluation at field elements


def evaluate_coefficient(poly: MultiPoly, a: Sequence[FieldElement]) -> FieldElement:
    """Plain field-arithmetic evaluation (slow, but model-agnostic)."""
    model = common_model(a)
    return poly.evaluate(list(a), one=model.one())


def _int_eval(terms: Mapping[tuple[int, ...], int], values: Sequence[int], modulus: int | None = None) -> int:
    """Horner evaluation over the integers, splitting on the first variable.

    With a ``modulus`` (a power of two) every product is reduced modulo it.
    Powers of each value are cached, and terms through a zero value are
    skipped.
    """
    n = len(values)
    live = {e: c for e, c in terms.items() if all(x or not k for x, k in zip(values, e))}
    if not live:
        return 0
    mask = None if modulus is None else modulus - 1
    cache: list[dict[int, int]] = [{1: x} for x in values]

    def power(i: int, k: int) -> int:
        tab = cache[i]
        if k not in tab:
            h = k // 2
            sq = power(i, h) * power(i, k - h)
            tab[k] = sq if mask is None else sq & mask
        return tab[k]

    def mul(acc: int, i: int, k: int) -> int:
        if not k:
            return acc
        out = acc * power(i, k)
        return out if mask is None else out & mask

    def walk(ts: Mapping[tuple[int, ...], int], i: int) -> int:
        if i == n - 1:
            total, prev = 0, None
            for (e,), c in sorted(ts.items(), reverse=True):
                if prev is not None:
                    total = mul(total, i, prev - e)
                total += c
                prev = e
            return mul(total, i, prev)
        groups: defaultdict[int, dict[tuple[int, ...], int]] = defaultdict(dict)
        for e, c in ts.items():
            groups[e[0]][e[1:]] = c
        total, prev = 0, None
        for k in sorted(groups, reverse=True):
            if prev is not None:
                total = mul(total, i, prev - k)
            total += walk(groups[k], i + 1)
            prev = k
        return mul(total, i, prev)

    out = walk(live, 0)
    return out if mask is None else out & mask


def _centered(a: Sequence[FieldElement]) -> list[FieldElement]:
    """Coefficients after translating every root by ``-a_1/d``."""
    d = len(a)
    zero = a[0] * 0
    e = [zero + 1] + list(a)
    minus_beta = a[0] * Fraction(-1, d)
    powers = [zero + 1]
    for _ in range(d):
        powers.append(powers[-1] * minus_beta)
    # e_k(alpha - beta) = sum_j C(d-j, k-j) e_j(alpha) (-beta)^(k-j)
    return [sum((e[j] * powers[k - j] * math.comb(d - j, k - j) for j in range(k + 1)), zero)
            for k in range(1, d + 1)]


class _IntegralForm:
    """Weighted-homogeneous rescaling of ``a`` to integer data.

    For a coefficient of weight ``w`` (``a_i`` has weight ``i``) one has
    ``c(a) = c(a'') / (lam^w s^(-w v))`` where ``a''_i = lam^i s^(-i v) a_i``
    has integer coefficients and nonnegative exponents in ``s = t^(1/q)``.
    """

    def __init__(self, a: Sequence[FieldElement], translation_invariant: bool = False):
        model = common_model(a)
        if translation_invariant and model.kind == "puiseux":
            # moving the centroid of the roots to 0 removes their common leading part
            a = _centered(a)
        self.model = model
        self.n = len(a)
        if model.kind == "padic":
            lam = 1
            for x in a:
                lam = math.lcm(lam, x.value.denominator)
            self.lam = lam
            self.values = [int(x.value * lam ** (i + 1)) for i, x in enumerate(a)]
            self.shift = 0
            self.q = 1
            return
        q = 1
        for x in a:
            for e, _ in x.terms:
                q = math.lcm(q, e.denominator)
        v = None
        for i, x in enumerate(a, start=1):
            if x.is_zero():
                continue
            cand = math.floor(x.val() * q / i)
            v = cand if v is None else min(v, cand)
        v = 0 if v is None else v
        lam = 1
        for x in a:
            for _, c in x.terms:
                lam = math.lcm(lam, c.denominator)
        self.q, self.shift, self.lam = q, v, lam
        self.polys: list[dict[int, int]] = []
        for i, x in enumerate(a, start=1):
            poly = {}
            for e, c in x.terms:
                se = int(e * q) - i * v
                poly[se] = int(c * lam**i)
            self.polys.append(poly)

    def valuation(self, poly: MultiPoly, weight: int) -> TropVal:
        if not poly:
            return INF
        if self.model.kind == "padic":
            value = _int_eval(poly._terms, self.values)
            if value == 0:
                return INF
            p = self.model.p
            return Fraction(ord_p(value, p) - weight * ord_p(self.lam, p))
        norms = [sum(abs(c) for c in pl.values()) for pl in self.polys]
        bound = _int_eval({e: abs(c) for e, c in poly._terms.items()}, norms)
        bits = bound.bit_length() + 2
        xs = [_big(sum(c << (bits * e) for e, c in pl.items())) for pl in self.polys]
        degs = [max(pl, default=0) for pl in self.polys]
        top = max(sum(k * x for k, x in zip(degs, e)) for e in poly._terms) + 1
        # the lowest s-power survives reduction modulo s^N = 2^(bits N) once N exceeds it
        slots = 16
        while True:
            slots = min(slots, top)
            modulus = _big(1) << (bits * slots)
            value = _int_eval(poly._terms, [x & (modulus - 1) for x in xs], modulus)
            if value or slots == top:
                break
            slots *= 2
        if value == 0:
            return INF
        v2 = (int(value) & -int(value)).bit_length() - 1
        s_val = v2 // bits + weight * self.shift
        return Fraction(s_val, self.q)


def tropical_valuation(poly: MultiPoly, a: Sequence[FieldElement], weight: int) -> TropVal:
    """``val(poly(a))`` for a polynomial whose monomials all have weight ``weight``.

    Exact: the Puiseux case substitutes a power of two for ``t^(1/q)``
    large enough that no carries occur, so the lowest nonzero coefficient
    is read off the 2-adic valuation of a single integer.
    """
    return _IntegralForm(a).valuation(poly, weight)


def evaluate_tropical_invariants(F: GeneratingPolynomial, a: Sequence[FieldElement]) -> list[TropVal]:
    """``[val(coeffs[k](a)) for k = 0..r]``; ``b[0] = 0`` since ``F`` is monic."""
    if len(a) != F.d:
        raise InputError(f"expected {F.d} coefficients, got {len(a)}")
    form = _IntegralForm(a, translation_invariant=True)
    return [form.valuation(c, F.coefficient_weight(k)) for k, c in enumerate(F.coeffs)]
