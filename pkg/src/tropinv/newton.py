"""Newton polygons over the tropical semiring and Newton half-space predicates.

A polynomial ``F = sum_{k} c_k x^(r-k)`` with ``b_k = val(c_k)`` is encoded
as the vector ``b``; its Newton points are ``P_i = (i, b_{r-i})``, so ``P_i``
sits above the exponent ``i`` of ``x``.  A segment of slope ``s`` and
horizontal length ``m`` accounts for ``m`` roots of valuation ``-s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, InputError
from .valued_field import INF, TropVal, format_trop

__all__ = [
    "NEGATIVE",
    "NewtonInput",
    "NewtonPolygon",
    "lower_hull",
    "delta",
    "halfspace_contains",
    "moduli_membership",
    "polygon_from_root_valuations",
]


class _NegativeFlag:
    """Marker for a Delta whose line passes through a point at infinity.

    It stands for "some negative number": it fails every ``>= 0`` and
    ``> 0`` test and nothing else is ever asked of it.
    """

    def __repr__(self) -> str:
        return "NEGATIVE"

    def __reduce__(self):
        return (_negative, ())


def _negative() -> "_NegativeFlag":
    return NEGATIVE


NEGATIVE = _NegativeFlag()


@dataclass(frozen=True)
class NewtonInput:
    """Valuations ``b_0..b_r`` of the coefficients ``c_0..c_r`` (``c_k`` multiplies ``x^(r-k)``)."""

    b: tuple[TropVal, ...]

    def __init__(self, b: Iterable[TropVal]):
        vals = []
        for x in b:
            if x is INF:
                vals.append(INF)
            elif isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                vals.append(Fraction(x))
            else:
                raise InputError(f"valuations are rationals or INF, got {x!r}")
        if len(vals) < 2:
            raise InputError("need at least two coefficients")
        object.__setattr__(self, "b", tuple(vals))

    @property
    def r(self) -> int:
        return len(self.b) - 1

    def point(self, i: int) -> TropVal:
        """Height of ``P_i``, i.e. ``b_{r-i}``."""
        return self.b[self.r - i]

    def points(self) -> list[tuple[int, TropVal]]:
        return [(i, self.point(i)) for i in range(self.r + 1)]

    def scaled(self, factor: Fraction) -> "NewtonInput":
        return NewtonInput(x if x is INF else x * factor for x in self.b)

    def shifted(self, amount: Fraction) -> "NewtonInput":
        return NewtonInput(x if x is INF else x + amount for x in self.b)


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the finite Newton points.

    ``hull_points`` lists every finite point on the hull (collinear ones
    included); ``vertices`` keeps only the essential corners, with both
    endpoints.  ``segments`` holds ``(slope, multiplicity)`` left to right.
    """

    r: int
    hull_points: tuple[tuple[int, Fraction], ...]
    vertices: tuple[tuple[int, Fraction], ...]
    segments: tuple[tuple[Fraction, int], ...]

    @property
    def vertex_indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.vertices)

    def root_valuations(self) -> list[Fraction]:
        """Valuations of the roots, with multiplicity, in increasing order."""
        out: list[Fraction] = []
        for slope, mult in reversed(self.segments):
            out.extend([-slope] * mult)
        return out

    def minimal_segment(self) -> tuple[Fraction, int]:
        """``(smallest root valuation, its multiplicity)``: the rightmost segment."""
        slope, mult = self.segments[-1]
        return -slope, mult

    def to_json(self) -> dict:
        return {
            "vertices": [[i, format_trop(y)] for i, y in self.vertices],
            "segments": [{"slope": format_trop(s), "mult": m} for s, m in self.segments],
        }


def _cross(o: tuple[int, Fraction], a: tuple[int, Fraction], b: tuple[int, Fraction]) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(inp: NewtonInput) -> NewtonPolygon:
    """Exact lower convex hull (Andrew's monotone chain, lower half only)."""
    pts = [(i, y) for i, y in inp.points() if y is not INF]
    if not pts:
        raise DomainError("all coefficients have infinite valuation")
    chain: list[tuple[int, Fraction]] = []
    for p in pts:
        # pop only strict non-left turns so collinear points survive on the hull
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) < 0:
            chain.pop()
        chain.append(p)
    # drop collinear points that are above the chord (cannot happen) and keep order
    hull = tuple(chain)
    vertices = [hull[0]]
    for k in range(1, len(hull) - 1):
        if _cross(hull[k - 1], hull[k], hull[k + 1]) != 0:
            vertices.append(hull[k])
    if len(hull) > 1:
        vertices.append(hull[-1])
    segments = []
    for (i, y), (j, z) in zip(vertices, vertices[1:]):
        segments.append((Fraction(z - y) / (j - i), j - i))
    return NewtonPolygon(inp.r, hull, tuple(vertices), tuple(segments))


def delta(k: int, i: int, j: int, inp: NewtonInput) -> TropVal | _NegativeFlag:
    """``b_{r-k} - h(k)`` where ``h`` is the line through ``P_i`` and ``P_j``."""
    if i == j:
        raise InputError("delta needs two distinct points")
    yi, yj = inp.point(i), inp.point(j)
    if yi is INF or yj is INF:
        return NEGATIVE
    yk = inp.point(k)
    if yk is INF:
        return INF
    return yk - (yi + (yj - yi) * Fraction(k - i, j - i))


def _nonneg(x: TropVal | _NegativeFlag) -> bool:
    return x is not NEGATIVE and (x is INF or x >= 0)


def _positive(x: TropVal | _NegativeFlag) -> bool:
    return x is not NEGATIVE and (x is INF or x > 0)


def halfspace_contains(i: int, j: int, inp: NewtonInput) -> bool:
    """Membership in ``I(P_i, P_j)``: ``Delta_k >= 0`` for ``i <= k <= j``, ``> 0`` for ``k < i``."""
    if not 0 <= i < j <= inp.r:
        raise InputError(f"need 0 <= i < j <= r, got i={i}, j={j}, r={inp.r}")
    if not all(_nonneg(delta(k, i, j, inp)) for k in range(i, j + 1)):
        return False
    return all(_positive(delta(k, i, j, inp)) for k in range(i))


def moduli_membership(reference: NewtonPolygon, inp: NewtonInput) -> bool:
    """Is ``inp`` in the intersection of the half-spaces of consecutive essential vertices?"""
    if reference.r != inp.r:
        raise InputError("reference and input have different degrees")
    idx = reference.vertex_indices
    return all(halfspace_contains(a, b, inp) for a, b in zip(idx, idx[1:]))


def polygon_from_root_valuations(vals: Sequence[TropVal]) -> NewtonPolygon:
    """Newton polygon of a monic polynomial with roots of the given valuations."""
    v = sorted(vals)
    r = len(v)
    b: list[TropVal] = [Fraction(0)]
    for k in range(1, r + 1):
        b.append(b[-1] + v[k - 1])
    return lower_hull(NewtonInput(b))
