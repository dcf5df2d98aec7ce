"""Sparse multivariate polynomials with arbitrary-precision integer coefficients."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping, Sequence, TypeVar

from .errors import InputError

Exponent = tuple[int, ...]
R = TypeVar("R")


def grlex_key(e: Exponent) -> tuple[int, Exponent]:
    """Sort key for graded-lex order; larger keys come first when iterating."""
    return (sum(e), e)


class MultiPoly:
    """An immutable polynomial in ``nvars`` variables over the integers.

    Terms are stored as ``{exponent tuple: nonzero int}``.  Iteration,
    printing and equality are canonical: terms are visited in decreasing
    graded-lex order.

    >>> x, y = MultiPoly.variables(2)
    >>> str((x - y) ** 2)
    'x1^2 - 2*x1*x2 + x2^2'
    """

    __slots__ = ("nvars", "_terms", "_sorted")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        if nvars < 0:
            raise InputError("variable count must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise InputError(f"bad exponent {e} for {nvars} variables")
            if not isinstance(c, int) or isinstance(c, bool):
                raise InputError(f"coefficients must be integers, got {c!r}")
            acc[e] = acc.get(e, 0) + c
        self.nvars = nvars
        self._terms = {e: c for e, c in acc.items() if c}
        self._sorted: list[Exponent] | None = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, int]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._sorted = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "MultiPoly":
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        """The ``i``-th variable, 0-based."""
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def variables(cls, nvars: int) -> list["MultiPoly"]:
        return [cls.variable(nvars, i) for i in range(nvars)]

    @classmethod
    def elementary(cls, nvars: int, k: int) -> "MultiPoly":
        """The elementary symmetric polynomial ``e_k`` in ``nvars`` variables."""
        from itertools import combinations

        terms = {}
        for idx in combinations(range(nvars), k):
            e = [0] * nvars
            for i in idx:
                e[i] = 1
            terms[tuple(e)] = 1
        return cls._raw(nvars, terms)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, int]:
        """A copy of the term dictionary."""
        return dict(self._terms)

    def sorted_exponents(self) -> list[Exponent]:
        if self._sorted is None:
            self._sorted = sorted(self._terms, key=grlex_key, reverse=True)
        return self._sorted

    def items(self) -> Iterator[tuple[Exponent, int]]:
        for e in self.sorted_exponents():
            yield e, self._terms[e]

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return self.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, e: Exponent) -> int:
        return self._terms.get(tuple(e), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {sum(w * x for w, x in zip(weights, e)) for e in self._terms}

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.nvars}

    def lex_leading(self) -> tuple[Exponent, int]:
        e = max(self._terms)
        return e, self._terms[e]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if other.nvars != self.nvars:
            raise InputError(f"variable counts differ: {self.nvars} vs {other.nvars}")

    def _lift(self, other: object) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other: object) -> "MultiPoly":
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in o._terms.items():
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return MultiPoly._raw(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "MultiPoly":
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "MultiPoly":
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "MultiPoly":
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                return MultiPoly.zero(self.nvars)
            return MultiPoly._raw(self.nvars, {e: c * other for e, c in self._terms.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        acc: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise InputError("only nonnegative integer powers are supported")
        result, base = MultiPoly.constant(self.nvars, 1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div_scalar(self, k: int) -> "MultiPoly":
        """Divide every coefficient by ``k``; raises if any division is inexact."""
        out = {}
        for e, c in self._terms.items():
            q, r = divmod(c, k)
            if r:
                raise ArithmeticError(f"coefficient {c} not divisible by {k}")
            out[e] = q
        return MultiPoly._raw(self.nvars, out)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self._terms == MultiPoly.constant(self.nvars, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    # -- structural operations -------------------------------------------

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Substitute ``x_i -> x_{perm[i]}`` (0-based)."""
        out: dict[Exponent, int] = {}
        n = self.nvars
        for e, c in self._terms.items():
            f = [0] * n
            for i, x in enumerate(e):
                f[perm[i]] += x
            out[tuple(f)] = c
        return MultiPoly._raw(n, out)

    def is_symmetric(self) -> bool:
        """Invariance under the transposition (1 2) and the cycle (1 2 ... n)."""
        n = self.nvars
        if n < 2:
            return True
        swap = [1, 0] + list(range(2, n))
        cycle = [(i + 1) % n for i in range(n)]
        return self.permute(swap) == self and self.permute(cycle) == self

    def evaluate(self, values: Sequence[R], one: R | None = None) -> R:
        """Evaluate at ``values`` in any commutative ring supporting ``+``, ``*``, ``**``.

        Powers of each variable are cached; the sum starts from ``0 * one``
        so that the result lands in the ring of ``values``.
        """
        if len(values) != self.nvars:
            raise InputError(f"expected {self.nvars} values, got {len(values)}")
        if one is None:
            one = values[0] ** 0 if values else 1
        powers: list[dict[int, R]] = [{0: one} for _ in range(self.nvars)]

        def power(i: int, k: int) -> R:
            cache = powers[i]
            if k not in cache:
                cache[k] = values[i] ** k
            return cache[k]

        total = one * 0
        for e, c in self._terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def compose(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``x_i -> polys[i]`` (all in the same target ring)."""
        if not polys:
            raise InputError("compose needs at least one target polynomial")
        n = polys[0].nvars
        return self.evaluate(list(polys), one=MultiPoly.constant(n, 1))

    def map_coefficients(self, fn: Callable[[int], int]) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self._terms.items()})

    # -- text ----------------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        out: list[str] = []
        for k, (e, c) in enumerate(self.items()):
            factors = [n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if k == 0:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {len(self)} terms)"
