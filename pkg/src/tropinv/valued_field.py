"""Exact valued-field arithmetic.

Two models are supported:

* :class:`PuiseuxElement` -- finite sums ``sum c_e t^e`` with rational
  exponents and rational coefficients, valued by the smallest exponent.
* :class:`PAdicRational` -- rational numbers with the ``p``-adic valuation.

Valuations live in the tropical semiring ``Q u {oo}``.  Finite values are
:class:`fractions.Fraction`; the point at infinity is the singleton
:data:`INF`, which compares above every rational and absorbs addition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

from .errors import InputError, ModelMismatchError, ParseError

__all__ = [
    "INF",
    "Infinity",
    "TropVal",
    "FieldModel",
    "PUISEUX",
    "PuiseuxElement",
    "PAdicRational",
    "FieldElement",
    "val",
    "trop_min",
    "trop_add",
    "is_inf",
    "parse_trop",
    "format_trop",
    "parse_rational",
    "parse_element",
    "format_element",
    "ord_p",
    "is_prime",
]


# ---------------------------------------------------------------------------
# tropical semiring


@total_ordering
class Infinity:
    """The absorbing element of the tropical semiring."""

    _instance: "Infinity | None" = None

    def __new__(cls) -> "Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self) -> int:
        return hash("tropinv.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __add__(self, other: object) -> "Infinity":
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other: object) -> "Infinity":
        # positive scaling only; used for rescaling valuation vectors
        if isinstance(other, (int, Fraction)) and other > 0:
            return self
        return NotImplemented

    __rmul__ = __mul__


INF = Infinity()

TropVal = Union[Fraction, Infinity]


def is_inf(x: object) -> bool:
    return x is INF


def trop_min(*values: TropVal) -> TropVal:
    """Tropical sum: the minimum, with ``INF`` as identity."""
    best: TropVal = INF
    for v in values:
        if v < best:
            best = v
    return best


def trop_add(a: TropVal, b: TropVal) -> TropVal:
    """Tropical product: ordinary addition, with ``INF`` absorbing."""
    if a is INF or b is INF:
        return INF
    return Fraction(a) + Fraction(b)


_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` exactly; decimals and floats are rejected."""
    m = _RATIONAL_RE.match(text.replace("−", "-"))
    if not m:
        col = next((i + 1 for i, ch in enumerate(text) if not (ch.isdigit() or ch in " +-/−")), 1)
        raise ParseError(f"malformed rational {text!r}", column=col)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}", column=text.index("/") + 2)
    return Fraction(num, den)


def parse_trop(text: str) -> TropVal:
    s = text.strip().lower()
    if s in ("inf", "oo", "∞", "+inf"):
        return INF
    return parse_rational(text)


def format_trop(x: TropVal) -> str:
    return "inf" if x is INF else str(Fraction(x))


# ---------------------------------------------------------------------------
# number theory helpers


def ord_p(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    n = abs(n)
    k = 0
    # strip large powers first so huge integers stay cheap
    pw, step = p, 1
    while n % pw == 0:
        n //= pw
        k += step
        pw, step = pw * pw, step * 2
    while n % p == 0:
        n //= p
        k += 1
    return k


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for ``n < 3.3e24``; probable-prime above."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# field models


@dataclass(frozen=True)
class FieldModel:
    """Descriptor of a field model: ``kind`` is ``"puiseux"`` or ``"padic"``."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "puiseux":
            if self.p is not None:
                raise InputError("the Puiseux model takes no prime")
        elif self.kind == "padic":
            if self.p is None or not is_prime(self.p):
                raise InputError(f"p-adic model needs a prime, got {self.p!r}")
        else:
            raise InputError(f"unknown field model {self.kind!r}")

    def __str__(self) -> str:
        return "puiseux" if self.kind == "puiseux" else f"padic:{self.p}"

    def from_rational(self, q: int | Fraction) -> "FieldElement":
        if self.kind == "puiseux":
            return PuiseuxElement.constant(q)
        return PAdicRational(q, self.p)

    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    def one(self) -> "FieldElement":
        return self.from_rational(1)


PUISEUX = FieldModel("puiseux")

Scalar = Union[int, Fraction]


class PuiseuxElement:
    """A finite Puiseux sum over ``Q`` in the variable ``t``.

    >>> x = PuiseuxElement.parse("1 + 2*t^(3/2)")
    >>> x.val(), str(x * x)
    (Fraction(0, 1), '1 + 4*t^(3/2) + 4*t^3')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Scalar, Scalar] | Iterable[tuple[Scalar, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e, c = Fraction(e), Fraction(c)
            acc[e] = acc.get(e, Fraction(0)) + c
        self._terms: tuple[tuple[Fraction, Fraction], ...] = tuple(
            sorted((e, c) for e, c in acc.items() if c)
        )
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: tuple[tuple[Fraction, Fraction], ...]) -> "PuiseuxElement":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "PuiseuxElement":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Scalar, e: Scalar) -> "PuiseuxElement":
        return cls({e: c})

    @property
    def model(self) -> FieldModel:
        return PUISEUX

    @property
    def terms(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """``(exponent, coefficient)`` pairs in increasing exponent order."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def val(self) -> TropVal:
        return self._terms[0][0] if self._terms else INF

    def leading_coefficient(self) -> Fraction:
        return self._terms[0][1] if self._terms else Fraction(0)

    # -- ring structure -------------------------------------------------

    def _coerce(self, other: object) -> "PuiseuxElement":
        if isinstance(other, PuiseuxElement):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PuiseuxElement.constant(other)
        if isinstance(other, PAdicRational):
            raise ModelMismatchError("cannot combine Puiseux and p-adic elements")
        return NotImplemented

    def __add__(self, other: object) -> "PuiseuxElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in o._terms:
            acc[e] = acc.get(e, 0) + c
        return PuiseuxElement._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxElement":
        return PuiseuxElement._raw(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other: object) -> "PuiseuxElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "PuiseuxElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "PuiseuxElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in o._terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return PuiseuxElement._raw(tuple(sorted((e, c) for e, c in acc.items() if c)))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PuiseuxElement":
        if not isinstance(n, int) or n < 0:
            raise InputError("only nonnegative integer powers are supported")
        result, base = PuiseuxElement.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PuiseuxElement):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == PuiseuxElement.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("puiseux", self._terms))
        return self._hash

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (e, c) in enumerate(self._terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                tpow = "t" if e == 1 else (f"t^{e}" if e.denominator == 1 and e > 0 else f"t^({e})")
                body = tpow if mag == 1 else f"{mag}*{tpow}"
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"PuiseuxElement({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "PuiseuxElement":
        return _PuiseuxParser(text).parse()


class _PuiseuxParser:
    """Recursive-descent parser for ``c*t^(e)`` sums joined by ``+``/``-``."""

    _num = re.compile(r"\d+(?:/\d+)?")

    def __init__(self, text: str):
        self.text = text.replace("−", "-")
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _fail(self, msg: str) -> None:
        raise ParseError(msg, column=self.pos + 1)

    def _number(self) -> Fraction:
        self._skip()
        m = self._num.match(self.text, self.pos)
        if not m:
            self._fail("expected a number")
        self.pos = m.end()
        num, _, den = m.group().partition("/")
        if den and int(den) == 0:
            self._fail("zero denominator")
        return Fraction(int(num), int(den) if den else 1)

    def _exponent(self) -> Fraction:
        if self._peek() == "(":
            self.pos += 1
            sign = 1
            if self._peek() in ("+", "-"):
                sign = -1 if self.text[self.pos] == "-" else 1
                self.pos += 1
            e = sign * self._number()
            if self._peek() != ")":
                self._fail("expected ')'")
            self.pos += 1
            return e
        return self._number()

    def _term(self) -> tuple[Fraction, Fraction]:
        coef, exp = Fraction(1), Fraction(0)
        ch = self._peek()
        if ch.isdigit():
            coef = self._number()
            if self._peek() == "*":
                self.pos += 1
                if self._peek() != "t":
                    self._fail("expected 't'")
            elif self._peek() != "t":
                return exp, coef
        if self._peek() == "t":
            self.pos += 1
            exp = Fraction(1)
            if self._peek() == "^":
                self.pos += 1
                exp = self._exponent()
        else:
            self._fail("expected a term")
        return exp, coef

    def parse(self) -> PuiseuxElement:
        terms: list[tuple[Fraction, Fraction]] = []
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        while True:
            e, c = self._term()
            terms.append((e, sign * c))
            ch = self._peek()
            if ch == "":
                break
            if ch not in "+-":
                self._fail(f"unexpected {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return PuiseuxElement(terms)


class PAdicRational:
    """A rational number valued ``p``-adically."""

    __slots__ = ("value", "p")

    def __init__(self, value: Scalar, p: int):
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise InputError(f"p-adic elements are built from rationals, got {value!r}")
        self.value = Fraction(value)
        self.p = p

    @property
    def model(self) -> FieldModel:
        return FieldModel("padic", self.p)

    def is_zero(self) -> bool:
        return self.value == 0

    def val(self) -> TropVal:
        if self.value == 0:
            return INF
        return Fraction(ord_p(self.value.numerator, self.p) - ord_p(self.value.denominator, self.p))

    def _coerce(self, other: object) -> "PAdicRational":
        if isinstance(other, PAdicRational):
            if other.p != self.p:
                raise ModelMismatchError(f"primes differ: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PAdicRational(other, self.p)
        if isinstance(other, PuiseuxElement):
            raise ModelMismatchError("cannot combine Puiseux and p-adic elements")
        return NotImplemented

    def __add__(self, other: object) -> "PAdicRational":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PAdicRational(self.value + o.value, self.p)

    __radd__ = __add__

    def __neg__(self) -> "PAdicRational":
        return PAdicRational(-self.value, self.p)

    def __sub__(self, other: object) -> "PAdicRational":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PAdicRational(self.value - o.value, self.p)

    def __rsub__(self, other: object) -> "PAdicRational":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PAdicRational(o.value - self.value, self.p)

    def __mul__(self, other: object) -> "PAdicRational":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PAdicRational(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PAdicRational":
        if not isinstance(n, int) or n < 0:
            raise InputError("only nonnegative integer powers are supported")
        return PAdicRational(self.value**n, self.p)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PAdicRational):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("padic", self.p, self.value))

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"PAdicRational({str(self.value)!r}, p={self.p})"

    @classmethod
    def parse(cls, text: str, p: int) -> "PAdicRational":
        return cls(parse_rational(text), p)


FieldElement = Union[PuiseuxElement, PAdicRational]


def val(x: FieldElement) -> TropVal:
    """Exact valuation of a field element; ``INF`` exactly for zero."""
    return x.val()


def parse_element(text: str, model: FieldModel = PUISEUX) -> FieldElement:
    if model.kind == "puiseux":
        return PuiseuxElement.parse(text)
    return PAdicRational.parse(text, model.p)


def format_element(x: FieldElement) -> str:
    return str(x)


def common_model(elements: Iterable[FieldElement]) -> FieldModel:
    """The shared model of ``elements``; mixing models is an input error."""
    models = {x.model for x in elements}
    if len(models) != 1:
        raise ModelMismatchError(f"elements span several field models: {sorted(map(str, models))}")
    return models.pop()
