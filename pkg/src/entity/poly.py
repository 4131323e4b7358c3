from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import BasePolynomialError

from src.services.exceptions import DomainError, ParseError, RingMismatch

Monomial = tuple[int, ...]


def monomial_degree(mono: Monomial) -> int:
    return sum(mono)


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class PolyRing:
    """Q[x1..xn] with printable variable names."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names or len(set(self.names)) != len(self.names):
            raise DomainError("a ring needs distinct variable names")

    @classmethod
    def of(cls, n_or_names) -> "PolyRing":
        if isinstance(n_or_names, int):
            return cls(tuple(f"x{i}" for i in range(1, n_or_names + 1)))
        return cls(tuple(n_or_names))

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def symbols(self) -> tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.names)

    def zero(self) -> "Poly":
        return Poly(self, ())

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c) -> "Poly":
        return self.monomial((0,) * self.n, c)

    def monomial(self, mono: Monomial, c=1) -> "Poly":
        return Poly.from_dict(self, {tuple(mono): Fraction(c)})

    def var(self, i: int) -> "Poly":
        mono = [0] * self.n
        mono[i] = 1
        return self.monomial(tuple(mono))

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.n)]

    def parse(self, text: str) -> "Poly":
        """
        Parses ``3/2*x1^2*x2 - x3 + 1`` into a polynomial of this ring.

        Args:
        - text (str): The polynomial; ``^`` and ``**`` both mean powers.

        Returns:
        - Poly: The polynomial with exact rational coefficients.
        """
        local = dict(zip(self.names, self.symbols))
        try:
            expr = parse_expr(text, local_dict=local, transformations=standard_transformations + (convert_xor,))
            poly = sympy.Poly(expr, *self.symbols, domain="QQ")
        except (SyntaxError, TypeError, ValueError, sympy.SympifyError, BasePolynomialError) as err:
            raise ParseError(f"cannot parse polynomial {text!r}: {err}") from err
        return Poly.from_dict(self, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


@dataclass(frozen=True)
class Poly:
    """
    A sparse polynomial: (exponent vector, nonzero rational) pairs sorted by
    descending grlex order, so the first term is the leading term.
    """

    ring: PolyRing
    terms: tuple[tuple[Monomial, Fraction], ...]

    @classmethod
    def from_dict(cls, ring: PolyRing, coefficients: dict[Monomial, Fraction]) -> "Poly":
        for mono in coefficients:
            if len(mono) != ring.n or any(e < 0 for e in mono):
                raise DomainError(f"{mono} is not a monomial of {ring.names}")
        items = [(m, Fraction(c)) for m, c in coefficients.items() if c]
        items.sort(key=lambda t: grlex(t[0]), reverse=True)
        return cls(ring, tuple(items))

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring.names} and {other.ring.names} are different rings")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        total = self.as_dict()
        for m, c in other.terms:
            total[m] = total.get(m, 0) + c
        return Poly.from_dict(self.ring, total)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        total: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = monomial_product(m1, m2)
                total[m] = total.get(m, 0) + c1 * c2
        return Poly.from_dict(self.ring, total)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise DomainError("negative powers are not polynomials")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, tuple((m, v * c) for m, v in self.terms))

    def shift(self, mono: Monomial) -> "Poly":
        return Poly(self.ring, tuple((monomial_product(m, mono), c) for m, c in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(monomial_degree(m) == 0 for m, _ in self.terms)

    def total_degree(self) -> int:
        """-1 for the zero polynomial."""
        return max((monomial_degree(m) for m, _ in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m, _ in self.terms), default=-1)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.as_dict().get(tuple(mono), Fraction(0))

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.terms]

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise DomainError("the zero polynomial has no leading monomial")
        return self.terms[0][0]

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            raise DomainError("the zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def monic(self) -> "Poly":
        return self.scale(1 / self.leading_coefficient())

    def substitute(self, i: int, value: "Poly") -> "Poly":
        """Replaces variable ``i`` (0-based) by ``value``."""
        self._check(value)
        result = self.ring.zero()
        for m, c in self.terms:
            rest = list(m)
            rest[i] = 0
            result = result + self.ring.monomial(tuple(rest), c) * value ** m[i]
        return result

    def evaluate(self, point: Iterable) -> Fraction:
        point = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms:
            term = c
            for v, e in zip(point, m):
                term *= v**e
            total += term
        return total

    def to_sympy(self) -> sympy.Expr:
        return sympy.Poly.from_dict(
            {m: sympy.Rational(c.numerator, c.denominator) for m, c in self.terms} or {(0,) * self.ring.n: 0},
            *self.ring.symbols,
        ).as_expr()

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(c)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()!r})"


def parse_system(ring: PolyRing, texts: Iterable[str]) -> list[Poly]:
    return [ring.parse(text) for text in texts]


def max_degree(polys: Iterable[Poly]) -> int:
    return max((p.total_degree() for p in polys), default=-1)
