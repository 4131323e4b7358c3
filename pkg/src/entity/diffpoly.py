from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.polyerrors import BasePolynomialError

from src.entity.derivative import Derivative, RankSeq, Ranking, get_ranking
from src.entity.poly import Poly, PolyRing
from src.services.exceptions import DomainError, ParseError, RingMismatch

# ((ranking index, exponent), ...) sorted by ranking index
DiffMonomial = tuple[tuple[int, int], ...]

_OPERATOR = re.compile(r"d(\d+)(?:\^(\d+))?")


def _normalize(pairs: Iterable[tuple[int, int]]) -> DiffMonomial:
    merged: dict[int, int] = {}
    for index, e in pairs:
        if e:
            merged[index] = merged.get(index, 0) + e
    return tuple(sorted(merged.items()))


def _term_key(mono: DiffMonomial):
    return sum(e for _, e in mono), tuple(reversed(mono))


@dataclass(frozen=True)
class DiffRing:
    """K{X_1..X_n} with m commuting derivations and the orderly ranking."""

    n: int
    m: int
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise DomainError("a differential ring needs n >= 1 indeterminates and m >= 0 derivations")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(1, self.n + 1)))
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(names) != self.n or len(set(names)) != self.n:
            raise DomainError(f"expected {self.n} distinct indeterminate names, got {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_]\w*", name) or _OPERATOR.fullmatch(name):
                raise DomainError(f"{name!r} cannot name an indeterminate")

    @property
    def ranking(self) -> Ranking:
        return get_ranking(self.n, self.m)

    @cached_property
    def _atom(self) -> re.Pattern:
        alternatives = "|".join(re.escape(name) for name in sorted(self.names, key=len, reverse=True))
        return re.compile(rf"((?:\bd\d+(?:\^\d+)?\s+)*)\b({alternatives})\b")

    def zero(self) -> "DiffPoly":
        return DiffPoly(self, ())

    def one(self) -> "DiffPoly":
        return self.constant(1)

    def constant(self, c) -> "DiffPoly":
        return DiffPoly.from_dict(self, {(): Fraction(c)})

    def variable(self, u: Derivative | int) -> "DiffPoly":
        index = u if isinstance(u, int) else self.ranking.index(u)
        return DiffPoly.from_dict(self, {((index, 1),): Fraction(1)})

    def indeterminate(self, i: int) -> "DiffPoly":
        """X_i, 1-based."""
        return self.variable(Derivative(i, (0,) * self.m))

    def derivative(self, i: int, *theta: int) -> "DiffPoly":
        return self.variable(Derivative(i, tuple(theta) or (0,) * self.m))

    def format_derivative(self, index: int) -> str:
        return self.ranking.derivative(index).format(self.names)

    def _parse_atom(self, operators: str, name: str) -> int:
        exponents = [0] * self.m
        for match in _OPERATOR.finditer(operators):
            i = int(match.group(1))
            if not 1 <= i <= self.m:
                raise ParseError(f"derivation d{i} does not exist with m={self.m}")
            exponents[i - 1] += int(match.group(2) or 1)
        return self.ranking.index(Derivative(self.names.index(name) + 1, tuple(exponents)))

    def parse(self, text: str) -> "DiffPoly":
        """
        Parses ``2/3 * (d1 x1)^2 * x2 - d2 x1``.

        A derivative is written as its derivation operators followed by the
        indeterminate name, ``d1^2 d2 x3`` for delta_1^2 delta_2 X_3; an
        operator prefix binds tighter than ``^``, so ``d1 x^2`` is (d1 x)^2.

        Args:
        - text (str): The differential polynomial.

        Returns:
        - DiffPoly: The parsed polynomial.
        """
        indices: dict[int, sympy.Symbol] = {}

        def substitute(match: re.Match) -> str:
            index = self._parse_atom(match.group(1), match.group(2))
            indices.setdefault(index, sympy.Symbol(f"_z{index}"))
            return f" _z{index} "

        rewritten = self._atom.sub(substitute, text)
        order = sorted(indices)
        symbols = [indices[i] for i in order] + [sympy.Symbol("_z0")]
        local = {str(s): s for s in symbols}
        try:
            expr = parse_expr(rewritten, local_dict=local, transformations=standard_transformations + (convert_xor,))
            poly = sympy.Poly(expr, *symbols, domain="QQ")
        except (SyntaxError, TypeError, ValueError, sympy.SympifyError, BasePolynomialError) as err:
            raise ParseError(f"cannot parse differential polynomial {text!r}: {err}") from err
        coefficients = {}
        for exps, c in poly.terms():
            mono = _normalize(zip(order, exps[:-1]))
            coefficients[mono] = Fraction(int(c.p), int(c.q))
        return DiffPoly.from_dict(self, coefficients)


@dataclass(frozen=True)
class DiffPoly:
    """
    A differential polynomial: a sparse polynomial in the derivatives Z_k,
    k being the orderly ranking index of the derivative.
    """

    ring: DiffRing
    terms: tuple[tuple[DiffMonomial, Fraction], ...]

    @classmethod
    def from_dict(cls, ring: DiffRing, coefficients: dict[DiffMonomial, Fraction]) -> "DiffPoly":
        items = [(m, Fraction(c)) for m, c in coefficients.items() if c]
        items.sort(key=lambda t: _term_key(t[0]), reverse=True)
        return cls(ring, tuple(items))

    def as_dict(self) -> dict[DiffMonomial, Fraction]:
        return dict(self.terms)

    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            if other.ring != self.ring:
                raise RingMismatch("differential polynomials from different rings were combined")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        total = self.as_dict()
        for m, c in other.terms:
            total[m] = total.get(m, 0) + c
        return DiffPoly.from_dict(self.ring, total)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.ring, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "DiffPoly":
        return (-self) + other

    def __mul__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        total: dict[DiffMonomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _normalize(m1 + m2)
                total[m] = total.get(m, 0) + c1 * c2
        return DiffPoly.from_dict(self.ring, total)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DiffPoly":
        if k < 0:
            raise DomainError("negative powers are not polynomials")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m, _ in self.terms)

    def total_degree(self) -> int:
        """-1 for the zero polynomial."""
        return max((sum(e for _, e in m) for m, _ in self.terms), default=-1)

    def indices(self) -> set[int]:
        return {index for m, _ in self.terms for index, _ in m}

    def derivatives(self) -> list[Derivative]:
        ranking = self.ring.ranking
        return [ranking.derivative(i) for i in sorted(self.indices())]

    def max_index(self) -> int:
        """The largest ranking index occurring, 0 for constants."""
        return max(self.indices(), default=0)

    def bound(self) -> int:
        """Least b with self in K{X}_{<=b}."""
        return max(self.max_index(), self.total_degree(), 0)

    def degree_in(self, index: int) -> int:
        return max((dict(m).get(index, 0) for m, _ in self.terms), default=-1)

    def coefficient_in(self, index: int, k: int) -> "DiffPoly":
        """The coefficient of Z_index^k, as a polynomial free of Z_index."""
        total = {}
        for m, c in self.terms:
            powers = dict(m)
            if powers.get(index, 0) == k:
                powers.pop(index, None)
                total[_normalize(powers.items())] = c
        return DiffPoly.from_dict(self.ring, total)

    def partial(self, index: int) -> "DiffPoly":
        """The formal partial derivative with respect to Z_index."""
        total: dict[DiffMonomial, Fraction] = {}
        for m, c in self.terms:
            powers = dict(m)
            e = powers.get(index, 0)
            if e:
                powers[index] = e - 1
                key = _normalize(powers.items())
                total[key] = total.get(key, 0) + c * e
        return DiffPoly.from_dict(self.ring, total)

    def leader_index(self) -> int:
        if self.is_constant():
            raise DomainError(f"the constant {self.format()} has no leader")
        return self.max_index()

    def leader(self) -> Derivative:
        return self.ring.ranking.derivative(self.leader_index())

    def leader_degree(self) -> int:
        return self.degree_in(self.leader_index())

    def rank(self) -> tuple[Derivative, int]:
        return self.leader(), self.leader_degree()

    def rank_key(self) -> tuple[int, int]:
        """Ranks compare as (leader index, degree); constants rank lowest."""
        if self.is_constant():
            return 0, 0
        return self.leader_index(), self.leader_degree()

    def initial(self) -> "DiffPoly":
        index = self.leader_index()
        return self.coefficient_in(index, self.degree_in(index))

    def separant(self) -> "DiffPoly":
        return self.partial(self.leader_index())

    def derive(self, i: int) -> "DiffPoly":
        """delta_i (1-based) by the product rule: sum over Z of dF/dZ * delta_i Z."""
        if not 1 <= i <= self.ring.m:
            raise DomainError(f"derivation d{i} does not exist with m={self.ring.m}")
        ranking = self.ring.ranking
        result = self.ring.zero()
        for index in sorted(self.indices()):
            result = result + self.partial(index) * self.ring.variable(ranking.derivative(index).derive(i))
        return result

    def apply(self, theta: tuple[int, ...]) -> "DiffPoly":
        result = self
        for i, k in enumerate(theta, start=1):
            for _ in range(k):
                result = result.derive(i)
        return result

    def is_partially_reduced(self, g: "DiffPoly") -> bool:
        """No proper derivative of the leader of g occurs in self."""
        leader = g.leader()
        return not any(u.is_proper_derivative_of(leader) for u in self.derivatives())

    def is_reduced(self, g: "DiffPoly") -> bool:
        return self.is_partially_reduced(g) and self.degree_in(g.leader_index()) < g.leader_degree()

    def to_poly(self, ring: PolyRing) -> Poly:
        """The same polynomial in Q[z1..zN], z_k standing for Z_k."""
        total = {}
        for m, c in self.terms:
            mono = [0] * ring.n
            for index, e in m:
                if index > ring.n:
                    raise DomainError(f"Z{index} is outside {ring.n} variables")
                mono[index - 1] = e
            total[tuple(mono)] = c
        return Poly.from_dict(ring, total)

    @classmethod
    def from_poly(cls, ring: DiffRing, poly: Poly) -> "DiffPoly":
        total = {}
        for mono, c in poly.terms:
            total[_normalize((i + 1, e) for i, e in enumerate(mono))] = c
        return cls.from_dict(ring, total)

    def _factor(self, index: int, e: int) -> str:
        atom = self.ring.format_derivative(index)
        if e == 1:
            return atom
        if " " in atom:
            atom = f"({atom})"
        return f"{atom}^{e}"

    def format(self) -> str:
        if not self.terms:
            return "0"
        text = ""
        for position, (m, c) in enumerate(self.terms):
            factors = [self._factor(index, e) for index, e in m]
            magnitude = abs(c)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            if position == 0:
                text = ("-" if c < 0 else "") + body
            else:
                text += f" {'-' if c < 0 else '+'} {body}"
        return text

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"DiffPoly({self.format()!r})"


def z_ring(size: int) -> PolyRing:
    """Q[z1..z_size], the ambient polynomial ring of the first ``size`` derivatives."""
    return PolyRing(tuple(f"z{k}" for k in range(1, max(size, 1) + 1)))


def rank_sequence(polys: Iterable[DiffPoly]) -> RankSeq:
    return tuple(p.rank() for p in polys)
