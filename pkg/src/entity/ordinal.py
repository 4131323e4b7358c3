from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cmp_to_key, total_ordering

from src.services.exceptions import DomainError, ParseError


class Comparison(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """
    An ordinal below epsilon_0 in Cantor normal form.

    ``terms`` holds (exponent, coefficient) pairs with exponents strictly
    descending and coefficients >= 1; the empty tuple is 0. Equality and
    hashing are structural, which coincides with ordinal equality because the
    normal form is unique.
    """

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        for i, (exponent, coefficient) in enumerate(self.terms):
            if not isinstance(exponent, Ordinal):
                raise DomainError(f"exponent {exponent!r} is not an ordinal")
            if int(coefficient) < 1:
                raise DomainError(f"coefficient {coefficient} must be positive")
            if i and _cmp(self.terms[i - 1][0], exponent) <= 0:
                raise DomainError("exponents must be strictly descending")

    @classmethod
    def of(cls, value: int) -> "Ordinal":
        if value < 0:
            raise DomainError("ordinals are non-negative")
        return cls(((ZERO, value),)) if value else ZERO

    @classmethod
    def omega_power(cls, exponent: "Ordinal | int", coefficient: int = 1) -> "Ordinal":
        if isinstance(exponent, int):
            exponent = cls.of(exponent)
        return cls(((exponent, coefficient),)) if coefficient else ZERO

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        return _Parser(text).parse()

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def finite_tail(self) -> int:
        if self.is_successor():
            return self.terms[-1][1]
        return 0

    def drop_finite_tail(self) -> "Ordinal":
        if self.is_successor():
            return Ordinal(self.terms[:-1])
        return self

    def to_int(self) -> int:
        if not self.is_finite():
            raise DomainError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    def least_exponent(self) -> "Ordinal":
        return self.terms[-1][0] if self.terms else ZERO

    def __lt__(self, other: "Ordinal") -> bool:
        if isinstance(other, int):
            other = Ordinal.of(other)
        return _cmp(self, other) < 0

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def _cmp(a: Ordinal, b: Ordinal) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        sign = _cmp(ea, eb)
        if sign:
            return sign
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def compare(a: Ordinal, b: Ordinal) -> Comparison:
    """
    Compares two ordinals in Cantor normal form.

    Args:
    - a (Ordinal): The left operand.
    - b (Ordinal): The right operand.

    Returns:
    - Comparison: LESS, EQUAL or GREATER.
    """
    sign = _cmp(a, b)
    if sign < 0:
        return Comparison.LESS
    if sign > 0:
        return Comparison.GREATER
    return Comparison.EQUAL


ordinal_key = cmp_to_key(_cmp)


def format_ordinal(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for exponent, coefficient in a.terms:
        if exponent.is_zero():
            parts.append(str(coefficient))
            continue
        if exponent == ONE:
            base = "w"
        elif exponent.is_finite() or exponent == OMEGA:
            base = f"w^{format_ordinal(exponent)}"
        else:
            base = f"w^({format_ordinal(exponent)})"
        parts.append(base if coefficient == 1 else f"{base}*{coefficient}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([wω])|([\^*+()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[str]:
        tokens, pos = [], 0
        text = text.rstrip()
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if not match:
                raise ParseError(f"unexpected character at {pos} in ordinal {text!r}")
            number, omega, symbol = match.groups()
            tokens.append(number or ("w" if omega else symbol))
            pos = match.end()
        return tokens

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, expected: str | None = None) -> str:
        token = self._peek()
        if token is None or (expected is not None and token != expected):
            raise ParseError(f"expected {expected or 'a token'} in ordinal {self.text!r}")
        self.pos += 1
        return token

    def parse(self) -> Ordinal:
        if not self.tokens:
            raise ParseError("empty ordinal")
        value = self._sum()
        if self._peek() is not None:
            raise ParseError(f"trailing input {self._peek()!r} in ordinal {self.text!r}")
        return value

    def _sum(self) -> Ordinal:
        from src.repository.ordinals import left_sum

        value = self._term()
        while self._peek() == "+":
            self._take("+")
            value = left_sum(value, self._term())
        return value

    def _term(self) -> Ordinal:
        exponent, coefficient = self._atom()
        if self._peek() == "*":
            self._take("*")
            coefficient *= self._integer()
        if exponent is None:
            return Ordinal.of(coefficient)
        return Ordinal.omega_power(exponent, coefficient)

    def _atom(self) -> tuple[Ordinal | None, int]:
        token = self._peek()
        if token is not None and token.isdigit():
            return None, self._integer()
        self._take("w")
        if self._peek() != "^":
            return ONE, 1
        self._take("^")
        token = self._peek()
        if token == "(":
            self._take("(")
            exponent = self._sum()
            self._take(")")
        elif token == "w":
            self._take("w")
            exponent = OMEGA
        else:
            exponent = Ordinal.of(self._integer())
        return exponent, 1

    def _integer(self) -> int:
        token = self._take()
        if not token.isdigit():
            raise ParseError(f"expected an integer, got {token!r} in ordinal {self.text!r}")
        return int(token)
