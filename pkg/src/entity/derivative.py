from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from src.services.exceptions import DomainError


@dataclass(frozen=True, order=False)
class Derivative:
    """
    A derivative theta X_i: indeterminate index (1-based) and the exponents of
    the derivations delta_1..delta_m applied to it.
    """

    indeterminate: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.indeterminate < 1:
            raise DomainError("indeterminates are numbered from 1")
        if any(k < 0 for k in self.exponents):
            raise DomainError("derivation exponents must be non-negative")

    @property
    def order(self) -> int:
        return sum(self.exponents)

    def is_derivative_of(self, other: "Derivative") -> bool:
        return self.indeterminate == other.indeterminate and all(
            k >= l for k, l in zip(self.exponents, other.exponents)
        )

    def is_proper_derivative_of(self, other: "Derivative") -> bool:
        return self != other and self.is_derivative_of(other)

    def derive(self, i: int) -> "Derivative":
        exponents = list(self.exponents)
        exponents[i - 1] += 1
        return Derivative(self.indeterminate, tuple(exponents))

    def apply(self, theta: tuple[int, ...]) -> "Derivative":
        return Derivative(self.indeterminate, tuple(k + t for k, t in zip(self.exponents, theta)))

    def operator_to(self, other: "Derivative") -> tuple[int, ...]:
        """The derivation theta with theta(self) == other."""
        if not other.is_derivative_of(self):
            raise DomainError(f"{other} is not a derivative of {self}")
        return tuple(k - l for k, l in zip(other.exponents, self.exponents))

    def common_derivative(self, other: "Derivative") -> "Derivative":
        if self.indeterminate != other.indeterminate:
            raise DomainError(f"{self} and {other} share no common derivative")
        return Derivative(self.indeterminate, tuple(map(max, self.exponents, other.exponents)))

    def format(self, names: tuple[str, ...] | None = None) -> str:
        name = names[self.indeterminate - 1] if names else f"x{self.indeterminate}"
        ops = []
        for i, k in enumerate(self.exponents, start=1):
            if k == 1:
                ops.append(f"d{i}")
            elif k > 1:
                ops.append(f"d{i}^{k}")
        return " ".join(ops + [name])

    def __str__(self) -> str:
        return self.format()


RankSeq = tuple[tuple[Derivative, int], ...]


def _exponent_block(order: int, m: int) -> tuple[tuple[int, ...], ...]:
    if m == 1:
        return ((order,),)
    block = []
    for first in range(order + 1):
        for rest in _exponent_block(order - first, m - 1):
            block.append((first,) + rest)
    return tuple(block)


def operators_upto(m: int, order: int) -> list[tuple[int, ...]]:
    """All derivation operators theta of order at most ``order``, lowest first."""
    if m == 0:
        return [()]
    return [theta for k in range(order + 1) for theta in _exponent_block(k, m)]


class Ranking:
    """
    The orderly ranking on derivatives of n indeterminates under m derivations.

    Derivatives are compared by order, then by the first differing derivation
    exponent (smaller is lower), then by indeterminate. The bijection with the
    positive integers is enumerated lazily by order and memoized both ways.
    """

    name = "orderly"

    def __init__(self, n: int, m: int):
        if n < 1 or m < 0:
            raise DomainError("a ranking needs n >= 1 indeterminates and m >= 0 derivations")
        self.n = n
        self.m = m
        self._blocks: dict[int, tuple[tuple[int, ...], ...]] = {}
        self._positions: dict[int, dict[tuple[int, ...], int]] = {}

    def _block(self, order: int) -> tuple[tuple[int, ...], ...]:
        if order not in self._blocks:
            block = _exponent_block(order, self.m) if self.m else ((),) if order == 0 else ()
            self._blocks[order] = block
            self._positions[order] = {exps: pos for pos, exps in enumerate(block)}
        return self._blocks[order]

    def count_of_order(self, order: int) -> int:
        if self.m == 0:
            return self.n if order == 0 else 0
        return comb(order + self.m - 1, self.m - 1) * self.n

    def count_below(self, order: int) -> int:
        if order <= 0:
            return 0
        if self.m == 0:
            return self.n
        return comb(order - 1 + self.m, self.m) * self.n

    def index(self, u: Derivative) -> int:
        if u.indeterminate > self.n or len(u.exponents) != self.m:
            raise DomainError(f"{u} does not belong to a ring with n={self.n}, m={self.m}")
        self._block(u.order)
        position = self._positions[u.order][u.exponents]
        return self.count_below(u.order) + position * self.n + u.indeterminate

    def derivative(self, index: int) -> Derivative:
        if index < 1:
            raise DomainError("ranking indices start at 1")
        if self.m == 0:
            if index > self.n:
                raise DomainError(f"only {self.n} derivatives exist without derivations")
            return Derivative(index, ())
        order = 0
        while self.count_below(order + 1) < index:
            order += 1
        offset = index - self.count_below(order) - 1
        return Derivative(offset % self.n + 1, self._block(order)[offset // self.n])

    def derivatives_upto(self, index: int) -> list[Derivative]:
        return [self.derivative(i) for i in range(1, index + 1)]

    def lt(self, u: Derivative, v: Derivative) -> bool:
        return self.index(u) < self.index(v)


@lru_cache(maxsize=None)
def get_ranking(n: int, m: int, name: str = "orderly") -> Ranking:
    if name != Ranking.name:
        raise DomainError(f"unsupported ranking {name!r}; only 'orderly' is available")
    return Ranking(n, m)


def is_bad_leader_sequence(seq: tuple[Derivative, ...], ranking: Ranking) -> bool:
    indices = [ranking.index(u) for u in seq]
    if any(a >= b for a, b in zip(indices, indices[1:])):
        return False
    return not any(
        seq[j].is_derivative_of(seq[i]) for i in range(len(seq)) for j in range(i + 1, len(seq))
    )
