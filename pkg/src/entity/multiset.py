from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from src.entity.ordinal import Comparison
from src.services.exceptions import DomainError


@dataclass(frozen=True)
class Multiset:
    """
    Finite multiset over the naturals, stored as sorted (value, multiplicity) pairs.
    """

    counts: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        values = [v for v, _ in self.counts]
        if values != sorted(set(values)):
            raise DomainError("multiset values must be distinct and sorted")
        for value, multiplicity in self.counts:
            if value < 0 or multiplicity < 1:
                raise DomainError(f"invalid multiset entry {value}x{multiplicity}")

    @classmethod
    def of(cls, values: Iterable[int]) -> "Multiset":
        return cls.from_counts(Counter(values))

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> "Multiset":
        return cls(tuple(sorted((v, c) for v, c in counts.items() if c)))

    def as_counter(self) -> Counter:
        return Counter(dict(self.counts))

    def is_empty(self) -> bool:
        return not self.counts

    def __len__(self) -> int:
        return sum(c for _, c in self.counts)

    def __contains__(self, value: int) -> bool:
        return any(v == value for v, _ in self.counts)

    def multiplicity(self, value: int) -> int:
        return dict(self.counts).get(value, 0)

    def min(self) -> int:
        if not self.counts:
            raise DomainError("the empty multiset has no minimum")
        return self.counts[0][0]

    def max(self) -> int:
        return self.counts[-1][0] if self.counts else 0

    def union(self, other: "Multiset") -> "Multiset":
        return Multiset.from_counts(self.as_counter() + other.as_counter())

    def elements(self) -> list[int]:
        return sorted(self.as_counter().elements())

    def __str__(self) -> str:
        return "{" + ",".join(str(v) for v in reversed(self.elements())) + "}"


def multi_compare(a: Multiset, b: Multiset) -> Comparison:
    """
    Multiset order: multiplicities are compared at the greatest value where they differ.

    Args:
    - a (Multiset): The left multiset.
    - b (Multiset): The right multiset.

    Returns:
    - Comparison: LESS, EQUAL or GREATER.
    """
    left, right = a.as_counter(), b.as_counter()
    for value in sorted(set(left) | set(right), reverse=True):
        if left[value] != right[value]:
            return Comparison.LESS if left[value] < right[value] else Comparison.GREATER
    return Comparison.EQUAL
