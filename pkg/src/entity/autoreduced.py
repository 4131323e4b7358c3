from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator

from src.entity.derivative import RankSeq
from src.entity.diffpoly import DiffPoly, DiffRing, rank_sequence
from src.entity.ordinal import Comparison
from src.services.exceptions import ContractViolation, DomainError


def is_autoreduced(polys: Iterable[DiffPoly]) -> bool:
    polys = list(polys)
    if any(p.is_constant() for p in polys):
        return False
    return all(f.is_reduced(g) for f in polys for g in polys if f is not g)


@dataclass(frozen=True)
class AutoreducedSet:
    """
    A finite pairwise-reduced set of non-constant differential polynomials,
    listed in ascending rank.
    """

    ring: DiffRing
    elements: tuple[DiffPoly, ...]

    def __post_init__(self):
        elements = tuple(sorted(self.elements, key=lambda p: p.rank_key()))
        object.__setattr__(self, "elements", elements)
        for p in elements:
            if p.ring != self.ring:
                raise DomainError("an autoreduced set mixes differential rings")
            if p.is_constant():
                raise DomainError(f"the constant {p.format()} cannot belong to an autoreduced set")
        for i, f in enumerate(elements):
            for j, g in enumerate(elements):
                if i != j and not f.is_reduced(g):
                    raise DomainError(f"{f.format()} is not reduced with respect to {g.format()}")
        b = self.bound()
        if len(elements) > comb(2 * b, b):
            raise ContractViolation(f"{len(elements)} elements exceed C(2b, b) for b={b}", self)

    @classmethod
    def of(cls, ring: DiffRing, elements: Iterable[DiffPoly]) -> "AutoreducedSet":
        return cls(ring, tuple(elements))

    def __iter__(self) -> Iterator[DiffPoly]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> DiffPoly:
        return self.elements[i]

    def bound(self) -> int:
        """Least b with every element in K{X}_{<=b}."""
        return max((p.bound() for p in self.elements), default=0)

    def rank_sequence(self) -> RankSeq:
        return rank_sequence(self.elements)

    def rank_keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(p.rank_key() for p in self.elements)

    def compare(self, other: "AutoreducedSet") -> Comparison:
        """
        Rank of autoreduced sets: the first differing (leader, degree) decides
        and a proper extension ranks lower.
        """
        for k1, k2 in zip(self.rank_keys(), other.rank_keys()):
            if k1 != k2:
                return Comparison.LESS if k1 < k2 else Comparison.GREATER
        if len(self) == len(other):
            return Comparison.EQUAL
        return Comparison.LESS if len(self) > len(other) else Comparison.GREATER

    def h(self) -> DiffPoly:
        """H = product of initials and separants."""
        result = self.ring.one()
        for p in self.elements:
            result = result * p.initial() * p.separant()
        return result

    def contains_reduced(self, f: DiffPoly) -> bool:
        return all(f.is_reduced(g) for g in self.elements)

    def format(self) -> str:
        return "{" + ", ".join(p.format() for p in self.elements) + "}"

    def to_list(self) -> list[str]:
        return [p.format() for p in self.elements]
