from dataclasses import dataclass, field
from enum import Enum

from src.entity.autoreduced import AutoreducedSet
from src.entity.diffpoly import DiffPoly
from src.entity.poly import Poly, max_degree
from src.services.exceptions import ContractViolation


@dataclass(frozen=True)
class MembershipCert:
    """
    A verified representation ``target == sum_i cofactors[i] * generators[i]``.

    Construction re-expands the sum and checks every cofactor degree, so an
    instance that exists is correct.
    """

    target: Poly
    generators: tuple[Poly, ...]
    cofactors: tuple[Poly, ...]
    degree_bound: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "cofactors", tuple(self.cofactors))
        if len(self.generators) != len(self.cofactors):
            raise ContractViolation("one cofactor per generator is required", self)
        total = self.target.ring.zero()
        for cofactor, generator in zip(self.cofactors, self.generators):
            total = total + cofactor * generator
        if total != self.target:
            raise ContractViolation(f"certificate does not re-expand to {self.target}", self)
        if max_degree(self.cofactors) > self.degree_bound:
            raise ContractViolation(f"a cofactor exceeds degree {self.degree_bound}", self)

    def scaled(self, factor: Poly) -> "MembershipCert":
        """The certificate of ``factor * target``."""
        return MembershipCert(
            self.target * factor,
            self.generators,
            tuple(c * factor for c in self.cofactors),
            self.degree_bound + max(factor.total_degree(), 0),
        )

    def to_dict(self) -> dict:
        return {
            "target": self.target.format(),
            "generators": [g.format() for g in self.generators],
            "cofactors": [c.format() for c in self.cofactors],
            "degree_bound": self.degree_bound,
        }


@dataclass(frozen=True)
class PowerCertificate:
    """
    ``f ** exponent`` lies in the ideal: ``f ** (exponent - base_exponent)``
    times the certificate of ``f ** base_exponent``. Kept symbolic until
    ``materialize`` is called, since the exponent is often astronomically large.
    """

    f: Poly
    exponent: int
    base: MembershipCert
    base_exponent: int

    def __post_init__(self):
        if not 0 < self.base_exponent <= self.exponent:
            raise ContractViolation(f"base power {self.base_exponent} does not lead to {self.exponent}", self)
        if self.base.target != self.f**self.base_exponent:
            raise ContractViolation(f"base certificate is not for {self.f}^{self.base_exponent}", self)

    def materialize(self) -> MembershipCert:
        return self.base.scaled(self.f ** (self.exponent - self.base_exponent))

    def to_dict(self) -> dict:
        return {
            "f": self.f.format(),
            "exponent": self.exponent,
            "base_exponent": self.base_exponent,
            "base": self.base.to_dict(),
        }


@dataclass(frozen=True)
class NotFound:
    """No representation with cofactor degree <= degree_bound. Says nothing about ideal membership."""

    degree_bound: int

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> dict:
        return {"not_found": True, "degree_bound": self.degree_bound}


@dataclass(frozen=True)
class SyzygyVector:
    """A cofactor vector with ``sum_i entries[i] * generators[i] == 0`` (per row, for a matrix system)."""

    entries: tuple[Poly, ...]
    degree: int = field(compare=False, default=0)

    def format(self) -> str:
        return "(" + ", ".join(e.format() for e in self.entries) + ")"


@dataclass(frozen=True)
class PseudoDivCert:
    """
    ``prod_l I_l^k_l * S_l^s_l * f - remainder == sum cofactors[(l, theta)] * theta(Lambda[l])``
    with the remainder reduced with respect to Lambda; both are checked on construction.
    """

    f: DiffPoly
    divisors: AutoreducedSet
    remainder: DiffPoly
    exponents: tuple[tuple[int, int], ...]
    cofactors: dict[tuple[int, tuple[int, ...]], DiffPoly] = field(compare=False)
    steps: int = field(compare=False, default=0)

    def __post_init__(self):
        if len(self.exponents) != len(self.divisors):
            raise ContractViolation("one exponent pair per divisor is required", self)
        if not self.divisors.contains_reduced(self.remainder):
            raise ContractViolation(f"remainder {self.remainder.format()} is not reduced", self)
        if self.multiplier() * self.f - self.remainder != self.combination():
            raise ContractViolation(f"pseudodivision of {self.f.format()} does not re-expand", self)

    def multiplier(self) -> DiffPoly:
        result = self.f.ring.one()
        for g, (k, s) in zip(self.divisors, self.exponents):
            result = result * g.initial() ** k * g.separant() ** s
        return result

    def combination(self) -> DiffPoly:
        total = self.f.ring.zero()
        for (position, theta), cofactor in self.cofactors.items():
            total = total + cofactor * self.divisors[position].apply(theta)
        return total

    def max_exponent(self) -> int:
        return max((max(pair) for pair in self.exponents), default=0)

    def max_order_offset(self) -> int:
        return max((sum(theta) for _, theta in self.cofactors), default=0)

    def to_dict(self) -> dict:
        return {
            "f": self.f.format(),
            "divisors": self.divisors.to_list(),
            "remainder": self.remainder.format(),
            "exponents": [list(pair) for pair in self.exponents],
            "cofactors": [
                {"divisor": position, "theta": list(theta), "cofactor": cofactor.format()}
                for (position, theta), cofactor in sorted(self.cofactors.items())
            ],
        }


class Stratum(str, Enum):
    ORDER = "order"
    SATURATED = "saturated"
    MIXED = "mixed"


@dataclass(frozen=True)
class StratifiedCert:
    """
    ``multiplier * g`` lies in the ideal generated by the derived generators
    ``theta(Lambda[l])`` listed in ``generators``, witnessed in the polynomial
    ring of the derivatives that occur.
    """

    stratum: Stratum
    k: int
    g: DiffPoly
    multiplier: DiffPoly
    generators: tuple[tuple[int, tuple[int, ...]], ...]
    membership: MembershipCert

    def __post_init__(self):
        if len(self.generators) != len(self.membership.generators):
            raise ContractViolation("generator labels do not match the certificate", self)
        if (self.multiplier * self.g).to_poly(self.membership.target.ring) != self.membership.target:
            raise ContractViolation(f"certificate is not for {self.g.format()}", self)

    def cofactors(self) -> list[DiffPoly]:
        return [DiffPoly.from_poly(self.g.ring, c) for c in self.membership.cofactors]

    def to_dict(self) -> dict:
        return {
            "stratum": self.stratum.value,
            "k": self.k,
            "g": self.g.format(),
            "multiplier": self.multiplier.format(),
            "generators": [{"divisor": position, "theta": list(theta)} for position, theta in self.generators],
            "cofactors": [c.format() for c in self.cofactors()],
            "degree_bound": self.membership.degree_bound,
        }
