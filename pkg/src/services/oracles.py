"""
Membership oracles for characteristic set construction and Ritt chain scans.

Every oracle is called as ``oracle(h, generators=None, index=None)`` and
answers True (member), False (not a member) or None (unknown).
"""

import logging
from typing import Iterable, Mapping, Sequence

from src.entity.autoreduced import AutoreducedSet
from src.entity.certificates import Stratum
from src.entity.diffpoly import DiffPoly, DiffRing
from src.repository.autoreduction import minimal_autoreduced_subset
from src.repository.pseudodivision import pseudodivide
from src.repository.stratified import stratified_membership
from src.schemas.run_config import RunConfig, default_config
from src.services.exceptions import DomainError

logger = logging.getLogger(__name__)


class PseudodivisionOracle:
    """
    With a fixed characteristic set ``sigma``: h is in the prime ideal
    sat(sigma) exactly when its remainder is 0. Without one, h is certified
    in the ideal of the supplied generators only when it reduces to 0 with a
    constant multiplier; anything else is unknown.
    """

    def __init__(self, sigma: AutoreducedSet | None = None):
        self.sigma = sigma

    def __call__(self, h: DiffPoly, generators: Sequence[DiffPoly] | None = None, index: int | None = None) -> bool | None:
        if self.sigma is not None:
            return pseudodivide(h, self.sigma).remainder.is_zero()
        if not generators:
            raise DomainError("the pseudodivision oracle needs generators or a fixed set")
        basis = minimal_autoreduced_subset(h.ring, generators)
        cert = pseudodivide(h, basis)
        if cert.remainder.is_zero() and cert.multiplier().is_constant():
            return True
        return None


class BoundedPowerOracle:
    """h is in the perfect ideal of the generators when h^k lies in their order-k stratum for some k <= cap."""

    def __init__(self, cap: int, config: RunConfig | None = None):
        if cap < 1:
            raise DomainError("the power cap must be positive")
        self.cap = cap
        self.config = config or default_config()

    def __call__(self, h: DiffPoly, generators: Sequence[DiffPoly] | None = None, index: int | None = None) -> bool | None:
        if not generators:
            raise DomainError("the bounded power oracle needs generators")
        for k in range(1, self.cap + 1):
            if stratified_membership(h**k, generators, k, Stratum.ORDER, self.config):
                logger.debug("%s^%d certified in the order-%d stratum", h, k, k)
                return True
        return None


class TableOracle:
    """
    Explicit answers. Keys are polynomials, or (index, polynomial) pairs that
    apply only at that stream index and take precedence.
    """

    def __init__(self, ring: DiffRing, entries: Mapping | Iterable):
        self.ring = ring
        self.answers: dict[DiffPoly, bool] = {}
        self.indexed: dict[tuple[int, DiffPoly], bool] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, answer in items:
            if isinstance(key, tuple):
                index, text = key
                self.indexed[(int(index), self._poly(text))] = bool(answer)
            else:
                self.answers[self._poly(key)] = bool(answer)

    def _poly(self, value) -> DiffPoly:
        return value if isinstance(value, DiffPoly) else self.ring.parse(str(value))

    def __call__(self, h: DiffPoly, generators: Sequence[DiffPoly] | None = None, index: int | None = None) -> bool | None:
        if index is not None and (index, h) in self.indexed:
            return self.indexed[(index, h)]
        return self.answers.get(h)
