"""
Reduction of differential polynomials against autoreduced sets.
"""

import logging
from dataclasses import dataclass
from typing import Iterable

from src.entity.autoreduced import AutoreducedSet
from src.entity.certificates import PseudoDivCert
from src.entity.diffpoly import DiffPoly
from src.repository.catalogue import catalogue
from src.services.evaluator import Budget, evaluator
from src.services.exceptions import ContractViolation, DomainError

logger = logging.getLogger(__name__)

SEPARANT = "separant"
INITIAL = "initial"


@dataclass(frozen=True)
class ReductionStep:
    """
    One elimination: ``result == multiplier * f - quotient * theta(g)``,
    with ``multiplier`` the separant (proper derivative of the leader of g)
    or the initial (excess power of the leader itself).
    """

    kind: str
    target: int
    theta: tuple[int, ...]
    multiplier: DiffPoly
    quotient: DiffPoly
    result: DiffPoly


def _offending(f: DiffPoly, divisors: Iterable[DiffPoly]) -> tuple[int, int, str] | None:
    """The highest-ranking derivative of f that is not reduced, with the divisor and step kind."""
    divisors = list(divisors)
    ranking = f.ring.ranking
    for index in sorted(f.indices(), reverse=True):
        v = ranking.derivative(index)
        for position, g in enumerate(divisors):
            if v.is_proper_derivative_of(g.leader()):
                return index, position, SEPARANT
        for position, g in enumerate(divisors):
            if index == g.leader_index() and f.degree_in(index) >= g.leader_degree():
                return index, position, INITIAL
    return None


def _eliminate(f: DiffPoly, g: DiffPoly, index: int, kind: str) -> ReductionStep:
    ring = f.ring
    d = f.degree_in(index)
    c = f.coefficient_in(index, d)
    v = ring.variable(index)
    if kind == SEPARANT:
        theta = g.leader().operator_to(ring.ranking.derivative(index))
        multiplier = g.separant()
        quotient = c * v ** (d - 1)
        result = multiplier * f - quotient * g.apply(theta)
    else:
        theta = (0,) * ring.m
        multiplier = g.initial()
        quotient = c * v ** (d - g.leader_degree())
        result = multiplier * f - quotient * g
    if result.degree_in(index) >= d:
        raise ContractViolation(f"eliminating {ring.format_derivative(index)} did not lower its degree", result)
    return ReductionStep(kind, index, theta, multiplier, quotient, result)


def reduction_step(f: DiffPoly, g: DiffPoly) -> ReductionStep | None:
    """
    Eliminates the highest-ranking term of ``f`` not reduced with respect to ``g``.

    Args:
    - f (DiffPoly): The polynomial to reduce.
    - g (DiffPoly): A non-constant divisor.

    Returns:
    - ReductionStep | None: The step taken, or None when f is already reduced.
    """
    if g.is_constant():
        raise DomainError("cannot reduce by a constant")
    found = _offending(f, [g])
    if found is None:
        return None
    index, _, kind = found
    return _eliminate(f, g, index, kind)


def as_autoreduced(divisors) -> AutoreducedSet:
    if isinstance(divisors, AutoreducedSet):
        return divisors
    divisors = list(divisors)
    if not divisors:
        raise DomainError("an empty divisor list has no ring; pass an AutoreducedSet")
    return AutoreducedSet(divisors[0].ring, tuple(divisors))


def pseudodivide(f: DiffPoly, divisors: AutoreducedSet | Iterable[DiffPoly]) -> PseudoDivCert:
    """
    Pseudodivides ``f`` by an autoreduced set.

    The highest-ranking offending derivative is eliminated first; proper
    derivatives of a leader go through the separant before excess leader
    powers go through the initial.

    Args:
    - f (DiffPoly): The dividend.
    - divisors (AutoreducedSet): The autoreduced set (a plain list is validated).

    Returns:
    - PseudoDivCert: The verified remainder, exponents and cofactors.
    """
    divisors = as_autoreduced(divisors)
    if f.ring != divisors.ring:
        raise DomainError("dividend and divisors live in different rings")
    exponents = [[0, 0] for _ in divisors]
    cofactors: dict[tuple[int, tuple[int, ...]], DiffPoly] = {}
    remainder = f
    steps = 0
    while (found := _offending(remainder, divisors)) is not None:
        index, position, kind = found
        step = _eliminate(remainder, divisors[position], index, kind)
        exponents[position][0 if kind == INITIAL else 1] += 1
        cofactors = {key: c * step.multiplier for key, c in cofactors.items()}
        key = (position, step.theta)
        cofactors[key] = cofactors.get(key, f.ring.zero()) + step.quotient
        remainder = step.result
        steps += 1
    logger.debug("pseudodivided %s in %d steps", f, steps)
    cofactors = {key: c for key, c in cofactors.items() if not c.is_zero()}
    return PseudoDivCert(f, divisors, remainder, tuple(map(tuple, exponents)), cofactors, steps)


def remainder(f: DiffPoly, divisors: AutoreducedSet | Iterable[DiffPoly]) -> DiffPoly:
    return pseudodivide(f, divisors).remainder


def pseudodivision_bound(cert: PseudoDivCert) -> int | None:
    """g(b, d) for the certificate's data, None when it outgrows the budget."""
    bound = evaluator.evaluate(catalogue("g", cert.divisors.bound(), cert.f.bound()), budget=Budget())
    return bound if isinstance(bound, int) else None


def within_bounds(cert: PseudoDivCert) -> bool:
    """
    The remainder lies in K{X}_{<=d, g(b,d)} and no initial or separant
    exponent exceeds g(b, d).
    """
    bound = pseudodivision_bound(cert)
    if bound is None:
        return True
    d = cert.f.bound()
    r = cert.remainder
    return r.max_index() <= d and r.total_degree() <= bound and cert.max_exponent() <= bound
