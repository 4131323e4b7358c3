"""
Named stream generators for the chain procedures.
"""

import logging
from typing import Sequence

from src.entity.autoreduced import AutoreducedSet
from src.entity.bound_expr import MonotoneFn
from src.entity.derivative import operators_upto
from src.entity.diffpoly import DiffPoly, DiffRing
from src.entity.poly import Poly, PolyRing
from src.services.exceptions import DomainError

logger = logging.getLogger(__name__)


def staircase(ring: PolyRing, length: int) -> list[list[Poly]]:
    """
    An ascending chain in two variables that stabilizes after ``length`` steps.

    Set j (1-based) holds x^(L-k) * y^k for k < j, so every step adds a
    monomial outside the previous ideal; the last set repeats.

    Args:
    - ring (PolyRing): A ring with at least two variables; the first two are used.
    - length (int): L >= 1.

    Returns:
    - list[list[Poly]]: The L generator sets.
    """
    if ring.n < 2:
        raise DomainError("the staircase chain needs two variables")
    if length < 1:
        raise DomainError("the staircase chain needs a positive length")
    x, y = ring.var(0), ring.var(1)
    steps = [x ** (length - k) * y**k for k in range(length)]
    return [steps[: j + 1] for j in range(length)]


def derivative_closure(base: Sequence[DiffPoly], length: int) -> list[list[DiffPoly]]:
    """
    Set i (0-based) holds theta(p) for every p in ``base`` and every
    operator theta of order at most i.
    """
    if length < 1:
        raise DomainError("the derivative closure needs a positive length")
    if not base:
        raise DomainError("the derivative closure needs base polynomials")
    m = base[0].ring.m
    return [[p.apply(theta) for p in base for theta in operators_upto(m, i)] for i in range(length)]


def greedy_descent(ring: DiffRing, D: MonotoneFn, length: int) -> list[AutoreducedSet]:
    """
    A longest-lasting descending stream of autoreduced sets in one
    indeterminate under one derivation.

    It starts from the empty set; set i is the highest-ranked singleton
    (delta^j X)^e in K{X}_{<=D(i)} of rank below set i-1. Once nothing lower
    exists, the last set repeats.

    Args:
    - ring (DiffRing): Must have n = m = 1.
    - D (MonotoneFn): The containment control.
    - length (int): Number of sets produced.

    Returns:
    - list[AutoreducedSet]: The stream.
    """
    if (ring.n, ring.m) != (1, 1):
        raise DomainError("greedy descent is defined for one indeterminate and one derivation")
    stream = [AutoreducedSet(ring, ())]
    previous: tuple[int, int] | None = None
    while len(stream) < length:
        c = D(len(stream))
        candidates = [(index, e) for index in range(1, c + 1) for e in range(1, c + 1)]
        lower = [key for key in candidates if previous is None or key < previous]
        if not lower:
            stream.append(stream[-1])
            continue
        previous = max(lower)
        index, e = previous
        stream.append(AutoreducedSet(ring, (ring.variable(index) ** e,)))
    logger.debug("greedy descent for %s: %s", D, [s.format() for s in stream])
    return stream
