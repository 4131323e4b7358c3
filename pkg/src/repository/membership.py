import logging
from typing import Sequence

from src.entity.certificates import MembershipCert, NotFound, SyzygyVector
from src.entity.poly import Poly, monomial_divides, monomial_quotient
from src.repository.catalogue import catalogue
from src.services.evaluator import Budget, evaluator
from src.services.exceptions import DomainError, RingMismatch
from src.services.linalg import kernel_combinations, solve_combination

logger = logging.getLogger(__name__)


def _same_ring(polys: Sequence[Poly]):
    rings = {p.ring for p in polys}
    if len(rings) > 1:
        raise RingMismatch("polynomials from different rings were combined")


def faithful_degree(n: int, b: int, cap: int) -> int:
    """
    The membership search degree d_n(b), clipped to ``cap``.

    Args:
    - n (int): Number of variables.
    - b (int): Degree of the data.
    - cap (int): Largest degree actually searched.

    Returns:
    - int: min(d_n(b), cap); ``cap`` when d_n(b) outgrows the budget.
    """
    bound = evaluator.evaluate(catalogue("d_n", n, max(b, 0)), budget=Budget())
    return min(bound, cap) if isinstance(bound, int) else cap


def reduce(f: Poly, divisors: Sequence[Poly]) -> tuple[list[Poly], Poly]:
    """
    Multivariate division by ``divisors`` in grlex order.

    Args:
    - f (Poly): The dividend.
    - divisors (list[Poly]): Nonzero divisors, tried in order.

    Returns:
    - tuple[list[Poly], Poly]: Quotients and a remainder none of whose
      monomials is divisible by a divisor's leading monomial, with
      ``f == sum q_i * divisors[i] + r``.
    """
    _same_ring([f, *divisors])
    if any(d.is_zero() for d in divisors):
        raise DomainError("cannot reduce by the zero polynomial")
    ring = f.ring
    quotients = [ring.zero() for _ in divisors]
    remainder = ring.zero()
    rest = f
    while not rest.is_zero():
        mono, c = rest.terms[0]
        for i, d in enumerate(divisors):
            lead = d.leading_monomial()
            if monomial_divides(lead, mono):
                step = ring.monomial(monomial_quotient(mono, lead), c / d.leading_coefficient())
                quotients[i] = quotients[i] + step
                rest = rest - step * d
                break
        else:
            remainder = remainder + ring.monomial(mono, c)
            rest = rest - ring.monomial(mono, c)
    return quotients, remainder


def membership_bounded(h: Poly, gens: Sequence[Poly], D: int) -> MembershipCert | NotFound:
    """
    Searches for h = sum c_i * gens[i] with every deg c_i <= D.

    The search is complete at its bound: NotFound means no representation
    with cofactors of degree at most D exists, not that h lies outside the ideal.

    Args:
    - h (Poly): The target.
    - gens (list[Poly]): The ideal generators.
    - D (int): The cofactor degree bound.

    Returns:
    - MembershipCert | NotFound: A verified certificate, or NotFound.
    """
    gens = list(gens)
    _same_ring([h, *gens])
    if not gens:
        return MembershipCert(h, (), (), max(D, 0)) if h.is_zero() else NotFound(D)
    cofactors = solve_combination([h], [[g] for g in gens], [D] * len(gens))
    if cofactors is None:
        logger.debug("%s has no representation of cofactor degree <= %d", h, D)
        return NotFound(D)
    return MembershipCert(h, tuple(gens), tuple(cofactors), max(D, 0))


def module_membership(
    vector: Sequence[Poly], generators: Sequence[Sequence[Poly]], degree: int
) -> list[Poly] | None:
    """
    Writes ``vector`` as sum a_k * generators[k] with deg a_k <= degree.

    Args:
    - vector (list[Poly]): The candidate module element.
    - generators (list[list[Poly]]): Module generators of the same length.
    - degree (int): The coefficient degree bound.

    Returns:
    - list[Poly] | None: The coefficients a_k, or None if none exist within the bound.
    """
    if not generators:
        return [] if all(p.is_zero() for p in vector) else None
    return solve_combination(list(vector), [list(g) for g in generators], [degree] * len(generators))


def _rows(gens) -> list[list[Poly]]:
    if gens and isinstance(gens[0], Poly):
        return [list(gens)]
    return [list(row) for row in gens]


def syzygy_generators(gens, D: int) -> list[SyzygyVector]:
    """
    Generators (over the polynomial ring) of the solutions y of sum_j f_j * y_j = 0.

    Solutions are collected degree by degree up to D; a kernel vector is kept
    only when it is not already in the module spanned by the kept ones.

    Args:
    - gens (list[Poly] | list[list[Poly]]): One relation, or a matrix system
      whose rows must vanish simultaneously.
    - D (int): The entry degree bound.

    Returns:
    - list[SyzygyVector]: Vectors satisfying every relation exactly.
    """
    rows = _rows(gens)
    if not rows or not rows[0]:
        raise DomainError("syzygies need at least one generator")
    _same_ring([p for row in rows for p in row])
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DomainError("every relation needs one entry per unknown")
    columns = [[row[j] for row in rows] for j in range(width)]
    kept: list[SyzygyVector] = []
    for degree in range(D + 1):
        for vector in kernel_combinations(columns, [degree] * width):
            if module_membership(vector, [s.entries for s in kept], degree) is None:
                kept.append(SyzygyVector(tuple(vector), degree))
                logger.debug("new syzygy at degree %d: %s", degree, kept[-1].format())
    return kept


def is_syzygy(vector: Sequence[Poly], gens) -> bool:
    for row in _rows(gens):
        total = row[0].ring.zero()
        for f, y in zip(row, vector):
            total = total + f * y
        if not total.is_zero():
            return False
    return True
