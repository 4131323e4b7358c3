"""
Witnesses for Dickson's lemma and for stabilization of ascending polynomial chains.

Streams are read 0-based: element ``i`` is bounded by ``D(i)``. Reported
witness indices are 1-based positions in the stream.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from sympy.polys.orderings import grlex

from src.entity.bound_expr import MonotoneFn, SymbolicResidue
from src.entity.certificates import MembershipCert
from src.entity.poly import Monomial, Poly, max_degree
from src.repository.membership import faithful_degree, membership_bounded, reduce
from src.repository.multisets import frak_m_star
from src.schemas.run_config import RunConfig, default_config
from src.services.exceptions import ContractViolation, DomainError, ProcedureAbort, ScanCapReached

logger = logging.getLogger(__name__)

Stream = Union[Sequence, Callable[[int], object]]


def stream_item(stream: Stream, i: int, hold_last: bool = False):
    """
    Element ``i`` of a list or of a generating function.

    A finite list either ends (ScanCapReached) or, with ``hold_last``, repeats
    its last element forever.
    """
    if callable(stream):
        return stream(i)
    if i < len(stream):
        return stream[i]
    if hold_last and len(stream):
        return stream[-1]
    raise ScanCapReached(f"the stream ended after {len(stream)} elements", partial=i)


@dataclass(frozen=True)
class DicksonWitness:
    i: int
    j: int
    bound: int | SymbolicResidue


@dataclass(frozen=True)
class ChainWitness:
    """(Lambda_{j+1}) is inside (Lambda_j); ``certificates`` prove it element by element."""

    j: int
    certificates: tuple[MembershipCert, ...]
    leading_monomials: tuple[Monomial, ...]
    bound: int | SymbolicResidue
    reduced: tuple[Poly, ...] = field(default=())


def _check_bound(j: int, bound, what: str):
    if isinstance(bound, int) and j > bound:
        raise ContractViolation(f"{what} witness index {j} exceeds m* = {bound}", item=j)


def dickson_witness(
    stream: Stream, D: MonotoneFn, n: int, config: RunConfig | None = None
) -> DicksonWitness:
    """
    The first pair i < j (j ascending, then i ascending) with stream[i] <= stream[j] coordinatewise.

    Args:
    - stream (Stream): Vectors in N^n with max-norm of element i at most D(i).
    - D (MonotoneFn): The norm control.
    - n (int): The dimension.
    - config (RunConfig | None): Budget for evaluating m*(D, n); the scan cap
      applies only when m*(D, n) outgrows the budget.

    Returns:
    - DicksonWitness: 1-based positions i < j, and m*(D, n) (j never exceeds it).
    """
    config = config or default_config()
    bound = frak_m_star(D, n, budget=config.budget())
    seen: list[tuple[int, ...]] = []
    j = 0
    while True:
        vector = tuple(stream_item(stream, j))
        if len(vector) != n or any(a < 0 for a in vector):
            raise DomainError(f"stream element {j} is not a vector in N^{n}: {vector}")
        if max(vector, default=0) > D(j):
            raise DomainError(f"stream element {j} has norm {max(vector)} > D({j}) = {D(j)}")
        for i, earlier in enumerate(seen):
            if all(a <= b for a, b in zip(earlier, vector)):
                witness = DicksonWitness(i + 1, j + 1, bound)
                logger.debug("Dickson witness %s", witness)
                _check_bound(witness.j, bound, "Dickson")
                return witness
        seen.append(vector)
        j += 1
        if isinstance(bound, int) and j > bound:
            raise ContractViolation(f"no Dickson witness among the first {bound} elements", item=seen)
        if not isinstance(bound, int) and j >= config.scan_cap:
            raise ScanCapReached(f"no Dickson witness within {config.scan_cap} elements", partial=seen)


def _generators(stream: Stream, k: int, D: MonotoneFn, n: int) -> list[Poly]:
    gens = list(stream_item(stream, k, hold_last=True))
    if not gens:
        raise DomainError(f"generator set {k} is empty")
    if gens[0].ring.n != n:
        raise DomainError(f"generator set {k} lives in {gens[0].ring.n} variables, expected {n}")
    if max_degree(gens) > D(k):
        raise DomainError(f"generator set {k} has degree {max_degree(gens)} > D({k}) = {D(k)}")
    return gens


def hilbert_chain_witness(
    stream: Stream, D: MonotoneFn, n: int, config: RunConfig | None = None
) -> ChainWitness:
    """
    Finds j with (Lambda_{j+1}) inside (Lambda_j) for an ascending chain of ideals.

    Reduced elements f_1, f_2, ... are kept; each new generator set is
    reduced by them and the reduction with the greatest leading monomial
    becomes the next f. When a whole set reduces to zero the chain has
    stabilized at that step. The leading monomials of the f's form a bad
    Dickson sequence, which bounds j by m*(D, n).

    Args:
    - stream (Stream): Generator sets Lambda_1, Lambda_2, ...; a finite list repeats its last set.
    - D (MonotoneFn): Degree control; set i (0-based) has degree at most D(i).
    - n (int): Number of variables.
    - config (RunConfig | None): Membership degree cap, scan cap and budget.

    Returns:
    - ChainWitness: The 1-based j, certificates for every generator of
      Lambda_{j+1} over Lambda_j, and the leading monomials visited.
    """
    config = config or default_config()
    bound = frak_m_star(D, n, budget=config.budget())
    reduced: list[Poly] = []
    previous: list[Poly] | None = None
    for k in range(config.scan_cap):
        gens = _generators(stream, k, D, n)
        degree = faithful_degree(n, D(k), config.membership_degree_cap)
        if previous is not None:
            for g in previous:
                if not membership_bounded(g, gens, degree):
                    raise DomainError(f"the chain is not ascending at set {k + 1}: {g} is missing")
        remainders = [r for r in (reduce(g, reduced)[1] for g in gens) if not r.is_zero()]
        logger.debug("set %d: %d of %d generators survive reduction", k + 1, len(remainders), len(gens))
        if not remainders:
            return _certify(k, gens, previous, reduced, degree, bound)
        reduced.append(max(remainders, key=lambda r: grlex(r.leading_monomial())))
        previous = gens
    raise ScanCapReached(f"no stabilization within {config.scan_cap} sets", partial=tuple(reduced))


def _certify(k: int, gens, previous, reduced, degree: int, bound) -> ChainWitness:
    if previous is None:
        raise DomainError("the first generator set reduced to zero; the chain starts at the zero ideal")
    certificates = []
    for g in gens:
        cert = membership_bounded(g, previous, degree)
        if not cert:
            raise ProcedureAbort(f"{g} reduces to zero but has no certificate within degree {degree}", partial=k)
        certificates.append(cert)
    witness = ChainWitness(k, tuple(certificates), tuple(f.leading_monomial() for f in reduced), bound, tuple(reduced))
    _check_bound(witness.j, bound, "Hilbert chain")
    return witness
