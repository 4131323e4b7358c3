import logging
from dataclasses import dataclass
from typing import Callable

from src.entity.bound_expr import MonotoneFn
from src.services.exceptions import ContractViolation, DomainError, ScanCapReached

logger = logging.getLogger(__name__)

# найдовший інтервал [k, F(k)], який перевіряється повністю
VERIFY_LIMIT = 1 << 16


@dataclass(frozen=True)
class Searcher:
    """
    A witness functional: ``search(F, d)`` returns some k >= d such that
    ``predicate`` holds on every i in [k, F(k)].
    """

    predicate: Callable[[int], bool]
    search: Callable[[MonotoneFn, int], int]
    name: str = "searcher"


def scan_searcher(predicate: Callable[[int], bool], name: str = "scan", limit: int = 10_000) -> Searcher:
    """
    A searcher that tries k = d, d+1, ... until the predicate holds on the
    whole of [k, F(k)].

    Args:
    - predicate (Callable[[int], bool]): The property to hold on the interval.
    - name (str): Used in reports.
    - limit (int): How far past d to look.

    Returns:
    - Searcher: The searcher.
    """

    def search(F: MonotoneFn, d: int) -> int:
        k = d
        while k <= d + limit:
            failing = next((i for i in range(k, F(k) + 1) if not predicate(i)), None)
            if failing is None:
                return k
            k = failing + 1
        raise ScanCapReached(f"{name}: no witness in [{d}, {d + limit}]", partial=k)

    return Searcher(predicate, search, name)


def max_shift(F: MonotoneFn, floor: int) -> MonotoneFn:
    """F^d'(x) = F(max(x, d'))."""
    return MonotoneFn(lambda x: F(max(x, floor)), f"(F_max {F} {floor})")


def _verify(searcher: Searcher, j: int, F: MonotoneFn, k: int, d: int):
    end = F(k)
    if k < d:
        raise ContractViolation(f"searcher {j} ({searcher.name}) returned {k} < {d}", item=(j, k, d))
    if end - k > VERIFY_LIMIT:
        raise DomainError(f"interval [{k}, {end}] is too long to verify")
    for i in range(k, end + 1):
        if not searcher.predicate(i):
            raise ContractViolation(
                f"searcher {j} ({searcher.name}) fails at {i} in [{k}, {end}]", item=(j, (k, end))
            )


def _knit(searchers: list[Searcher], offset: int, F: MonotoneFn, d: int) -> int:
    head = searchers[0]
    if len(searchers) == 1:
        k = head.search(F, d)
        _verify(head, offset, F, k, d)
        return k

    def G(floor: int) -> int:
        return F(head.search(max_shift(F, floor), floor))

    shifted = MonotoneFn(G, f"(knit {F} {head.name})")
    floor = _knit(searchers[1:], offset + 1, shifted, d)
    k = head.search(max_shift(F, floor), floor)
    _verify(head, offset, F, k, floor)
    logger.debug("knit level %s: floor %s, witness %s", offset, floor, k)
    return k


def knit(searchers: list[Searcher], F: MonotoneFn, d: int) -> int:
    """
    Combines witness functionals for several predicates into one: returns
    k >= d such that every predicate holds on all of [k, F(k)].

    The first searcher j0 is knitted onto the rest through
    G(d') = F(search_j0(F^d', d')), F^d'(x) = F(max(x, d')); the rest are
    asked for a d' good on [d', G(d')], and j0's witness inside it is returned.

    Args:
    - searchers (list[Searcher]): At least one searcher.
    - F (MonotoneFn): The interval function.
    - d (int): The lower end.

    Returns:
    - int: The common witness; every predicate is checked on [k, F(k)].
    """
    if not searchers:
        raise DomainError("knit needs at least one searcher")
    k = _knit(list(searchers), 0, F, d)
    for j, searcher in enumerate(searchers):
        _verify(searcher, j, F, k, d)
    return k
