import logging

from src.entity.bound_expr import MonotoneFn, SymbolicResidue, call
from src.entity.multiset import Multiset
from src.entity.ordinal import Ordinal, ZERO
from src.repository.ordinals import left_sum
from src.services.evaluator import Budget, current_budget, evaluator
from src.services.exceptions import BudgetExhausted, DomainError

logger = logging.getLogger(__name__)


def multiset_step(tau: Multiset, k: int, i: int, D: MonotoneFn) -> Multiset:
    """
    Removes one copy of k from tau and adds k*(D(i)-1) copies of k-1.

    Args:
    - tau (Multiset): The multiset.
    - k (int): A value present in tau.
    - i (int): The argument passed to D.
    - D (MonotoneFn): The control function.

    Returns:
    - Multiset: tau<k,i,D>, smaller than tau in the multiset order.
    """
    if k not in tau:
        raise DomainError(f"{k} does not occur in {tau}")
    counts = tau.as_counter()
    counts[k] -= 1
    if k > 0:
        counts[k - 1] += k * max(D(i) - 1, 0)
    return Multiset.from_counts(counts)


def multiset_descent(tau: Multiset, D: MonotoneFn, i: int = 0, limit: int = 10_000) -> list[Multiset]:
    """The multisets visited by the m recursion, one removal of the minimum per step."""
    visited = [tau]
    while not tau.is_empty() and len(visited) <= limit:
        tau = multiset_step(tau, tau.min(), i, D)
        i += 1
        visited.append(tau)
    return visited


def multiset_ordinal(tau: Multiset) -> Ordinal:
    """
    o(tau) = sum over 0 < i <= max tau of w^(i-1) * c_i, plus 2|tau|, where
    c_i counts the copies of i and |tau| is the number of elements.

    Args:
    - tau (Multiset): The multiset.

    Returns:
    - Ordinal: The ordinal controlling the length of the m recursion.
    """
    total = ZERO
    for value in range(tau.max(), 0, -1):
        total = left_sum(total, Ordinal.omega_power(value - 1, tau.multiplicity(value)))
    return left_sum(total, Ordinal.of(2 * len(tau)))


def _frak_m(tau: Multiset, D: MonotoneFn, i: int) -> int:
    budget = current_budget()
    key = ("m", D.key, tau, i)
    if key in budget.memo:
        return budget.memo[key]
    counts = tau.as_counter()
    steps, position = 0, i
    while counts:
        low = min(counts)
        if low == 0:
            zeros = counts.pop(0)
            steps += zeros
            position += zeros
            continue
        budget.step(lower_bound=steps + sum(counts.values()))
        fresh = low * max(budget.check(D(position), lower_bound=steps) - 1, 0)
        counts[low] -= 1
        if not counts[low]:
            del counts[low]
        if fresh:
            counts[low - 1] = budget.check(counts.get(low - 1, 0) + fresh, lower_bound=steps)
        steps += 1
        position += 1
    budget.memo[key] = steps
    return steps


def frak_m(tau: Multiset, D: MonotoneFn, i: int, budget: Budget | None = None) -> int | SymbolicResidue:
    """
    The recursion m_{tau,D}(i) = 1 + m_{tau<min tau,i,D>,D}(i+1), m_{empty,D}(i) = 0.

    Runs of zeros are removed in bulk; one step of the budget is spent per
    removal of a positive value.

    Args:
    - tau (Multiset): The starting multiset.
    - D (MonotoneFn): The control function.
    - i (int): The starting argument.
    - budget (Budget | None): Bit and step caps.

    Returns:
    - int | SymbolicResidue: The exact length of the descent, or a residue
      whose lower bound counts the removals made plus the elements left.
    """
    with evaluator.budgeted(budget or Budget()):
        try:
            return _frak_m(tau, D, i)
        except BudgetExhausted as exhausted:
            logger.warning("m recursion for %s exhausted its budget: %s", tau, exhausted.reason)
            return SymbolicResidue(call("m", D, tau, i), exhausted.lower_bound, exhausted.reason)


def _frak_m_star(D: MonotoneFn, n: int) -> int:
    return _frak_m(Multiset.of([n]), D.plus_one(), 0) + 1


def frak_m_star(D: MonotoneFn, n: int, budget: Budget | None = None) -> int | SymbolicResidue:
    """
    m*(D, n) = m_{{n}, D+1}(0) + 1, the Dickson witness bound in N^n.

    Args:
    - D (MonotoneFn): The control function bounding the stream norms.
    - n (int): The dimension.
    - budget (Budget | None): Bit and step caps.

    Returns:
    - int | SymbolicResidue: The bound.
    """
    with evaluator.budgeted(budget or Budget()):
        try:
            return _frak_m_star(D, n)
        except BudgetExhausted as exhausted:
            return SymbolicResidue(call("m_star", D, n), exhausted.lower_bound, exhausted.reason)
