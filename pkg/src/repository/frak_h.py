import logging

from src.entity.bound_expr import MonotoneFn, SymbolicResidue, call
from src.entity.derivative import RankSeq, Ranking, get_ranking, is_bad_leader_sequence
from src.services.evaluator import Budget, current_budget, evaluator
from src.services.exceptions import BudgetExhausted, DomainError

logger = logging.getLogger(__name__)


def _frak_h(D: MonotoneFn, gamma: RankSeq, ranking: Ranking) -> int:
    budget = current_budget()
    key = ("h", ranking.n, ranking.m, D.key, gamma)
    if key in budget.memo:
        return budget.memo[key]
    leaders = tuple(u for u, _ in gamma)
    w = 1
    for index in range(budget.check(D(1)), 0, -1):
        budget.step(lower_bound=w)
        u = ranking.derivative(index)
        if not is_bad_leader_sequence(leaders + (u,), ranking):
            continue
        v = w
        for degree in range(budget.check(D(w), lower_bound=w), 0, -1):
            budget.step(lower_bound=v)
            v = budget.check(v + _frak_h(D.shifted(v), gamma + ((u, degree),), ranking), lower_bound=v)
        w = v
    budget.memo[key] = w
    return w


def frak_h(
    n: int, m: int, D: MonotoneFn, gamma: RankSeq = (), budget: Budget | None = None
) -> int | SymbolicResidue:
    """
    The autoreduced chain bound h_{n,m}(D, gamma).

    Starting from w = 1, the derivatives of index D(1) down to 1 are visited;
    when u extends the leaders of gamma to a bad leader sequence, w grows by
    h(D_v, gamma + (u, k)) for k = D(w) down to 1, v being the running total
    and D_v the shift i -> D(v + i). A maximal gamma therefore gets 1.

    Args:
    - n (int): Number of indeterminates.
    - m (int): Number of derivations.
    - D (MonotoneFn): The control function.
    - gamma (RankSeq): The rank sequence reached so far.
    - budget (Budget | None): Bit and step caps.

    Returns:
    - int | SymbolicResidue: The bound.
    """
    ranking = get_ranking(n, m)
    if not is_bad_leader_sequence(tuple(u for u, _ in gamma), ranking):
        raise DomainError("the leaders of gamma do not form a bad leader sequence")
    with evaluator.budgeted(budget or Budget()):
        try:
            return _frak_h(D, tuple(gamma), ranking)
        except BudgetExhausted as exhausted:
            logger.warning("h recursion for %s exhausted its budget: %s", D, exhausted.reason)
            return SymbolicResidue(call("h", D, n, m), exhausted.lower_bound, exhausted.reason)
