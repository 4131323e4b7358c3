import logging

from src.entity.bound_expr import Fn, Iterate, MonotoneFn, SymbolicResidue, expr
from src.entity.ordinal import Ordinal
from src.services.evaluator import Budget, evaluator
from src.services.exceptions import BudgetExhausted, DomainError

logger = logging.getLogger(__name__)

# швидко зростаюча еталонна функція: G(x) = x + 1
G = MonotoneFn.successor()


def iterate(g: MonotoneFn, a: Ordinal, b: int, budget: Budget | None = None) -> int | SymbolicResidue:
    """
    Ordinal-indexed iteration g^a(b), with g^0(b) = b and g^a(b) = g^(a[b])(g(b)).

    Args:
    - g (MonotoneFn): The function to iterate.
    - a (Ordinal): The iteration index.
    - b (int): The starting argument.
    - budget (Budget | None): Bit and step caps; the configured defaults when omitted.

    Returns:
    - int | SymbolicResidue: The exact value, or a residue holding the Iterate node
      and the largest exact intermediate reached.
    """
    if b < 0:
        raise DomainError("iteration starts from a natural number")
    with evaluator.budgeted(budget or Budget()):
        try:
            return evaluator.iterate(g, a, b)
        except BudgetExhausted as exhausted:
            logger.warning("iteration %s^%s(%s) exhausted its budget: %s", g, a, b, exhausted.reason)
            return SymbolicResidue(Iterate(Fn(g), a, expr(b)), exhausted.lower_bound, exhausted.reason)


def benchmark(a: Ordinal, b: int, budget: Budget | None = None) -> int | SymbolicResidue:
    return iterate(G, a, b, budget)
