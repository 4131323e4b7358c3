import logging
from contextlib import contextmanager
from contextvars import ContextVar
from functools import singledispatchmethod
from math import comb

from src.config.config import BUDGET_BITS, STEP_CAP
from src.entity.bound_expr import (
    Add,
    Apply,
    Bag,
    Binomial,
    BoundExpr,
    Const,
    Fn,
    Iterate,
    Lambda,
    Max,
    MonotoneFn,
    Mul,
    NamedCall,
    Pow,
    Sub,
    SymbolicResidue,
    Var,
    format_expr,
)
from src.entity.ordinal import Ordinal
from src.repository.ordinals import fundamental
from src.services.exceptions import BudgetExhausted, DomainError

logger = logging.getLogger(__name__)


class Budget:
    """
    Evaluation budget: a bit-size cap on every intermediate value and a cap
    on the number of elementary steps. Memo tables live on the budget so a
    repeated evaluation under a fresh budget replays the same steps.
    """

    def __init__(self, bits: int = BUDGET_BITS, steps: int = STEP_CAP):
        if bits < 1 or steps < 1:
            raise DomainError("budget caps must be positive")
        self.bits = bits
        self.steps = steps
        self.used = 0
        self.memo: dict = {}

    def step(self, count: int = 1, lower_bound: int = 0):
        self.used += count
        if self.used > self.steps:
            raise BudgetExhausted(f"step cap {self.steps} reached", lower_bound)

    def check(self, value: int, lower_bound: int = 0) -> int:
        if value.bit_length() > self.bits:
            raise BudgetExhausted(f"value exceeds {self.bits} bits", lower_bound)
        return value

    def guard(self, predicted_bits: int, lower_bound: int = 0):
        if predicted_bits > self.bits:
            raise BudgetExhausted(f"value would exceed {self.bits} bits", lower_bound)


_active_budget: ContextVar[Budget | None] = ContextVar("active_budget", default=None)


def current_budget() -> Budget:
    budget = _active_budget.get()
    return budget if budget is not None else Budget()


class BoundEvaluator:
    """Exact evaluation of bound expressions under a budget."""

    @contextmanager
    def budgeted(self, budget: Budget | None = None):
        """
        Makes ``budget`` the active budget; nested calls without an explicit
        budget share the enclosing one.
        """
        if budget is None and _active_budget.get() is not None:
            yield _active_budget.get()
            return
        budget = budget or Budget()
        token = _active_budget.set(budget)
        try:
            yield budget
        finally:
            _active_budget.reset(token)

    def evaluate(self, node: BoundExpr, env: dict | None = None, budget: Budget | None = None):
        """
        Evaluates an expression exactly.

        Args:
        - node (BoundExpr): The expression.
        - env (dict | None): Values of free variables.
        - budget (Budget | None): The budget; a fresh default budget when omitted.

        Returns:
        - int | SymbolicResidue: The exact value, or a residue with a certified lower bound.
        """
        with self.budgeted(budget or Budget()):
            try:
                return self.value(node, env or {})
            except BudgetExhausted as exhausted:
                logger.warning("budget exhausted evaluating %s: %s", format_expr(node), exhausted.reason)
                return SymbolicResidue(node, exhausted.lower_bound, exhausted.reason)

    def value(self, node: BoundExpr, env: dict | None = None):
        return self._eval(node, env or {})

    def function(self, node: BoundExpr, env: dict | None = None) -> MonotoneFn:
        fn = self._eval(node, env or {})
        if not isinstance(fn, MonotoneFn):
            raise DomainError(f"{format_expr(node)} is not a function")
        return fn

    def call(self, g: MonotoneFn, x: int, floor: int | None = None) -> int:
        """
        g(x) under the active budget. ``floor`` is the lower bound reported if
        the budget runs out; by default x for inflationary g, else 0.
        """
        budget = current_budget()
        if floor is None:
            floor = x if g.inflationary else 0
        budget.step(lower_bound=floor)
        return budget.check(g(x), lower_bound=floor)

    def power(self, g: MonotoneFn, k: int, x: int, floor: int | None = None) -> int:
        """g applied k times to x, with closed forms for successor and affine functions."""
        budget = current_budget()
        if k == 0:
            return x
        if g.kind == "successor":
            return budget.check(x + k, lower_bound=x)
        if g.kind == "constant":
            return g.params[0]
        if g.kind == "affine":
            a, c = g.params
            if a == 1:
                return budget.check(x + k * c, lower_bound=x)
            budget.guard(k * a.bit_length() + max(x, c).bit_length() + 1, lower_bound=x)
            scale = a**k
            return budget.check(scale * x + c * (scale - 1) // (a - 1), lower_bound=x)
        floor = 0 if floor is None else floor
        for _ in range(k):
            x = self.call(g, x, floor)
        return x

    def _iteration_floor(self, g: MonotoneFn, alpha: Ordinal, x: int) -> int | None:
        """
        A certified lower bound on g^alpha(x) for g that is not inflationary by
        construction: x when g(x) >= x (every later argument is then at least
        g(x)), otherwise 0. None means "track the current argument".
        """
        if g.inflationary or alpha.is_zero():
            return None
        return x if self.call(g, x, 0) >= x else 0

    def iterate(self, g: MonotoneFn, alpha: Ordinal, x: int) -> int:
        """
        g^alpha(x) by the fundamental-sequence unrolling g^a(b) = g^(a[b])(g(b)).

        Finite tails are applied with ``power``; for the successor function a
        trailing w*c is collapsed with g^(w*c)(x) = 2^c (x+1) - 1. Every
        unrolling pass is charged one step per term of the current index.
        """
        budget = current_budget()
        fixed = self._iteration_floor(g, alpha, x)
        while not alpha.is_zero():
            floor = x if fixed is None else fixed
            tail = alpha.finite_tail()
            if tail:
                x = self.power(g, tail, x, floor)
                alpha = alpha.drop_finite_tail()
                continue
            exponent, coefficient = alpha.terms[-1]
            if g.kind == "successor" and exponent == Ordinal.of(1):
                budget.guard(coefficient + (x + 1).bit_length(), lower_bound=floor)
                budget.step(lower_bound=floor)
                x = ((x + 1) << coefficient) - 1
                alpha = Ordinal(alpha.terms[:-1])
                continue
            budget.step(len(alpha.terms), lower_bound=floor)
            alpha, x = fundamental(alpha, x), self.call(g, x, floor)
        return x

    @singledispatchmethod
    def _eval(self, node, env: dict):
        raise DomainError(f"cannot evaluate {node!r}")

    @_eval.register
    def _(self, node: Const, env: dict):
        return node.value

    @_eval.register
    def _(self, node: Var, env: dict):
        if node.name not in env:
            raise DomainError(f"unbound variable {node.name}")
        return env[node.name]

    @_eval.register
    def _(self, node: Bag, env: dict):
        return node.values

    @_eval.register
    def _(self, node: Fn, env: dict):
        return node.fn

    @_eval.register
    def _(self, node: Lambda, env: dict):
        descriptor = node.descriptor or format_expr(node)

        def fn(x: int) -> int:
            return self._eval(node.body, {**env, node.param: x})

        return MonotoneFn(fn, descriptor)

    @_eval.register
    def _(self, node: Apply, env: dict):
        fn = self.function(node.fn, env)
        arg = self._lower(self._eval, node.arg, env, expansive=False)
        return self.call(fn, arg)

    @_eval.register
    def _(self, node: Add, env: dict):
        values, exhausted = self._collect(node.args, env)
        if exhausted:
            raise BudgetExhausted(exhausted[0].reason, sum(values) + sum(e.lower_bound for e in exhausted))
        return current_budget().check(sum(values), lower_bound=max(values))

    @_eval.register
    def _(self, node: Sub, env: dict):
        try:
            left = self._eval(node.left, env)
        except BudgetExhausted as exhausted:
            if isinstance(node.right, Const):
                raise BudgetExhausted(exhausted.reason, max(exhausted.lower_bound - node.right.value, 0))
            raise BudgetExhausted(exhausted.reason, 0)
        right = self._lower(self._eval, node.right, env, expansive=False)
        return max(left - right, 0)

    @_eval.register
    def _(self, node: Mul, env: dict):
        values, exhausted = self._collect(node.args, env)
        if 0 in values:
            return 0
        if exhausted:
            raise BudgetExhausted(
                exhausted[0].reason, max(values + [e.lower_bound for e in exhausted])
            )
        budget = current_budget()
        lower = max(values, default=0)
        budget.guard(sum(v.bit_length() - 1 for v in values) + 1, lower_bound=lower)
        product = 1
        for v in values:
            product *= v
        return budget.check(product, lower_bound=lower)

    @_eval.register
    def _(self, node: Max, env: dict):
        values, exhausted = self._collect(node.args, env)
        if exhausted:
            raise BudgetExhausted(exhausted[0].reason, max(values + [e.lower_bound for e in exhausted]))
        return max(values)

    @_eval.register
    def _(self, node: Pow, env: dict):
        (base, exponent), (base_err, exponent_err) = self._collect_pair(node.base, node.exponent, env)
        budget = current_budget()
        if base_err is None and exponent_err is None:
            if base in (0, 1) or exponent == 0:
                return 1 if exponent == 0 else base
            lower = max(base, exponent)
            budget.guard(exponent * (base.bit_length() - 1) + 1, lower_bound=lower)
            return budget.check(base**exponent, lower_bound=lower)
        if exponent_err is None:
            if exponent == 0:
                return 1
            raise BudgetExhausted(base_err.reason, base_err.lower_bound)
        if base_err is None:
            if base == 1 or (base == 0 and exponent_err.lower_bound >= 1):
                return base
            raise BudgetExhausted(exponent_err.reason, exponent_err.lower_bound if base >= 2 else 0)
        lower = max(base_err.lower_bound, exponent_err.lower_bound) if base_err.lower_bound >= 2 else 0
        raise BudgetExhausted(base_err.reason, lower)

    @_eval.register
    def _(self, node: Binomial, env: dict):
        (top, bottom), (top_err, bottom_err) = self._collect_pair(node.top, node.bottom, env)
        if top_err is None and bottom_err is None:
            if bottom > top:
                return 0
            current_budget().guard(min(bottom, top - bottom) * max(top.bit_length(), 1), lower_bound=0)
            return comb(top, bottom)
        if bottom_err is None and 1 <= bottom < top_err.lower_bound:
            raise BudgetExhausted(top_err.reason, top_err.lower_bound)
        raise BudgetExhausted((top_err or bottom_err).reason, 0)

    @_eval.register
    def _(self, node: Iterate, env: dict):
        g = self.function(node.fn, env)
        x = self._eval(node.arg, env)
        return self.iterate(g, node.index, x)

    @_eval.register
    def _(self, node: NamedCall, env: dict):
        from src.repository.catalogue import evaluate_call

        args = []
        for arg in node.args:
            try:
                args.append(self._eval(arg, env))
            except BudgetExhausted as exhausted:
                raise BudgetExhausted(exhausted.reason, 0)
        budget = current_budget()
        key = ("call", node.name, tuple(args))
        if key not in budget.memo:
            budget.memo[key] = evaluate_call(node.name, tuple(args))
        return budget.memo[key]

    def _collect(self, args, env: dict):
        values, exhausted = [], []
        for arg in args:
            try:
                values.append(self._eval(arg, env))
            except BudgetExhausted as err:
                exhausted.append(err)
        return values, exhausted

    def _collect_pair(self, left, right, env: dict):
        pair, errors = [], []
        for arg in (left, right):
            try:
                pair.append(self._eval(arg, env))
                errors.append(None)
            except BudgetExhausted as err:
                pair.append(None)
                errors.append(err)
        return pair, errors

    def _lower(self, evaluate, node, env, expansive: bool):
        try:
            return evaluate(node, env)
        except BudgetExhausted as exhausted:
            raise BudgetExhausted(exhausted.reason, exhausted.lower_bound if expansive else 0)


evaluator = BoundEvaluator()
