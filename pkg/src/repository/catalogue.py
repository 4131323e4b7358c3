"""
The catalogue of named bound functions.

Every entry is either a formula (``body`` builds a BoundExpr from concrete
argument values, possibly calling other entries) or a procedure
(``compute`` runs a recursion directly under the active budget).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

from src.entity.bound_expr import (
    Binomial,
    BoundExpr,
    Fn,
    Iterate,
    Max,
    MonotoneFn,
    NamedCall,
    call,
    expr,
    format_expr,
)
from src.entity.derivative import get_ranking
from src.entity.multiset import Multiset
from src.entity.ordinal import Ordinal
from src.repository.frak_h import _frak_h
from src.repository.iteration import G
from src.repository.multisets import _frak_m, _frak_m_star
from src.repository.ordinals import left_sum
from src.services.evaluator import current_budget, evaluator
from src.services.exceptions import DomainError

logger = logging.getLogger(__name__)

FUNCTION_PARAMS = ("D", "F")
MULTISET_PARAMS = ("tau",)


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    params: tuple[str, ...]
    minimums: dict[str, int] = field(default_factory=dict)
    body: Callable[..., BoundExpr] | None = None
    compute: Callable[..., int] | None = None
    definition: str = ""

    def check(self, args: tuple):
        if len(args) != len(self.params):
            raise DomainError(f"{self.name} takes {len(self.params)} arguments ({', '.join(self.params)}), got {len(args)}")
        for param, value in zip(self.params, args):
            if param in FUNCTION_PARAMS:
                if not isinstance(value, MonotoneFn):
                    raise DomainError(f"{self.name}: {param} must be a monotone function")
            elif param in MULTISET_PARAMS:
                if not isinstance(value, Multiset):
                    raise DomainError(f"{self.name}: {param} must be a multiset")
            elif isinstance(value, int):
                if value < self.minimums.get(param, 0):
                    raise DomainError(f"{self.name}: {param} must be at least {self.minimums.get(param, 0)}, got {value}")


CATALOGUE: dict[str, CatalogueEntry] = {}


def _register(name: str, params: str, minimums: dict[str, int] | None = None, definition: str = ""):
    def decorator(fn):
        is_formula = definition == ""
        CATALOGUE[name] = CatalogueEntry(
            name=name,
            params=tuple(params.split()),
            minimums=minimums or {},
            body=fn if is_formula else None,
            compute=None if is_formula else fn,
            definition=definition,
        )
        return fn

    return decorator


@_register("d_n", "n b")
def _d_n(n: int, b: int) -> BoundExpr:
    return (2 * expr(b)) ** (2 ** expr(n))


@_register("e", "n b", {"n": 1})
def _e(n: int, b: int) -> BoundExpr:
    B, dn = expr(b), call("d_n", n - 1, b)
    return 2 ** ((B + dn) ** expr(n - 1) + 1) * B + B + dn


@_register("zeta0", "n d")
def _zeta0(n: int, d: int) -> BoundExpr:
    return Binomial(expr(n) + call("d_n", n, d), expr(n))


@_register("zeta1", "n d b")
def _zeta1(n: int, d: int, b: int) -> BoundExpr:
    return (Binomial(expr(b) + n, expr(n)) + 2) * call("zeta0", n, d)


@_register("zeta2", "n d b")
def _zeta2(n: int, d: int, b: int) -> BoundExpr:
    z1 = call("zeta1", n, d, b)
    return (z1 + 1) ** (2**z1 - 1)


@_register("upsilon", "n d", {"n": 2})
def _upsilon(n: int, d: int) -> BoundExpr:
    p = call("p_n", n - 1, d)
    return NamedCall("zeta1", (expr(n - 1), p, expr(d))) * NamedCall("zeta2", (expr(n - 1), p, expr(d)))


@_register("rho", "n d", {"n": 2})
def _rho(n: int, d: int) -> BoundExpr:
    u = call("upsilon", n, d)
    return Max((2 * Binomial(u + n, expr(n)) * u, call("e", n - 1, d)))


@_register("p_n", "n d", {"n": 1})
def _p_n(n: int, d: int) -> BoundExpr:
    return expr(d) if n == 1 else call("rho", n, d)


@_register("g", "b d")
def _g(b: int, d: int) -> BoundExpr:
    return expr(d) * (1 + expr(b)) ** expr(d)


@_register("m", "D tau i", definition="m(D,{},i) = 0; m(D,tau,i) = 1 + m(D, tau<min tau,i,D>, i+1)")
def _m(D: MonotoneFn, tau: Multiset, i: int) -> int:
    return _frak_m(tau, D, i)


@_register("m_star", "D n", definition="(+ (m (+ D 1) {n} 0) 1)")
def _m_star(D: MonotoneFn, n: int) -> int:
    return _frak_m_star(D, n)


def _p_shift(F: MonotoneFn, d: int) -> MonotoneFn:
    """F_d(b) = F(p_d(b))."""
    return MonotoneFn(lambda b: evaluator.call(F, evaluator.value(call("p_n", d, b))), f"(F_p {F} {d})")


@_register("u_F", "F x", {"x": 1}, definition="(iter F_x [(m_star (lambda i (iter F_x [i] x)) x)] x), F_x(b) = F(p_x(b))")
def _u_F(F: MonotoneFn, x: int) -> int:
    Fx = _p_shift(F, x)
    control = MonotoneFn(lambda i: evaluator.power(Fx, i, x), f"(iterates {Fx} {x})")
    return evaluator.power(Fx, _frak_m_star(control, x), x)


@_register("u_plus_F", "F b", {"b": 1})
def _u_plus_F(F: MonotoneFn, b: int) -> BoundExpr:
    B = expr(b)
    return Max((call("u_F", F, b), NamedCall("d_n", (B + 1, 2 * B * Binomial(2 * B, B) + 1))))


@_register("N", "F b", {"b": 1})
def _N(F: MonotoneFn, b: int) -> BoundExpr:
    u = call("u_plus_F", F, b)
    return NamedCall("d_n", (u, u)) + u


@_register("f_F", "F b", {"b": 1})
def _f_F(F: MonotoneFn, b: int) -> BoundExpr:
    u, N = call("u_plus_F", F, b), call("N", F, b)
    return NamedCall("d_n", (u, Binomial(N + b, expr(b)) * u)) + N


@_register("h", "D n m", {"n": 1}, definition="w/v recursion over bad leader extensions of the empty rank sequence")
def _h(D: MonotoneFn, n: int, m: int) -> int:
    return _frak_h(D, (), get_ranking(n, m))


def _control_sequence(name: str, b: int, n: int, m: int, step: Callable[[int], BoundExpr]):
    def sequence(i: int) -> int:
        budget = current_budget()
        key = (name, b, n, m)
        known = budget.memo.setdefault(key, [b])
        while len(known) <= i:
            budget.step(lower_bound=known[-1])
            known.append(evaluator.value(step(known[-1])))
        return known[i]

    return sequence


def _sat_step(b: int, n: int, m: int):
    return lambda x: call("g", x, b)


def _cohere_step(b: int, n: int, m: int):
    return lambda x: call("g", x, Binomial(2 * expr(x) + m - 1, expr(m - 1)) * n * (x + 1))


def _char_step(b: int, n: int, m: int):
    def step(x: int) -> BoundExpr:
        F = MonotoneFn(lambda k: evaluator.value(call("F_char", x, k)), f"(F_char {x})")
        return Max((
            call("g", x, Binomial(2 * expr(x) + m - 1, expr(m - 1)) * n * (x + 1)),
            NamedCall("p_n", (expr(x), call("u_F", F, x))),
            call("f_F", F, x),
        ))

    return step


_CONTROL_STEPS = {"D_sat": _sat_step, "D_cohere": _cohere_step, "D_char": _char_step}


def control_function(name: str, b: int, n: int, m: int) -> MonotoneFn:
    """The control functions D_sat, D_cohere and D_char as monotone functions of i."""
    sequence = _control_sequence(name, b, n, m, _CONTROL_STEPS[name](b, n, m))
    return MonotoneFn(sequence, f"({name} {b} {n} {m})")


@_register("D_sat", "b n m i", {"n": 1}, definition="D(0) = b; D(i+1) = (g D(i) b)")
def _D_sat(b: int, n: int, m: int, i: int) -> int:
    return control_function("D_sat", b, n, m)(i)


@_register("D_cohere", "b n m i", {"n": 1, "m": 1}, definition="D(0) = b; D(i+1) = (g D(i) (* (choose (+ (* 2 D(i)) m -1) (- m 1)) n (+ D(i) 1)))")
def _D_cohere(b: int, n: int, m: int, i: int) -> int:
    return control_function("D_cohere", b, n, m)(i)


@_register("D_char", "b n m i", {"b": 1, "n": 1, "m": 1}, definition="D(0) = b; D(i+1) = (max (g D(i) ...) (p_n D(i) (u_F (F_char D(i)) D(i))) (f_F (F_char D(i)) D(i)))")
def _D_char(b: int, n: int, m: int, i: int) -> int:
    return control_function("D_char", b, n, m)(i)


def _index_bound(name: str, n: int, m: int, b: int) -> int:
    D = control_function(name, b, n, m)
    return D(_frak_h(D, (), get_ranking(n, m)))


@_register("i_sat", "n m b", {"n": 1}, definition="(D_sat b n m (h (D_sat b n m) n m))")
def _i_sat(n: int, m: int, b: int) -> int:
    return _index_bound("D_sat", n, m, b)


@_register("i_cohere", "n m b", {"n": 1, "m": 1}, definition="(D_cohere b n m (h (D_cohere b n m) n m))")
def _i_cohere(n: int, m: int, b: int) -> int:
    return _index_bound("D_cohere", n, m, b)


@_register("i_char", "n m b", {"n": 1, "m": 1, "b": 1}, definition="(D_char b n m (h (D_char b n m) n m))")
def _i_char(n: int, m: int, b: int) -> int:
    return _index_bound("D_char", n, m, b)


@_register("z_k", "k d b")
def _z_k(k: int, d: int, b: int) -> BoundExpr:
    if k == 0:
        return expr(d)
    if b + d < 1:
        raise DomainError("z_k needs b + d >= 1")
    B, D = expr(b), expr(d)
    g = call("g", b + d - 1, max(b + d - 1, 2 * b))
    inner = NamedCall("d_n", (expr(b + d), (g + D + 1) * Binomial(2 * B, B) * (2 * B) + D))
    return NamedCall("z_k", (expr(k - 1), inner + g + D + 1, B))


@_register("F_char", "c k")
def _F_char(c: int, k: int) -> BoundExpr:
    return NamedCall("z_k", (expr(k + 1), expr(k), call("g", c, k)))


def k_index(n: int) -> Ordinal:
    return Ordinal.omega_power(n + 8)


def j_index(n: int, m: int) -> Ordinal:
    tower = Ordinal.omega_power(Ordinal.omega_power(Ordinal.omega_power(m), n))
    second = left_sum(Ordinal.omega_power(m, 2 * n), Ordinal.of(2))
    return left_sum(Ordinal.omega_power(tower, 2), Ordinal.omega_power(second, 3))


@_register("k", "n d", {"n": 1})
def _k(n: int, d: int) -> BoundExpr:
    return Iterate(Fn(G), k_index(n), expr(d))


@_register("j", "F n m i0 d", {"n": 1})
def _j(F: MonotoneFn, n: int, m: int, i0: int, d: int) -> BoundExpr:
    return Iterate(Fn(F), j_index(n, m), expr(max(d, n, i0)))


def _entry(name: str) -> CatalogueEntry:
    if name not in CATALOGUE:
        raise DomainError(f"unknown bound {name!r}; known: {', '.join(CATALOGUE)}")
    return CATALOGUE[name]


def catalogue(name: str, *args) -> NamedCall:
    """
    Builds the bound expression for a catalogue entry.

    Args:
    - name (str): The catalogue name, e.g. ``g`` or ``m_star``.
    - args: Integers, monotone functions (for ``D``/``F``) or a multiset (for ``tau``).

    Returns:
    - NamedCall: An expression that prints deterministically and evaluates under a budget.
    """
    entry = _entry(name)
    entry.check(args)
    return call(name, *args)


def evaluate_call(name: str, args: tuple) -> int:
    entry = _entry(name)
    entry.check(args)
    if entry.compute is not None:
        return entry.compute(*args)
    return evaluator.value(entry.body(*args))


def expand(name: str, *args) -> str:
    """The one-level definition of a catalogue call as an s-expression."""
    entry = _entry(name)
    entry.check(args)
    head = format_expr(call(name, *args))
    if entry.body is not None:
        return f"{head} = {format_expr(entry.body(*args))}"
    return f"{head} = {entry.definition}"


def function_argument(text: str) -> MonotoneFn:
    return G if text.strip() == "G" else MonotoneFn.parse(text)

