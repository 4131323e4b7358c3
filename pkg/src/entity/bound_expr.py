from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from src.entity.multiset import Multiset
from src.entity.ordinal import Ordinal, format_ordinal
from src.services.exceptions import ContractViolation, ParseError

FN_SYMBOL = sympy.Symbol("i")


class MonotoneFn:
    """
    A monotone function on the naturals with a printable descriptor.

    The descriptor doubles as the memoization key, so two functions with the
    same descriptor must agree everywhere. ``kind`` selects a closed form for
    finite powers: ``successor`` (x + k) and ``affine`` (a*x + c) are
    accelerated, everything else is iterated step by step.
    """

    def __init__(
        self,
        fn: Callable[[int], int],
        descriptor: str,
        kind: str = "opaque",
        params: tuple[int, ...] = (),
    ):
        self._fn = fn
        self.descriptor = descriptor
        self.kind = kind
        self.params = params
        self.base: MonotoneFn | None = None
        self.offset = 0

    def __call__(self, x: int) -> int:
        return self._fn(x)

    @property
    def key(self) -> str:
        return self.descriptor

    @property
    def inflationary(self) -> bool:
        """True when f(x) >= x holds everywhere by construction."""
        return self.kind in ("successor", "affine")

    def __eq__(self, other) -> bool:
        return isinstance(other, MonotoneFn) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"MonotoneFn({self.descriptor!r})"

    def __str__(self) -> str:
        return self.descriptor

    @classmethod
    def of(cls, fn: Callable[[int], int], descriptor: str) -> "MonotoneFn":
        return cls(fn, descriptor)

    @classmethod
    def successor(cls) -> "MonotoneFn":
        return cls(lambda x: x + 1, "G", kind="successor")

    @classmethod
    def constant(cls, c: int) -> "MonotoneFn":
        return cls(lambda x: c, f"(const {c})", kind="constant", params=(c,))

    @classmethod
    def affine(cls, a: int, c: int) -> "MonotoneFn":
        if a == 1 and c == 1:
            return cls.successor()
        if a == 0:
            return cls.constant(c)
        return cls(lambda x: a * x + c, f"(+ (* {a} i) {c})", kind="affine", params=(a, c))

    @classmethod
    def parse(cls, text: str) -> "MonotoneFn":
        """
        Parses a function of ``i`` such as ``i+2`` or ``2^i``.

        Polynomials of degree at most one become affine (or constant)
        functions; any other expression is evaluated exactly through sympy.
        """
        try:
            expr = parse_expr(
                text,
                local_dict={"i": FN_SYMBOL},
                transformations=standard_transformations + (convert_xor,),
            )
        except (SyntaxError, TypeError, sympy.SympifyError) as err:
            raise ParseError(f"cannot parse function {text!r}: {err}") from err
        if expr.free_symbols - {FN_SYMBOL}:
            raise ParseError(f"function {text!r} may only mention i")
        if expr.is_polynomial(FN_SYMBOL):
            poly = sympy.Poly(expr, FN_SYMBOL)
            coefficients = poly.all_coeffs()
            if poly.degree() <= 1 and all(c.is_Integer and c >= 0 for c in coefficients):
                a, c = (0, coefficients[0]) if poly.degree() <= 0 else coefficients
                return cls.affine(int(a), int(c))
        compiled = sympy.lambdify(FN_SYMBOL, expr, modules="math")

        def evaluate(x: int) -> int:
            value = compiled(x)
            if isinstance(value, float) or value < 0:
                raise ContractViolation(f"{text!r} does not map {x} to a natural", item=text)
            return int(value)

        return cls(evaluate, f"(fn {sympy.sstr(expr)})")

    def shifted(self, offset: int) -> "MonotoneFn":
        """D_i0(i) = D(i0 + i); shifts of shifts collapse onto the base function."""
        if not offset:
            return self
        base, start = (self.base, self.offset) if self.kind == "shift" else (self, 0)
        total = start + offset
        shifted = MonotoneFn(lambda x: base(total + x), f"(shift {base.descriptor} {total})", kind="shift")
        shifted.base, shifted.offset = base, total
        return shifted

    def plus_one(self) -> "MonotoneFn":
        if self.kind == "affine" or self.kind == "successor":
            a, c = self.params if self.kind == "affine" else (1, 1)
            return MonotoneFn.affine(a, c + 1)
        if self.kind == "constant":
            return MonotoneFn.constant(self.params[0] + 1)
        return MonotoneFn(lambda x: self(x) + 1, f"(+ {self.descriptor} 1)")

    def check_monotone(self, samples: int, seed: int, upper: int = 64):
        rng = random.Random(seed)
        for _ in range(samples):
            x, y = sorted((rng.randint(0, upper), rng.randint(0, upper)))
            if self(x) > self(y):
                raise ContractViolation(
                    f"{self.descriptor} is not monotone: f({x}) > f({y})", item=(x, y)
                )
        return self


class BoundExpr:
    """Base of the symbolic bound expression nodes; ints coerce to ``Const``."""

    def __add__(self, other):
        return Add((self, expr(other)))

    def __radd__(self, other):
        return Add((expr(other), self))

    def __mul__(self, other):
        return Mul((self, expr(other)))

    def __rmul__(self, other):
        return Mul((expr(other), self))

    def __pow__(self, other):
        return Pow(self, expr(other))

    def __rpow__(self, other):
        return Pow(expr(other), self)

    def __sub__(self, other):
        return Sub(self, expr(other))

    def __str__(self) -> str:
        return format_expr(self)


@dataclass(frozen=True, eq=True)
class Const(BoundExpr):
    value: int


@dataclass(frozen=True)
class Var(BoundExpr):
    name: str


@dataclass(frozen=True)
class Add(BoundExpr):
    args: tuple[BoundExpr, ...]


@dataclass(frozen=True)
class Sub(BoundExpr):
    """Truncated subtraction on the naturals."""

    left: BoundExpr
    right: BoundExpr


@dataclass(frozen=True)
class Mul(BoundExpr):
    args: tuple[BoundExpr, ...]


@dataclass(frozen=True)
class Pow(BoundExpr):
    base: BoundExpr
    exponent: BoundExpr


@dataclass(frozen=True)
class Binomial(BoundExpr):
    top: BoundExpr
    bottom: BoundExpr


@dataclass(frozen=True)
class Max(BoundExpr):
    args: tuple[BoundExpr, ...]


@dataclass(frozen=True)
class Bag(BoundExpr):
    """A multiset argument, e.g. the tau of the m recursion."""

    values: Multiset


@dataclass(frozen=True)
class Fn(BoundExpr):
    fn: MonotoneFn


@dataclass(frozen=True)
class Lambda(BoundExpr):
    param: str
    body: BoundExpr
    descriptor: str = ""


@dataclass(frozen=True)
class Apply(BoundExpr):
    fn: BoundExpr
    arg: BoundExpr


@dataclass(frozen=True)
class Iterate(BoundExpr):
    fn: BoundExpr
    index: Ordinal
    arg: BoundExpr


@dataclass(frozen=True)
class NamedCall(BoundExpr):
    name: str
    args: tuple[BoundExpr, ...] = field(default=())


Value = Union[int, MonotoneFn, Multiset]


def expr(value) -> BoundExpr:
    if isinstance(value, BoundExpr):
        return value
    if isinstance(value, MonotoneFn):
        return Fn(value)
    if isinstance(value, Multiset):
        return Bag(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"cannot use {value!r} in a bound expression")
    return Const(value)


def call(name: str, *args) -> NamedCall:
    return NamedCall(name, tuple(expr(a) for a in args))


def format_expr(node: BoundExpr) -> str:
    if isinstance(node, Const):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Add):
        return _sexpr("+", node.args)
    if isinstance(node, Sub):
        return _sexpr("-", (node.left, node.right))
    if isinstance(node, Mul):
        return _sexpr("*", node.args)
    if isinstance(node, Pow):
        return _sexpr("^", (node.base, node.exponent))
    if isinstance(node, Binomial):
        return _sexpr("choose", (node.top, node.bottom))
    if isinstance(node, Max):
        return _sexpr("max", node.args)
    if isinstance(node, Bag):
        return str(node.values)
    if isinstance(node, Fn):
        return node.fn.descriptor
    if isinstance(node, Lambda):
        return node.descriptor or f"(lambda {node.param} {format_expr(node.body)})"
    if isinstance(node, Apply):
        return _sexpr("apply", (node.fn, node.arg))
    if isinstance(node, Iterate):
        return f"(iter {format_expr(node.fn)} [{format_ordinal(node.index)}] {format_expr(node.arg)})"
    if isinstance(node, NamedCall):
        return _sexpr(node.name, node.args)
    raise TypeError(f"not a bound expression: {node!r}")


def _sexpr(head: str, args) -> str:
    return "(" + " ".join([head] + [format_expr(a) for a in args]) + ")"


@dataclass(frozen=True)
class SymbolicResidue:
    """
    Result of an evaluation that outgrew its budget: the unevaluated
    expression and a certified lower bound on its value.
    """

    expr: BoundExpr
    lower_bound: int
    reason: str

    def __str__(self) -> str:
        return f"RESIDUE >= {self.lower_bound}"
