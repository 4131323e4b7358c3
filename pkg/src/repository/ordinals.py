from functools import lru_cache

from src.entity.ordinal import Ordinal, ONE, _cmp, ordinal_key
from src.services.exceptions import DomainError

# розмір кешу для операцій над ординалами
ORDINAL_CACHE_SIZE = 4096


def _from_map(coefficients: dict[Ordinal, int]) -> Ordinal:
    exponents = sorted((e for e, c in coefficients.items() if c), key=ordinal_key, reverse=True)
    return Ordinal(tuple((e, coefficients[e]) for e in exponents))


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def left_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    """
    Ordinary (non-commutative) ordinal addition a + b.

    Args:
    - a (Ordinal): The left summand.
    - b (Ordinal): The right summand; its leading term absorbs every smaller term of a.

    Returns:
    - Ordinal: a + b in Cantor normal form.
    """
    if b.is_zero():
        return a
    lead, lead_coefficient = b.terms[0]
    kept = []
    for exponent, coefficient in a.terms:
        sign = _cmp(exponent, lead)
        if sign > 0:
            kept.append((exponent, coefficient))
        elif sign == 0:
            lead_coefficient += coefficient
            break
        else:
            break
    return Ordinal(tuple(kept) + ((lead, lead_coefficient),) + b.terms[1:])


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def natural_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    """
    Hessenberg natural sum: coefficients of equal exponents are added.

    Args:
    - a (Ordinal): First summand.
    - b (Ordinal): Second summand.

    Returns:
    - Ordinal: a # b, commutative and at least both arguments.
    """
    merged: dict[Ordinal, int] = {}
    for exponent, coefficient in a.terms + b.terms:
        merged[exponent] = merged.get(exponent, 0) + coefficient
    return _from_map(merged)


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def natural_prod(a: Ordinal, b: Ordinal) -> Ordinal:
    """
    Natural product: exponents combine by natural sum, coefficients multiply.

    Args:
    - a (Ordinal): First factor.
    - b (Ordinal): Second factor.

    Returns:
    - Ordinal: a (x) b, commutative and distributive over the natural sum.
    """
    merged: dict[Ordinal, int] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            exponent = natural_sum(ea, eb)
            merged[exponent] = merged.get(exponent, 0) + ca * cb
    return _from_map(merged)


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def omega_times(a: Ordinal) -> Ordinal:
    """
    Left multiplication by omega: w * a, i.e. every exponent e becomes 1 + e.

    Args:
    - a (Ordinal): The ordinal to scale.

    Returns:
    - Ordinal: w * a.
    """
    return Ordinal(tuple((left_sum(ONE, e), c) for e, c in a.terms))


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def fundamental(a: Ordinal, x: int) -> Ordinal:
    """
    The fundamental sequence a[x].

    A successor loses one; for a limit the least term w^e*c is rewritten to
    w^e*(c-1) + w^(e[x])*x.

    Args:
    - a (Ordinal): A positive ordinal.
    - x (int): The index into the fundamental sequence.

    Returns:
    - Ordinal: a[x] < a.
    """
    if a.is_zero():
        raise DomainError("the fundamental sequence of 0 is undefined")
    if x < 0:
        raise DomainError("fundamental sequence index must be non-negative")
    *prefix, (exponent, coefficient) = a.terms
    if coefficient > 1:
        prefix.append((exponent, coefficient - 1))
    if exponent.is_zero():
        return Ordinal(tuple(prefix))
    if x:
        prefix.append((fundamental(exponent, x), x))
    return Ordinal(tuple(prefix))


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def coord_bound(a: Ordinal) -> int:
    """
    The coordinate bound |a|: the largest coefficient anywhere in the normal form.

    Args:
    - a (Ordinal): The ordinal.

    Returns:
    - int: |a|; 0 for the ordinal 0.
    """
    return max((max(c, coord_bound(e)) for e, c in a.terms), default=0)


def predecessor(a: Ordinal) -> Ordinal:
    if not a.is_successor():
        raise DomainError(f"{a} has no predecessor")
    return fundamental(a, 0)


def nesting_depth(a: Ordinal) -> int:
    return max((1 + nesting_depth(e) for e, _ in a.terms), default=0)


