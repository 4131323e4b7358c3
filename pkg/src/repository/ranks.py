from functools import lru_cache
from itertools import combinations, product

from src.entity.derivative import Derivative, RankSeq, Ranking, get_ranking, is_bad_leader_sequence
from src.entity.ordinal import Comparison, Ordinal, ONE, ZERO
from src.repository.ordinals import ORDINAL_CACHE_SIZE, left_sum, natural_sum, omega_times
from src.services.exceptions import DomainError, UnsupportedDimension

MAX_DICKSON_DIMENSION = 3


def is_bad_dickson_sequence(seq: tuple[tuple[int, ...], ...]) -> bool:
    return not any(
        all(x <= y for x, y in zip(seq[i], seq[j]))
        for i in range(len(seq))
        for j in range(i + 1, len(seq))
    )


def _fits(point: dict[int, int], seq: tuple[tuple[int, ...], ...]) -> bool:
    return all(any(point[j] < v[j] for j in point) for v in seq)


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def _residual_order_type(seq: tuple[tuple[int, ...], ...], n: int) -> Ordinal:
    bounds = [max((v[j] for v in seq), default=0) for j in range(n)]
    total = ZERO
    for size in range(n + 1):
        for free in combinations(range(n), size):
            fixed = [j for j in range(n) if j not in free]
            for values in product(*(range(bounds[j]) for j in fixed)):
                point = dict(zip(fixed, values))
                if not _fits(point, seq):
                    continue
                if any(_fits({k: v for k, v in point.items() if k != j}, seq) for j in fixed):
                    continue
                total = natural_sum(total, Ordinal.omega_power(size))
    return total


def bad_dickson_ordinal(seq, n: int) -> Ordinal:
    """
    Ordinal rank of a bad Dickson sequence in N^n.

    The residual set (vectors above no entry) is covered by maximal slices:
    some coordinates fixed below the entries' maxima, the rest free. Each
    slice with s free coordinates contributes w^s to a natural sum.

    Args:
    - seq (sequence of vectors): Vectors in N^n with no earlier entry below a later one.
    - n (int): The dimension, at most 3.

    Returns:
    - Ordinal: w^n for the empty sequence, strictly smaller after every extension.
    """
    if n > MAX_DICKSON_DIMENSION:
        raise UnsupportedDimension(f"bad Dickson ranks are implemented for n <= 3, got n={n}")
    seq = tuple(tuple(int(x) for x in v) for v in seq)
    for v in seq:
        if len(v) != n or any(x < 0 for x in v):
            raise DomainError(f"{v} is not a vector in N^{n}")
    if not is_bad_dickson_sequence(seq):
        raise DomainError(f"{list(seq)} is not a bad Dickson sequence")
    return _residual_order_type(seq, n)


def bad_leader_ordinal(seq: tuple[Derivative, ...], n: int, m: int) -> Ordinal:
    """
    Ordinal rank of a bad leader sequence: the natural sum over indeterminates
    of the bad Dickson ranks of their derivation exponent vectors.

    Args:
    - seq (tuple[Derivative, ...]): Derivatives increasing in the ranking, none a derivative of an earlier one.
    - n (int): Number of indeterminates.
    - m (int): Number of derivations.

    Returns:
    - Ordinal: w^m * n for the empty sequence.
    """
    ranking = get_ranking(n, m)
    if not is_bad_leader_sequence(tuple(seq), ranking):
        raise DomainError(f"{[str(u) for u in seq]} is not a bad leader sequence")
    total = ZERO
    for i in range(1, n + 1):
        exponents = tuple(u.exponents for u in seq if u.indeterminate == i)
        total = natural_sum(total, bad_dickson_ordinal(exponents, m))
    return total


def _leaders(gamma: RankSeq) -> tuple[Derivative, ...]:
    return tuple(u for u, _ in gamma)


def _check_rank_seq(gamma: RankSeq):
    for u, degree in gamma:
        if degree < 1:
            raise DomainError(f"degree of {u} in a rank sequence must be positive")


def autoreduced_ordinal(gamma: RankSeq, n: int, m: int) -> Ordinal:
    """
    Ordinal assigned to the rank sequence of an autoreduced set:
    sum of w^(o(mu_1..mu_i)) * b_i followed by w^(o(mu_1..mu_r)).

    Args:
    - gamma (RankSeq): (leader, degree) pairs of the set in increasing rank.
    - n (int): Number of indeterminates.
    - m (int): Number of derivations.

    Returns:
    - Ordinal: w^(w^m * n) for the empty set.
    """
    _check_rank_seq(gamma)
    leaders = _leaders(gamma)
    total = ZERO
    for i, (_, degree) in enumerate(gamma, start=1):
        total = left_sum(total, Ordinal.omega_power(bad_leader_ordinal(leaders[:i], n, m), degree))
    return left_sum(total, Ordinal.omega_power(bad_leader_ordinal(leaders, n, m)))


@lru_cache(maxsize=ORDINAL_CACHE_SIZE)
def _strict_exponents(leaders: tuple[Derivative, ...], n: int, m: int) -> tuple[tuple[Ordinal, ...], Ordinal]:
    ranking = get_ranking(n, m)
    exponents = tuple(
        left_sum(omega_times(bad_leader_ordinal(leaders[:i], n, m)), Ordinal.of(ranking.index(u)))
        for i, u in enumerate(leaders)
    )
    closing = omega_times(left_sum(bad_leader_ordinal(leaders, n, m), ONE))
    return exponents, closing


def strict_autoreduced_ordinal(gamma: RankSeq, n: int, m: int) -> Ordinal:
    """
    Ordinal assigned to a rank sequence that strictly decreases whenever the
    rank does: the i-th term is w^(w*R(mu_<i) + idx(mu_i)) * b_i and the
    sequence is closed by w^(w*(R(mu_<=r) + 1)), where R is the bad leader
    rank and idx the ranking index.

    The bad leader rank drops with every extension, so the exponents are
    already strictly descending and the terms form the normal form directly.

    Args:
    - gamma (RankSeq): (leader, degree) pairs of the set in increasing rank.
    - n (int): Number of indeterminates.
    - m (int): Number of derivations.

    Returns:
    - Ordinal: The assigned ordinal.
    """
    _check_rank_seq(gamma)
    exponents, closing = _strict_exponents(_leaders(gamma), n, m)
    terms = tuple((exponent, degree) for exponent, (_, degree) in zip(exponents, gamma))
    return Ordinal(terms + ((closing, 1),))


def bad_leader_sequences(n: int, m: int, max_order: int) -> list[tuple[Derivative, ...]]:
    """
    Every bad leader sequence over derivatives of order at most ``max_order``,
    the empty one included, in depth-first order.
    """
    ranking = get_ranking(n, m)
    universe = ranking.derivatives_upto(ranking.count_below(max_order + 1))

    def extend(seq: tuple[Derivative, ...], start: int):
        yield seq
        for k in range(start, len(universe)):
            grown = seq + (universe[k],)
            if is_bad_leader_sequence(grown, ranking):
                yield from extend(grown, k + 1)

    return list(extend((), 0))


def rank_key(gamma: RankSeq, ranking: Ranking) -> tuple:
    """Sort key agreeing with ``compare_rank``: an extension sorts before its prefix."""
    return tuple((ranking.index(u), degree) for u, degree in gamma) + ((float("inf"),),)


def compare_rank(g1: RankSeq, g2: RankSeq, ranking: Ranking) -> Comparison:
    """
    Compares rank sequences of autoreduced sets.

    The first differing (leader, degree) pair decides; when one sequence
    extends the other, the longer one has lower rank.

    Args:
    - g1 (RankSeq): The left rank sequence.
    - g2 (RankSeq): The right rank sequence.
    - ranking (Ranking): The ranking on derivatives.

    Returns:
    - Comparison: LESS when g1 has lower rank than g2.
    """
    for (u1, b1), (u2, b2) in zip(g1, g2):
        key1, key2 = (ranking.index(u1), b1), (ranking.index(u2), b2)
        if key1 != key2:
            return Comparison.LESS if key1 < key2 else Comparison.GREATER
    if len(g1) == len(g2):
        return Comparison.EQUAL
    return Comparison.LESS if len(g1) > len(g2) else Comparison.GREATER
