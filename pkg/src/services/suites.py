"""
Seeded verification suites behind ``verify``.

Each check draws its own ``random.Random`` from the seed and its name, so a
check prints the same line whether it runs alone, with its suite or with
``all``. Sample counts are the full acceptance counts divided by ``scale``.
"""

import logging
import random
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Callable, Iterator

from src.entity.autoreduced import AutoreducedSet, is_autoreduced
from src.entity.bound_expr import MonotoneFn, SymbolicResidue
from src.entity.certificates import MembershipCert, Stratum
from src.entity.derivative import Derivative, get_ranking, is_bad_leader_sequence
from src.entity.diffpoly import DiffPoly, DiffRing
from src.entity.multiset import Multiset, multi_compare
from src.entity.ordinal import Comparison, Ordinal, OMEGA, ZERO, format_ordinal
from src.entity.poly import Poly, PolyRing
from src.repository.autoreduction import autoreduce, coherent, is_coherent
from src.repository.catalogue import catalogue, evaluate_call
from src.repository.chains import (
    autoreduced_chain_witness,
    brute_force_chain_index,
    replay_ritt_witness,
    ritt_chain_witness,
)
from src.repository.charset import char_set, verify_char_set
from src.repository.frak_h import frak_h
from src.repository.iteration import G, benchmark, iterate
from src.repository.knitting import knit, scan_searcher
from src.repository.membership import faithful_degree, is_syzygy, membership_bounded, module_membership, syzygy_generators
from src.repository.multisets import frak_m, frak_m_star, multiset_descent, multiset_ordinal
from src.repository.noetherian import dickson_witness, hilbert_chain_witness
from src.repository.ordinals import coord_bound, fundamental, left_sum, natural_prod, natural_sum
from src.repository.pseudodivision import pseudodivide, reduction_step, within_bounds
from src.repository.radical import minimal_power, radical_tree
from src.repository.ranks import (
    bad_dickson_ordinal,
    bad_leader_ordinal,
    bad_leader_sequences,
    compare_rank,
    is_bad_dickson_sequence,
    rank_key,
    strict_autoreduced_ordinal,
)
from src.repository.stratified import rosenfeld_exponent, stratified_membership
from src.schemas.run_config import RunConfig
from src.services.evaluator import Budget
from src.services.exceptions import (
    ContractViolation,
    DomainError,
    KernelException,
    OracleInconsistency,
    ProcedureAbort,
    UnitIdeal,
)
from src.services.generators import derivative_closure, greedy_descent, staircase
from src.services.linalg import monomials_up_to
from src.services.oracles import PseudodivisionOracle, TableOracle

logger = logging.getLogger(__name__)

SUITE_NAMES = ("ordinal", "growth", "polyring", "diffring", "chains")

# бюджет для випадкових перевірок ітерацій
SAMPLE_BUDGET = dict(bits=4096, steps=20_000)

Outcome = tuple[bool | None, object]


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: int = 0
    total: int = 0
    skipped: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, outcome: bool | None, example: object = None):
        if outcome is None:
            self.skipped += 1
            return
        self.total += 1
        if outcome:
            self.passed += 1
        elif self.counterexample is None:
            self.counterexample = str(example)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{status} {self.suite}.{self.name} {self.passed}/{self.total}"
        if self.skipped:
            text += f" ({self.skipped} skipped)"
        if self.counterexample is not None:
            text += f"\n  counterexample: {self.counterexample}"
        return text


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    samples: int | None
    body: Callable[[random.Random, RunConfig, int], Iterator[Outcome]]


CHECKS: list[Check] = []


def check(suite: str, samples: int | None = None):
    def decorator(fn):
        CHECKS.append(Check(suite, fn.__name__, samples, fn))
        return fn

    return decorator


def run_check(entry: Check, config: RunConfig, scale: int = 1) -> CheckResult:
    result = CheckResult(entry.suite, entry.name)
    rng = random.Random(f"{config.seed}:{entry.suite}.{entry.name}")
    samples = max(1, entry.samples // scale) if entry.samples else 0
    try:
        for outcome, example in entry.body(rng, config, samples):
            result.record(outcome, example)
    except KernelException as err:
        result.record(False, f"{type(err).__name__}: {err.detail}")
    logger.debug("%s.%s: %d/%d", entry.suite, entry.name, result.passed, result.total)
    return result


def run_suites(suite: str, config: RunConfig, scale: int = 1) -> list[CheckResult]:
    """
    Runs every check of ``suite`` (or of all suites).

    Args:
    - suite (str): A suite name or ``all``.
    - config (RunConfig): Seed and caps.
    - scale (int): Divisor for the sample counts.

    Returns:
    - list[CheckResult]: One result per check, in registration order.
    """
    if suite != "all" and suite not in SUITE_NAMES:
        raise DomainError(f"unknown suite {suite!r}; expected one of {', '.join(SUITE_NAMES)} or all")
    return [run_check(entry, config, scale) for entry in CHECKS if suite in ("all", entry.suite)]


def format_report(seed: int, results: list[CheckResult]) -> str:
    passed = sum(r.ok for r in results)
    status = "PASS" if passed == len(results) else "FAIL"
    lines = [f"seed {seed}", *(r.line() for r in results), f"{status} {passed}/{len(results)} checks"]
    return "\n".join(lines) + "\n"


def _exact(value) -> int | None:
    return None if isinstance(value, SymbolicResidue) else value


def _small(config: RunConfig) -> RunConfig:
    return config.override(
        membership_degree_cap=min(config.membership_degree_cap, 4),
        scan_cap=min(config.scan_cap, 16),
        procedure_step_cap=min(config.procedure_step_cap, 16),
    )


# ---------------------------------------------------------------- ordinal


def _ordinal(rng: random.Random, depth: int = 3, coefficients: int = 9) -> Ordinal:
    if depth == 0:
        return Ordinal.of(rng.randint(0, coefficients))
    terms = [
        Ordinal.omega_power(_ordinal(rng, depth - 1, coefficients), rng.randint(1, coefficients))
        for _ in range(rng.randint(0, 3))
    ]
    return reduce(natural_sum, terms, ZERO)


def _positive_ordinal(rng: random.Random, depth: int = 3, coefficients: int = 9) -> Ordinal:
    while True:
        a = _ordinal(rng, depth, coefficients)
        if not a.is_zero():
            return a


@check("ordinal", samples=300)
def print_parse(rng, config, samples):
    for _ in range(samples):
        a = _ordinal(rng)
        yield Ordinal.parse(format_ordinal(a)) == a, a


@check("ordinal", samples=300)
def total_order(rng, config, samples):
    for _ in range(samples):
        a, b, c = (_ordinal(rng) for _ in range(3))
        trichotomy = (a < b) + (a == b) + (b < a) == 1
        transitive = not (a <= b and b <= c) or a <= c
        yield trichotomy and transitive, (a, b, c)


@check("ordinal", samples=300)
def fundamental_descent(rng, config, samples):
    for _ in range(samples):
        a = _positive_ordinal(rng)
        x, y = sorted((rng.randint(0, 12), rng.randint(0, 12)))
        yield fundamental(a, x) < a and fundamental(a, x) <= fundamental(a, y), (a, x, y)


@check("ordinal", samples=300)
def fundamental_coverage(rng, config, samples):
    for _ in range(samples):
        a, b = _positive_ordinal(rng), _ordinal(rng)
        if not b < a:
            yield None, None
            continue
        yield b <= fundamental(a, coord_bound(b) + 1), (a, b)


@check("ordinal", samples=200)
def natural_operations(rng, config, samples):
    for _ in range(samples):
        a, b, c = (_ordinal(rng, 2, 4) for _ in range(3))
        ok = (
            natural_sum(a, b) == natural_sum(b, a)
            and natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c))
            and natural_prod(a, b) == natural_prod(b, a)
            and natural_prod(natural_prod(a, b), c) == natural_prod(a, natural_prod(b, c))
            and natural_prod(a, natural_sum(b, c)) == natural_sum(natural_prod(a, b), natural_prod(a, c))
        )
        yield ok, (a, b, c)


@check("ordinal", samples=200)
def natural_monotone(rng, config, samples):
    for _ in range(samples):
        a, b = sorted((_ordinal(rng, 2, 4), _ordinal(rng, 2, 4)))
        c = _ordinal(rng, 2, 4)
        ok = natural_sum(a, c) <= natural_sum(b, c) and natural_prod(a, c) <= natural_prod(b, c)
        yield ok and a <= natural_sum(a, c), (a, b, c)


@check("ordinal")
def bad_dickson_descent(rng, config, samples):
    for n in (1, 2):
        frontier = [()]
        for _ in range(3):
            grown = []
            for seq in frontier:
                here = bad_dickson_ordinal(seq, n)
                for v in product(range(3), repeat=n):
                    extended = seq + (v,)
                    if is_bad_dickson_sequence(extended):
                        yield bad_dickson_ordinal(extended, n) < here, extended
                        grown.append(extended)
            frontier = grown[:40]


@check("ordinal")
def bad_leader_descent(rng, config, samples):
    for n, m in ((1, 1), (2, 1), (1, 2), (2, 2)):
        ranking = get_ranking(n, m)
        universe = ranking.derivatives_upto(ranking.count_below(4))
        frontier = [()]
        for _ in range(3):
            grown = []
            for seq in frontier:
                here = bad_leader_ordinal(seq, n, m)
                for u in universe:
                    if is_bad_leader_sequence(seq + (u,), ranking):
                        yield bad_leader_ordinal(seq + (u,), n, m) < here, seq + (u,)
                        grown.append(seq + (u,))
            frontier = grown[:25]


# розмірності для повного перебору послідовностей рангів
RANK_DIMENSIONS = ((1, 1), (2, 1), (1, 2), (2, 2))
RANK_MAX_ORDER = 3
RANK_DEGREES = (1, 2, 3)


def _rank_sequences(n: int, m: int) -> list:
    return [
        tuple(zip(leaders, degrees))
        for leaders in bad_leader_sequences(n, m, RANK_MAX_ORDER)
        for degrees in product(RANK_DEGREES, repeat=len(leaders))
    ]


@check("ordinal")
def rank_ordinal_coherence(rng, config, samples):
    # rank order is total and equal ranks are equal sequences, so neighbours in rank order cover every pair
    for n, m in RANK_DIMENSIONS:
        ranking = get_ranking(n, m)
        ordered = sorted(_rank_sequences(n, m), key=lambda gamma: rank_key(gamma, ranking))
        ordinals = [strict_autoreduced_ordinal(gamma, n, m) for gamma in ordered]
        for i in range(1, len(ordered)):
            lower, higher = ordered[i - 1], ordered[i]
            ok = compare_rank(lower, higher, ranking) is Comparison.LESS and ordinals[i - 1] < ordinals[i]
            yield ok, (n, m, lower, higher)


@check("ordinal")
def orderly_ranking(rng, config, samples):
    def d(i: int, *theta: int) -> Derivative:
        return Derivative(i, theta)

    fixtures = [
        (2, 2, d(1, 0, 0), 1), (2, 2, d(2, 0, 0), 2), (2, 2, d(1, 0, 1), 3),
        (2, 2, d(2, 0, 1), 4), (2, 2, d(1, 1, 0), 5), (2, 2, d(2, 1, 0), 6),
        (3, 2, d(1, 0, 1), 4), (3, 2, d(2, 0, 1), 5), (3, 2, d(1, 1, 0), 7), (3, 2, d(1, 2, 0), 16),
    ]
    for n, m, u, index in fixtures:
        yield get_ranking(n, m).index(u) == index, (n, m, u, index)
    for n, m in ((1, 1), (2, 1), (1, 2), (2, 2)):
        ranking = get_ranking(n, m)
        for index in range(1, ranking.count_below(4) + 1):
            yield ranking.index(ranking.derivative(index)) == index, (n, m, index)


# ---------------------------------------------------------------- growth


def _small_ordinal(rng: random.Random) -> Ordinal:
    exponents = sorted(rng.sample(range(3), rng.randint(0, 3)), reverse=True)
    return Ordinal(tuple((Ordinal.of(e), rng.randint(1, 2)) for e in exponents))


def _iterate(a: Ordinal, x: int) -> int | None:
    return _exact(iterate(G, a, x, Budget(**SAMPLE_BUDGET)))


@check("growth")
def m_worked_example(rng, config, samples):
    value = frak_m(Multiset.of([2]), MonotoneFn.affine(1, 2), 0, config.budget())
    yield value == 10, value


@check("growth")
def benchmark_omega_squared(rng, config, samples):
    for b in range(1, 9):
        value = _exact(iterate(G, Ordinal.parse("w^2"), b, config.budget()))
        yield (None if value is None else value >= 2**b * b), (b, value)


@check("growth")
def omega_iteration(rng, config, samples):
    for b in range(8):
        value = benchmark(OMEGA, b, config.budget())
        yield value == 2 * b + 1, (b, value)


@check("growth", samples=10_000)
def composition_identity(rng, config, samples):
    for _ in range(samples):
        while True:
            a, b = _small_ordinal(rng), _small_ordinal(rng)
            if a.is_zero() or b.is_zero() or not b.leading_exponent() > a.least_exponent():
                break
        x = rng.randint(0, 6)
        inner = _iterate(b, x)
        outer = None if inner is None else _iterate(a, inner)
        whole = _iterate(left_sum(a, b), x)
        if outer is None or whole is None:
            yield None, None
            continue
        yield outer == whole, (a, b, x)


@check("growth", samples=1000)
def omega_power_strictness(rng, config, samples):
    for _ in range(samples):
        a = Ordinal.omega_power(rng.randint(0, 2), rng.randint(1, 2))
        x = rng.randint(1, 4)
        big, small = _iterate(Ordinal.omega_power(a), x), _iterate(a, x)
        if big is None or small is None:
            yield None, None
            continue
        yield big > small, (a, x)


@check("growth", samples=1000)
def natural_sum_composition(rng, config, samples):
    for _ in range(samples):
        a, b, x = _small_ordinal(rng), _small_ordinal(rng), rng.randint(0, 3)
        whole = _iterate(natural_sum(a, b), x)
        inner = _iterate(b, x)
        outer = None if inner is None else _iterate(a, inner)
        if whole is None or outer is None:
            yield None, None
            continue
        yield outer <= whole, (a, b, x)


@check("growth", samples=1000)
def natural_product_iteration(rng, config, samples):
    for _ in range(samples):
        a, k, x = _small_ordinal(rng), rng.randint(1, 3), rng.randint(0, 3)
        bound = _iterate(natural_prod(a, Ordinal.of(k)), x)
        y = x
        for _ in range(k):
            y = None if y is None else _iterate(a, y)
        if bound is None or y is None:
            yield None, None
            continue
        yield y <= bound, (a, k, x)


@check("growth", samples=1000)
def downgrade(rng, config, samples):
    for _ in range(samples):
        e, high, low, x = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2), rng.randint(0, 3)

        def build(c1: int, c2: int) -> Ordinal:
            return Ordinal(tuple((Ordinal.of(k), c) for k, c in ((e, c1), (e - 1, c2)) if c))

        upper = _iterate(build(high, low), x)
        if upper is None:
            yield None, None
            continue
        lower = _iterate(build(high - 1, low + 1), x)
        yield lower is not None and lower <= upper, (e, high, low, x)


@check("growth", samples=1000)
def norm_monotonicity(rng, config, samples):
    for _ in range(samples):
        a, b = _small_ordinal(rng), _small_ordinal(rng)
        x = rng.randint(1, 4)
        if not b < a or coord_bound(b) >= x:
            yield None, None
            continue
        low, high = _iterate(b, x), _iterate(a, x)
        if low is None or high is None:
            yield None, None
            continue
        yield low <= high, (a, b, x)


@check("growth", samples=500)
def fundamental_lower_bound(rng, config, samples):
    for _ in range(samples):
        epsilon, delta = _small_ordinal(rng), _small_ordinal(rng)
        if not delta < epsilon:
            yield None, None
            continue
        floor = _iterate(delta, rng.randint(1, 3))
        if floor is None:
            yield None, None
            continue
        d = floor + rng.randint(0, 3)
        yield fundamental(epsilon, d) >= delta, (epsilon, delta, d)


@check("growth", samples=100)
def multiset_splitting(rng, config, samples):
    D = MonotoneFn.affine(1, 1)
    for _ in range(samples):
        low = Multiset.of(sorted(rng.randint(0, 1) for _ in range(rng.randint(0, 3))))
        high = Multiset.of(sorted(rng.randint(0, 1) for _ in range(rng.randint(0, 3))))
        if not (low.is_empty() or high.is_empty() or low.max() <= high.min()):
            yield None, None
            continue
        i = rng.randint(0, 3)
        first = frak_m(low, D, i)
        yield frak_m(low.union(high), D, i) == first + frak_m(high, D, i + first), (low, high, i)


@check("growth", samples=100)
def multiset_descent_strict(rng, config, samples):
    for _ in range(samples):
        D = rng.choice([MonotoneFn.affine(1, 1), MonotoneFn.affine(1, 2), MonotoneFn.affine(2, 0)])
        tau = Multiset.of(rng.randint(0, 1) for _ in range(rng.randint(1, 4)))
        visited = multiset_descent(tau, D)
        ok = visited[-1].is_empty() and len(visited) - 1 == frak_m(tau, D, 0)
        ok = ok and all(multi_compare(after, before) is Comparison.LESS for before, after in zip(visited, visited[1:]))
        yield ok, (tau, D)


@check("growth")
def catalogue_values(rng, config, samples):
    fixtures = [
        (("g", 2, 3), 81),
        (("d_n", 1, 1), 4),
        (("p_n", 1, 6), 6),
        (("e", 1, 1), 7),
        (("zeta1", 1, 1, 1), 20),
        (("m_star", MonotoneFn.affine(1, 2), 2), 62),
        (("h", MonotoneFn.affine(1, 1), 1, 1), 7),
        (("D_cohere", 1, 1, 1, 1), 8),
    ]
    for (name, *args), expected in fixtures:
        value = evaluate_call(name, tuple(args))
        yield value == expected, (name, args, value)
    for n, expected in ((0, 2), (1, 3)):
        yield frak_m_star(MonotoneFn.affine(1, 1), n) == expected, ("m_star", n)
    yield frak_h(1, 1, MonotoneFn.constant(3)) == 10, "h(3)"
    yield str(catalogue("F_char", 2, 3)) == str(catalogue("F_char", 2, 3)), "F_char printing"


@check("growth", samples=400)
def m_bound_small_values(rng, config, samples):
    D = MonotoneFn.affine(2, 0)
    for _ in range(samples):
        tau = Multiset.of(rng.randint(0, 1) for _ in range(rng.randint(1, 3)))
        b = rng.randint(len(tau), len(tau) + 2)
        value = _exact(frak_m(tau, D, b, config.budget()))
        bound = _exact(iterate(D, multiset_ordinal(tau), b, config.budget()))
        if value is None or bound is None:
            yield None, None
            continue
        yield value <= bound, (tau, b)


@check("growth", samples=100)
def knitting(rng, config, samples):
    for _ in range(samples):
        F = rng.choice([MonotoneFn.affine(1, 1), MonotoneFn.affine(2, 0)])
        searchers = []
        for _ in range(rng.randint(1, 3)):
            t, p = rng.randint(1, 30), rng.randint(2, 7)
            r = rng.randrange(p)
            searchers.append(scan_searcher(lambda i, t=t, p=p, r=r: i >= t or i % p != r, name=f"{t},{p},{r}"))
        d = rng.randint(0, 5)
        k = knit(searchers, F, d)
        window = all(s.predicate(i) for s in searchers for i in range(k, F(k) + 1))
        first = next(
            c for c in range(d, k + 1) if all(s.predicate(i) for s in searchers for i in range(c, F(c) + 1))
        )
        yield k >= d and window and first <= k, ([s.name for s in searchers], F, d, k)


@check("growth")
def monotone_functions(rng, config, samples):
    for text in ("i+2", "2*i", "i^2+1", "2^i"):
        try:
            MonotoneFn.parse(text).check_monotone(config.monotone_samples, seed=config.seed)
            yield True, text
        except ContractViolation:
            yield False, text


# ---------------------------------------------------------------- polyring


def _poly(rng: random.Random, ring: PolyRing, degree: int) -> Poly:
    total = ring.zero()
    for mono in monomials_up_to(ring, degree):
        total = total + ring.monomial(mono, rng.randint(-3, 3))
    return total


def _nonzero_poly(rng: random.Random, ring: PolyRing, degree: int) -> Poly:
    while True:
        p = _poly(rng, ring, degree)
        if not p.is_zero():
            return p


def _re_expands(cert: MembershipCert) -> bool:
    total = cert.target.ring.zero()
    for c, g in zip(cert.cofactors, cert.generators):
        total = total + c * g
    return total == cert.target


@check("polyring", samples=500)
def dickson(rng, config, samples):
    D = MonotoneFn.affine(1, 2)
    for _ in range(samples):
        n = rng.randint(1, 2)
        drawn: dict[int, tuple[int, ...]] = {}

        def stream(i: int, n=n, drawn=drawn) -> tuple[int, ...]:
            if i not in drawn:
                drawn[i] = tuple(rng.randint(0, D(i)) for _ in range(n))
            return drawn[i]

        witness = dickson_witness(stream, D, n, config)
        exact = isinstance(witness.bound, int)
        yield exact and witness.i < witness.j <= witness.bound, (n, [drawn[i] for i in sorted(drawn)])


@check("polyring")
def hilbert_staircase(rng, config, samples):
    ring = PolyRing(("x", "y"))
    small = config.override(membership_degree_cap=min(config.membership_degree_cap, 3))
    for length in range(1, 7):
        witness = hilbert_chain_witness(staircase(ring, length), MonotoneFn.constant(length), 2, small)
        replayed = all(_re_expands(cert) for cert in witness.certificates)
        yield witness.j == length and witness.j <= witness.bound and replayed, length


@check("polyring", samples=50)
def hilbert_chains(rng, config, samples):
    ring = PolyRing(("x", "y"))
    small = config.override(membership_degree_cap=min(config.membership_degree_cap, 3))
    for _ in range(samples):
        gens: list[Poly] = []
        sets: list[list[Poly]] = []
        for _ in range(small.scan_cap):
            a = rng.randint(0, 3)
            gens = gens + [ring.monomial((a, rng.randint(0, 3 - a)))]
            sets.append(gens)
        witness = hilbert_chain_witness(sets, MonotoneFn.constant(3), 2, small)
        replayed = all(_re_expands(cert) for cert in witness.certificates)
        within = not isinstance(witness.bound, int) or witness.j <= witness.bound
        yield replayed and within, [p.format() for p in sets[witness.j]]


@check("polyring", samples=200)
def membership_planted(rng, config, samples):
    for _ in range(samples):
        n = rng.randint(1, 3)
        ring = PolyRing.of(n)
        b = rng.randint(1, 3 if n < 3 else 2)
        gens = [_nonzero_poly(rng, ring, b) for _ in range(2)]
        plant = rng.randint(0, 3 if n < 3 else 2)
        cofactors = [_poly(rng, ring, plant) for _ in gens]
        h = cofactors[0] * gens[0] + cofactors[1] * gens[1]
        degree = max(plant, faithful_degree(n, b, min(config.membership_degree_cap, 4)))
        cert = membership_bounded(h, gens, degree)
        yield bool(cert) and _re_expands(cert), (h, gens)


@check("polyring", samples=100)
def syzygies_planted(rng, config, samples):
    ring = PolyRing(("x", "y"))
    zero = ring.zero()
    for _ in range(samples):
        f = [_nonzero_poly(rng, ring, 1) for _ in range(3)]
        generated = [s.entries for s in syzygy_generators(f, 1)]
        koszul = [(f[1], -f[0], zero), (f[2], zero, -f[0]), (zero, f[2], -f[1])]
        weights = [_poly(rng, ring, 4) for _ in koszul]
        planted = [sum((w * k[i] for w, k in zip(weights, koszul)), zero) for i in range(3)]
        ok = all(is_syzygy(s, f) for s in generated) and is_syzygy(planted, f)
        yield ok and module_membership(planted, generated, 5) is not None, f


@check("polyring")
def radical_fixtures(rng, config, samples):
    ring = PolyRing(("x", "y"))
    x, y = ring.gens()
    small = config.override(membership_degree_cap=min(config.membership_degree_cap, 3))

    def split(generators):
        return (x, x * y) if generators == (x**2 * y,) else None

    rep = radical_tree([x**2 * y], x * y, 2, split, small)
    yield rep.recombine() == x * y and rep.depth == 1, "one split"
    yield all(cert.target == r**2 for r, cert in zip(rep.radicals, rep.certificates)), "leaf powers"
    k, cert = minimal_power(x, [x**2 + y, y**2], 6, small)
    yield k == 4 and _re_expands(cert), ("minimal power", k)


# ---------------------------------------------------------------- diffring

U = DiffRing(1, 1, ("u",))
UV1 = DiffRing(2, 1, ("u", "v"))
UV = DiffRing(2, 2, ("u", "v"))


def _diff_poly(rng: random.Random, ring: DiffRing, max_order: int = 2, max_degree: int = 3, max_terms: int = 4) -> DiffPoly:
    size = ring.ranking.count_below(max_order + 1)
    result = ring.zero()
    for _ in range(rng.randint(1, max_terms)):
        term = ring.constant(rng.choice((-3, -2, -1, 1, 2, 3)))
        for _ in range(rng.randint(0, max_degree)):
            term = term * ring.variable(rng.randint(1, size))
        result = result + term
    return result


def _non_constant(rng: random.Random, ring: DiffRing, **kwargs) -> DiffPoly:
    while True:
        p = _diff_poly(rng, ring, **kwargs)
        if not p.is_constant():
            return p


@check("diffring", samples=100)
def derivations(rng, config, samples):
    for _ in range(samples):
        p, q = _diff_poly(rng, UV, max_order=1), _diff_poly(rng, UV, max_order=1)
        commute = p.derive(1).derive(2) == p.derive(2).derive(1)
        leibniz = (p * q).derive(1) == p.derive(1) * q + p * q.derive(1)
        yield commute and leibniz and UV.parse(p.format()) == p, (p, q)


@check("diffring")
def worked_remainders(rng, config, samples):
    ring = DiffRing(3, 2, ("x", "y", "z"))
    g1 = ring.parse("d2 y*(d1 x)^2 + x*d1 x")
    g2 = ring.parse("d2 y*d1^2 x + x")
    f = ring.parse("z + x*d1^2 x")
    separant = reduction_step(f, g1).result
    expected = g1.separant() * ring.parse("z") - ring.parse("x*(d1 d2 y + 1)*(d1 x)^2")
    yield separant == expected, separant
    initial = reduction_step(f, g2).result
    yield initial.format() == "z*d2 y - x^2", initial


@check("diffring", samples=200)
def pseudodivision(rng, config, samples):
    for _ in range(samples):
        ring = rng.choice((U, UV1, UV))
        g = _non_constant(rng, ring, max_order=1, max_degree=2)
        f = _diff_poly(rng, ring)
        cert = pseudodivide(f, [g])
        identity = cert.multiplier() * f - cert.remainder == cert.combination()
        yield identity and cert.divisors.contains_reduced(cert.remainder) and within_bounds(cert), (f, g)


def _descends(chain: list[AutoreducedSet]) -> bool:
    return all(b.compare(a) is Comparison.LESS for a, b in zip(chain, chain[1:]))


# скільки спроб припадає на одну придатну вибірку
DRAWS_PER_SAMPLE = 4


def _usable_draws(rng: random.Random, samples: int, draw) -> Iterator[Outcome]:
    """
    Outcomes of ``draw`` until ``samples`` inputs were usable. Inputs that
    generate the unit ideal or abort are skipped and redrawn; running out of
    draws fails the check.
    """
    usable = 0
    for _ in range(samples * DRAWS_PER_SAMPLE):
        if usable == samples:
            return
        try:
            outcome = draw(rng)
        except (UnitIdeal, ProcedureAbort):
            yield None, None
            continue
        usable += 1
        yield outcome
    if usable < samples:
        yield False, f"only {usable} of {samples} inputs were usable"


@check("diffring", samples=50)
def autoreduce_outputs(rng, config, samples):
    def draw(rng: random.Random) -> Outcome:
        ring = rng.choice((U, UV1))
        polys = [_non_constant(rng, ring, max_order=1, max_degree=2, max_terms=3) for _ in range(rng.randint(1, 3))]
        run = autoreduce(polys, config)
        saturates = all(pseudodivide(p, run.result).remainder.is_zero() for p in polys)
        return is_autoreduced(list(run.result)) and saturates and _descends(run.chain), polys

    yield from _usable_draws(rng, samples, draw)


def _linear(rng: random.Random) -> DiffPoly:
    return _non_constant(rng, UV, max_order=1, max_degree=1, max_terms=3)


@check("diffring", samples=50)
def coherent_outputs(rng, config, samples):
    def draw(rng: random.Random) -> Outcome:
        polys = [_linear(rng) for _ in range(rng.randint(1, 3))]
        start = autoreduce(polys, config).result
        run = coherent(start, config=config)
        deltas = all(c.remainder.is_zero() for c in run.delta_certificates)
        ok = is_autoreduced(list(run.result)) and is_coherent(run.result) and deltas
        return ok and _descends(run.chain), start.to_list()

    yield from _usable_draws(rng, samples, draw)


@check("diffring")
def strata(rng, config, samples):
    ring = DiffRing(2, 1, ("x", "y"))
    lam, y = ring.parse("x*y"), ring.parse("y")
    small = _small(config)
    cert = stratified_membership(y, [lam], 2, Stratum.SATURATED, small)
    yield bool(cert) and cert.multiplier == ring.parse("x^4"), "saturated"
    yield not stratified_membership(y, [lam], 2, Stratum.ORDER, small), "order"
    found = rosenfeld_exponent(y, [lam], 2, 3, small)
    yield found is not None and found.k == 2, "rosenfeld exponent"


@check("diffring")
def char_set_fixtures(rng, config, samples):
    u = U.parse("u")
    trivial = PseudodivisionOracle(AutoreducedSet(U, (u,)))
    run = char_set([u], trivial, _small(config))
    yield run.sigma.to_list() == ["u"] and verify_char_set(run, [u], trivial) == [], "trivial"

    uv = UV1.parse("u*v")
    split = TableOracle(UV1, {"u*v": True, "u": True, "v": False, "1": False})
    run = char_set([uv], split, _small(config))
    yield run.sigma.to_list() == ["u"] and verify_char_set(run, [uv], split) == [], "u*v split"

    inconsistent = TableOracle(UV1, {"u*v": True, "u": False, "v": False})
    try:
        char_set([uv], inconsistent, _small(config))
        yield False, "inconsistent oracle accepted"
    except OracleInconsistency as err:
        yield ("u", False) in err.transcript, err.transcript


# ---------------------------------------------------------------- chains


@check("chains")
def greedy_descent_bound(rng, config, samples):
    D = MonotoneFn.affine(1, 1)
    stream = greedy_descent(U, D, 12)
    witness = autoreduced_chain_witness(stream, D, 1, 1, _small(config))
    yield witness.index == 7 == witness.bound, witness.index
    yield brute_force_chain_index(stream) == witness.index, "brute force"


@check("chains", samples=100)
def autoreduced_chains(rng, config, samples):
    D = MonotoneFn.affine(1, 3)
    for _ in range(samples):
        exponents = []
        for i in range(8):
            exponents.append(rng.randint(1, min(D(i), exponents[-1] if exponents and rng.random() < 0.7 else D(i))))
        stream = [AutoreducedSet(U, (U.parse(f"u^{e}"),)) for e in exponents]
        witness = autoreduced_chain_witness(stream, D, 1, 1, _small(config))
        within = not isinstance(witness.bound, int) or witness.index <= witness.bound
        yield witness.index == brute_force_chain_index(stream) and within, exponents


@check("chains")
def ritt_fixtures(rng, config, samples):
    successor = MonotoneFn.affine(1, 1)
    u = U.parse("u")
    closure = derivative_closure([u], 8)
    oracle = PseudodivisionOracle()
    witness = ritt_chain_witness([u], closure, successor, successor, 2, oracle, _small(config))
    yield witness.index == 2 and replay_ritt_witness(witness, [u], closure, successor, oracle), "closure"
    table = TableOracle(U, {(3, "u"): False, (4, "u"): False, (5, "u"): True})
    witness = ritt_chain_witness([u], [[u]], successor, successor, 3, table, _small(config))
    yield witness.index == 5 and [i for i, _, _ in witness.transcript] == [3, 4, 5], "indexed table"
