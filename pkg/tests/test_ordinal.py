import unittest
from functools import reduce
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from src.entity.derivative import Derivative, get_ranking, is_bad_leader_sequence
from src.entity.ordinal import Comparison, Ordinal, OMEGA, ONE, ZERO, compare, format_ordinal
from src.repository.ordinals import (
    coord_bound,
    fundamental,
    left_sum,
    natural_prod,
    natural_sum,
    omega_times,
    predecessor,
)
from src.repository.ranks import (
    autoreduced_ordinal,
    bad_dickson_ordinal,
    bad_leader_ordinal,
    bad_leader_sequences,
    compare_rank,
    is_bad_dickson_sequence,
    rank_key,
    strict_autoreduced_ordinal,
)
from src.services.exceptions import DomainError, ParseError, UnsupportedDimension


def _ordinal_from_terms(terms) -> Ordinal:
    return reduce(natural_sum, (Ordinal.omega_power(e, c) for e, c in terms), ZERO)


def ordinals(depth: int = 3, coefficients: int = 9):
    if depth == 0:
        return st.integers(0, coefficients).map(Ordinal.of)
    return st.lists(
        st.tuples(ordinals(depth - 1, coefficients), st.integers(1, coefficients)), max_size=3
    ).map(_ordinal_from_terms)


positive_ordinals = ordinals().filter(lambda a: not a.is_zero())


def P(text: str) -> Ordinal:
    return Ordinal.parse(text)


class TestOrdinalForm(unittest.TestCase):

    def test_normal_form_rejects_ascending_exponents(self):
        with self.assertRaises(DomainError):
            Ordinal(((ONE, 1), (OMEGA, 1)))

    def test_normal_form_rejects_zero_coefficient(self):
        with self.assertRaises(DomainError):
            Ordinal(((ONE, 0),))

    def test_parse_and_format(self):
        a = P("w^(w^2*3+1)*4 + w*2 + 7")
        self.assertEqual(format_ordinal(a), "w^(w^2*3 + 1)*4 + w*2 + 7")
        self.assertEqual(P(format_ordinal(a)), a)

    def test_parse_absorbs_smaller_terms(self):
        self.assertEqual(P("3 + w"), OMEGA)
        self.assertEqual(P("w + w^2"), Ordinal.omega_power(2))

    def test_parse_errors(self):
        for text in ("", "w^", "w +", "x", "(w)", "w*w"):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    P(text)

    def test_classification(self):
        self.assertTrue(ZERO.is_zero())
        self.assertTrue(P("5").is_finite())
        self.assertTrue(P("w + 1").is_successor())
        self.assertTrue(P("w^2").is_limit())
        self.assertEqual(P("w*3 + 4").finite_tail(), 4)
        self.assertEqual(P("w*3 + 4").drop_finite_tail(), P("w*3"))


class TestCompare(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(compare(ZERO, ZERO), Comparison.EQUAL)
        self.assertEqual(compare(OMEGA, P("w+1")), Comparison.LESS)
        self.assertEqual(compare(P("w^2*3 + w*5"), P("w^2*3 + w*4 + 9")), Comparison.GREATER)

    def test_matches_order_type_enumeration_below_w3(self):
        # ordinals below w^3 with coefficients <= 3 compare like their coefficient triples
        triples = list(product(range(4), repeat=3))
        values = {t: P(f"w^2*{t[0]} + w*{t[1]} + {t[2]}") if any(t) else ZERO for t in triples}
        for s, t in product(triples[::5], triples[::7]):
            expected = Comparison.LESS if s < t else Comparison.GREATER if s > t else Comparison.EQUAL
            self.assertEqual(compare(values[s], values[t]), expected)


class TestArithmetic(unittest.TestCase):

    def test_fundamental(self):
        self.assertEqual(fundamental(P("w^2"), 3), P("w*3"))
        self.assertEqual(fundamental(P("w^w"), 2), P("w^2*2"))
        self.assertEqual(fundamental(P("5"), 9), P("4"))
        self.assertEqual(fundamental(P("w*2"), 0), OMEGA)

    def test_fundamental_of_zero(self):
        with self.assertRaises(DomainError):
            fundamental(ZERO, 1)

    def test_predecessor(self):
        self.assertEqual(predecessor(P("w + 1")), OMEGA)
        with self.assertRaises(DomainError):
            predecessor(OMEGA)

    def test_coord_bound(self):
        self.assertEqual(coord_bound(ZERO), 0)
        self.assertEqual(coord_bound(P("w^2*3 + w*5")), 5)
        self.assertEqual(coord_bound(P("w^(w*4)*2")), 4)

    def test_natural_sum(self):
        a = P("w^3 + w + 2")
        self.assertEqual(natural_sum(a, ZERO), a)
        self.assertEqual(natural_sum(P("w+1"), OMEGA), P("w*2 + 1"))
        self.assertEqual(natural_sum(P("w^2+3"), P("w*2+1")), P("w^2 + w*2 + 4"))

    def test_natural_prod(self):
        a = P("w^2 + 3")
        self.assertEqual(natural_prod(a, ONE), a)
        self.assertEqual(natural_prod(OMEGA, OMEGA), P("w^2"))
        self.assertEqual(natural_prod(P("w+1"), P("w+1")), P("w^2 + w*2 + 1"))

    def test_left_sum(self):
        self.assertEqual(left_sum(ONE, OMEGA), OMEGA)
        self.assertEqual(left_sum(OMEGA, ONE), P("w + 1"))
        self.assertEqual(left_sum(P("w^2 + w"), P("w*3 + 2")), P("w^2 + w*4 + 2"))

    def test_omega_times(self):
        self.assertEqual(omega_times(P("2")), P("w*2"))
        self.assertEqual(omega_times(P("w + 3")), P("w^2 + w*3"))


class TestOrdinalProperties:

    @settings(max_examples=300, deadline=None)
    @given(ordinals())
    def test_print_parse_identity(self, a):
        assert Ordinal.parse(format_ordinal(a)) == a

    @settings(max_examples=200, deadline=None)
    @given(ordinals(), ordinals(), ordinals())
    def test_compare_is_a_total_order(self, a, b, c):
        assert (a < b) + (a == b) + (b < a) == 1
        if a <= b and b <= c:
            assert a <= c

    @settings(max_examples=200, deadline=None)
    @given(positive_ordinals, st.integers(0, 12), st.integers(0, 12))
    def test_fundamental_descends_monotonically(self, a, x, y):
        x, y = sorted((x, y))
        assert fundamental(a, x) < a
        assert fundamental(a, x) <= fundamental(a, y)

    @settings(max_examples=200, deadline=None)
    @given(positive_ordinals, ordinals())
    def test_small_ordinals_stay_below_the_fundamental_sequence(self, a, b):
        if b < a:
            assert b <= fundamental(a, coord_bound(b) + 1)

    @settings(max_examples=150, deadline=None)
    @given(ordinals(2, 4), ordinals(2, 4), ordinals(2, 4))
    def test_natural_operations_are_commutative_and_associative(self, a, b, c):
        assert natural_sum(a, b) == natural_sum(b, a)
        assert natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c))
        assert natural_prod(a, b) == natural_prod(b, a)
        assert natural_prod(natural_prod(a, b), c) == natural_prod(a, natural_prod(b, c))
        assert natural_prod(a, natural_sum(b, c)) == natural_sum(natural_prod(a, b), natural_prod(a, c))

    @settings(max_examples=150, deadline=None)
    @given(ordinals(2, 4), ordinals(2, 4), ordinals(2, 4))
    def test_natural_operations_are_monotone(self, a, b, c):
        a, b = sorted((a, b))
        assert natural_sum(a, c) <= natural_sum(b, c)
        assert natural_prod(a, c) <= natural_prod(b, c)
        assert a <= natural_sum(a, c)


def _vectors(n: int, k: int):
    return list(product(range(k + 1), repeat=n))


class TestBadDickson(unittest.TestCase):

    def test_empty_sequence(self):
        self.assertEqual(bad_dickson_ordinal((), 2), P("w^2"))
        self.assertEqual(bad_dickson_ordinal((), 3), P("w^3"))

    def test_zero_vector_leaves_nothing(self):
        self.assertEqual(bad_dickson_ordinal(((0, 0),), 2), ZERO)

    def test_single_vector(self):
        self.assertEqual(bad_dickson_ordinal(((1, 1),), 2), P("w*2"))
        self.assertLess(bad_dickson_ordinal(((1, 1),), 2), P("w^2"))

    def test_not_bad(self):
        with self.assertRaises(DomainError):
            bad_dickson_ordinal(((1, 0), (2, 1)), 2)

    def test_dimension_cap(self):
        with self.assertRaises(UnsupportedDimension):
            bad_dickson_ordinal((), 4)

    def test_strict_descent_under_every_extension(self):
        for n in (1, 2):
            frontier = [()]
            for _ in range(3):
                grown = []
                for seq in frontier:
                    here = bad_dickson_ordinal(seq, n)
                    for v in _vectors(n, 2):
                        extended = seq + (v,)
                        if is_bad_dickson_sequence(extended):
                            self.assertLess(bad_dickson_ordinal(extended, n), here)
                            grown.append(extended)
                frontier = grown[:40]


def _x(*exponents, i=1) -> Derivative:
    return Derivative(i, tuple(exponents))


class TestRankAssignments(unittest.TestCase):

    def test_bad_leader_ordinal_examples(self):
        self.assertEqual(bad_leader_ordinal((), 2, 1), P("w*2"))
        self.assertEqual(bad_leader_ordinal((_x(0),), 1, 1), ZERO)
        self.assertEqual(bad_leader_ordinal((_x(1),), 1, 1), ONE)

    def test_bad_leader_ordinal_rejects_derivative_chains(self):
        with self.assertRaises(DomainError):
            bad_leader_ordinal((_x(1), _x(2)), 1, 1)

    def test_bad_leader_ordinal_descends(self):
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
                            self.assertLess(bad_leader_ordinal(seq + (u,), n, m), here)
                            grown.append(seq + (u,))
                frontier = grown[:25]

    def test_autoreduced_ordinal_examples(self):
        self.assertEqual(autoreduced_ordinal((), 2, 1), P("w^(w*2)"))
        self.assertEqual(autoreduced_ordinal(((_x(1), 2),), 1, 1), P("w*3"))
        self.assertLess(
            autoreduced_ordinal(((_x(1), 2),), 1, 1), autoreduced_ordinal(((_x(1), 3),), 1, 1)
        )

    def test_strict_ordinal_follows_rank_order(self):
        ranking = get_ranking(2, 1)
        universe = ranking.derivatives_upto(ranking.count_below(3))
        sequences = [()]
        for _ in range(2):
            sequences += [
                seq + ((u, b),)
                for seq in sequences
                for u in universe
                for b in (1, 2)
                if is_bad_leader_sequence(tuple(v for v, _ in seq) + (u,), ranking)
                and len(seq) < 2
            ]
        sequences = list(dict.fromkeys(sequences))
        for g1, g2 in product(sequences[:60], repeat=2):
            if compare_rank(g1, g2, ranking) is Comparison.LESS:
                self.assertLess(strict_autoreduced_ordinal(g1, 2, 1), strict_autoreduced_ordinal(g2, 2, 1))

    def test_compare_rank(self):
        ranking = get_ranking(1, 1)
        self.assertEqual(compare_rank(((_x(1), 2),), ((_x(1), 3),), ranking), Comparison.LESS)
        self.assertEqual(compare_rank(((_x(0), 1), (_x(1), 1)), ((_x(0), 1),), ranking), Comparison.LESS)
        self.assertEqual(compare_rank((), (), ranking), Comparison.EQUAL)

    def test_bad_leader_sequences_are_exhaustive(self):
        self.assertEqual(len(bad_leader_sequences(1, 1, 3)), 5)
        self.assertEqual(len(bad_leader_sequences(2, 1, 3)), 25)
        sequences = bad_leader_sequences(1, 2, 3)
        self.assertEqual(len(sequences), 42)
        self.assertEqual(len(set(sequences)), 42)
        longest = max(sequences, key=len)
        self.assertEqual([u.exponents for u in longest], [(0, 3), (1, 2), (2, 1), (3, 0)])

    def test_rank_key_agrees_with_compare_rank(self):
        ranking = get_ranking(1, 2)
        sequences = [
            tuple(zip(leaders, degrees))
            for leaders in bad_leader_sequences(1, 2, 2)
            for degrees in product((1, 2), repeat=len(leaders))
        ]
        ordered = sorted(sequences, key=lambda gamma: rank_key(gamma, ranking))
        for lower, higher in zip(ordered, ordered[1:]):
            self.assertIs(compare_rank(lower, higher, ranking), Comparison.LESS)
            self.assertLess(strict_autoreduced_ordinal(lower, 1, 2), strict_autoreduced_ordinal(higher, 1, 2))

    def test_strict_ordinal_of_empty_set(self):
        self.assertEqual(strict_autoreduced_ordinal((), 1, 1), P("w^(w^2 + w)"))


@pytest.mark.parametrize(
    "n, m, index, expected",
    [(1, 1, 1, _x(0)), (1, 1, 3, _x(2)), (2, 1, 2, _x(0, i=2)), (2, 1, 3, _x(1)), (1, 2, 2, _x(0, 1))],
)
def test_orderly_ranking_indices(n, m, index, expected):
    ranking = get_ranking(n, m)
    assert ranking.derivative(index) == expected
    assert ranking.index(expected) == index
