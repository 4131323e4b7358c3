import unittest
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from src.entity.bound_expr import MonotoneFn
from src.entity.certificates import MembershipCert, NotFound, PowerCertificate
from src.entity.poly import PolyRing
from src.repository.membership import (
    is_syzygy,
    membership_bounded,
    module_membership,
    reduce,
    syzygy_generators,
)
from src.repository.noetherian import dickson_witness, hilbert_chain_witness
from src.repository.radical import (
    RadicalNode,
    minimal_power,
    monomial_pool,
    prime_up_to_check,
    rabinowitsch_bound_check,
    radical_tree,
)
from src.schemas.run_config import RunConfig
from src.services.exceptions import (
    ContractViolation,
    DomainError,
    OracleInconsistency,
    OracleUnknown,
    ParseError,
    RingMismatch,
)
from src.services.generators import staircase
from src.services.linalg import monomials_up_to

RING = PolyRing(("x", "y"))
X, Y = RING.gens()
SMALL = RunConfig(membership_degree_cap=3, scan_cap=16, procedure_step_cap=16)

coefficients = st.integers(-3, 3)


def polys(ring: PolyRing, degree: int):
    monos = monomials_up_to(ring, degree)
    return st.lists(coefficients, min_size=len(monos), max_size=len(monos)).map(
        lambda cs: sum((ring.monomial(m, c) for m, c in zip(monos, cs)), ring.zero())
    )


class TestPolyArithmetic(unittest.TestCase):

    def test_examples(self):
        self.assertEqual((X + Y) * (X - Y), X**2 - Y**2)
        self.assertEqual((X**2 * Y + 3).total_degree(), 3)
        self.assertEqual((X**2).substitute(0, Y), Y**2)
        self.assertEqual(RING.zero().total_degree(), -1)

    def test_parse_and_format(self):
        ring = PolyRing.of(3)
        text = "3/2*x1^2*x2 - x3 + 1"
        poly = ring.parse(text)
        self.assertEqual(poly.format(), text)
        self.assertEqual(poly.coefficient((2, 1, 0)), Fraction(3, 2))
        self.assertEqual(ring.parse("x1**2 - x1^2"), ring.zero())
        self.assertEqual(str(ring.zero()), "0")

    def test_parse_errors(self):
        for text in ("x1 +", "1/x1", "x1 + w"):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    PolyRing.of(2).parse(text)

    def test_grlex_leading_terms(self):
        f = RING.parse("x*y^2 + x^3 - 2*y^3 + x")
        self.assertEqual(f.leading_monomial(), (3, 0))
        self.assertEqual(RING.parse("y^2 + x*y").leading_monomial(), (1, 1))
        self.assertEqual(RING.parse("-2*y + 5").leading_coefficient(), -2)

    def test_ring_mismatch(self):
        other = PolyRing(("x", "z"))
        with self.assertRaises(RingMismatch):
            X + other.var(0)
        with self.assertRaises(RingMismatch):
            membership_bounded(X, [other.var(1)], 1)

    def test_reduce(self):
        f = RING.parse("x^2*y + x*y^2 + y^2")
        divisors = [RING.parse("x*y - 1"), RING.parse("y^2 - 1")]
        quotients, remainder = reduce(f, divisors)
        self.assertEqual(quotients[0] * divisors[0] + quotients[1] * divisors[1] + remainder, f)
        self.assertEqual(remainder, RING.parse("x + y + 1"))


class TestMembership(unittest.TestCase):

    def test_generator_itself(self):
        g = RING.parse("x^2 + y")
        cert = membership_bounded(g, [g], 2)
        self.assertIsInstance(cert, MembershipCert)
        self.assertEqual(cert.cofactors, (RING.one(),))

    def test_planted_combination(self):
        g1, g2 = RING.parse("x^2 - y + 1"), RING.parse("x*y + 2*y^2")
        h = X * g1 + Y * g2
        cert = membership_bounded(h, [g1, g2], 1)
        self.assertTrue(cert)
        self.assertEqual(cert.cofactors[0] * g1 + cert.cofactors[1] * g2, h)
        self.assertLessEqual(max(c.total_degree() for c in cert.cofactors), 1)

    def test_constants_are_not_in_the_maximal_ideal(self):
        for D in range(4):
            with self.subTest(D=D):
                result = membership_bounded(RING.one(), [X, Y], D)
                self.assertIsInstance(result, NotFound)
                self.assertFalse(result)
                self.assertEqual(result.degree_bound, D)

    def test_not_found_is_degree_relative(self):
        target = X**3
        self.assertFalse(membership_bounded(target, [X + Y, Y], 1))
        self.assertTrue(membership_bounded(target, [X + Y, Y], 2))

    def test_certificate_checks_itself(self):
        with self.assertRaises(ContractViolation):
            MembershipCert(X, (Y,), (RING.one(),), 0)
        with self.assertRaises(ContractViolation):
            MembershipCert(X * Y, (X,), (Y,), 0)

    def test_serialized_certificate(self):
        cert = membership_bounded(X * Y + Y, [X + 1], 1)
        self.assertEqual(cert.to_dict()["cofactors"], ["y"])

    @settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(polys(RING, 2), polys(RING, 2), polys(RING, 1), polys(RING, 1))
    def test_complete_at_its_bound(self, g1, g2, c1, c2):
        h = c1 * g1 + c2 * g2
        cert = membership_bounded(h, [g1, g2], 1)
        self.assertIsInstance(cert, MembershipCert)
        self.assertEqual(cert.target, h)

    @settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.data())
    def test_faithful_at_the_plant_degree(self, data):
        n = data.draw(st.integers(1, 2))
        b = data.draw(st.integers(1, 2))
        ring = PolyRing.of(n)
        gens = [data.draw(polys(ring, b)) for _ in range(2)]
        cofactors = [data.draw(polys(ring, b)) for _ in range(2)]
        h = cofactors[0] * gens[0] + cofactors[1] * gens[1]
        self.assertTrue(membership_bounded(h, gens, b))


class TestSyzygies(unittest.TestCase):

    def test_koszul_relation(self):
        syzygies = syzygy_generators([X, Y], 1)
        self.assertEqual(len(syzygies), 1)
        a, b = syzygies[0].entries
        self.assertEqual(a.monomials(), [(0, 1)])
        self.assertEqual(a * X + b * Y, RING.zero())

    def test_single_generator_has_no_syzygies(self):
        self.assertEqual(syzygy_generators([X**2 + Y], 2), [])

    def test_needs_generators(self):
        with self.assertRaises(DomainError):
            syzygy_generators([], 1)

    def test_matrix_system(self):
        rows = [[X, -X], [Y, -Y]]
        syzygies = syzygy_generators(rows, 1)
        self.assertEqual(len(syzygies), 1)
        a, b = syzygies[0].entries
        self.assertEqual(a, b)
        self.assertTrue(a.is_constant())

    def test_planted_solutions_lie_in_the_module(self):
        gens = [X, Y, X * Y]
        syzygies = syzygy_generators(gens, 1)
        for s in syzygies:
            self.assertTrue(is_syzygy(s.entries, gens))
        koszul = [(Y, -X, RING.zero()), (Y, RING.zero(), -RING.one()), (RING.zero(), X, -RING.one())]
        weights = [RING.parse("x^2 - y"), RING.parse("3*x*y"), RING.parse("y + 2")]
        planted = [sum((w * k[i] for w, k in zip(weights, koszul)), RING.zero()) for i in range(3)]
        self.assertTrue(is_syzygy(planted, gens))
        self.assertIsNotNone(module_membership(planted, [s.entries for s in syzygies], 4))


class TestDickson(unittest.TestCase):

    def setUp(self):
        self.D = MonotoneFn.affine(1, 2)

    def test_zero_vector_comes_first(self):
        witness = dickson_witness([(0, 0), (2, 1)], self.D, 2)
        self.assertEqual((witness.i, witness.j), (1, 2))

    def test_seven_vectors(self):
        stream = [(2, 0), (1, 1), (0, 2), (0, 1), (1, 0), (0, 0), (5, 5)]
        witness = dickson_witness(stream, self.D, 2)
        self.assertEqual((witness.i, witness.j), (1, 7))
        self.assertEqual(witness.bound, 62)

    def test_short_stream(self):
        witness = dickson_witness([(1, 0), (0, 1), (1, 1)], self.D, 2)
        self.assertEqual((witness.i, witness.j), (1, 3))

    def test_longest_descent_in_one_dimension(self):
        witness = dickson_witness([(2,), (1,), (0,), (0,)], self.D, 1)
        self.assertEqual((witness.i, witness.j, witness.bound), (3, 4, 4))

    def test_norm_precondition(self):
        with self.assertRaises(DomainError) as ctx:
            dickson_witness([(1, 0), (4, 0)], self.D, 2)
        self.assertIn("element 1", ctx.exception.detail)

    @settings(max_examples=50, deadline=None)
    @given(st.data(), st.integers(1, 2))
    def test_witness_within_m_star(self, data, n):
        D = self.D

        def stream(i):
            return tuple(data.draw(st.integers(0, D(i))) for _ in range(n))

        witness = dickson_witness(stream, D, n)
        self.assertLess(witness.i, witness.j)
        self.assertLessEqual(witness.j, witness.bound)


class TestHilbertChain(unittest.TestCase):

    def test_constant_chain(self):
        witness = hilbert_chain_witness([[X]], MonotoneFn.constant(1), 2, SMALL)
        self.assertEqual(witness.j, 1)
        self.assertEqual(witness.certificates[0].cofactors, (RING.one(),))

    def test_two_step_chain(self):
        stream = [[X**2], [X**2, X]]
        witness = hilbert_chain_witness(stream, MonotoneFn.constant(2), 2, SMALL)
        self.assertEqual(witness.j, 2)
        self.assertEqual(len(witness.certificates), 2)
        self.assertEqual(witness.leading_monomials, ((2, 0), (1, 0)))

    def test_staircase(self):
        for length in range(1, 7):
            with self.subTest(length=length):
                witness = hilbert_chain_witness(staircase(RING, length), MonotoneFn.constant(length), 2, SMALL)
                self.assertEqual(witness.j, length)
                self.assertLessEqual(witness.j, witness.bound)
                for cert in witness.certificates:
                    self.assertIsInstance(cert, MembershipCert)

    def test_chain_must_ascend(self):
        with self.assertRaises(DomainError):
            hilbert_chain_witness([[X], [Y]], MonotoneFn.constant(1), 2, SMALL)

    def test_degree_precondition(self):
        with self.assertRaises(DomainError):
            hilbert_chain_witness([[X**3]], MonotoneFn.constant(2), 2, SMALL)


def split_x2y(generators):
    if generators == (X**2 * Y,):
        return X, X * Y
    return None


class TestRadicalTree(unittest.TestCase):

    def test_member_is_a_single_leaf(self):
        rep = radical_tree([X], X * Y, 1, lambda gens: None, SMALL)
        self.assertEqual(rep.depth, 0)
        self.assertEqual(rep.radicals, (X * Y,))
        self.assertEqual(rep.coefficients, (RING.one(),))

    def test_one_split(self):
        f = X * Y
        rep = radical_tree([X**2 * Y], f, 2, split_x2y, SMALL)
        self.assertEqual(rep.depth, 1)
        self.assertEqual(rep.exponent, 2)
        self.assertEqual(rep.recombine(), f)
        self.assertTrue(rep.radicals)
        for r, cert in zip(rep.radicals, rep.certificates):
            self.assertEqual(cert.target, r**2)
            self.assertEqual(cert.generators, (X**2 * Y,))
        self.assertEqual([leaf.path for leaf in rep.tree.leaves()], [(0,), (1,)])

    def test_power_precondition(self):
        with self.assertRaises(DomainError):
            radical_tree([X**2 * Y], X * Y, 1, split_x2y, SMALL)

    def test_unknown_oracle_reports_partial_tree(self):
        with self.assertRaises(OracleUnknown) as ctx:
            radical_tree([X**2 * Y], X * Y, 2, lambda gens: None, SMALL)
        self.assertIsInstance(ctx.exception.partial, RadicalNode)
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_inconsistent_oracle(self):
        with self.assertRaises(OracleInconsistency):
            radical_tree([X**2 * Y], X * Y, 2, lambda gens: (X, Y), SMALL)


def test_oracle_is_asked_once_per_split(mocker):
    oracle = mocker.Mock(side_effect=split_x2y)
    radical_tree([X**2 * Y], X * Y, 2, oracle, SMALL)
    oracle.assert_called_once_with((X**2 * Y,))


class TestRabinowitsch(unittest.TestCase):

    def test_square(self):
        cert = rabinowitsch_bound_check([X**2], X, 2, config=SMALL)
        self.assertIsInstance(cert, PowerCertificate)
        materialized = cert.materialize()
        self.assertEqual(materialized.target, X**2)
        self.assertEqual(materialized.cofactors, (RING.one(),))

    def test_member_extends_to_any_power(self):
        for E in (1, 3, 5):
            with self.subTest(E=E):
                self.assertEqual(rabinowitsch_bound_check([X], X, E, config=SMALL).materialize().target, X**E)

    def test_searched_base_power(self):
        Lambda = [X**2 + Y, Y**2]
        k, cert = minimal_power(X, Lambda, 6, SMALL)
        self.assertEqual(k, 4)
        power = rabinowitsch_bound_check(Lambda, X, 4, base=(k, cert), config=SMALL)
        self.assertEqual(power.materialize().target, X**4)

    def test_default_exponent(self):
        cert = rabinowitsch_bound_check([X**2], X, config=SMALL)
        self.assertEqual(cert.exponent, 6**8)
        self.assertEqual(cert.base_exponent, 2)

    def test_missing_base(self):
        with self.assertRaises(DomainError):
            rabinowitsch_bound_check([X**2], Y, 3, config=SMALL)


def test_prime_up_to_without_violation(xyz, small_config):
    x, y, z = xyz.gens()
    assert prime_up_to_check([x], 1, [(y, z)], small_config) == []


def test_prime_up_to_product_violation():
    assert prime_up_to_check([X * Y], 1, [(X, Y)], SMALL) == [(X, Y)]


def test_prime_up_to_exhaustive_pool():
    violations = prime_up_to_check([X**2], 2, monomial_pool(RING, 2), SMALL)
    assert (X, X) in violations
    assert all(not membership_bounded(f, [X**2], 3) for f, _ in violations)


def test_pool_degree_is_checked():
    with pytest.raises(DomainError):
        prime_up_to_check([X], 1, [(X**2, Y)], SMALL)
