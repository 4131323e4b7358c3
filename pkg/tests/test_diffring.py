import unittest

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from src.entity.autoreduced import AutoreducedSet, is_autoreduced
from src.entity.certificates import Stratum
from src.entity.derivative import Derivative
from src.entity.diffpoly import DiffRing
from src.entity.ordinal import Comparison
from src.repository import autoreduction
from src.repository.autoreduction import (
    autoreduce,
    coherent,
    common_derivatives,
    delta_s_poly,
    is_coherent,
    minimal_autoreduced_subset,
)
from src.repository.charset import Repair, char_set, verify_char_set
from src.repository.pseudodivision import INITIAL, SEPARANT, pseudodivide, reduction_step, within_bounds
from src.repository.stratified import h_product, rosenfeld_exponent, stratified_membership
from src.schemas.run_config import RunConfig
from src.services.exceptions import (
    DomainError,
    OracleInconsistency,
    OracleUnknown,
    ParseError,
    ProcedureAbort,
    UnitIdeal,
)
from src.services.oracles import PseudodivisionOracle, TableOracle

XYZ = DiffRing(3, 2, ("x", "y", "z"))
UV = DiffRing(2, 2, ("u", "v"))
UV1 = DiffRing(2, 1, ("u", "v"))
U = DiffRing(1, 1, ("u",))
X = DiffRing(1, 1, ("x",))
XY = DiffRing(2, 1, ("x", "y"))
SMALL = RunConfig(membership_degree_cap=4, scan_cap=16, procedure_step_cap=16, step_cap=5000)


@st.composite
def diff_polys(draw, ring: DiffRing, max_order: int = 2, max_degree: int = 3, max_terms: int = 4):
    size = ring.ranking.count_below(max_order + 1)
    terms = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=max_terms))
    result = ring.zero()
    for c in terms:
        factors = draw(st.lists(st.integers(1, size), max_size=max_degree))
        term = ring.constant(c)
        for index in factors:
            term = term * ring.variable(index)
        result = result + term
    return result


def non_constant(ring: DiffRing, **kwargs):
    return diff_polys(ring, **kwargs).filter(lambda p: not p.is_constant())


class TestDiffRing(unittest.TestCase):
    def test_orderly_indices(self):
        ranking = UV.ranking
        expected = {"u": 1, "v": 2, "d2 u": 3, "d2 v": 4, "d1 u": 5, "d1 v": 6}
        for text, index in expected.items():
            with self.subTest(text=text):
                self.assertEqual(UV.parse(text), UV.variable(index))
        self.assertTrue(ranking.lt(Derivative(2, (0, 0)), Derivative(1, (0, 1))))

    def test_parse_and_format(self):
        p = XYZ.parse("2/3*(d1 x)^2*y - d2 x")
        self.assertEqual(p.format(), "2/3*y*(d1 x)^2 - d2 x")
        self.assertEqual(XYZ.parse(p.format()), p)
        self.assertEqual(XYZ.parse("d1 x^2"), XYZ.parse("(d1 x)^2"))
        self.assertEqual(XYZ.parse("d1^2 d2 z"), XYZ.derivative(3, 2, 1))

    def test_default_names(self):
        ring = DiffRing(2, 1)
        self.assertEqual(ring.names, ("x1", "x2"))
        self.assertEqual(ring.parse("d1 x2").format(), "d1 x2")

    def test_parse_errors(self):
        for text in ("x +", "d3 x", "w + x", "x/y"):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    XYZ.parse(text)

    def test_bad_names(self):
        for names in (("x", "x"), ("d1", "y"), ("x",)):
            with self.subTest(names=names):
                with self.assertRaises(DomainError):
                    DiffRing(2, 1, names)

    def test_leader_initial_separant(self):
        g1 = XYZ.parse("d2 y*(d1 x)^2 + x*d1 x")
        self.assertEqual(g1.leader(), Derivative(1, (1, 0)))
        self.assertEqual(g1.leader_degree(), 2)
        self.assertEqual(g1.initial(), XYZ.parse("d2 y"))
        self.assertEqual(g1.separant(), XYZ.parse("2*d2 y*d1 x + x"))
        u = U.parse("u^3 + u")
        self.assertEqual(u.rank(), (Derivative(1, (0,)), 3))
        self.assertEqual(u.separant(), U.parse("3*u^2 + 1"))
        x = XYZ.parse("x")
        self.assertEqual((x.initial(), x.separant()), (XYZ.one(), XYZ.one()))

    def test_constant_has_no_leader(self):
        with self.assertRaises(DomainError):
            XYZ.constant(5).leader()
        self.assertEqual(XYZ.constant(5).rank_key(), (0, 0))

    def test_derive(self):
        g1 = XYZ.parse("d2 y*(d1 x)^2 + x*d1 x")
        expected = XYZ.parse("(2*d2 y*d1 x + x)*d1^2 x + (d1 d2 y + 1)*(d1 x)^2")
        self.assertEqual(g1.derive(1), expected)
        self.assertEqual(XYZ.parse("x^2").derive(1), XYZ.parse("2*x*d1 x"))
        self.assertTrue(XYZ.constant(3).derive(2).is_zero())

    def test_bound(self):
        self.assertEqual(XYZ.parse("x^5").bound(), 5)
        self.assertEqual(XYZ.parse("d1 x").bound(), 7)
        self.assertEqual(XYZ.constant(2).bound(), 0)


class TestDiffRingProperties:
    @given(diff_polys(UV))
    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_derivations_commute(self, p):
        assert p.derive(1).derive(2) == p.derive(2).derive(1)

    @given(diff_polys(UV, max_order=1), diff_polys(UV, max_order=1))
    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_leibniz(self, p, q):
        assert (p * q).derive(1) == p.derive(1) * q + p * q.derive(1)

    @given(diff_polys(XYZ, max_order=1))
    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_format_parses_back(self, p):
        assert XYZ.parse(p.format()) == p


class TestPseudodivision(unittest.TestCase):
    def setUp(self):
        self.g1 = XYZ.parse("d2 y*(d1 x)^2 + x*d1 x")
        self.g2 = XYZ.parse("d2 y*d1^2 x + x")
        self.f = XYZ.parse("z + x*d1^2 x")

    def test_separant_step(self):
        step = reduction_step(self.f, self.g1)
        self.assertEqual(step.kind, SEPARANT)
        self.assertEqual(step.theta, (1, 0))
        expected = self.g1.separant() * XYZ.parse("z") - XYZ.parse("x*(d1 d2 y + 1)*(d1 x)^2")
        self.assertEqual(step.result, expected)

    def test_initial_step(self):
        step = reduction_step(self.f, self.g2)
        self.assertEqual(step.kind, INITIAL)
        self.assertEqual(step.result, self.g2.initial() * XYZ.parse("z") - XYZ.parse("x^2"))
        self.assertEqual(step.result.format(), "z*d2 y - x^2")

    def test_reduced_input_is_kept(self):
        z = XYZ.parse("z")
        cert = pseudodivide(z, [self.g1])
        self.assertEqual(cert.remainder, z)
        self.assertEqual(cert.exponents, ((0, 0),))
        self.assertEqual(cert.cofactors, {})
        self.assertIsNone(reduction_step(z, self.g1))

    def test_full_division(self):
        cert = pseudodivide(self.f, [self.g1])
        self.assertTrue(cert.divisors.contains_reduced(cert.remainder))
        self.assertEqual(cert.multiplier() * self.f - cert.remainder, cert.combination())
        self.assertTrue(within_bounds(cert))
        self.assertGreaterEqual(cert.exponents[0][1], 1)

    def test_non_autoreduced_divisors(self):
        with self.assertRaises(DomainError):
            pseudodivide(self.f, [self.g1, self.g2])

    def test_ring_mismatch(self):
        with self.assertRaises(DomainError):
            pseudodivide(U.parse("u"), [self.g1])


class TestPseudodivisionProperties:
    @given(
        st.sampled_from([U, UV1, UV]).flatmap(
            lambda ring: st.tuples(non_constant(ring, max_order=1, max_degree=2), diff_polys(ring))
        )
    )
    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
    def test_remainder_reduced_and_bounded(self, pair):
        g, f = pair
        cert = pseudodivide(f, [g])
        assert cert.divisors.contains_reduced(cert.remainder)
        assert cert.multiplier() * f - cert.remainder == cert.combination()
        assert within_bounds(cert)


class TestAutoreduce(unittest.TestCase):
    def test_minimal_subset(self):
        chosen = minimal_autoreduced_subset(U, [U.parse("u^3"), U.parse("u^2"), U.parse("d1 u")])
        self.assertEqual(chosen.to_list(), ["u^2"])

    def test_autoreduced_set_validation(self):
        with self.assertRaises(DomainError):
            AutoreducedSet(U, (U.parse("u"), U.parse("d1 u")))
        self.assertTrue(is_autoreduced([UV1.parse("u"), UV1.parse("v")]))
        self.assertFalse(is_autoreduced([U.parse("u"), U.parse("u*d1 u")]))

    def test_extension_ranks_lower(self):
        a = AutoreducedSet(UV1, (UV1.parse("u"),))
        b = AutoreducedSet(UV1, (UV1.parse("u"), UV1.parse("v")))
        self.assertEqual(b.compare(a), Comparison.LESS)
        self.assertEqual(a.compare(AutoreducedSet(UV1, ())), Comparison.LESS)

    def test_derivative_collapses(self):
        run = autoreduce([X.parse("d1 x"), X.parse("x*d1 x + x")], SMALL)
        self.assertEqual(run.result.to_list(), ["x"])
        self.assertTrue(all(c.remainder.is_zero() for c in run.certificates))
        for previous, following in zip(run.chain, run.chain[1:]):
            self.assertEqual(following.compare(previous), Comparison.LESS)
        self.assertEqual(len(run.chain), 2)

    def test_powers(self):
        run = autoreduce([U.parse("u^2"), U.parse("u^3")], SMALL)
        self.assertEqual(run.result.to_list(), ["u^2"])
        self.assertEqual(len(run.chain), 1)

    def test_already_autoreduced(self):
        g1 = XYZ.parse("d2 y*(d1 x)^2 + x*d1 x")
        run = autoreduce([g1], SMALL)
        self.assertEqual(run.result, AutoreducedSet(XYZ, (g1,)))
        self.assertTrue(run.bound_expr)

    def test_constant_input(self):
        with self.assertRaises(DomainError):
            autoreduce([U.constant(3)], SMALL)

    def test_unit_ideal(self):
        with self.assertRaises(UnitIdeal):
            autoreduce([U.parse("u"), U.parse("u - 1")], SMALL)


class TestAutoreduceProperties:
    @given(st.lists(non_constant(U, max_order=1, max_degree=2, max_terms=3), min_size=1, max_size=3))
    @settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
    def test_result_is_autoreduced_and_saturates(self, polys):
        try:
            run = autoreduce(polys, SMALL)
        except UnitIdeal:
            return
        assert is_autoreduced(list(run.result))
        assert all(c.remainder.is_zero() for c in run.certificates)
        assert all(b.compare(a) == Comparison.LESS for a, b in zip(run.chain, run.chain[1:]))


class TestCoherence(unittest.TestCase):
    def test_delta_s_poly_expands(self):
        f, g = UV.parse("d1 u - v"), UV.parse("d2 u")
        self.assertEqual(delta_s_poly(f, g), UV.parse("-d2 v"))
        f, g = UV.parse("d1 u + v"), UV.parse("v*d2 u + u")
        self.assertEqual(delta_s_poly(f, g), g.separant() * f.derive(2) - f.separant() * g.derive(1))

    def test_delta_s_poly_of_itself(self):
        f = UV.parse("u*d1 u + v")
        self.assertTrue(delta_s_poly(f, f).is_zero())

    def test_delta_s_poly_needs_shared_indeterminate(self):
        with self.assertRaises(DomainError):
            delta_s_poly(UV.parse("d1 u"), UV.parse("d2 v"))

    def test_completion(self):
        start = AutoreducedSet(UV, (UV.parse("d1 u - v"), UV.parse("d2 u")))
        self.assertFalse(is_coherent(start))
        run = coherent(start, config=SMALL)
        self.assertEqual(run.result.to_list(), ["d2 u", "d2 v", "d1 u - v"])
        self.assertTrue(is_coherent(run.result))
        self.assertEqual(len(run.chain), 2)
        self.assertTrue(all(c.remainder.is_zero() for c in run.delta_certificates))

    def test_already_coherent(self):
        ring = DiffRing(1, 2, ("u",))
        start = AutoreducedSet(ring, (ring.parse("d1 u - u"), ring.parse("d2 u")))
        run = coherent(start, config=SMALL)
        self.assertEqual(run.result, start)
        self.assertEqual(len(run.chain), 1)

    def test_distinct_leaders(self):
        start = AutoreducedSet(UV1, (UV1.parse("u"), UV1.parse("v^2 + v")))
        self.assertEqual(coherent(start, config=SMALL).result, start)

    def test_containment(self):
        start = AutoreducedSet(UV, (UV.parse("d1 u - v"), UV.parse("d2 u")))
        run = coherent(start, containment=True, config=SMALL)
        self.assertTrue(is_coherent(run.result))
        self.assertTrue(all(c.remainder.is_zero() for c in run.certificates))


    def test_common_derivatives_above_the_least(self):
        f, g = UV.parse("d1 u - v"), UV.parse("d2 u")
        self.assertEqual(
            common_derivatives(f, g),
            [Derivative(1, (1, 1)), Derivative(1, (1, 2)), Derivative(1, (2, 1))],
        )
        self.assertEqual(common_derivatives(f, g, horizon=0), [Derivative(1, (1, 1))])
        self.assertEqual(common_derivatives(UV.parse("d1 u"), UV.parse("d2 v")), [])

    def test_delta_s_poly_above_the_least(self):
        f, g = UV.parse("d1 u - v"), UV.parse("d2 u")
        self.assertEqual(delta_s_poly(f, g, Derivative(1, (2, 1))), UV.parse("-d1 d2 v"))
        with self.assertRaises(DomainError):
            delta_s_poly(f, g, Derivative(1, (2, 0)))

    def test_completion_is_coherent_above_the_least(self):
        start = AutoreducedSet(UV, (UV.parse("d1 u - v"), UV.parse("d2 u")))
        run = coherent(start, config=SMALL)
        self.assertTrue(is_coherent(run.result, horizon=2))
        self.assertEqual(len(run.delta_certificates), 3)


class TestStrata(unittest.TestCase):
    def test_generator_in_order_zero(self):
        lam = X.parse("x^2 + d1 x")
        self.assertTrue(stratified_membership(lam, [lam], 0, Stratum.ORDER, SMALL))

    def test_derivative_needs_order_one(self):
        lam = X.parse("x")
        self.assertFalse(stratified_membership(X.parse("d1 x"), [lam], 0, Stratum.ORDER, SMALL))
        cert = stratified_membership(X.parse("d1 x"), [lam], 1, Stratum.ORDER, SMALL)
        self.assertTrue(cert)
        self.assertIn((0, (1,)), cert.generators)

    def test_saturation_planted(self):
        lam = XY.parse("x*y")
        self.assertEqual(h_product([lam]), XY.parse("x^2"))
        y = XY.parse("y")
        cert = stratified_membership(y, [lam], 2, Stratum.SATURATED, SMALL)
        self.assertTrue(cert)
        self.assertEqual(cert.multiplier, XY.parse("x^4"))
        self.assertTrue(stratified_membership(y, [lam], 2, Stratum.MIXED, SMALL))
        self.assertFalse(stratified_membership(y, [lam], 2, Stratum.ORDER, SMALL))

    def test_outside_bounded_part(self):
        found = stratified_membership(XY.parse("y"), [XY.parse("x*y")], 1, Stratum.SATURATED, SMALL)
        self.assertFalse(found)
        self.assertEqual(found.degree_bound, -1)

    def test_negative_index(self):
        with self.assertRaises(DomainError):
            stratified_membership(XY.parse("y"), [XY.parse("x*y")], -1, Stratum.ORDER, SMALL)

    def test_rosenfeld_exponent(self):
        found = rosenfeld_exponent(XY.parse("y"), [XY.parse("x*y")], 2, 3, SMALL)
        self.assertEqual(found.k, 2)
        self.assertTrue(found.bound_expr)
        self.assertIn(found.within_bound, (True, None))

    def test_rosenfeld_exponent_not_found(self):
        self.assertIsNone(rosenfeld_exponent(XY.parse("y"), [XY.parse("x*y")], 2, 1, SMALL))


class TestCharSet(unittest.TestCase):
    def test_trivial(self):
        u = U.parse("u")
        oracle = PseudodivisionOracle(AutoreducedSet(U, (u,)))
        run = char_set([u], oracle, SMALL)
        self.assertEqual(run.sigma.to_list(), ["u"])
        self.assertEqual(run.repairs, [])
        self.assertEqual(verify_char_set(run, [u], oracle), [])

    def test_split_product(self):
        oracle = TableOracle(UV1, {"u*v": True, "u": True, "v": False, "1": False})
        run = char_set([UV1.parse("u*v")], oracle, SMALL)
        self.assertEqual(run.sigma.to_list(), ["u"])
        self.assertEqual(run.repairs, [Repair.SEPARANT_INITIAL])
        self.assertEqual([s.to_list() for s in run.chain], [["u*v"], ["u"]])
        self.assertEqual(verify_char_set(run, [UV1.parse("u*v")], oracle), [])
        self.assertTrue(run.bound_expr)

    def test_inconsistent_oracle(self):
        oracle = TableOracle(UV1, {"u*v": True, "u": False, "v": False})
        with self.assertRaises(OracleInconsistency) as caught:
            char_set([UV1.parse("u*v")], oracle, SMALL)
        self.assertIsInstance(caught.exception, ProcedureAbort)
        self.assertIn(("u", False), caught.exception.transcript)

    def test_generator_denied(self):
        oracle = TableOracle(U, {"u": False})
        with self.assertRaises(OracleInconsistency):
            char_set([U.parse("u")], oracle, SMALL)

    def test_unknown_answer(self):
        oracle = TableOracle(UV1, {"u*v": True})
        with self.assertRaises(OracleUnknown):
            char_set([UV1.parse("u*v")], oracle, SMALL)

    def test_verify_rejects_wrong_sigma(self):
        oracle = TableOracle(UV1, {"u*v": True, "u": True, "v": False})
        run = char_set([UV1.parse("u*v")], oracle, SMALL)
        liar = TableOracle(UV1, {"u*v": True, "u": False, "v": True})
        self.assertIn("u is not confirmed in P", verify_char_set(run, [UV1.parse("u*v")], liar))


def test_char_set_asks_each_polynomial_once(mocker):
    table = TableOracle(UV1, {"u*v": True, "u": True, "v": False})
    oracle = mocker.Mock(side_effect=table)
    run = char_set([UV1.parse("u*v")], oracle, SMALL)
    assert oracle.call_count == len(run.transcript) == 2
    asked = [call.args[0] for call in oracle.call_args_list]
    assert asked == [UV1.parse("u*v"), UV1.parse("u")]


def test_coherence_checks_every_common_derivative(mocker):
    start = AutoreducedSet(UV, (UV.parse("d2 u"), UV.parse("d2 v"), UV.parse("d1 u - v")))
    least = Derivative(1, (1, 1))
    real = autoreduction.delta_s_poly

    def failing_above_least(f, g, v=None):
        return real(f, g, v) if v == least else UV.parse("u")

    assert is_coherent(start)
    mocker.patch("src.repository.autoreduction.delta_s_poly", side_effect=failing_above_least)
    assert is_coherent(start, horizon=0)
    assert not is_coherent(start)
    checked = [call.args[2] for call in autoreduction.delta_s_poly.call_args_list]
    assert Derivative(1, (2, 1)) in checked


@pytest.mark.parametrize("stratum", list(Stratum))
def test_stratum_certificates_reexpand(stratum):
    lam = XY.parse("x*y")
    cert = stratified_membership(XY.parse("x*y"), [lam], 2, stratum, SMALL)
    assert cert
    derived = {label: lam.apply(label[1]) for label in cert.generators}
    total = XY.zero()
    for label, cofactor in zip(cert.generators, cert.cofactors()):
        total = total + cofactor * derived[label]
    assert total == cert.multiplier * cert.g
