import unittest

from src.entity.autoreduced import AutoreducedSet
from src.entity.bound_expr import MonotoneFn
from src.entity.diffpoly import DiffRing
from src.repository.chains import (
    autoreduced_chain_witness,
    brute_force_chain_index,
    replay_ritt_witness,
    ritt_chain_witness,
)
from src.schemas.run_config import RunConfig
from src.services.exceptions import DomainError, OracleUnknown, ScanCapReached
from src.services.generators import derivative_closure, greedy_descent
from src.services.oracles import BoundedPowerOracle, PseudodivisionOracle, TableOracle

U = DiffRing(1, 1, ("u",))
SMALL = RunConfig(membership_degree_cap=3, scan_cap=16, procedure_step_cap=16, step_cap=5000)
SUCCESSOR = MonotoneFn.affine(1, 1)


def powers(*exponents: int) -> list[AutoreducedSet]:
    return [AutoreducedSet(U, (U.parse(f"u^{e}"),)) for e in exponents]


class TestAutoreducedChains(unittest.TestCase):
    def test_greedy_descent(self):
        stream = greedy_descent(U, SUCCESSOR, 10)
        self.assertEqual(
            [s.to_list() for s in stream[:8]],
            [[], ["(d1 u)^2"], ["d1 u"], ["u^4"], ["u^3"], ["u^2"], ["u"], ["u"]],
        )

    def test_greedy_descent_meets_h(self):
        stream = greedy_descent(U, SUCCESSOR, 12)
        witness = autoreduced_chain_witness(stream, SUCCESSOR, 1, 1, SMALL)
        self.assertEqual(witness.index, 7)
        self.assertEqual(witness.bound, 7)
        self.assertTrue(witness.checked)
        self.assertEqual(brute_force_chain_index(stream), witness.index)

    def test_descending_powers(self):
        stream = powers(3, 2, 1, 1)
        witness = autoreduced_chain_witness(stream, MonotoneFn.affine(1, 3), 1, 1, SMALL)
        self.assertEqual(witness.index, 3)
        self.assertEqual(len(witness.ranks), 4)
        self.assertEqual(brute_force_chain_index(stream), 3)

    def test_constant_stream(self):
        witness = autoreduced_chain_witness(powers(1), SUCCESSOR, 1, 1, SMALL)
        self.assertEqual(witness.index, 1)

    def test_stream_outside_control(self):
        with self.assertRaises(DomainError):
            autoreduced_chain_witness(powers(5, 4), SUCCESSOR, 1, 1, SMALL)

    def test_scan_cap(self):
        def stream(i):
            return AutoreducedSet(U, (U.parse(f"u^{40 - i}"),))

        with self.assertRaises(ScanCapReached):
            autoreduced_chain_witness(stream, MonotoneFn.constant(40), 1, 1, SMALL)


class TestRittChains(unittest.TestCase):
    def setUp(self):
        self.u = U.parse("u")
        self.closure = derivative_closure([self.u], 8)

    def test_derivative_closure(self):
        self.assertEqual([p.format() for p in self.closure[2]], ["u", "d1 u", "d1^2 u"])

    def test_confirmed_at_start(self):
        oracle = PseudodivisionOracle()
        witness = ritt_chain_witness([self.u], self.closure, SUCCESSOR, SUCCESSOR, 2, oracle, SMALL)
        self.assertEqual(witness.index, 2)
        self.assertTrue(all(answer is True for _, _, answer in witness.transcript))
        self.assertTrue(witness.bound_expr)
        self.assertTrue(replay_ritt_witness(witness, [self.u], self.closure, SUCCESSOR, oracle))

    def test_constant_stream(self):
        stream = [[self.u]]
        witness = ritt_chain_witness([self.u], stream, SUCCESSOR, SUCCESSOR, 0, PseudodivisionOracle(), SMALL)
        self.assertEqual(witness.index, 0)

    def test_indexed_table(self):
        stream = [[self.u]]
        oracle = TableOracle(U, {(3, "u"): False, (4, "u"): False, (5, "u"): True})
        witness = ritt_chain_witness([self.u], stream, SUCCESSOR, SUCCESSOR, 3, oracle, SMALL)
        self.assertEqual(witness.index, 5)
        self.assertEqual([i for i, _, _ in witness.transcript], [3, 4, 5])

    def test_unknown_answer(self):
        oracle = TableOracle(U, {(0, "u"): False})
        with self.assertRaises(OracleUnknown):
            ritt_chain_witness([self.u], [[self.u]], SUCCESSOR, SUCCESSOR, 0, oracle, SMALL)

    def test_scan_cap(self):
        oracle = TableOracle(U, {"u": False})
        with self.assertRaises(ScanCapReached) as caught:
            ritt_chain_witness([self.u], [[self.u]], SUCCESSOR, SUCCESSOR, 0, oracle, SMALL)
        self.assertEqual(len(caught.exception.transcript), SMALL.scan_cap)

    def test_bounded_power_oracle(self):
        oracle = BoundedPowerOracle(2, SMALL)
        square = [[U.parse("u^2")]]
        witness = ritt_chain_witness([U.parse("u^2")], square, MonotoneFn.constant(2), SUCCESSOR, 0, oracle, SMALL)
        self.assertEqual(witness.index, 0)
        self.assertIs(oracle(self.u, [U.parse("u^2")]), True)

    def test_empty_base(self):
        with self.assertRaises(DomainError):
            ritt_chain_witness([], [[self.u]], SUCCESSOR, SUCCESSOR, 0, PseudodivisionOracle(), SMALL)
