"""
Exact linear algebra over Q for bounded-degree combinations.

A polynomial combination ``sum_j c_j * v_j`` of vectors of polynomials with
``deg c_j <= degrees[j]`` is linear in the coefficients of the ``c_j``:
one unknown per (j, cofactor monomial), one equation per (component,
monomial). Systems are reduced with sympy's ``DomainMatrix`` over ``QQ``.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import itermonomials
from sympy.polys.orderings import grlex

from src.entity.poly import Monomial, Poly, PolyRing

logger = logging.getLogger(__name__)

PolyVector = Sequence[Poly]


@lru_cache(maxsize=256)
def monomials_up_to(ring: PolyRing, degree: int) -> tuple[Monomial, ...]:
    """All monomials of total degree at most ``degree``, grlex ascending."""
    if degree < 0:
        return ()
    exponents = [sympy.Poly(mono, *ring.symbols).monoms()[0] for mono in itermonomials(ring.symbols, degree)]
    return tuple(sorted(exponents, key=grlex))


def _to_domain(rows: list[list[Fraction]], ncols: int) -> DomainMatrix:
    return DomainMatrix([[QQ(c.numerator, c.denominator) for c in row] for row in rows], (len(rows), ncols), QQ)


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    if not rows or not ncols:
        return [list(row) for row in rows], ()
    reduced, pivots = _to_domain(rows, ncols).rref()
    entries = reduced.to_Matrix()
    return [
        [Fraction(int(entries[i, j].p), int(entries[i, j].q)) for j in range(ncols)] for i in range(len(rows))
    ], tuple(pivots)


class CombinationSystem:
    """
    The linear system of ``sum_j c_j * columns[j]`` with bounded cofactor degrees.

    Args:
    - columns (list[PolyVector]): The vectors being combined; all of one length.
    - degrees (list[int]): Cofactor degree bound per column; negative means the column is unused.
    """

    def __init__(self, columns: Sequence[PolyVector], degrees: Sequence[int]):
        self.ring = columns[0][0].ring
        self.width = len(columns[0])
        self.columns = [list(column) for column in columns]
        self.unknowns: list[tuple[int, Monomial]] = [
            (j, mono) for j, degree in enumerate(degrees) for mono in monomials_up_to(self.ring, degree)
        ]
        self.rows: dict[tuple[int, Monomial], int] = {}
        self.entries: list[dict[int, Fraction]] = []
        for col, (j, mono) in enumerate(self.unknowns):
            for component, poly in enumerate(self.columns[j]):
                for term_mono, c in poly.shift(mono).terms:
                    row = self._row((component, term_mono))
                    self.entries[row][col] = c

    def _row(self, key: tuple[int, Monomial]) -> int:
        if key not in self.rows:
            self.rows[key] = len(self.entries)
            self.entries.append({})
        return self.rows[key]

    def dense(self, target: PolyVector | None = None) -> tuple[list[list[Fraction]], int]:
        if target is not None:
            for component, poly in enumerate(target):
                for mono, _ in poly.terms:
                    self._row((component, mono))
        ncols = len(self.unknowns) + (target is not None)
        matrix = [[Fraction(0)] * ncols for _ in self.entries]
        for row, entries in enumerate(self.entries):
            for col, c in entries.items():
                matrix[row][col] = c
        if target is not None:
            for component, poly in enumerate(target):
                for mono, c in poly.terms:
                    matrix[self.rows[(component, mono)]][-1] = c
        return matrix, ncols

    def cofactors(self, solution: list[Fraction]) -> list[Poly]:
        coefficients: list[dict[Monomial, Fraction]] = [{} for _ in self.columns]
        for (j, mono), value in zip(self.unknowns, solution):
            if value:
                coefficients[j][mono] = value
        return [Poly.from_dict(self.ring, c) for c in coefficients]


def solve_combination(target: PolyVector, columns: Sequence[PolyVector], degrees: Sequence[int]) -> list[Poly] | None:
    """
    Finds cofactors with ``sum_j c_j * columns[j] == target``.

    Args:
    - target (PolyVector): The vector to represent.
    - columns (list[PolyVector]): The generators.
    - degrees (list[int]): Cofactor degree bounds.

    Returns:
    - list[Poly] | None: Cofactors (free unknowns set to zero), or None when
      no representation within the degree bounds exists.
    """
    system = CombinationSystem(columns, degrees)
    matrix, ncols = system.dense(target)
    reduced, pivots = _rref(matrix, ncols)
    if ncols - 1 in pivots:
        return None
    solution = [Fraction(0)] * (ncols - 1)
    for row, col in enumerate(pivots):
        solution[col] = reduced[row][-1]
    logger.debug("solved %d x %d combination system", len(matrix), ncols - 1)
    return system.cofactors(solution)


def kernel_combinations(columns: Sequence[PolyVector], degrees: Sequence[int]) -> list[list[Poly]]:
    """
    A basis (over Q) of the cofactor vectors with ``sum_j c_j * columns[j] == 0``.

    Args:
    - columns (list[PolyVector]): The generators.
    - degrees (list[int]): Cofactor degree bounds.

    Returns:
    - list[list[Poly]]: One cofactor vector per free unknown of the reduced system.
    """
    system = CombinationSystem(columns, degrees)
    matrix, ncols = system.dense()
    if not ncols:
        return []
    reduced, pivots = _rref(matrix, ncols)
    basis = []
    for free in (col for col in range(ncols) if col not in pivots):
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for row, col in enumerate(pivots):
            vector[col] = -reduced[row][free]
        basis.append(system.cofactors(vector))
    return basis
