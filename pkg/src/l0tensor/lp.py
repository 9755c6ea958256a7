"""Exact two-phase primal simplex over the rationals.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Fraction arithmetic and
Bland's smallest-index rule, so it terminates on degenerate problems and
the answer is reproducible bit for bit. No scaling, no tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    y: tuple[Fraction, ...] | None = None  # equality-constraint multipliers
    basis: tuple[int, ...] | None = None


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, c):
        row = self.rows[r]
        inv = 1 / row[c]
        if inv != 1:
            row = [x * inv for x in row]
            self.rows[r] = row
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f != 0:
                self.rows[i] = [x - f * y for x, y in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost):
        ncols = len(cost)
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb != 0:
                row = self.rows[i]
                for j in range(ncols):
                    if row[j] != 0:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost, allowed):
        """Bland iterations; returns False if unbounded."""
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in allowed if red[j] < 0), None)
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)


def solve_lp(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``a_eq x = b_eq`` and ``x >= 0``."""
    c = [Fraction(v) for v in c]
    n = len(c)
    m = len(a_eq)
    if m == 0:
        if any(v < 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, Fraction(0), (Fraction(0),) * n, (), ())

    rows = []
    rhs = []
    for row, bi in zip(a_eq, b_eq):
        row = [Fraction(v) for v in row]
        bi = Fraction(bi)
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        rows.append(row + [Fraction(int(i == len(rows))) for i in range(m)])
        rhs.append(bi)
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])

    phase1_cost = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(phase1_cost, range(n + m))
    if sum((tab.rhs[i] for i, b in enumerate(tab.basis) if b >= n), Fraction(0)) != 0:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if j is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, j)
        i += 1
    tab.rows = [row[:n] for row in tab.rows]

    if not tab.run(c, range(n)):
        return LPResult(UNBOUNDED)

    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        x[b] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))

    # multipliers: any y with B^T y = c_B; unique up to the left null space of A
    basis_cols = [[Fraction(a_eq[r][b]) for b in tab.basis] for r in range(m)]
    if tab.basis:
        y = linalg.solve(linalg.transpose(basis_cols), [c[b] for b in tab.basis])
    else:
        y = [Fraction(0)] * m
    return LPResult(OPTIMAL, value, tuple(x), tuple(y), tuple(tab.basis))
