"""Small dense linear algebra.

Exact routines work on lists of Fractions (row-major lists of rows). The
singular value routine is floating point and uses one-sided Jacobi
rotations, which is plenty for the 3x3-ish matrices this package sees.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = list  # list of rows
Vector = list


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matvec(a: Sequence[Sequence], x: Sequence) -> Vector:
    return [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    n = len(b[0]) if b else 0
    if not bt:
        return [[Fraction(0)] * n for _ in a]
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def outer(x: Sequence, y: Sequence) -> Matrix:
    return [[a * b for b in y] for a in x]


def flatten(a: Sequence[Sequence]) -> Vector:
    return [x for row in a for x in row]


def reshape(v: Sequence, m: int, n: int) -> Matrix:
    return [list(v[i * n:(i + 1) * n]) for i in range(m)]


def is_zero_matrix(a: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    m = [list(map(Fraction, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def null_space(a: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : a x = 0}; ``ncols`` is required when ``a`` has no rows."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(r, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Some solution of a x = b, or None when the system is inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(r, pivots):
        x[p] = row[n]
    return x


def solve_square(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Unique solution of a square system, or None when a is singular."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        for i in range(c + 1, n):
            if aug[i][c] != 0:
                f = aug[i][c] / piv
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = aug[i][n] - sum((aug[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / aug[i][i]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix | None:
    n = len(a)
    r, pivots = rref([list(row) + e for row, e in zip(a, identity(n))])
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in r]


def singular_values(a: Sequence[Sequence], tol: float = 1e-12, max_sweeps: int = 100) -> list[float]:
    """Singular values in decreasing order via one-sided Jacobi.

    Columns are rotated pairwise until every pair is orthogonal to relative
    precision ``tol``; the column norms are then the singular values.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0 or n == 0:
        return []
    # work on the orientation with fewer columns
    if n > m:
        a = transpose(a)
        m, n = n, m
    cols = [[float(a[i][j]) for i in range(m)] for j in range(n)]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                cp, cq = cols[p], cols[q]
                alpha = sum(x * x for x in cp)
                beta = sum(x * x for x in cq)
                gamma = sum(x * y for x, y in zip(cp, cq))
                if gamma == 0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1 + zeta * zeta))
                c = 1 / math.sqrt(1 + t * t)
                s = c * t
                cols[p] = [c * x - s * y for x, y in zip(cp, cq)]
                cols[q] = [s * x + c * y for x, y in zip(cp, cq)]
        if not rotated:
            break
    return sorted((math.sqrt(sum(x * x for x in col)) for col in cols), reverse=True)


def nuclear_norm(a) -> float:
    return sum(singular_values(a))


def spectral_norm(a) -> float:
    sv = singular_values(a)
    return sv[0] if sv else 0.0
