import itertools
import random
from fractions import Fraction as F

import numpy
import pytest
from hypothesis import given, settings, strategies as st

from l0tensor import fibers, linalg
from l0tensor.errors import DimensionMismatch, Infeasible, InvalidDescriptor
from l0tensor.fibers import (block, brute_force_gauge, dual_descriptor, gauge_lp, l1, l2, linf,
                             min_norm_over_affine, norm_eval, polarity_check, polyhedral,
                             polyhedral_from_points)
from l0tensor.lp import OPTIMAL, solve_lp

E = [(1, 0), (0, 1)]
DIAG = [(1, 1), (1, -1)]


def test_norm_eval_examples():
    assert norm_eval(l1(2), (1, -2)).exact == 3
    v = norm_eval(l2(2), (3, 4))
    assert v.exact == 5 and v.squared == 25
    # dual vertices +-e1, +-e2 make the primal ball the l-infinity square
    assert norm_eval(polyhedral(DIAG, E), (1, -2)).exact == 2


def test_weighted_norms():
    assert norm_eval(l1(2, (2, 3)), (1, -1)).exact == 5
    assert norm_eval(linf(2, (2, 3)), (1, -1)).exact == 3
    assert norm_eval(l2(2, (4, 1)), (1, 3)).squared == 25


def test_irrational_l2_norm_keeps_square():
    v = norm_eval(l2(2), (1, 1))
    assert v.exact is None and v.squared == 2
    assert abs(v.value - 2 ** 0.5) < 1e-12


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        norm_eval(l1(2), (1, 2, 3))


def test_dual_descriptor_examples():
    assert dual_descriptor(l1(2)) == linf(2)
    assert dual_descriptor(l2(2, (4, 1))) == l2(2, (F(1, 4), 1))
    for d in (l1(3, (1, 2, 3)), linf(2), l2(2, (4, 1)), polyhedral(DIAG, E),
              block("l1", [l1(1), linf(2)])):
        assert dual_descriptor(dual_descriptor(d)) == d


def test_invalid_descriptors():
    with pytest.raises(InvalidDescriptor):
        l1(2, (1, 0))
    with pytest.raises(InvalidDescriptor):
        polyhedral([(2, 0), (0, 1)], E)


def test_polarity_examples():
    assert polarity_check(E, DIAG) == "certified"
    assert polarity_check(E, E) == "refuted"
    assert polarity_check([(1,)], [(1,)]) == "certified"


def test_polarity_degenerate_input():
    with pytest.raises(Exception):
        polarity_check([(1, 0)], DIAG)


def test_gauge_examples():
    r = gauge_lp(E, (1, 1))
    assert r.value == 2 and r.signed() == (1, 1)
    assert gauge_lp(DIAG, (1, 1)).value == 1
    r = gauge_lp(DIAG, (1, 0))
    assert r.value == 1 and r.signed() == (F(1, 2), F(1, 2))


def test_gauge_infeasible():
    with pytest.raises(Infeasible):
        gauge_lp([(1, 0)], (0, 1))


def test_min_norm_over_affine_examples():
    value, s = min_norm_over_affine(linf(2), (1, 0), [(1, 1)])
    assert value.exact == F(1, 2) and s == [F(-1, 2), F(-1, 2)]
    assert min_norm_over_affine(l1(2), (1, 0), [(1, 1)])[0].exact == 1
    assert min_norm_over_affine(l1(2), (2, 2), [(1, 1)])[0].exact == 0
    assert min_norm_over_affine(l2(2), (1, 0), [(1, 1)])[0].squared == F(1, 2)


def test_block_flattening():
    assert block("l1", [l1(1), l1(2)]) == l1(3)
    mixed = block("linf", [l1(2), l1(1)])
    assert norm_eval(mixed, (1, -2, 2)).exact == 3


def test_polyhedral_from_points_recovers_square():
    d = polyhedral_from_points([(1, 1), (1, -1), (F(1, 2), 0)])
    for x in [(3, 1), (1, -5), (F(1, 3), F(2, 7))]:
        assert norm_eval(d, x).exact == norm_eval(linf(2), x).exact


def _random_descs(rng):
    return [l1(2), linf(3, (1, 2, F(1, 2))), polyhedral(DIAG, E),
            polyhedral_from_points([(2, 1), (-1, 1), (0, F(3, 2))]), block("linf", [l1(2), l1(1)])]


rational = st.fractions(min_value=-9, max_value=9, max_denominator=6)


@settings(max_examples=60, deadline=None)
@given(st.lists(rational, min_size=6, max_size=6), rational)
def test_norm_axioms_exact(xs, c):
    for d in _random_descs(None):
        n = d.dim
        x, y = xs[:n], xs[3:3 + n]
        nx, ny = norm_eval(d, x).exact, norm_eval(d, y).exact
        assert norm_eval(d, [a + b for a, b in zip(x, y)]).exact <= nx + ny
        assert norm_eval(d, [c * a for a in x]).exact == abs(c) * nx
        assert (nx == 0) == all(a == 0 for a in x)


@settings(max_examples=60, deadline=None)
@given(st.lists(rational, min_size=3, max_size=3))
def test_norm_is_max_over_dual_vertices(x):
    for d in _random_descs(None):
        xv = x[:d.dim]
        best = max(abs(linalg.dot(xv, v)) for v in fibers.dual_vertices(d))
        assert norm_eval(d, xv).exact == best


@settings(max_examples=60, deadline=None)
@given(st.lists(rational, min_size=4, max_size=4))
def test_l2_triangle_in_squared_form(xs):
    d = l2(2, (1, 3))
    x, y = xs[:2], xs[2:]
    a, b = norm_eval(d, x).squared, norm_eval(d, y).squared
    s = norm_eval(d, [p + q for p, q in zip(x, y)]).squared
    # |x+y|^2 <= (|x|+|y|)^2 written without square roots
    gap = a + b - s
    assert gap >= 0 or gap * gap <= 4 * a * b


def test_gauge_strong_duality_and_oracle_random():
    rng = random.Random(11)
    for _ in range(150):
        dim = rng.choice([1, 2, 3])
        k = rng.randint(dim, 6)
        dictionary = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(dim)] for _ in range(k)]
        if linalg.rank(dictionary) < dim:
            continue
        target = [F(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(dim)]
        r = gauge_lp(dictionary, target)
        assert r.value == linalg.dot(r.dual_certificate, target)
        assert all(abs(linalg.dot(r.dual_certificate, c)) <= 1 for c in dictionary)
        assert r.value == brute_force_gauge(dictionary, target)
        rebuilt = [sum((s * c[i] for s, c in zip(r.signed(), dictionary)), F(0)) for i in range(dim)]
        assert rebuilt == target


def test_solve_lp_small_instance():
    # min x + 2y, x + y = 3, x - y = 1
    res = solve_lp([1, 2], [[1, 1], [1, -1]], [3, 1])
    assert res.status == OPTIMAL and res.value == 4 and tuple(res.x) == (2, 1)


def test_solve_lp_infeasible():
    res = solve_lp([1, 1], [[1, 1]], [-1])
    assert res.status != OPTIMAL


def test_singular_values_against_numpy():
    rng = random.Random(5)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = [[F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(m)]
        ours = sorted(linalg.singular_values(a), reverse=True)
        ref = numpy.linalg.svd(numpy.array(a, dtype=float), compute_uv=False)
        assert numpy.allclose(ours[:len(ref)], ref, atol=1e-9)


def test_rank_and_null_space():
    a = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert linalg.rank(a) == 2
    for v in linalg.null_space(a):
        assert linalg.matvec(a, v) == [0, 0, 0]


def test_polygon_pair_sandwiches_disc():
    inner, outer, ratio = fibers.polygon_pair(l2(2))
    for theta in range(0, 360, 7):
        x = (F(numpy.cos(numpy.radians(theta))).limit_denominator(10**6),
             F(numpy.sin(numpy.radians(theta))).limit_denominator(10**6))
        r = norm_eval(l2(2), x).value
        lo, hi = norm_eval(outer, x).exact, norm_eval(inner, x).exact
        assert float(lo) <= r + 1e-12 and r <= float(hi) + 1e-12
        assert hi <= ratio * lo


def test_vertex_enumeration_of_lp_balls():
    assert set(fibers.primal_vertices(l1(2))) >= {(1, 0), (0, 1)}
    assert len(fibers.primal_vertices(linf(3))) in (4, 8)
    for d in (l1(3), linf(2, (2, 1))):
        for v in fibers.primal_vertices(d):
            assert norm_eval(d, v).exact == 1


def test_unit_vertices_of_all_signs():
    for s in itertools.product((-1, 1), repeat=2):
        assert norm_eval(linf(2), s).exact == 1
