import math
import random
from fractions import Fraction as F

import pytest

from l0tensor import fibers
from l0tensor.errors import PreconditionFailed
from l0tensor.fibers import l1, l2, linf, polyhedral_from_points
from l0tensor.hom import Homomorphism, hom_pointwise_norm
from l0tensor.measure import L0Function, MeasureSpace
from l0tensor.modules import ModuleSpec, pointwise_norm, scalar_module
from l0tensor.sequences import (FiniteSpaceK, IndexedFamily, coordinates, diagonal_check, ell1_sum_module,
                                ellp_norm, evaluation_hom, inj_tens_uc_check, reconstruct, sphere_quotient,
                                two_ell1_check, uc_module, uc_quotient_tensor_check, vv_iso_check)
from l0tensor.tensor import Tensor, elementary, injective_norm
from l0tensor.theorems import rand_element, rand_module

ONE = MeasureSpace.uniform(1)
AB = MeasureSpace.from_pairs([("a", 1), ("b", 1)])


def test_ellp_examples():
    s = scalar_module(AB)
    u, v = s.element([(1,), (2,)]), s.element([(3,), (0,)])
    assert ellp_norm(IndexedFamily.of([u]), 1) == pointwise_norm(u)
    fam = IndexedFamily.of([u, v])
    assert ellp_norm(fam, 1).values == (4, 2)
    assert ellp_norm(fam, math.inf).values == (3, 2)
    assert ellp_norm(IndexedFamily.of([s.element([(3,), (0,)]), s.element([(4,), (0,)])]), 2).values == (5, 0)


def test_ell1_sum_module_examples():
    m = ModuleSpec.constant(AB, linf(2))
    assert ell1_sum_module(["i"], m) == m
    assert ell1_sum_module(["i", "j", "k"], scalar_module(AB)) == ModuleSpec.constant(AB, l1(3))


def test_ell1_block_norm_is_sum_of_block_norms():
    rng = random.Random(1)
    hull = polyhedral_from_points([(2, 1), (-1, 1), (0, F(3, 2))])
    d = ell1_sum_module(["i", "j"], ModuleSpec.constant(ONE, hull)).fibers[0]
    dictionary = list(fibers.primal_vertices(d))
    for _ in range(30):
        x = [F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)]
        expected = fibers.norm_eval(hull, x[:2]).exact + fibers.norm_eval(hull, x[2:]).exact
        assert fibers.gauge_lp(dictionary, x).value == expected
        assert fibers.norm_eval(d, x).exact == expected


def test_vv_examples():
    h = ModuleSpec.constant(ONE, l2(2))
    left = ModuleSpec.constant(ONE, l1(2))
    rep = vv_iso_check(Tensor.of(left, h, [[(3, 4), (0, 0)]]))
    assert rep.equal and rep.row_sums[0].exact == 5
    m = ModuleSpec.constant(ONE, linf(2))
    e1 = left.element([(1, 0)])
    v = m.element([(F(1, 2), -3)])
    rep = vv_iso_check(elementary(e1, v))
    assert rep.equal and rep.projective[0].exact == 3
    rep = vv_iso_check(Tensor.of(left, left, [[(1, 0), (0, 1)]]))
    assert rep.equal and rep.projective[0].exact == 2


def test_two_ell1():
    assert two_ell1_check([(1, -2)])
    assert two_ell1_check([(0, 0), (0, 0)])
    rng = random.Random(4)
    a = [[F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)] for _ in range(4)]
    assert two_ell1_check(a)
    x = MeasureSpace.uniform(4)
    m = ModuleSpec.constant(x, l1(3))
    v = m.element(a)
    assert reconstruct(coordinates(v), m) == v


def test_sphere_quotient_examples():
    d = polyhedral_from_points([(2, 1), (-1, 1), (0, F(3, 2))])
    m = ModuleSpec.constant(ONE, d)
    gens = [m.element([v]) for v in fibers.primal_vertices(d)]
    assert sphere_quotient(gens).verdict
    assert not sphere_quotient(gens[:1]).verdict
    with pytest.raises(PreconditionFailed):
        sphere_quotient([g.scaled(F(1, 2)) for g in gens])


def test_sphere_quotient_missing_vertex():
    m = ModuleSpec.constant(ONE, l1(2))
    # +-e1 and (1/2,1/2) are sphere points, but their hull misses e2
    gens = [m.element([(1, 0)]), m.element([(F(1, 2), F(1, 2))]), m.element([(F(-1, 2), F(1, 2))])]
    assert not sphere_quotient(gens).verdict


def test_diagonal_examples():
    rep = diagonal_check([AB.constant(1), L0Function.of(AB, (-2, -2))])
    assert rep.ok and rep.expected_pi == (3, 3) and rep.expected_eps == (2, 2)
    rep = diagonal_check([L0Function.of(AB, (F(3, 2), -1))])
    assert rep.ok and rep.expected_pi == (F(3, 2), 1)
    rep = diagonal_check([AB.zero(), AB.zero()])
    assert rep.ok and rep.expected_pi == (0, 0)


def test_uc_module_examples():
    m = ModuleSpec.constant(AB, l1(2))
    assert uc_module(FiniteSpaceK.of(1), m) == m
    k = FiniteSpaceK.of(["p", "q"])
    uc = uc_module(k, m)
    const = uc.element([(1, -2, 1, -2), (0, 3, 0, 3)])
    assert pointwise_norm(const).values == (3, 3)
    partial = ModuleSpec(AB, (l1(2), l1(0)))
    delta = evaluation_hom(k, partial, "q")
    assert hom_pointwise_norm(delta).values == (1, 0)


def test_uc_eps_examples():
    k = FiniteSpaceK.of(2)
    left = uc_module(k, scalar_module(ONE))
    right = ModuleSpec.constant(ONE, l1(2))
    rep = inj_tens_uc_check(Tensor.of(left, right, [[(1, 0), (0, 1)]]), k)
    assert rep.equal and rep.injective[0].exact == 1
    # disjoint unit bumps eta_i with vectors v_i: eps is the max of |v_i|
    rep = inj_tens_uc_check(Tensor.of(left, right, [[(3, -1), (F(1, 2), 2)]]), k)
    assert rep.equal and rep.injective[0].exact == 4


def test_uc_eps_single_point():
    k = FiniteSpaceK.of(1)
    left = uc_module(k, scalar_module(ONE))
    right = ModuleSpec.constant(ONE, linf(2))
    alpha = Tensor.of(left, right, [[(2, -5)]])
    rep = inj_tens_uc_check(alpha, k)
    assert rep.equal and injective_norm(alpha).values == (5,)


def test_uc_eps_random():
    rng = random.Random(7)
    for _ in range(40):
        k = FiniteSpaceK.of(rng.randint(1, 3))
        right = rand_module(rng, AB)
        left = uc_module(k, scalar_module(AB))
        mats = [[[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d)] for _ in range(len(k))]
                for d in right.dims]
        assert inj_tens_uc_check(Tensor.of(left, right, mats), k).equal


def test_uc_quotient_examples():
    src = ModuleSpec.constant(ONE, l1(2))
    assert uc_quotient_tensor_check(Homomorphism.identity(src), FiniteSpaceK.of(2)).ok
    proj = Homomorphism.of(src, ModuleSpec.constant(ONE, l1(1)), [[(1, 0)]])
    rep = uc_quotient_tensor_check(proj, FiniteSpaceK.of(2))
    assert rep.ok and all(v == 1 for v in rep.preimage_norms[0])
    with pytest.raises(PreconditionFailed):
        uc_quotient_tensor_check(Homomorphism.of(src, src, [[(2, 0), (0, 2)]]), FiniteSpaceK.of(2))


def test_ellp_norm_of_random_members():
    rng = random.Random(10)
    for _ in range(30):
        m = rand_module(rng, AB)
        members = [rand_element(rng, m) for _ in range(3)]
        norms = [pointwise_norm(v).values for v in members]
        fam = IndexedFamily.of(members)
        assert ellp_norm(fam, 1).values == tuple(sum(col) for col in zip(*norms))
        assert ellp_norm(fam, "inf").values == tuple(max(col) for col in zip(*norms))
