import random
from fractions import Fraction as F

from l0tensor.fibers import l1, l2, linf
from l0tensor.hom import (BilinearForm, Homomorphism, annihilator, bilinear_norm, curry, dual_module,
                          hahn_banach_witness, hom_apply, hom_pointwise_norm, is_quotient_operator,
                          operator_norm, pairing, quotient_dual_check)
from l0tensor.measure import MeasureSpace
from l0tensor.modules import ModuleSpec, Submodule, pointwise_norm, unit_sphere_member
from l0tensor.theorems import rand_element, rand_hom, rand_matrix, rand_module

ONE = MeasureSpace.uniform(1)
AB = MeasureSpace.from_pairs([("a", 1), ("b", 2)])


def test_hom_apply_examples():
    m = ModuleSpec.constant(ONE, l1(2))
    v = m.element([(1, 1)])
    assert hom_apply(Homomorphism.identity(m), v) == v
    assert hom_apply(Homomorphism.of(m, m, [[(0, 0), (0, 0)]]), v) == m.zero()
    assert hom_apply(Homomorphism.of(m, m, [[(1, 0), (0, 2)]]), v) == m.element([(1, 2)])


def test_hom_norm_examples():
    m1 = ModuleSpec.constant(ONE, l1(2))
    assert hom_pointwise_norm(Homomorphism.of(m1, m1, [[(1, 0), (0, 2)]])).values == (2,)
    mi = ModuleSpec.constant(ONE, linf(2))
    assert hom_pointwise_norm(Homomorphism.of(mi, mi, [[(1, 1), (0, 0)]])).values == (2,)
    partial = ModuleSpec(AB, (l1(2), l1(0)))
    assert hom_pointwise_norm(Homomorphism.identity(partial)).values == (1, 0)


def test_operator_norm_l2_is_spectral():
    v = operator_norm(l2(2), l2(2), [(3, 0), (0, 4)])
    assert abs(v.value - 4) <= float(v.tol)


def test_dual_module_and_pairing():
    m = ModuleSpec.constant(AB, l1(2))
    assert dual_module(m) == ModuleSpec.constant(AB, linf(2))
    omega = dual_module(m).element([(1, 0), (1, 0)])
    v = m.element([(5, 7), (-2, 3)])
    assert pairing(omega, v).values == (5, -2)


def test_pairing_bounded_by_norms():
    rng = random.Random(4)
    for _ in range(100):
        m = rand_module(rng, AB)
        v = rand_element(rng, m)
        omega = rand_element(rng, dual_module(m))
        bound = [a * b for a, b in zip(pointwise_norm(omega).values, pointwise_norm(v).values)]
        assert all(abs(p) <= b for p, b in zip(pairing(omega, v).values, bound))


def test_hahn_banach_examples():
    h = ModuleSpec.constant(ONE, l2(2))
    w = hahn_banach_witness(h.element([(3, -4)]))
    assert w.coords == ((F(3, 5), F(-4, 5)),)
    m = ModuleSpec.constant(ONE, l1(2))
    v = m.element([(1, -2)])
    w = hahn_banach_witness(v)
    assert w.coords == ((1, -1),)
    assert pairing(w, v).values == (3,)
    assert pairing(hahn_banach_witness(m.zero()), m.zero()).values == (0,)


def test_hahn_banach_random():
    rng = random.Random(9)
    for _ in range(100):
        m = rand_module(rng, AB)
        v = rand_element(rng, m)
        w = hahn_banach_witness(v)
        assert pairing(w, v) == pointwise_norm(v)
        assert unit_sphere_member(w)


def test_quotient_operator_examples():
    src = ModuleSpec.constant(ONE, l1(2))
    tgt = ModuleSpec.constant(ONE, l1(1))
    rep = is_quotient_operator(Homomorphism.of(src, tgt, [[(1, 0)]]))
    assert rep.verdict
    w, pre, value = rep.min_preimages[0][0]
    assert abs(pre[0]) == 1 and pre[1] == 0 and value.exact == 1
    assert not is_quotient_operator(Homomorphism.of(src, src, [[(2, 0), (0, 2)]])).verdict
    assert not is_quotient_operator(Homomorphism.of(src, src, [[(1, 0), (0, 0)]])).verdict


def test_contractivity_is_required():
    # every target vertex has a preimage of norm 1, yet the map doubles (1,1)
    src = ModuleSpec.constant(ONE, linf(2))
    tgt = ModuleSpec.constant(ONE, l1(2))
    rep = is_quotient_operator(Homomorphism.of(src, tgt, [[(1, 0), (0, 1)]]))
    assert all(v.exact == 1 for _, _, v in rep.min_preimages[0])
    assert not rep.verdict


def test_annihilator_examples():
    m = ModuleSpec.constant(ONE, l1(2))
    assert len(annihilator(Submodule.of(m, [[]])).bases[0]) == 2
    assert annihilator(Submodule.of(m, [[(1, 0), (0, 1)]])).bases[0] == ()
    sub = Submodule.of(m, [[(1, 0)]])
    (basis,) = annihilator(sub).bases
    assert len(basis) == 1 and basis[0][0] == 0
    rep = quotient_dual_check(sub, [[(3, 5), (-2, 1)]])
    assert rep.ok
    assert [r[1] for r in rep.comparisons[0]] == [3, 2]


def test_quotient_dual_random():
    rng = random.Random(13)
    for _ in range(40):
        m = rand_module(rng, AB)
        bases = []
        for d in m.dims:
            vs = [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(rng.randint(0, 1))]
            bases.append([v for v in vs if any(v)])
        assert quotient_dual_check(Submodule.of(m, bases)).ok


def test_bilinear_examples():
    m = ModuleSpec.constant(ONE, l1(2))
    assert bilinear_norm(BilinearForm.of(m, m, [[(1, 0), (0, 1)]])).values == (1,)
    assert bilinear_norm(BilinearForm.of(m, m, [[(0, 0), (0, 0)]])).values == (0,)


def test_curry_preserves_norm():
    rng = random.Random(17)
    for _ in range(100):
        left, right = rand_module(rng, AB), rand_module(rng, AB)
        b = BilinearForm.of(left, right, [rand_matrix(rng, l.dim, r.dim)
                                          for l, r in zip(left.fibers, right.fibers)])
        assert hom_pointwise_norm(curry(b)) == bilinear_norm(b)


def test_composition_is_submultiplicative():
    rng = random.Random(23)
    for _ in range(60):
        a, b, c = (rand_module(rng, AB) for _ in range(3))
        s, t = rand_hom(rng, a, b), rand_hom(rng, b, c)
        ts = t.compose(s)
        bound = [x * y for x, y in zip(hom_pointwise_norm(t).values, hom_pointwise_norm(s).values)]
        assert all(x <= y for x, y in zip(hom_pointwise_norm(ts).values, bound))
