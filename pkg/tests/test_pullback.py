import random

import pytest

from l0tensor.errors import SpaceMismatch
from l0tensor.fibers import l1, linf
from l0tensor.hom import dual_module, hom_pointwise_norm, pairing
from l0tensor.measure import MeasureSpace
from l0tensor.modules import ModuleSpec, pointwise_norm
from l0tensor.pullback import (AtomMap, I_phi, i_phi_is_onto, pullback_element, pullback_function,
                               pullback_hom, pullback_module, pullback_tensor_check)
from l0tensor.tensor import EPS, PI
from l0tensor.theorems import rand_element, rand_hom, rand_module, rand_tensor

X = MeasureSpace.from_pairs([("x1", 1), ("x2", 2), ("x3", 1)])
Y = MeasureSpace.from_pairs([("y1", 1), ("y2", 3)])
PHI = AtomMap.of(X, Y, {"x1": "y2", "x2": "y1", "x3": "y2"})


def test_identity_pullback():
    m = ModuleSpec.constant(Y, l1(2))
    ident = AtomMap.identity(Y)
    v = m.element([(1, 2), (3, -4)])
    assert pullback_module(ident, m) == m
    assert pullback_element(ident, v) == v


def test_collapse_preserves_norms():
    one = MeasureSpace.from_pairs([("y", 1)])
    two = MeasureSpace.from_pairs([("x1", 1), ("x2", 1)])
    phi = AtomMap.of(two, one, {"x1": "y", "x2": "y"})
    v = ModuleSpec.constant(one, l1(2)).element([(1, -2)])
    assert pointwise_norm(pullback_element(phi, v)).values == (3, 3)


def test_norm_of_pullback_is_composition():
    rng = random.Random(2)
    for _ in range(50):
        m = rand_module(rng, Y)
        v = rand_element(rng, m)
        assert pointwise_norm(pullback_element(PHI, v)) == pullback_function(PHI, pointwise_norm(v))
        t = rand_hom(rng, m, rand_module(rng, Y))
        assert hom_pointwise_norm(pullback_hom(PHI, t)) == pullback_function(PHI, hom_pointwise_norm(t))


def test_I_phi_pairing_and_norm():
    rng = random.Random(3)
    for _ in range(50):
        m = rand_module(rng, Y)
        omega = rand_element(rng, dual_module(m))
        v = rand_element(rng, m)
        pulled = I_phi(PHI, omega)
        assert pulled.module == dual_module(pullback_module(PHI, m))
        assert pairing(pulled, pullback_element(PHI, v)) == pullback_function(PHI, pairing(omega, v))
        assert pointwise_norm(pulled) == pullback_function(PHI, pointwise_norm(omega))
        assert i_phi_is_onto(PHI, m)


def test_coordinate_functional_pulls_back_to_coordinate_functional():
    m = ModuleSpec.constant(Y, linf(2))
    omega = dual_module(m).element([(1, 0), (1, 0)])
    assert I_phi(PHI, omega).coords == ((1, 0),) * 3


def test_pullback_tensor_random():
    rng = random.Random(4)
    for _ in range(40):
        alpha = rand_tensor(rng, rand_module(rng, Y), rand_module(rng, Y))
        assert pullback_tensor_check(PHI, alpha, PI).equal
        assert pullback_tensor_check(PHI, alpha, EPS).equal


def test_composition_of_maps():
    z = MeasureSpace.from_pairs([("z", 1)])
    psi = AtomMap.of(Y, z, {"y1": "z", "y2": "z"})
    m = ModuleSpec.constant(z, l1(2))
    v = m.element([(2, 1)])
    assert pullback_element(PHI.then(psi), v) == pullback_element(PHI, pullback_element(psi, v))


def test_bad_maps():
    with pytest.raises(ValueError):
        AtomMap.of(X, Y, {"x1": "y1"})
    with pytest.raises(Exception):
        AtomMap.of(X, Y, {"x1": "y1", "x2": "y1", "x3": "nope"})
    with pytest.raises(SpaceMismatch):
        pullback_module(PHI, ModuleSpec.constant(X, l1(1)))
