from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from l0tensor.errors import SpaceMismatch
from l0tensor.measure import L0Function, MeasureSpace, indicator, l0_combine, l0_distance, sup


AB = MeasureSpace.from_pairs([("a", 1), ("b", 1)])


def fn(space, *values):
    return L0Function.of(space, values)


def test_combine_examples():
    f = fn(AB, 1, 2)
    assert l0_combine(f, fn(AB, 0, 0), "add") == f
    assert l0_combine(f, fn(AB, 3, -1), "mul").values == (3, -2)
    assert l0_combine(f, fn(AB, 3, -1), "max").values == (3, 2)


def test_combine_rejects_other_space():
    other = MeasureSpace.from_pairs([("a", 1), ("c", 1)])
    with pytest.raises(SpaceMismatch):
        l0_combine(fn(AB, 1, 2), fn(other, 1, 2), "add")


def test_distance_examples():
    x = MeasureSpace.from_pairs([("a", 1), ("b", 3)])
    assert l0_distance(fn(x, 2, F(1, 2)), x.zero()) == F(5, 8)
    assert l0_distance(fn(x, 7, 7), fn(x, 7, 7)) == 0
    assert l0_distance(fn(x, 10, 10), x.zero()) == 1


def test_probability_weights_sum_to_one():
    x = MeasureSpace.from_pairs([("a", F(1, 3)), ("b", 2), ("c", F(5, 7))])
    assert sum(x.probability_weights) == 1


def test_indicator():
    x = MeasureSpace.uniform(3)
    assert indicator(x, []).values == (0, 0, 0)
    assert indicator(x, x.ids).values == (1, 1, 1)
    assert indicator(x, [x.ids[1]]).values == (0, 1, 0)
    with pytest.raises(Exception):
        indicator(x, ["nope"])


def test_invalid_spaces():
    with pytest.raises(Exception):
        MeasureSpace.from_pairs([])
    with pytest.raises(Exception):
        MeasureSpace.from_pairs([("a", 0)])
    with pytest.raises(Exception):
        MeasureSpace.from_pairs([("a", 1), ("a", 2)])


def test_finite_sup_is_atomwise_max():
    assert sup([fn(AB, 1, 5), fn(AB, 3, -1), fn(AB, 0, 0)]).values == (3, 5)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
triples = st.lists(st.tuples(rationals, rationals, rationals), min_size=3, max_size=3)


@given(triples)
def test_distance_is_a_metric(rows):
    x = MeasureSpace.from_pairs([("a", 1), ("b", 2), ("c", F(1, 2))])
    f, g, h = (fn(x, *col) for col in zip(*rows))
    assert l0_distance(f, g) == l0_distance(g, f)
    assert l0_distance(f, h) <= l0_distance(f, g) + l0_distance(g, h)
    assert (l0_distance(f, g) == 0) == (f.values == g.values)


@given(triples)
def test_lattice_identity(rows):
    x = MeasureSpace.uniform(3)
    f, g, _ = (fn(x, *col) for col in zip(*rows))
    lhs = l0_combine(l0_combine(f, g, "max"), l0_combine(f, g, "min"), "add")
    assert lhs == l0_combine(f, g, "add")
