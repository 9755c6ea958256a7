"""Acceptance criteria, one test per criterion.

Each test appends a ``PASS``/``FAIL`` line to ``ACCEPTANCE_LINES``; the
conftest prints them after the run. ``python tests/test_acceptance.py`` runs
the same checks without pytest.
"""

import itertools
import sys
import time
from fractions import Fraction as F

import pytest

from l0tensor import linalg, tensor
from l0tensor.fibers import brute_force_gauges, gauge_lp, l2, polyhedral_from_points
from l0tensor.hom import bilinear_fiber_norm
from l0tensor.measure import MeasureSpace
from l0tensor.modules import ModuleSpec
from l0tensor.tensor import Tensor, crossnorm_sandwich_check
from l0tensor.theorems import verify

SEED = 20240601
TOL = F(1, 10**7)
ACCEPTANCE_LINES = []

# every projective LP solved while this module runs: (left, right, matrix, fiber result)
LP_SOLVES = []
_real_projective_lp = tensor._projective_lp


def _recording_lp(left, right, matrix):
    pf = _real_projective_lp(left, right, matrix)
    LP_SOLVES.append((left, right, matrix, pf))
    return pf


@pytest.fixture(scope="module", autouse=True)
def record_lp_solves():
    tensor._projective_lp = _recording_lp
    yield
    tensor._projective_lp = _real_projective_lp


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def run_suite(tid, cases, tol=None):
    start = time.perf_counter()
    results = verify(tid, SEED, cases, tol)
    failed = [r for r in results if not r.ok]
    detail = f"{len(results) - len(failed)}/{len(results)} cases in {time.perf_counter() - start:.2f}s"
    if failed:
        detail += f"; first failure case {failed[0].index}: {failed[0].detail}"
    return results, not failed, detail


def test_pi_elem():
    _, ok, detail = run_suite("TH-PI-ELEM", 200)
    report("TH-PI-ELEM", ok, detail)


def test_eps_elem():
    _, ok, detail = run_suite("TH-EPS-ELEM", 200)
    report("TH-EPS-ELEM", ok, detail)


def test_null():
    results, ok, detail = run_suite("TH-NULL", 200)
    nulls = sum("matrix-zero=True" in r.detail for r in results)
    report("TH-NULL", ok, f"{detail} ({nulls} null, {len(results) - nulls} non-null)")


def test_sandwich():
    _, ok, detail = run_suite("TH-SANDWICH", 200)
    h = ModuleSpec.constant(MeasureSpace.uniform(1), l2(2))
    rep = crossnorm_sandwich_check(Tensor.of(h, h, [[(1, 0), (0, 1)]]))
    eps, hs, pi = rep.rows[0]
    triple = (eps.value, hs.value, pi.value)
    ident_ok = rep.ok and hs.squared == 2 and all(
        abs(x - y) <= float(TOL) for x, y in zip(triple, (1, 2 ** 0.5, 2)))
    report("TH-SANDWICH", ok and ident_ok, f"{detail}; identity triple {tuple(round(x, 9) for x in triple)}")


def test_vv():
    _, ok, detail = run_suite("TH-VV", 100)
    report("TH-VV", ok, detail)


def test_diag():
    _, ok, detail = run_suite("TH-DIAG", 50, TOL)
    report("TH-DIAG", ok, f"{detail} at tol 1e-7")


def test_uc_eps():
    _, ok, detail = run_suite("TH-UC-EPS", 100)
    report("TH-UC-EPS", ok, detail)


def test_quot_tensor_pi():
    _, ok, detail = run_suite("TH-QUOT-TENSOR-PI", 30)
    report("TH-QUOT-TENSOR-PI", ok, detail)


def test_uc_quot():
    _, ok, detail = run_suite("TH-UC-QUOT", 30)
    report("TH-UC-QUOT", ok, detail)


def test_hb():
    _, ok, detail = run_suite("TH-HB", 200)
    report("TH-HB", ok, detail)


def test_pull_pi():
    _, ok, detail = run_suite("TH-PULL-PI", 100)
    report("TH-PULL-PI", ok, detail)


def test_pull_eps():
    _, ok, detail = run_suite("TH-PULL-EPS", 100)
    report("TH-PULL-EPS", ok, detail)


def test_sum_cauchy():
    _, ok, detail = run_suite("TH-SUM-CAUCHY", 50)
    report("TH-SUM-CAUCHY", ok, detail)


def test_sum_hom():
    _, ok, detail = run_suite("TH-SUM-HOM", 50)
    report("TH-SUM-HOM", ok, detail)


def _unit_points():
    """Nonzero points of {-1,0,1}^2, one per +- pair."""
    return [p for p in itertools.product((-1, 0, 1), repeat=2) if p > (0, 0)]


def _spanning_subsets(points):
    for r in range(2, len(points) + 1):
        for sub in itertools.combinations(points, r):
            if linalg.rank(sub) == 2:
                yield sub


def test_oracle_equivalence():
    start = time.perf_counter()
    points = _unit_points()
    grid = list(itertools.product((-1, 0, 1), repeat=2))
    checked, mismatches = 0, []
    for sub in _spanning_subsets(points):
        for target, expected in zip(grid, brute_force_gauges(sub, grid)):
            checked += 1
            if gauge_lp(sub, target).value != expected:
                mismatches.append((sub, target))
    # distinct polyhedral norms whose vertices have entries in {-1,0,1}
    descs = {}
    for sub in _spanning_subsets(points):
        d = polyhedral_from_points(sub)
        ball = frozenset(v for x in d.vertices for v in (x, tuple(-c for c in x)))
        descs.setdefault(ball, d)
    descs = list(descs.values())
    matrices = list(itertools.product((-1, 0, 1), repeat=4))
    for left, right in itertools.product(descs, repeat=2):
        _, dictionary = tensor.projective_dictionary(left, right)
        for entries, expected in zip(matrices, brute_force_gauges(dictionary, matrices)):
            checked += 1
            if gauge_lp(dictionary, entries).value != expected:
                mismatches.append((left, right, entries))
    detail = (f"{checked} instances ({len(descs)} distinct norms, {len(descs) ** 2} tensor pairs x 81 matrices) "
              f"in {time.perf_counter() - start:.2f}s, {len(mismatches)} mismatches")
    report("ORACLE-EQUIVALENCE", not mismatches, detail)


def test_pi_dual():
    # runs last: the certificate check covers every LP solved above plus its own suite
    _, suite_ok, suite_detail = run_suite("TH-PI-DUAL", 200)
    bad = 0
    for left, right, matrix, pf in LP_SOLVES:
        bn = bilinear_fiber_norm(left, right, pf.certificate).exact
        paired = sum((x * y for rb, ra in zip(pf.certificate, matrix) for x, y in zip(rb, ra)), F(0))
        if not (bn <= 1 and paired == pf.value.exact):
            bad += 1
    report("TH-PI-DUAL", suite_ok and bad == 0 and LP_SOLVES,
           f"{suite_detail}; {len(LP_SOLVES)} recorded LP solves, {bad} certificate failures")


if __name__ == "__main__":
    tensor._projective_lp = _recording_lp
    failures = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
