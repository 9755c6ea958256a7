"""Evaluation of document assertions.

Each assertion is an object with a ``check`` field:

* ``norm`` / ``hom_norm`` / ``bilinear_norm``: pointwise norm of an element,
  homomorphism or bilinear form against ``expected``;
* ``pi`` / ``eps`` / ``hs``: tensor norms against ``expected`` (``hs`` also
  accepts ``expected_squared``);
* ``quotient``: ``is_quotient_operator`` verdict against ``expected`` (bool);
* ``summable``: ``cauchy_check`` verdicts at ``horizon`` against ``expected``
  (atom -> verdict);
* ``sum``: certified family sum within ``tol`` of ``expected`` coordinates;
* ``theorem``: a registered property check on named objects.

``expected`` is a rational string for every atom or a list with one per
atom; ``tol`` (default ``"0"``) widens the comparison.
"""

from __future__ import annotations

from fractions import Fraction

from . import fibers
from .document import WorkDocument, read_matrix, read_rational
from .errors import DocumentError, InconsistentFamily, L0Error, UnsupportedKinds
from .fibers import NormValue
from .hom import bilinear_norm_values, hom_norm_values, is_quotient_operator
from .modules import pointwise_norm_values
from .summability import cauchy_check, family_sum
from .tensor import hs_norm_values, injective_norm_values, projective_norm_values
from .theorems import check_theorem_assertion


def matches(nv: NormValue, expected: Fraction, tol: Fraction = Fraction(0)) -> bool:
    if nv.exact is not None:
        return abs(nv.exact - expected) <= tol
    if nv.squared is not None and tol == 0:
        return expected >= 0 and expected * expected == nv.squared
    if nv.lower is not None:
        return nv.lower - tol <= expected <= nv.upper + tol
    return abs(nv.value - float(expected)) <= float(tol + nv.tol)


def format_value(nv: NormValue) -> str:
    if nv.exact is not None:
        return f"{nv.exact.numerator}/{nv.exact.denominator}"
    if nv.squared is not None:
        return f"sqrt({nv.squared.numerator}/{nv.squared.denominator}) ~ {nv.value!r}"
    if nv.lower is not None:
        return f"[{float(nv.lower)!r}, {float(nv.upper)!r}]"
    return f"{nv.value!r} +- {float(nv.tol):g}"


def norm_values(doc: WorkDocument, check: str, ref: str, where: str = "ref") -> list[NormValue]:
    """Per-atom values for a norm-type check on a named object."""
    if check == "norm":
        return pointwise_norm_values(doc.get("elements", ref, where))
    if check == "hom_norm":
        return hom_norm_values(doc.get("homs", ref, where))
    if check == "bilinear_norm":
        return bilinear_norm_values(doc.get("bilinears", ref, where))
    alpha = doc.get("tensors", ref, where)
    if check == "pi":
        return projective_norm_values(alpha)
    if check == "eps":
        return injective_norm_values(alpha)
    if check == "hs":
        return hs_norm_values(alpha)
    raise DocumentError(f"unknown check {check!r}", where)


NORM_CHECKS = ("norm", "hom_norm", "bilinear_norm", "pi", "eps", "hs")


def _expected_list(a: dict, key: str, n: int, where: str) -> list[Fraction]:
    e = a[key]
    if isinstance(e, list):
        if len(e) != n:
            raise DocumentError(f"expected {n} values, got {len(e)}", f"{where}.{key}")
        return [read_rational(x, f"{where}.{key}[{i}]") for i, x in enumerate(e)]
    return [read_rational(e, f"{where}.{key}")] * n


def evaluate(doc: WorkDocument, a: dict, where: str = "assertion") -> tuple[bool, str]:
    """(passed, detail) for one assertion.

    Input problems (bad references, unsupported norm kinds, tail bounds
    contradicted by the data) are raised, not reported as failures.
    """
    check = a.get("check")
    try:
        if check == "theorem":
            return check_theorem_assertion(doc, a)
        ref = a.get("ref")
        if check in NORM_CHECKS:
            values = norm_values(doc, check, ref, f"{where}.ref")
            tol = read_rational(a.get("tol", "0"), f"{where}.tol")
            shown = " ".join(format_value(v) for v in values)
            if check == "hs" and "expected_squared" in a:
                want = _expected_list(a, "expected_squared", len(values), where)
                ok = all(v.squared is not None and abs(v.squared - e) <= tol for v, e in zip(values, want))
                return ok, f"{check}({ref}) = {shown}"
            if "expected" not in a:
                raise DocumentError("missing field 'expected'", where)
            want = _expected_list(a, "expected", len(values), where)
            return all(matches(v, e, tol) for v, e in zip(values, want)), f"{check}({ref}) = {shown}"
        if check == "quotient":
            rep = is_quotient_operator(doc.get("homs", ref, f"{where}.ref"))
            expected = a.get("expected", True)
            return rep.verdict == expected, f"quotient({ref}) = {rep.verdict}"
        if check == "summable":
            fam = doc.get("families", ref, f"{where}.ref")
            horizon = a.get("horizon", 32)
            if not isinstance(horizon, int) or horizon < 1:
                raise DocumentError("horizon must be a positive integer", f"{where}.horizon")
            verdicts = cauchy_check(fam, horizon)
            expected = a.get("expected", {})
            ok = all(verdicts.get(atom) == v for atom, v in expected.items())
            return ok, f"verdicts {verdicts}"
        if check == "sum":
            fam = doc.get("families", ref, f"{where}.ref")
            tol = read_rational(a.get("tol", "1/1000000"), f"{where}.tol")
            result = family_sum(fam, tol)
            if "expected" not in a:
                raise DocumentError("missing field 'expected'", where)
            want = read_matrix(a["expected"], f"{where}.expected")
            ok = len(want) == len(result.value.coords) and all(
                len(u) == len(w) and fibers.norm_eval(d, [x - y for x, y in zip(u, w)]).le(tol)
                for d, u, w in zip(fam.module.fibers, result.value.coords, want))
            shown = "; ".join(" ".join(f"{x.numerator}/{x.denominator}" for x in v) for v in result.value.coords)
            return ok, f"sum({ref}) = {shown} using {list(result.terms_used)} terms"
    except (DocumentError, UnsupportedKinds, InconsistentFamily):
        raise
    except L0Error as e:
        return False, f"{type(e).__name__}: {e}"
    raise DocumentError(f"unknown check {check!r}", f"{where}.check")
