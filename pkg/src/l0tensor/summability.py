"""Countable families, the Cauchy summability test and certified sums.

Summability of ``{v_i}`` means the tail suprema
``sup { |sum_{i in G} v_i| : G finite, G beyond n }`` go to zero. That can't be
decided from finitely many terms, so every family carries a declared tail
bound per atom (a closed form in n). Observed windows are checked against
the declaration and a contradiction is reported as a caller error.

Indices start at 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InconsistentFamily, NotSummable, SpaceMismatch
from .fibers import norm_eval
from .hom import Homomorphism, hom_apply, hom_norm_values
from .measure import L0Function
from .modules import Element, ModuleSpec
from .rational import to_fraction

SUMMABLE = "summable"
NOT_SUMMABLE = "not_summable"
UNKNOWN = "unknown"

VALIDATION_HORIZON = 64
MIN_DYADIC_WINDOWS = 3


@dataclass(frozen=True)
class TailBound:
    """Declared bound tau(n) on the norms of finite sums of terms beyond n.

    geometric: c * r**n (0 < r < 1); pseries: c * n**(1 - p) (integer p >= 2);
    finite: c for n < last, 0 from ``last`` on; divergent: no bound, the
    caller claims the family is not summable here.
    """

    kind: str
    c: Fraction = Fraction(1)
    r: Fraction | None = None
    p: int | None = None
    last: int | None = None

    def __post_init__(self):
        if self.kind == "geometric":
            if self.r is None or not 0 < self.r < 1:
                raise ValueError("geometric bound needs 0 < r < 1")
        elif self.kind == "pseries":
            if not isinstance(self.p, int) or self.p < 2:
                raise ValueError("p-series bound needs an integer p >= 2")
        elif self.kind == "finite":
            if self.last is None or self.last < 0:
                raise ValueError("finite bound needs last >= 0")
        elif self.kind != "divergent":
            raise ValueError(f"unknown tail bound kind {self.kind!r}")
        if self.c < 0:
            raise ValueError("bound constant must be nonnegative")

    @classmethod
    def geometric(cls, c, r) -> "TailBound":
        return cls("geometric", c=to_fraction(c), r=to_fraction(r))

    @classmethod
    def pseries(cls, c, p: int) -> "TailBound":
        return cls("pseries", c=to_fraction(c), p=p)

    @classmethod
    def finite(cls, last: int, c) -> "TailBound":
        return cls("finite", c=to_fraction(c), last=last)

    @classmethod
    def divergent(cls) -> "TailBound":
        return cls("divergent")

    @property
    def vanishes(self) -> bool:
        return self.kind != "divergent"

    def at(self, n: int) -> Fraction | None:
        """tau(n); None where the form gives no finite bound."""
        if self.kind == "geometric":
            return self.c * self.r ** n
        if self.kind == "pseries":
            return None if n == 0 else self.c / Fraction(n) ** (self.p - 1)
        if self.kind == "finite":
            return self.c if n < self.last else Fraction(0)
        return None

    def scaled(self, factor: Fraction) -> "TailBound":
        if self.kind == "divergent":
            return self
        return TailBound(self.kind, self.c * factor, self.r, self.p, self.last)

    def first_below(self, tol: Fraction) -> int:
        """Smallest n >= 1 with tau(n) <= tol."""
        if self.kind == "divergent":
            raise NotSummable("divergent tail")
        if self.kind == "finite":
            return max(1, self.last) if self.c > tol else 1
        if self.c <= tol and self.kind == "geometric":
            return 1
        # exponential search then bisection on the monotone bound
        hi = 1
        while self.at(hi) > tol:
            hi *= 2
        lo = max(1, hi // 2)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.at(mid) <= tol:
                hi = mid
            else:
                lo = mid + 1
        return lo


@dataclass(frozen=True)
class CountableFamily:
    module: ModuleSpec
    generator: Callable[[int], Element]
    bounds: tuple[TailBound, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(self.bounds) != len(self.module.space):
            raise ValueError("one tail bound per atom is required")

    def term(self, n: int) -> Element:
        if n < 1:
            raise IndexError("families are indexed from 1")
        if n not in self._cache:
            v = self.generator(n)
            if v.module != self.module:
                raise SpaceMismatch(f"term {n} is not in the family's module")
            self._cache[n] = v
        return self._cache[n]

    def mapped(self, t: Homomorphism) -> "CountableFamily":
        """The image family {T v_i}, with tail bounds scaled by |T|."""
        if t.source != self.module:
            raise SpaceMismatch("homomorphism does not act on the family's module")
        factors = [_rational_upper(nv) for nv in hom_norm_values(t)]
        return CountableFamily(t.target, lambda n: hom_apply(t, self.term(n)),
                               tuple(b.scaled(f) for b, f in zip(self.bounds, factors)))

    def reordered(self, sigma: Callable[[int], int], bounds: Sequence[TailBound]) -> "CountableFamily":
        """{v_sigma(i)} for a bijection sigma of the positive integers, with new declared bounds."""
        return CountableFamily(self.module, lambda n: self.term(sigma(n)), tuple(bounds))


def _rational_upper(nv) -> Fraction:
    if nv.exact is not None:
        return nv.exact
    return Fraction(nv.value) + nv.tol + Fraction(1, 10**12)


def scalar_template_family(module: ModuleSpec, direction: Element,
                           coefficient: Sequence[Callable[[int], Fraction]],
                           bounds: Sequence[TailBound]) -> CountableFamily:
    """v_n = c_atom(n) * direction, with one coefficient sequence per atom."""
    def gen(n):
        return Element(module, tuple(tuple(coefficient[k](n) * x for x in direction.coords[k])
                                     for k in range(len(module.space))))
    return CountableFamily(module, gen, tuple(bounds))


def _atom_terms(fam: CountableFamily, k: int, horizon: int):
    return [fam.term(n).coords[k] for n in range(1, horizon + 1)]


def _validate_windows(desc, terms, bound: TailBound, atom: str):
    """Every observed window sum beyond n must respect tau(n)."""
    h = len(terms)
    for n in range(h):
        tau = bound.at(n)
        if tau is None:
            continue
        s = [Fraction(0)] * desc.dim
        for m in range(n, h):
            s = [a + b for a, b in zip(s, terms[m])]
            if not norm_eval(desc, s).le(tau):
                raise InconsistentFamily(
                    f"atom {atom}: |sum of terms {n + 1}..{m + 1}| exceeds declared bound {tau}")


def _dyadic_witness(desc, terms) -> bool:
    """Cauchy failure evidence: the first three dyadic window sums
    (2^j, 2^(j+1)] all stay above half the first window's norm.

    The windows are fixed, so once decided the verdict never changes as the
    horizon grows.
    """
    norms = []
    j = 0
    while 2 ** (j + 1) <= len(terms) and j < MIN_DYADIC_WINDOWS:
        window = terms[2 ** j:2 ** (j + 1)]
        s = [sum(col, Fraction(0)) for col in zip(*window)] if window else []
        norms.append(norm_eval(desc, s))
        j += 1
    if len(norms) < MIN_DYADIC_WINDOWS:
        return False
    first = norms[0]
    if first.le(0):
        return False
    eps = first.scalar() / 2
    return all(not nv.le(eps) for nv in norms)


def cauchy_check(fam: CountableFamily, horizon: int) -> dict[str, str]:
    """Per-atom verdict: summable, not_summable or unknown.

    Vanishing declared bounds are validated against every window up to the
    horizon (:class:`InconsistentFamily` on violation) and then give
    "summable". Divergent-flagged atoms are "not_summable" once dyadic window
    sums exhibit a persistent Cauchy failure within the horizon.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    out = {}
    for k, (atom, desc, bound) in enumerate(zip(fam.module.space.ids, fam.module.fibers, fam.bounds)):
        if desc.dim == 0:
            out[atom] = SUMMABLE
            continue
        terms = _atom_terms(fam, k, horizon)
        if bound.vanishes:
            _validate_windows(desc, terms, bound, atom)
            out[atom] = SUMMABLE
        else:
            out[atom] = NOT_SUMMABLE if _dyadic_witness(desc, terms) else UNKNOWN
    return out


@dataclass(frozen=True)
class SumResult:
    value: Element
    error: L0Function  # per-atom bound on |value - true sum|
    terms_used: tuple[int, ...]


def family_sum(fam: CountableFamily, tol) -> SumResult:
    """Partial sum up to the first n with tau(n) <= tol, per atom."""
    tol = to_fraction(tol)
    for atom, b, d in zip(fam.module.space.ids, fam.bounds, fam.module.dims):
        if d > 0 and not b.vanishes:
            raise NotSummable(f"atom {atom} carries a divergent flag")
    ns = [b.first_below(tol) if d > 0 else 1 for b, d in zip(fam.bounds, fam.module.dims)]
    verdicts = cauchy_check(fam, min(VALIDATION_HORIZON, max(ns)))
    bad = [a for a, v in verdicts.items() if v != SUMMABLE]
    if bad:
        raise NotSummable(f"not summable on atoms {bad}")
    coords = []
    errors = []
    for k, (n, d, b) in enumerate(zip(ns, fam.module.dims, fam.bounds)):
        s = [Fraction(0)] * d
        for i in range(1, n + 1):
            s = [a + x for a, x in zip(s, fam.term(i).coords[k])]
        coords.append(tuple(s))
        errors.append(b.at(n) if d > 0 else Fraction(0))
    return SumResult(Element(fam.module, tuple(coords)), L0Function(fam.module.space, tuple(errors)), tuple(ns))


@dataclass(frozen=True)
class CommuteReport:
    ok: bool
    image_of_sum: Element
    sum_of_images: Element
    allowed: L0Function


def hom_commute_check(fam: CountableFamily, t: Homomorphism, tol) -> CommuteReport:
    """T(sum v_i) against sum T(v_i), the latter summed to tolerance |T| * tol."""
    tol = to_fraction(tol)
    base = family_sum(fam, tol)
    image = fam.mapped(t)
    norms = [_rational_upper(nv) for nv in hom_norm_values(t)]
    lhs = hom_apply(t, base.value)
    # per-atom tolerance |T| * tol; a zero operator needs no terms at all
    coords, allowed = [], []
    for k, (nt, b, d) in enumerate(zip(norms, image.bounds, image.module.dims)):
        atom_tol = nt * tol
        n = b.first_below(atom_tol) if d > 0 and nt > 0 else 1
        s = [Fraction(0)] * d
        for i in range(1, n + 1):
            s = [a + x for a, x in zip(s, image.term(i).coords[k])]
        coords.append(tuple(s))
        allowed.append(nt * base.error.values[k] + (b.at(n) if d > 0 else Fraction(0)))
    rhs = Element(image.module, tuple(coords))
    ok = True
    for k, desc in enumerate(image.module.fibers):
        diff = [a - b for a, b in zip(lhs.coords[k], rhs.coords[k])]
        ok = ok and norm_eval(desc, diff).le(allowed[k])
    return CommuteReport(ok, lhs, rhs, L0Function(fam.module.space, tuple(allowed)))
