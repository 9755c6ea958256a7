"""Finite sequence spaces and function spaces over finite discrete K.

* ``ell1_sum_module(I, M)`` has fibers ``M_x^I`` with the sum of block norms;
  tensoring with it on the left turns projective norms into row-norm sums.
* ``uc_module(K, M)`` has fibers ``M_x^K`` with the max of block norms. For a
  finite discrete K every map K -> M is uniformly continuous, so this is the
  whole function space; tensoring with it turns injective norms into max
  row norms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fibers
from .errors import PreconditionFailed, SpaceMismatch, UnsupportedKinds
from .fibers import NormValue
from .hom import Homomorphism, QuotientReport, fiber_quotient_check, is_quotient_operator
from .measure import L0Function
from .modules import Element, ModuleSpec, pointwise_norm_values, scalar_module, unit_sphere_member
from .tensor import Tensor, injective_norm_values, projective_norm_values


@dataclass(frozen=True)
class IndexedFamily:
    index: tuple[str, ...]
    members: tuple[Element, ...]

    def __post_init__(self):
        if len(self.index) != len(self.members):
            raise ValueError("one member per index")
        if not self.members:
            raise ValueError("empty family")
        m = self.members[0].module
        if any(e.module != m for e in self.members):
            raise SpaceMismatch("family members must share a module")

    @classmethod
    def of(cls, members: Sequence[Element], index: Sequence[str] | None = None) -> "IndexedFamily":
        index = tuple(index) if index is not None else tuple(str(i) for i in range(len(members)))
        return cls(index, tuple(members))

    @property
    def module(self) -> ModuleSpec:
        return self.members[0].module


def ellp_values(fam: IndexedFamily, p) -> list[NormValue]:
    """p-combination (p in 1, 2, inf) of the members' pointwise norms, per atom."""
    norms = [pointwise_norm_values(e) for e in fam.members]
    out = []
    for k in range(len(fam.module.space)):
        col = [n[k] for n in norms]
        if all(nv.exact is not None for nv in col):
            ex = [nv.exact for nv in col]
            if p == 1:
                out.append(NormValue.of_exact(sum(ex, Fraction(0))))
            elif p == 2:
                out.append(NormValue.of_squared(sum((x * x for x in ex), Fraction(0))))
            else:
                out.append(NormValue.of_exact(max(ex)))
            continue
        if p == 2 and all(nv.squared is not None or nv.exact is not None for nv in col):
            out.append(NormValue.of_squared(sum((nv._square_form() for nv in col), Fraction(0))))
            continue
        vals = [nv.value for nv in col]
        tol = sum((nv.tol for nv in col), Fraction(0))
        if p == 1:
            out.append(NormValue.of_float(sum(vals), tol))
        elif p == 2:
            out.append(NormValue.of_float(math.sqrt(sum(v * v for v in vals)), tol))
        else:
            out.append(NormValue.of_float(max(vals), tol))
    return out


def ellp_norm(fam: IndexedFamily, p) -> L0Function:
    if p not in (1, 2, math.inf, "inf"):
        raise ValueError(f"p must be 1, 2 or inf, got {p!r}")
    p = math.inf if p == "inf" else p
    return L0Function(fam.module.space, tuple(nv.scalar() for nv in ellp_values(fam, p)))


def ell1_sum_module(index: Sequence[str], module: ModuleSpec) -> ModuleSpec:
    """|I| copies of each fiber with the l1-sum of block norms."""
    n = len(index)
    if n == 0:
        raise ValueError("empty index set")
    return ModuleSpec(module.space, tuple(fibers.block("l1", [f] * n) for f in module.fibers))


def family_to_element(fam: IndexedFamily, target: ModuleSpec) -> Element:
    """Concatenate members blockwise into an element of the direct-sum module."""
    return Element(target, tuple(tuple(c for e in fam.members for c in e.coords[k])
                                 for k in range(len(target.space))))


@dataclass(frozen=True)
class VVReport:
    rows: IndexedFamily
    equal: bool
    projective: tuple[NormValue, ...]
    row_sums: tuple[NormValue, ...]


def vv_iso_check(alpha: Tensor) -> VVReport:
    """Compare |alpha|_pi (LP) with the sum of row norms for an l1 left factor.

    Each row of the coefficient matrix, read as an element of the right
    module, is the image of alpha in l1(I, M). For Euclidean right fibers only
    certified bounds on the projective norm exist; the check then asks that
    the row sum lies between them.
    """
    for f in alpha.left.fibers:
        if f.kind not in ("l1",) and not (f.dim <= 1 and f.kind in ("l2", "linf")):
            raise UnsupportedKinds("vv_iso_check", f"left fiber {f!r} is not l1")
    dims = set(alpha.left.dims)
    if len(dims) != 1:
        raise UnsupportedKinds("vv_iso_check", "left factor must have the same index set on every atom")
    n = dims.pop()
    members = []
    for i in range(n):
        coords = []
        for a, f in zip(alpha.matrices, alpha.left.fibers):
            coords.append(tuple(f.weights[i] * x for x in a[i]))
        members.append(Element(alpha.right, tuple(coords)))
    rows = IndexedFamily.of(members)
    pi = projective_norm_values(alpha)
    sums = ellp_values(rows, 1)
    equal = all(_agrees(p, s) for p, s in zip(pi, sums))
    return VVReport(rows, equal, tuple(pi), tuple(sums))


def _agrees(p: NormValue, s: NormValue) -> bool:
    """Exact equality, or s inside the certified bounds of p."""
    if p.lower is None:
        return p.compare(s) == 0
    if s.exact is not None:
        return p.lower <= s.exact <= p.upper
    return float(p.lower) - float(s.tol) <= s.value <= float(p.upper) + float(s.tol)


def two_ell1_check(a: Sequence[Sequence]) -> bool:
    """l1(I)-valued functions vs. l1(I)-sequences of functions: same norms per atom."""
    for row in a:
        n = len(row)
        lhs = fibers.norm_eval(fibers.l1(n), row).exact
        rhs = sum((abs(Fraction(x)) for x in row), Fraction(0))
        if lhs != rhs:
            return False
    return True


def coordinates(v: Element) -> list[L0Function]:
    """The coordinate functions a(.)_i of an element with l1(I) fibers."""
    n = max(v.module.dims)
    return [L0Function(v.module.space, tuple(x[i] if i < len(x) else Fraction(0) for x in v.coords))
            for i in range(n)]


def reconstruct(coords: Sequence[L0Function], module: ModuleSpec) -> Element:
    """sum_i a_i . e_i"""
    return Element(module, tuple(tuple(c.values[k] for c in coords[:d])
                                 for k, d in enumerate(module.dims)))


@dataclass(frozen=True)
class SphereQuotient:
    phi: Homomorphism
    verdict: bool
    report: QuotientReport


def sphere_quotient(generators: Sequence[Element]) -> SphereQuotient:
    """phi_G(f) = sum_v f_v v from l1(G, L0) onto M; quotient iff hull(G) is the ball."""
    if not generators:
        raise PreconditionFailed("empty generator set")
    module = generators[0].module
    for g in generators:
        if g.module != module:
            raise SpaceMismatch("generators must share a module")
        if not unit_sphere_member(g):
            raise PreconditionFailed("generator is not on the unit sphere")
    source = ell1_sum_module([str(i) for i in range(len(generators))], scalar_module(module.space))
    mats = [[[g.coords[k][i] for g in generators] for i in range(d)] for k, d in enumerate(module.dims)]
    phi = Homomorphism.of(source, module, mats)
    report = is_quotient_operator(phi)
    return SphereQuotient(phi, report.verdict, report)


@dataclass(frozen=True)
class DiagonalReport:
    ok: bool
    projective: tuple[NormValue, ...]
    injective: tuple[NormValue, ...]
    expected_pi: tuple
    expected_eps: tuple


def diagonal_tensor(functions: Sequence[L0Function]) -> Tensor:
    space = functions[0].space
    n = len(functions)
    m = ModuleSpec.constant(space, fibers.l2(n))
    return Tensor.of(m, m, [[[f.values[k] if i == j else 0 for j, f in enumerate(functions)]
                             for i in range(n)] for k in range(len(space))])


def diagonal_check(functions: Sequence[L0Function], tol=fibers.SVD_TOL) -> DiagonalReport:
    """sum f_i e_i (x) e_i in l2(I) (x) l2(I): pi = sum |f_i|, eps = max |f_i|."""
    alpha = diagonal_tensor(functions)
    pi = projective_norm_values(alpha)
    eps = injective_norm_values(alpha)
    exp_pi = tuple(sum((abs(f.values[k]) for f in functions), Fraction(0)) for k in range(len(alpha.left.space)))
    exp_eps = tuple(max(abs(f.values[k]) for f in functions) for k in range(len(alpha.left.space)))
    ok = all(abs(p.value - float(e)) <= float(tol) for p, e in zip(pi, exp_pi)) and \
        all(abs(p.value - float(e)) <= float(tol) for p, e in zip(eps, exp_eps))
    return DiagonalReport(ok, tuple(pi), tuple(eps), exp_pi, exp_eps)


# ---------------------------------------------------------------------------
# function spaces over finite K

@dataclass(frozen=True)
class FiniteSpaceK:
    points: tuple[str, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("K must be nonempty")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points of K must be distinct")

    @classmethod
    def of(cls, n_or_points) -> "FiniteSpaceK":
        if isinstance(n_or_points, int):
            return cls(tuple(f"p{i}" for i in range(n_or_points)))
        return cls(tuple(n_or_points))

    def __len__(self):
        return len(self.points)


def uc_module(k: FiniteSpaceK, module: ModuleSpec) -> ModuleSpec:
    """Maps K -> M with |v| = max_p |v(p)|."""
    return ModuleSpec(module.space, tuple(fibers.block("linf", [f] * len(k)) for f in module.fibers))


def evaluation_hom(k: FiniteSpaceK, module: ModuleSpec, point: str) -> Homomorphism:
    """delta_p: v -> v(p)."""
    p = k.points.index(point)
    n = len(k)
    mats = []
    for d in module.dims:
        mats.append([[Fraction(int(col == p * d + i)) for col in range(n * d)] for i in range(d)])
    return Homomorphism.of(uc_module(k, module), module, mats)


def uc_rows(alpha: Tensor, k: FiniteSpaceK) -> list[Element]:
    """The function K -> M associated with a tensor over (uc_module(K, L0), M)."""
    if set(alpha.left.dims) - {len(k)}:
        raise UnsupportedKinds("inj_tens_uc_check", "left fibers must be indexed by K")
    return [Element(alpha.right, tuple(tuple(a[i]) for a in alpha.matrices)) for i in range(len(k))]


def _check_uc_left(alpha: Tensor, k: FiniteSpaceK):
    for f in alpha.left.fibers:
        if f.dim != len(k):
            raise UnsupportedKinds("inj_tens_uc_check", "left fibers must be indexed by K")
        if not (f.kind == "linf" or (f.dim <= 1 and f.kind in ("l1", "l2"))):
            raise UnsupportedKinds("inj_tens_uc_check", f"left fiber {f!r} is not a block-linf of scalars")


@dataclass(frozen=True)
class UCReport:
    equal: bool
    injective: tuple[NormValue, ...]
    max_row: tuple[NormValue, ...]


def inj_tens_uc_check(alpha: Tensor, k: FiniteSpaceK) -> UCReport:
    """|alpha|_eps against max_p |alpha(p)| per atom.

    Row p is scaled by the left weight at p (the norm of the p-th unit function).
    """
    _check_uc_left(alpha, k)
    rows = []
    for i in range(len(k)):
        coords = []
        for a, f in zip(alpha.matrices, alpha.left.fibers):
            coords.append(tuple(f.weights[i] * x for x in a[i]))
        rows.append(Element(alpha.right, tuple(coords)))
    eps = injective_norm_values(alpha)
    mx = ellp_values(IndexedFamily.of(rows), math.inf)
    equal = all(e.compare(m) == 0 for e, m in zip(eps, mx))
    return UCReport(equal, tuple(eps), tuple(mx))


@dataclass(frozen=True)
class UCQuotientReport:
    ok: bool
    preimage_norms: tuple[tuple[Fraction, ...], ...]  # per atom, over tensor-ball vertices


def uc_quotient_tensor_check(t: Homomorphism, k: FiniteSpaceK) -> UCQuotientReport:
    """id (x)_eps T on uc_module(K, L0) (x) M -> uc_module(K, L0) (x) N is a quotient operator.

    Tensors over (uc_module(K, L0), N) are functions K -> N with the max norm,
    and id (x) T acts row by row. The eps-ball vertices are K-tuples of
    N-ball vertices; the minimal eps-norm preimage is the max of the row-wise
    minimal preimage norms, computed by LP per target vertex. The reverse
    inequality is |id (x) T| <= 1, i.e. |T| <= 1 on every row.
    """
    report = is_quotient_operator(t)
    if not report.verdict:
        raise PreconditionFailed("T is not a quotient operator")
    n = len(k)
    out = []
    ok = True
    for src, tgt, m in zip(t.source.fibers, t.target.fibers, t.matrices):
        if tgt.dim == 0:
            out.append(())
            continue
        surjective, contractive, pre = fiber_quotient_check(src, tgt, m)
        vertex_norm = {}
        for w, _, nv in pre:
            vertex_norm[w] = nv.exact if nv.exact is not None else nv.value
            vertex_norm[tuple(-x for x in w)] = vertex_norm[w]
        verts = list(vertex_norm)
        # K-tuples of signed vertices, up to a global sign
        values = []
        for combo in _tuples(fibers.primal_vertices(tgt), verts, n):
            values.append(max(vertex_norm[w] for w in combo))
        ok = ok and surjective and contractive and all(v == 1 for v in values)
        out.append(tuple(values))
    return UCQuotientReport(ok, tuple(out))


def _tuples(first, signed, n):
    for head in first:
        for rest in itertools.product(signed, repeat=n - 1):
            yield (head,) + rest
