"""Homomorphisms between modules, duals and bounded bilinear forms.

Everything is per atom: a homomorphism is a matrix per atom mapping source
fiber coordinates to target fiber coordinates, a bilinear form is a matrix
``B`` with ``b(v, w) = v^T B w``. Dual modules carry the dual norms on the
same coordinates, so pairing is a plain dot product.

Operator norms are computed by vertex enumeration whenever one side has a
polyhedral ball: a convex function on a polytope is maximized at a vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fibers, linalg
from .errors import DimensionMismatch, PreconditionFailed, SpaceMismatch, UnsupportedKinds
from .fibers import NormDescriptor, NormValue
from .lp import OPTIMAL, solve_lp
from .measure import L0Function
from .modules import Element, ModuleSpec, Submodule, pointwise_norm_values
from .rational import to_fraction


def _matrix(rows) -> tuple[tuple, ...]:
    return tuple(tuple(x if isinstance(x, float) else to_fraction(x) for x in row) for row in rows)


def transpose_shaped(m, cols: int):
    """Transpose of a matrix with ``cols`` columns (correct for zero rows too)."""
    return linalg.transpose(m) if m else [[] for _ in range(cols)]


def _check_shape(matrix, rows, cols, what):
    if len(matrix) != rows or any(len(r) != cols for r in matrix):
        raise DimensionMismatch(f"{what}: expected a {rows}x{cols} matrix")


@dataclass(frozen=True)
class Homomorphism:
    source: ModuleSpec
    target: ModuleSpec
    matrices: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        if self.source.space != self.target.space:
            raise SpaceMismatch("source and target must share the measure space")
        if len(self.matrices) != len(self.source.space):
            raise DimensionMismatch("one matrix per atom is required")
        for m, ds, dt in zip(self.matrices, self.source.dims, self.target.dims):
            _check_shape(m, dt, ds, "homomorphism")

    @classmethod
    def of(cls, source: ModuleSpec, target: ModuleSpec, matrices) -> "Homomorphism":
        return cls(source, target, tuple(_matrix(m) for m in matrices))

    @classmethod
    def identity(cls, module: ModuleSpec) -> "Homomorphism":
        return cls.of(module, module, [linalg.identity(d) for d in module.dims])

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``self after other``."""
        if other.target != self.source:
            raise SpaceMismatch("cannot compose: modules do not match")
        mats = []
        for a, b, dt, ds in zip(self.matrices, other.matrices, self.target.dims, other.source.dims):
            mats.append(linalg.matmul(a, b) if b else linalg.zeros(dt, ds))
        return Homomorphism.of(other.source, self.target, mats)


@dataclass(frozen=True)
class BilinearForm:
    left: ModuleSpec
    right: ModuleSpec
    matrices: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        if self.left.space != self.right.space:
            raise SpaceMismatch("factors must share the measure space")
        if len(self.matrices) != len(self.left.space):
            raise DimensionMismatch("one matrix per atom is required")
        for m, dl, dr in zip(self.matrices, self.left.dims, self.right.dims):
            _check_shape(m, dl, dr, "bilinear form")

    @classmethod
    def of(cls, left: ModuleSpec, right: ModuleSpec, matrices) -> "BilinearForm":
        return cls(left, right, tuple(_matrix(m) for m in matrices))

    def __call__(self, v: Element, w: Element) -> L0Function:
        if v.module != self.left or w.module != self.right:
            raise SpaceMismatch("arguments do not match the form's factors")
        return L0Function(self.left.space, tuple(
            linalg.dot(x, linalg.matvec(m, y)) for m, x, y in zip(self.matrices, v.coords, w.coords)))


def hom_apply(t: Homomorphism, v: Element) -> Element:
    if v.module != t.source:
        raise SpaceMismatch("element is not in the source module")
    return Element(t.target, tuple(tuple(linalg.matvec(m, x)) for m, x in zip(t.matrices, v.coords)))


def _max_value(values) -> NormValue:
    best = None
    for nv in values:
        if best is None or nv.compare(best) > 0:
            best = nv
    return best if best is not None else NormValue.of_exact(Fraction(0))


def operator_norm(source: NormDescriptor, target: NormDescriptor, matrix) -> NormValue:
    """Operator norm of one fiber map ``matrix`` (target_dim x source_dim)."""
    if source.dim == 0 or target.dim == 0:
        return NormValue.of_exact(Fraction(0))
    if fibers.is_polyhedral(source):
        return _max_value(fibers.norm_eval(target, linalg.matvec(matrix, x))
                          for x in fibers.primal_vertices(source))
    if fibers.is_polyhedral(target):
        src_dual = fibers.dual_descriptor(source)
        mt = linalg.transpose(matrix)
        return _max_value(fibers.norm_eval(src_dual, linalg.matvec(mt, d))
                          for d in fibers.dual_vertices(target))
    if source.kind == "l2" and target.kind == "l2":
        scaled = [[tw * x / sw for x, sw in zip(row, source.weights)]
                  for row, tw in zip(matrix, target.weights)]
        return NormValue.of_float(linalg.spectral_norm(scaled), fibers.FLOAT_TOL)
    raise UnsupportedKinds("hom_pointwise_norm", f"{source!r} -> {target!r}")


def hom_norm_values(t: Homomorphism) -> list[NormValue]:
    return [operator_norm(s, g, m) for s, g, m in zip(t.source.fibers, t.target.fibers, t.matrices)]


def hom_pointwise_norm(t: Homomorphism) -> L0Function:
    return L0Function(t.source.space, tuple(nv.scalar() for nv in hom_norm_values(t)))


# ---------------------------------------------------------------------------
# duals

def dual_module(module: ModuleSpec) -> ModuleSpec:
    return ModuleSpec(module.space, tuple(fibers.dual_descriptor(f) for f in module.fibers))


def pairing(omega: Element, v: Element) -> L0Function:
    """omega(v) per atom; omega must live in the dual of v's module."""
    if omega.module != dual_module(v.module):
        raise SpaceMismatch("functional is not in the dual of the element's module")
    return L0Function(v.module.space, tuple(linalg.dot(a, b) for a, b in zip(omega.coords, v.coords)))


def fiber_witness(desc: NormDescriptor, x: Sequence) -> tuple:
    """A dual-ball vector ``d`` of norm one with ``<d, x> = ||x||``.

    Lowest-index maximizing dual vertex; the first dual vertex when x = 0.
    """
    if desc.dim == 0:
        return ()
    if desc.kind == "block":
        parts = [(b, x[sl]) for b, sl in fibers.block_slices(desc)]
        if desc.block_p == "l1":
            return tuple(c for b, xb in parts for c in fiber_witness(b, xb))
        norms = [fibers.norm_eval(b, xb) for b, xb in parts]
        best = 0
        for i, nv in enumerate(norms):
            if nv.compare(norms[best]) > 0:
                best = i
        return tuple(c for i, (b, xb) in enumerate(parts)
                     for c in (fiber_witness(b, xb) if i == best else (Fraction(0),) * b.dim))
    if desc.kind == "l2" and desc.dim > 1:
        n = fibers.norm_eval(desc, x).scalar()
        w = desc.weights
        if n == 0:
            return (w[0],) + (Fraction(0),) * (desc.dim - 1)
        return tuple(wi * wi * xi / n for wi, xi in zip(w, x))
    best_val, best_d = None, None
    for d in fibers.dual_vertices(desc):
        val = linalg.dot(x, d)
        if best_val is None or abs(val) > abs(best_val):
            best_val, best_d = val, d
    if best_val < 0:
        return tuple(-c for c in best_d)
    return tuple(best_d)


def hahn_banach_witness(v: Element) -> Element:
    """A unit-sphere functional omega with omega(v) = |v|."""
    return Element(dual_module(v.module),
                   tuple(fiber_witness(f, x) for f, x in zip(v.module.fibers, v.coords)))


# ---------------------------------------------------------------------------
# quotient operators

@dataclass(frozen=True)
class QuotientReport:
    verdict: bool
    surjective: tuple[bool, ...]
    contractive: tuple[bool, ...]
    # per atom: list of (target vertex, minimal-norm preimage, its norm)
    min_preimages: tuple[tuple[tuple[tuple, tuple, NormValue], ...], ...]


def fiber_quotient_check(source: NormDescriptor, target: NormDescriptor, matrix):
    """(surjective, contractive, preimages) for one fiber map.

    The minimal preimage norm of w is a norm on the target whose unit ball is
    the image of the source ball. It equals the target norm iff that image
    contains every target-ball vertex (checked by the preimage LPs: value 1)
    and lies inside the target ball (checked as operator norm <= 1).
    """
    if target.dim == 0:
        return True, True, ()
    if not fibers.is_polyhedral(target):
        raise UnsupportedKinds("is_quotient_operator", f"target fiber {target!r} is not polyhedral")
    if source.dim == 0 or linalg.rank(matrix) != target.dim:
        return False, True, ()
    contractive = operator_norm(source, target, matrix).le(1)
    kernel = linalg.null_space(matrix)
    pre = []
    for w in fibers.primal_vertices(target):
        v0 = linalg.solve(matrix, list(w))
        value, s = fibers.min_norm_over_affine(source, v0, kernel)
        pre.append((w, tuple(a + b for a, b in zip(v0, s)), value))
    return True, contractive, tuple(pre)


def is_quotient_operator(t: Homomorphism) -> QuotientReport:
    surj, contr, pres = [], [], []
    ok = True
    for s, g, m in zip(t.source.fibers, t.target.fibers, t.matrices):
        su, co, pre = fiber_quotient_check(s, g, m)
        surj.append(su)
        contr.append(co)
        pres.append(pre)
        ok = ok and su and co and all(nv.exact == 1 or nv.squared == 1 for _, _, nv in pre)
    return QuotientReport(ok, tuple(surj), tuple(contr), tuple(pres))


# ---------------------------------------------------------------------------
# annihilators

def annihilator(sub: Submodule) -> Submodule:
    """Functionals vanishing on the submodule, as a submodule of the dual."""
    dual = dual_module(sub.module)
    return Submodule(dual, tuple(tuple(tuple(b) for b in linalg.null_space(list(basis), ncols=d))
                                 for basis, d in zip(sub.bases, sub.module.dims)))


def restricted_dual_norm(desc: NormDescriptor, omega: Sequence, basis: Sequence[Sequence]) -> Fraction:
    """sup of <omega, z> over z in span(basis) with ||z|| <= 1 (polyhedral fibers)."""
    if not basis:
        return Fraction(0)
    if not fibers.is_polyhedral(desc):
        raise UnsupportedKinds("quotient_dual_check", repr(desc))
    verts = [list(v) for v in fibers.primal_vertices(desc)]
    cols = verts + [[-x for x in v] for v in verts]
    basis = [list(map(Fraction, b)) for b in basis]
    free = basis + [[-x for x in b] for b in basis]
    dim = desc.dim
    a_eq = [[c[i] for c in cols] + [-f[i] for f in free] + [0] for i in range(dim)]
    a_eq.append([1] * len(cols) + [0] * len(free) + [1])
    cost = [-linalg.dot(omega, c) for c in cols] + [0] * len(free) + [0]
    res = solve_lp(cost, a_eq, [0] * dim + [1])
    assert res.status == OPTIMAL
    return -res.value


@dataclass(frozen=True)
class AnnihilatorReport:
    ok: bool
    # per atom: (functional, restriction norm, quotient norm)
    comparisons: tuple[tuple[tuple[tuple, Fraction, Fraction], ...], ...]


def quotient_dual_check(sub: Submodule, functionals=None) -> AnnihilatorReport:
    """Compare |omega restricted to V| with the norm of omega + V^perp in M*/V^perp.

    By default the test functionals are the dual-ball vertices of each fiber;
    their restrictions include every vertex of the dual ball of V.
    """
    ann = annihilator(sub)
    ok = True
    rows = []
    for k, (desc, basis, ann_basis) in enumerate(zip(sub.module.fibers, sub.bases, ann.bases)):
        if desc.dim == 0:
            rows.append(())
            continue
        if not fibers.is_polyhedral(desc):
            raise UnsupportedKinds("quotient_dual_check", repr(desc))
        dual = fibers.dual_descriptor(desc)
        tests = functionals[k] if functionals is not None else fibers.dual_vertices(desc)
        atom_rows = []
        for omega in tests:
            restricted = restricted_dual_norm(desc, omega, basis)
            quotient = fibers.min_norm_over_affine(dual, omega, ann_basis)[0].exact
            ok = ok and restricted == quotient
            atom_rows.append((tuple(omega), restricted, quotient))
        rows.append(tuple(atom_rows))
    return AnnihilatorReport(ok, tuple(rows))


# ---------------------------------------------------------------------------
# bilinear forms

def bilinear_fiber_norm(left: NormDescriptor, right: NormDescriptor, matrix) -> NormValue:
    if left.dim == 0 or right.dim == 0:
        return NormValue.of_exact(Fraction(0))
    lp, rp = fibers.is_polyhedral(left), fibers.is_polyhedral(right)
    if lp and rp:
        best = Fraction(0)
        for x in fibers.primal_vertices(left):
            bx = linalg.matvec(linalg.transpose(matrix), x)
            for y in fibers.primal_vertices(right):
                best = max(best, abs(linalg.dot(bx, y)))
        return NormValue.of_exact(best)
    if lp:
        rd = fibers.dual_descriptor(right)
        mt = linalg.transpose(matrix)
        return _max_value(fibers.norm_eval(rd, linalg.matvec(mt, x)) for x in fibers.primal_vertices(left))
    if rp:
        ld = fibers.dual_descriptor(left)
        return _max_value(fibers.norm_eval(ld, linalg.matvec(matrix, y)) for y in fibers.primal_vertices(right))
    if left.kind == "l2" and right.kind == "l2":
        scaled = [[x / (lw * rw) for x, rw in zip(row, right.weights)]
                  for row, lw in zip(matrix, left.weights)]
        return NormValue.of_float(linalg.spectral_norm(scaled), fibers.FLOAT_TOL)
    raise UnsupportedKinds("bilinear_norm", f"{left!r} x {right!r}")


def bilinear_norm_values(b: BilinearForm) -> list[NormValue]:
    return [bilinear_fiber_norm(l, r, m) for l, r, m in zip(b.left.fibers, b.right.fibers, b.matrices)]


def bilinear_norm(b: BilinearForm) -> L0Function:
    return L0Function(b.left.space, tuple(nv.scalar() for nv in bilinear_norm_values(b)))


def curry(b: BilinearForm) -> Homomorphism:
    """v -> b(v, .) as a homomorphism into the dual of the right factor."""
    return Homomorphism.of(b.left, dual_module(b.right),
                           [transpose_shaped(m, dr) for m, dr in zip(b.matrices, b.right.dims)])


def in_unit_disc(omega: Element, tol=0) -> bool:
    return all(nv.le(1, tol) for nv in pointwise_norm_values(omega))


def require_disc(omega: Element, what: str):
    if not in_unit_disc(omega, tol=fibers.FLOAT_TOL if not omega.is_exact else 0):
        raise PreconditionFailed(f"{what} is not in the unit disc of its dual module")
