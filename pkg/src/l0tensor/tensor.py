"""Tensor products of modules, fiber by fiber.

A tensor in M (x) N is stored as one coefficient matrix per atom
(left_dim x right_dim); ``sum v_i (x) w_i`` corresponds to ``sum v_i w_i^T``.

Projective norm (polyhedral fibers): the unit ball of the projective norm
on R^m (x) R^n is the convex hull of ``x y^T`` with ``x``, ``y`` in the two
unit balls, and since ``(x, y) -> x y^T`` is bilinear the hull is already
generated by pairs of *vertices*. So the projective norm is the gauge of the
finite dictionary ``{x y^T : x in V_M, y in V_N}``, computed exactly by LP. A
basic optimal solution is an explicit representation attaining the
infimum, and the LP multipliers form a bilinear form of norm <= 1 attaining
it from the dual side.

Injective norm: the supremum of ``omega^T A eta`` over the dual unit balls is
attained at dual vertices, so polyhedral fibers give an exact finite max.

Euclidean fibers go through singular values (floats) and the
Hilbert-Schmidt norm, whose square is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fibers, linalg
from .errors import DimensionMismatch, SpaceMismatch, UnsupportedKinds
from .fibers import NormDescriptor, NormValue, SVD_TOL
from .hom import BilinearForm, Homomorphism, dual_module, require_disc
from .measure import L0Function
from .modules import Element, ModuleSpec
from .rational import to_fraction

PI = "pi"
EPS = "eps"
POLYGON_K = 6


@dataclass(frozen=True)
class Tensor:
    left: ModuleSpec
    right: ModuleSpec
    matrices: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        if self.left.space != self.right.space:
            raise SpaceMismatch("tensor factors must share the measure space")
        if len(self.matrices) != len(self.left.space):
            raise DimensionMismatch("one coefficient matrix per atom is required")
        for m, dl, dr in zip(self.matrices, self.left.dims, self.right.dims):
            if len(m) != dl or any(len(r) != dr for r in m):
                raise DimensionMismatch(f"expected a {dl}x{dr} coefficient matrix")

    @classmethod
    def of(cls, left: ModuleSpec, right: ModuleSpec, matrices) -> "Tensor":
        return cls(left, right, tuple(tuple(tuple(x if isinstance(x, float) else to_fraction(x)
                                                  for x in row) for row in m) for m in matrices))

    @classmethod
    def zero(cls, left: ModuleSpec, right: ModuleSpec) -> "Tensor":
        return cls.of(left, right, [linalg.zeros(dl, dr) for dl, dr in zip(left.dims, right.dims)])

    def _same(self, other):
        if (self.left, self.right) != (other.left, other.right):
            raise SpaceMismatch("tensors over different module pairs")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._same(other)
        return Tensor(self.left, self.right, tuple(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))
            for a, b in zip(self.matrices, other.matrices)))

    def __neg__(self) -> "Tensor":
        return self.scaled(L0Function(self.left.space, (Fraction(-1),) * len(self.left.space)))

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def scaled(self, f: L0Function) -> "Tensor":
        """The L0-module action f . alpha."""
        if f.space != self.left.space:
            raise SpaceMismatch("scalar function lives on another space")
        return Tensor(self.left, self.right, tuple(
            tuple(tuple(c * x for x in row) for row in m) for c, m in zip(f.values, self.matrices)))


@dataclass(frozen=True)
class Representation:
    """A finite list of pairs (v_i, w_i) standing for sum v_i (x) w_i."""

    pairs: tuple[tuple[Element, Element], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a representation needs at least one pair")
        left, right = self.pairs[0][0].module, self.pairs[0][1].module
        for v, w in self.pairs:
            if v.module != left or w.module != right:
                raise SpaceMismatch("inconsistent modules in representation")

    @property
    def left(self) -> ModuleSpec:
        return self.pairs[0][0].module

    @property
    def right(self) -> ModuleSpec:
        return self.pairs[0][1].module


def elementary(v: Element, w: Element) -> Tensor:
    return from_representation(Representation(((v, w),)))


def from_representation(rep: Representation | Sequence[tuple[Element, Element]]) -> Tensor:
    if not isinstance(rep, Representation):
        rep = Representation(tuple(rep))
    left, right = rep.left, rep.right
    mats = []
    for k, (dl, dr) in enumerate(zip(left.dims, right.dims)):
        m = [[Fraction(0)] * dr for _ in range(dl)]
        for v, w in rep.pairs:
            x, y = v.coords[k], w.coords[k]
            for i in range(dl):
                if x[i] != 0:
                    row = m[i]
                    for j in range(dr):
                        row[j] += x[i] * y[j]
        mats.append(m)
    return Tensor.of(left, right, mats)


def _dual_spanning_set(desc: NormDescriptor):
    if fibers.is_polyhedral(desc):
        return fibers.dual_vertices(desc)
    return tuple(tuple(Fraction(int(i == j)) for j in range(desc.dim)) for i in range(desc.dim))


def null_by_dual_pairs(rep: Representation) -> bool:
    """Dual criterion: sum omega(v_i) eta(w_i) = 0 for all dual functionals.

    Testing a spanning set of functionals on each side is enough (the
    expression is bilinear in (omega, eta)); dual vertices are used for
    polyhedral fibers, coordinate functionals otherwise.
    """
    for k, (dl, dr) in enumerate(zip(rep.left.fibers, rep.right.fibers)):
        for om in _dual_spanning_set(dl):
            for et in _dual_spanning_set(dr):
                s = sum((linalg.dot(om, v.coords[k]) * linalg.dot(et, w.coords[k])
                         for v, w in rep.pairs), Fraction(0))
                if s != 0:
                    return False
    return True


def is_null(alpha: Tensor, rep: Representation | None = None) -> bool:
    """Zero test on coefficient matrices, cross-checked against ``rep`` if given."""
    verdict = all(linalg.is_zero_matrix(m) for m in alpha.matrices)
    if rep is not None:
        dual_verdict = null_by_dual_pairs(rep)
        if dual_verdict != verdict:
            raise AssertionError("matrix test and dual-pair criterion disagree")
    return verdict


# ---------------------------------------------------------------------------
# projective norm

@dataclass(frozen=True)
class ProjectiveFiber:
    value: NormValue
    certificate: tuple[tuple[Fraction, ...], ...] | None = None  # bilinear form B*, |B*| <= 1
    decomposition: tuple[tuple[tuple, tuple], ...] | None = None  # (x_i, y_i) with sum |x_i||y_i| = value


def projective_dictionary(left: NormDescriptor, right: NormDescriptor):
    vl, vr = fibers.primal_vertices(left), fibers.primal_vertices(right)
    pairs = [(x, y) for x in vl for y in vr]
    return pairs, [linalg.flatten(linalg.outer(x, y)) for x, y in pairs]


def _projective_lp(left, right, matrix) -> ProjectiveFiber:
    pairs, dictionary = projective_dictionary(left, right)
    res = fibers.gauge_lp(dictionary, linalg.flatten(matrix))
    k = len(pairs)
    decomposition = []
    for j, t in enumerate(res.coefficients):
        if t != 0:
            x, y = pairs[j % k]
            sign = 1 if j < k else -1
            decomposition.append((tuple(sign * t * c for c in x), tuple(y)))
    cert = tuple(tuple(row) for row in linalg.reshape(res.dual_certificate, left.dim, right.dim))
    return ProjectiveFiber(NormValue.of_exact(res.value), cert, tuple(decomposition))


def projective_fiber(left: NormDescriptor, right: NormDescriptor, matrix,
                     polygon_k: int = POLYGON_K) -> ProjectiveFiber:
    if left.dim == 0 or right.dim == 0:
        zero = tuple(tuple(Fraction(0) for _ in range(right.dim)) for _ in range(left.dim))
        return ProjectiveFiber(NormValue.of_exact(Fraction(0)), zero, ())
    lp, rp = fibers.is_polyhedral(left), fibers.is_polyhedral(right)
    if lp and rp:
        return _projective_lp(left, right, matrix)
    if left.kind == "l2" and right.kind == "l2":
        scaled = [[a * x * b for x, b in zip(row, right.weights)] for row, a in zip(matrix, left.weights)]
        return ProjectiveFiber(NormValue.of_float(linalg.nuclear_norm(scaled), SVD_TOL))
    if (lp and right.kind == "l2" and right.dim == 2) or (rp and left.kind == "l2" and left.dim == 2):
        if lp:
            inner, outer, _ = fibers.polygon_pair(right, polygon_k)
            upper = _projective_lp(left, inner, matrix).value.exact
            lower = _projective_lp(left, outer, matrix).value.exact
        else:
            inner, outer, _ = fibers.polygon_pair(left, polygon_k)
            upper = _projective_lp(inner, right, matrix).value.exact
            lower = _projective_lp(outer, right, matrix).value.exact
        return ProjectiveFiber(NormValue.of_bounds(lower, upper))
    raise UnsupportedKinds("projective_norm", f"{left!r} (x) {right!r}")


def projective_fibers(alpha: Tensor, polygon_k: int = POLYGON_K) -> list[ProjectiveFiber]:
    return [projective_fiber(l, r, m, polygon_k)
            for l, r, m in zip(alpha.left.fibers, alpha.right.fibers, alpha.matrices)]


def projective_norm_values(alpha: Tensor) -> list[NormValue]:
    return [pf.value for pf in projective_fibers(alpha)]


def projective_norm(alpha: Tensor) -> L0Function:
    return L0Function(alpha.left.space, tuple(nv.scalar() for nv in projective_norm_values(alpha)))


def witness_decomposition(alpha: Tensor) -> Representation:
    """A finite representation whose sum of |v_i||w_i| equals the projective norm.

    Atoms whose optimal decompositions have fewer terms are padded with zeros.
    """
    per_atom = [pf.decomposition for pf in projective_fibers(alpha)]
    if any(d is None for d in per_atom):
        raise UnsupportedKinds("witness_decomposition", "needs polyhedral fibers on every atom")
    n = max((len(d) for d in per_atom), default=0) or 1
    pairs = []
    for i in range(n):
        xs, ys = [], []
        for d, dl, dr in zip(per_atom, alpha.left.dims, alpha.right.dims):
            if i < len(d):
                xs.append(d[i][0])
                ys.append(d[i][1])
            else:
                xs.append((Fraction(0),) * dl)
                ys.append((Fraction(0),) * dr)
        pairs.append((Element(alpha.left, tuple(xs)), Element(alpha.right, tuple(ys))))
    return Representation(tuple(pairs))


def projective_certificate(alpha: Tensor) -> BilinearForm:
    """The LP dual certificate as a bilinear form b with |b| <= 1 and b(alpha) = |alpha|_pi."""
    certs = [pf.certificate for pf in projective_fibers(alpha)]
    if any(c is None for c in certs):
        raise UnsupportedKinds("projective_certificate", "needs polyhedral fibers on every atom")
    return BilinearForm.of(alpha.left, alpha.right, certs)


# ---------------------------------------------------------------------------
# injective and Hilbert-Schmidt norms

def injective_fiber(left: NormDescriptor, right: NormDescriptor, matrix) -> NormValue:
    if left.dim == 0 or right.dim == 0:
        return NormValue.of_exact(Fraction(0))
    lp, rp = fibers.is_polyhedral(left), fibers.is_polyhedral(right)
    if lp and rp:
        best = Fraction(0)
        for d in fibers.dual_vertices(left):
            row = linalg.matvec(linalg.transpose(matrix), d)
            for e in fibers.dual_vertices(right):
                best = max(best, abs(linalg.dot(row, e)))
        return NormValue.of_exact(best)
    if lp:
        mt = linalg.transpose(matrix)
        return _max(fibers.norm_eval(right, linalg.matvec(mt, d)) for d in fibers.dual_vertices(left))
    if rp:
        return _max(fibers.norm_eval(left, linalg.matvec(matrix, e)) for e in fibers.dual_vertices(right))
    if left.kind == "l2" and right.kind == "l2":
        scaled = [[a * x * b for x, b in zip(row, right.weights)] for row, a in zip(matrix, left.weights)]
        return NormValue.of_float(linalg.spectral_norm(scaled), SVD_TOL)
    raise UnsupportedKinds("injective_norm", f"{left!r} (x) {right!r}")


def _max(values) -> NormValue:
    best = None
    for nv in values:
        if best is None or nv.compare(best) > 0:
            best = nv
    return best


def injective_norm_values(alpha: Tensor) -> list[NormValue]:
    return [injective_fiber(l, r, m) for l, r, m in zip(alpha.left.fibers, alpha.right.fibers, alpha.matrices)]


def injective_norm(alpha: Tensor) -> L0Function:
    return L0Function(alpha.left.space, tuple(nv.scalar() for nv in injective_norm_values(alpha)))


def hs_fiber_squared(left: NormDescriptor, right: NormDescriptor, matrix) -> Fraction:
    if left.kind != "l2" or right.kind != "l2":
        raise UnsupportedKinds("hs_norm_squared", f"{left!r} (x) {right!r} is not Hilbert")
    return sum(((a * b * x) ** 2 for row, a in zip(matrix, left.weights)
                for x, b in zip(row, right.weights)), Fraction(0))


def hs_norm_squared(alpha: Tensor) -> L0Function:
    """Squared Hilbert-Schmidt norm: the Gram-matrix double sum, i.e. the
    Frobenius norm of the coefficient matrix in orthonormal coordinates."""
    return L0Function(alpha.left.space, tuple(
        hs_fiber_squared(l, r, m) for l, r, m in zip(alpha.left.fibers, alpha.right.fibers, alpha.matrices)))


def hs_norm_values(alpha: Tensor) -> list[NormValue]:
    return [NormValue.of_squared(q) for q in hs_norm_squared(alpha).values]


@dataclass(frozen=True)
class SandwichReport:
    ok: bool
    # per atom: (eps, middle, pi) with the middle crossnorm HS when available
    rows: tuple[tuple[NormValue, NormValue | None, NormValue], ...]
    violations: tuple[str, ...]


def crossnorm_sandwich_check(alpha: Tensor) -> SandwichReport:
    """eps <= HS <= pi per atom (eps <= pi when HS is not defined)."""
    eps = injective_norm_values(alpha)
    pi = projective_norm_values(alpha)
    rows, bad = [], []
    for k, (l, r, m) in enumerate(zip(alpha.left.fibers, alpha.right.fibers, alpha.matrices)):
        hs = NormValue.of_squared(hs_fiber_squared(l, r, m)) if l.kind == r.kind == "l2" else None
        chain = [eps[k]] + ([hs] if hs is not None else []) + [pi[k]]
        for lo, hi in zip(chain, chain[1:]):
            if lo.compare(hi) > 0:
                bad.append(f"atom {alpha.left.space.ids[k]}: {lo.value} > {hi.value}")
        rows.append((eps[k], hs, pi[k]))
    return SandwichReport(not bad, tuple(rows), tuple(bad))


# ---------------------------------------------------------------------------
# maps and dualities

def tensor_of_homs(t: Homomorphism, s: Homomorphism, alpha: Tensor, flavor: str = PI) -> Tensor:
    """(T (x) S)(alpha): A -> M_T A M_S^T per atom. ``flavor`` only names the completion."""
    if flavor not in (PI, EPS):
        raise ValueError(f"unknown flavor {flavor!r}")
    if alpha.left != t.source or alpha.right != s.source:
        raise SpaceMismatch("tensor is not over the sources of the two homomorphisms")
    mats = []
    for mt, ms, a, dl, dr in zip(t.matrices, s.matrices, alpha.matrices, t.target.dims, s.target.dims):
        if not a or not a[0]:
            mats.append(linalg.zeros(dl, dr))
            continue
        mats.append(linalg.matmul(linalg.matmul(mt, a), linalg.transpose(ms)))
    return Tensor.of(t.target, s.target, mats)


def tensor_hom_norm_values(t: Homomorphism, s: Homomorphism, flavor: str) -> list[NormValue]:
    """Operator norm of T (x) S on the pi- or eps-completed tensor product.

    pi: the pi-ball is the hull of x y^T over source vertices, so the norm is
    the max of |T x (x) S y|_pi. eps: the dual of the eps-norm is the
    pi-norm of the duals, giving max over target dual vertices d, e of
    |T^T d (x) S^T e|_pi computed in the dual modules.
    """
    out = []
    for k in range(len(t.source.space)):
        ls, rs = t.source.fibers[k], s.source.fibers[k]
        lt, rt = t.target.fibers[k], s.target.fibers[k]
        mt, ms = t.matrices[k], s.matrices[k]
        if 0 in (ls.dim, rs.dim, lt.dim, rt.dim):
            out.append(NormValue.of_exact(Fraction(0)))
            continue
        best = Fraction(0)
        if flavor == PI:
            for x in fibers.primal_vertices(ls):
                tx = linalg.matvec(mt, x)
                for y in fibers.primal_vertices(rs):
                    img = linalg.outer(tx, linalg.matvec(ms, y))
                    best = max(best, projective_fiber(lt, rt, img).value.exact)
        else:
            lsd, rsd = fibers.dual_descriptor(ls), fibers.dual_descriptor(rs)
            for d in fibers.dual_vertices(lt):
                td = linalg.matvec(linalg.transpose(mt), d)
                for e in fibers.dual_vertices(rt):
                    img = linalg.outer(td, linalg.matvec(linalg.transpose(ms), e))
                    best = max(best, projective_fiber(lsd, rsd, img).value.exact)
        out.append(NormValue.of_exact(best))
    return out


def pairing_with_bilinear(b: BilinearForm, alpha: Tensor) -> L0Function:
    """The linearization of b evaluated at alpha: <B, A> per atom."""
    if (b.left, b.right) != (alpha.left, alpha.right):
        raise SpaceMismatch("bilinear form and tensor are over different modules")
    return L0Function(alpha.left.space, tuple(
        sum((x * y for rb, ra in zip(mb, ma) for x, y in zip(rb, ra)), Fraction(0))
        for mb, ma in zip(b.matrices, alpha.matrices)))


def iota_evaluate(alpha: Tensor, omega: Element, eta: Element) -> L0Function:
    """iota(alpha)(omega, eta) = omega^T A eta for functionals in the dual unit discs."""
    if omega.module != dual_module(alpha.left) or eta.module != dual_module(alpha.right):
        raise SpaceMismatch("functionals are not in the duals of the tensor factors")
    require_disc(omega, "omega")
    require_disc(eta, "eta")
    return L0Function(alpha.left.space, tuple(
        linalg.dot(om, linalg.matvec(a, et)) if a and a[0] else Fraction(0)
        for a, om, et in zip(alpha.matrices, omega.coords, eta.coords)))


def realize_L_R(alpha: Tensor) -> tuple[Homomorphism, Homomorphism]:
    """L: M* -> N, omega -> sum omega(v_i) w_i (matrix A^T); R: N* -> M (matrix A)."""
    lt = [linalg.transpose(a) if a else linalg.zeros(dr, 0)
          for a, dr in zip(alpha.matrices, alpha.right.dims)]
    L = Homomorphism.of(dual_module(alpha.left), alpha.right, lt)
    R = Homomorphism.of(dual_module(alpha.right), alpha.left, alpha.matrices)
    return L, R


@dataclass(frozen=True)
class TensorQuotientReport:
    ok: bool
    surjective: tuple[bool, ...]
    contractive: tuple[bool, ...]
    # per atom: minimal projective preimage norm of each target dictionary element
    preimage_norms: tuple[tuple[Fraction, ...], ...]


def projective_quotient_check(t: Homomorphism, s: Homomorphism) -> TensorQuotientReport:
    """Is T (x)_pi S a quotient operator? (polyhedral fibers)

    The image of the source pi-ball is the symmetric hull of the mapped
    dictionary ``{T x (x) S y}``, so the minimal preimage norm of a target
    tensor is a gauge LP over that set. It is tested on every target
    dictionary element ``u (x) v`` (all of pi-norm 1), with |T (x) S| <= 1 for
    the reverse inequality.
    """
    surj, contr, values = [], [], []
    ok = True
    norms = tensor_hom_norm_values(t, s, PI)
    for k in range(len(t.source.space)):
        ls, rs = t.source.fibers[k], s.source.fibers[k]
        lt, rt = t.target.fibers[k], s.target.fibers[k]
        mt, ms = t.matrices[k], s.matrices[k]
        if lt.dim == 0 or rt.dim == 0:
            surj.append(True)
            contr.append(True)
            values.append(())
            continue
        for d in (ls, rs, lt, rt):
            if not fibers.is_polyhedral(d):
                raise UnsupportedKinds("projective_quotient_check", f"fiber {d!r} is not polyhedral")
        su = ls.dim > 0 and rs.dim > 0 and linalg.rank(mt) == lt.dim and linalg.rank(ms) == rt.dim
        co = norms[k].le(1)
        vals = []
        if su:
            mapped = [linalg.flatten(linalg.outer(linalg.matvec(mt, x), linalg.matvec(ms, y)))
                      for x in fibers.primal_vertices(ls) for y in fibers.primal_vertices(rs)]
            for u in fibers.primal_vertices(lt):
                for v in fibers.primal_vertices(rt):
                    vals.append(fibers.gauge_lp(mapped, linalg.flatten(linalg.outer(u, v))).value)
        surj.append(su)
        contr.append(co)
        values.append(tuple(vals))
        ok = ok and su and co and all(x == 1 for x in vals)
    return TensorQuotientReport(ok, tuple(surj), tuple(contr), tuple(values))
