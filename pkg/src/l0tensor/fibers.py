"""Finite-dimensional norms on a single fiber.

A :class:`NormDescriptor` is one of

* ``l1`` / ``linf`` / ``l2`` with positive weights: ``(sum |w_i x_i|^p)^(1/p)``
  (``max_i w_i |x_i|`` for ``linf``);
* ``poly``: a polyhedral norm given by its unit-ball vertices together with
  the vertices of the dual ball. Both lists are symmetric: listing ``v``
  implies ``-v``. The norm is ``max_d |<x, d>|`` over dual vertices;
* ``block``: an l1- or linf-combination of the norms of consecutive
  coordinate blocks (direct sums of fibers).

"Polyhedral kind" means the unit ball is a polytope with an explicit vertex
list: ``l1``, ``linf``, ``poly``, one-dimensional ``l2`` and blocks built
from those. Everything involving only polyhedral kinds is exact.

Projective-type infima reduce to gauge problems: the gauge of a finite
symmetric dictionary ``C`` at ``z`` is ``min sum t_j`` over ``t >= 0`` with
``sum t_j c_j = z``, solved by the exact simplex in :mod:`l0tensor.lp`. The
LP multipliers are a dual certificate ``y`` with ``|<y, c>| <= 1`` on the
dictionary and ``<y, z>`` equal to the gauge.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .errors import DimensionMismatch, Infeasible, InvalidDescriptor, UnsupportedKinds
from .lp import OPTIMAL, solve_lp
from .rational import exact_sqrt, to_fraction

KINDS = ("l1", "l2", "linf", "poly", "block")
FLOAT_TOL = Fraction(1, 10**9)
SVD_TOL = Fraction(1, 10**7)


@dataclass(frozen=True)
class NormValue:
    """A norm value with an honest statement of how exact it is.

    ``exact`` is set when the value is rational and known exactly. For
    Euclidean quantities ``squared`` holds the exact square instead.
    ``lower``/``upper`` are certified rational bounds when only bounds are
    known. ``value`` is always a float approximation within ``tol``.
    """

    value: float
    exact: Fraction | None = None
    squared: Fraction | None = None
    tol: Fraction = Fraction(0)
    lower: Fraction | None = None
    upper: Fraction | None = None

    @classmethod
    def of_exact(cls, q: Fraction) -> "NormValue":
        return cls(value=float(q), exact=q)

    @classmethod
    def of_squared(cls, sq: Fraction) -> "NormValue":
        root = exact_sqrt(sq)
        if isinstance(root, Fraction):
            return cls(value=float(root), exact=root, squared=sq)
        return cls(value=root, squared=sq, tol=FLOAT_TOL)

    @classmethod
    def of_float(cls, x: float, tol: Fraction = FLOAT_TOL) -> "NormValue":
        return cls(value=float(x), tol=tol)

    @classmethod
    def of_bounds(cls, lower: Fraction, upper: Fraction) -> "NormValue":
        return cls(value=float(lower + upper) / 2, tol=(upper - lower) / 2,
                   lower=lower, upper=upper)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def scalar(self):
        """Fraction when exact, float otherwise."""
        if self.exact is not None:
            return self.exact
        return self.value

    def compare(self, other: "NormValue") -> int:
        """Exact three-way comparison when both sides allow it, else by float.

        Float comparisons treat values within the combined tolerance as equal.
        """
        if self.exact is not None and other.exact is not None:
            return (self.exact > other.exact) - (self.exact < other.exact)
        a, b = self._square_form(), other._square_form()
        if a is not None and b is not None:
            return (a > b) - (a < b)
        d = self.value - other.value
        if abs(d) <= float(self.tol + other.tol):
            return 0
        return 1 if d > 0 else -1

    def _square_form(self):
        if self.squared is not None:
            return self.squared
        if self.exact is not None:
            return self.exact * self.exact
        return None

    def le(self, bound, tol=0) -> bool:
        """``self <= bound`` exactly when possible, else within tolerance."""
        bound = bound if isinstance(bound, float) else Fraction(bound)
        if isinstance(bound, Fraction):
            if self.exact is not None:
                return self.exact <= bound + tol
            if self.squared is not None and tol == 0:
                return bound >= 0 and self.squared <= bound * bound
            if self.upper is not None:
                return self.upper <= bound + tol
        return self.value <= float(bound) + float(tol) + float(self.tol)


@dataclass(frozen=True)
class NormDescriptor:
    dim: int
    kind: str
    weights: tuple[Fraction, ...] | None = None
    vertices: tuple[tuple[Fraction, ...], ...] | None = None
    dual_vertices: tuple[tuple[Fraction, ...], ...] | None = None
    blocks: tuple["NormDescriptor", ...] | None = None
    block_p: str | None = None

    def __repr__(self):
        if self.kind in ("l1", "l2", "linf"):
            if all(w == 1 for w in self.weights):
                return f"{self.kind}^{self.dim}"
            return f"{self.kind}^{self.dim}(w={[str(w) for w in self.weights]})"
        if self.kind == "poly":
            return f"poly^{self.dim}[{len(self.vertices)}|{len(self.dual_vertices)}]"
        return f"block-{self.block_p}({', '.join(map(repr, self.blocks))})"


def _vec(xs) -> tuple[Fraction, ...]:
    return tuple(to_fraction(x) for x in xs)


def lp_norm(kind: str, dim: int, weights: Sequence | None = None) -> NormDescriptor:
    if kind not in ("l1", "l2", "linf"):
        raise InvalidDescriptor(f"not an Lp kind: {kind!r}")
    if dim < 0:
        raise InvalidDescriptor("negative dimension")
    w = _vec(weights) if weights is not None else (Fraction(1),) * dim
    if len(w) != dim:
        raise InvalidDescriptor(f"{len(w)} weights for dimension {dim}")
    if any(x <= 0 for x in w):
        raise InvalidDescriptor("weights must be positive")
    return NormDescriptor(dim, kind, weights=w)


def l1(dim, weights=None):
    return lp_norm("l1", dim, weights)


def l2(dim, weights=None):
    return lp_norm("l2", dim, weights)


def linf(dim, weights=None):
    return lp_norm("linf", dim, weights)


def _dedupe_symmetric(points):
    out = []
    seen = set()
    for p in points:
        if p in seen:
            continue
        seen.add(p)
        seen.add(tuple(-x for x in p))
        out.append(p)
    return tuple(out)


def polyhedral(vertices, dual_vertices, dim: int | None = None) -> NormDescriptor:
    """Polyhedral norm from primal and dual vertex lists.

    Checks the necessary polarity conditions (full dimension, every vertex
    attains 1 against the other list and nothing exceeds 1). Use
    :func:`polarity_check` for a certificate.
    """
    v = _dedupe_symmetric(_vec(p) for p in vertices)
    d = _dedupe_symmetric(_vec(p) for p in dual_vertices)
    if dim is None:
        if not v:
            raise InvalidDescriptor("cannot infer dimension from empty vertex list")
        dim = len(v[0])
    if any(len(p) != dim for p in v + d):
        raise InvalidDescriptor("vertex of wrong length")
    if dim > 0:
        if linalg.rank(v) != dim or linalg.rank(d) != dim:
            raise InvalidDescriptor("vertex lists must span the full dimension")
        for a, b in ((v, d), (d, v)):
            for p in a:
                if max(abs(linalg.dot(p, q)) for q in b) != 1:
                    raise InvalidDescriptor(
                        f"vertex {[str(x) for x in p]} does not pair to 1 with the polar list")
    return NormDescriptor(dim, "poly", vertices=v, dual_vertices=d)


def block(p: str, blocks: Sequence[NormDescriptor]) -> NormDescriptor:
    """l1 ('l1') or linf ('linf') combination of block norms.

    Blocks that are all of the matching Lp kind (or one-dimensional) are
    flattened into a single weighted Lp descriptor, so a block-l1 of l1
    fibers is again an l1 fiber.
    """
    if p not in ("l1", "linf"):
        raise InvalidDescriptor(f"block combination must be l1 or linf, got {p!r}")
    blocks = tuple(blocks)
    if len(blocks) == 1:
        return blocks[0]
    flat = []
    for b in blocks:
        if b.kind == p or (b.kind in ("l1", "l2", "linf") and b.dim <= 1):
            flat.extend(b.weights)
        else:
            break
    else:
        return lp_norm(p, len(flat), flat)
    return NormDescriptor(sum(b.dim for b in blocks), "block", blocks=blocks, block_p=p)


def block_slices(desc: NormDescriptor):
    start = 0
    for b in desc.blocks:
        yield b, slice(start, start + b.dim)
        start += b.dim


def is_polyhedral(desc: NormDescriptor) -> bool:
    if desc.kind in ("l1", "linf", "poly"):
        return True
    if desc.kind == "l2":
        return desc.dim <= 1
    return all(is_polyhedral(b) for b in desc.blocks)


def is_euclidean(desc: NormDescriptor) -> bool:
    return desc.kind == "l2"


def _check_dim(desc, x):
    if len(x) != desc.dim:
        raise DimensionMismatch(f"vector of length {len(x)} for a {desc.dim}-dimensional fiber")


def norm_eval(desc: NormDescriptor, x: Sequence) -> NormValue:
    _check_dim(desc, x)
    floaty = any(isinstance(c, float) for c in x)
    kind = desc.kind
    if kind == "l1":
        s = sum((w * abs(c) for w, c in zip(desc.weights, x)), Fraction(0))
    elif kind == "linf":
        s = max((w * abs(c) for w, c in zip(desc.weights, x)), default=Fraction(0))
    elif kind == "l2":
        sq = sum(((w * c) ** 2 for w, c in zip(desc.weights, x)), Fraction(0))
        if floaty:
            return NormValue.of_float(math.sqrt(sq))
        return NormValue.of_squared(sq)
    elif kind == "poly":
        s = max((abs(linalg.dot(x, d)) for d in desc.dual_vertices), default=Fraction(0))
    else:
        parts = [norm_eval(b, x[sl]) for b, sl in block_slices(desc)]
        if all(p.exact is not None for p in parts):
            s = (sum((p.exact for p in parts), Fraction(0)) if desc.block_p == "l1"
                 else max((p.exact for p in parts), default=Fraction(0)))
        else:
            vals = [p.value for p in parts]
            tol = sum((p.tol for p in parts), Fraction(0))
            return NormValue.of_float(sum(vals) if desc.block_p == "l1" else max(vals, default=0.0), tol)
    if floaty:
        return NormValue.of_float(float(s))
    return NormValue.of_exact(s)


def dual_descriptor(desc: NormDescriptor) -> NormDescriptor:
    if desc.kind in ("l1", "l2", "linf"):
        dual_kind = {"l1": "linf", "linf": "l1", "l2": "l2"}[desc.kind]
        return NormDescriptor(desc.dim, dual_kind, weights=tuple(1 / w for w in desc.weights))
    if desc.kind == "poly":
        return NormDescriptor(desc.dim, "poly", vertices=desc.dual_vertices,
                              dual_vertices=desc.vertices)
    return NormDescriptor(desc.dim, "block",
                          blocks=tuple(dual_descriptor(b) for b in desc.blocks),
                          block_p="linf" if desc.block_p == "l1" else "l1")


def _sign_vectors(n):
    """All sign vectors of length n with first entry +1 (one per +- pair)."""
    if n == 0:
        return []
    return [(1,) + rest for rest in itertools.product((1, -1), repeat=n - 1)]


def _product_vertices(parts, dims):
    """Vertices of a product of symmetric polytopes, one per +- pair."""
    nonempty = [(i, p) for i, p in enumerate(parts) if p]
    if not nonempty:
        return ()
    out = []
    first, rest = nonempty[0], nonempty[1:]
    signed_rest = [[q for v in p for q in (v, tuple(-x for x in v))] for _, p in rest]
    for head in first[1]:
        for combo in itertools.product(*signed_rest):
            pieces = {first[0]: head}
            pieces.update({i: c for (i, _), c in zip(rest, combo)})
            vec = []
            for i, d in enumerate(dims):
                vec.extend(pieces.get(i, (Fraction(0),) * d))
            out.append(tuple(vec))
    return tuple(out)


def _union_vertices(parts, dims):
    out = []
    offset = 0
    total = sum(dims)
    for p, d in zip(parts, dims):
        for v in p:
            vec = [Fraction(0)] * total
            vec[offset:offset + d] = v
            out.append(tuple(vec))
        offset += d
    return tuple(out)


@lru_cache(maxsize=4096)
def primal_vertices(desc: NormDescriptor) -> tuple[tuple[Fraction, ...], ...]:
    """Unit-ball vertices, one representative per +- pair."""
    if not is_polyhedral(desc):
        raise UnsupportedKinds("primal_vertices", f"{desc!r} has a curved unit ball")
    n, w = desc.dim, desc.weights
    if desc.kind in ("l1", "l2") or (desc.kind == "linf" and n <= 1):
        return tuple(tuple(1 / w[i] if j == i else Fraction(0) for j in range(n)) for i in range(n))
    if desc.kind == "linf":
        return tuple(tuple(Fraction(s) / wi for s, wi in zip(sv, w)) for sv in _sign_vectors(n))
    if desc.kind == "poly":
        return desc.vertices
    parts = [primal_vertices(b) for b in desc.blocks]
    dims = [b.dim for b in desc.blocks]
    if desc.block_p == "l1":
        return _union_vertices(parts, dims)
    return _product_vertices(parts, dims)


@lru_cache(maxsize=4096)
def dual_vertices(desc: NormDescriptor) -> tuple[tuple[Fraction, ...], ...]:
    """Dual-ball vertices, one representative per +- pair."""
    if not is_polyhedral(desc):
        raise UnsupportedKinds("dual_vertices", f"{desc!r} has a curved unit ball")
    return primal_vertices(dual_descriptor(desc))


# ---------------------------------------------------------------------------
# polarity

def facet_normals(points: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Facet normals ``a`` (facet = {<a, x> = 1}) of the symmetric hull of points.

    Exhaustive: every ``dim``-subset of the signed points spanning a
    hyperplane off the origin is tested against all points. Meant for
    dim <= 3 and a handful of points.
    """
    pts = [tuple(map(Fraction, p)) for p in points]
    if not pts:
        return []
    dim = len(pts[0])
    signed = pts + [tuple(-x for x in p) for p in pts]
    normals = []
    seen = set()
    for idx in itertools.combinations(range(len(signed)), dim):
        if idx[0] >= len(pts):
            break  # subsets starting in the negated half are negations of earlier ones
        rows = [signed[i] for i in idx]
        a = linalg.solve_square(rows, [1] * dim)
        if a is None:
            continue
        a = tuple(a)
        if a in seen:
            continue
        if all(abs(linalg.dot(a, p)) <= 1 for p in pts):
            seen.add(a)
            seen.add(tuple(-x for x in a))
            normals.append(a)
    return normals


def _extreme_points(points, normals):
    dim = len(points[0])
    out = []
    for p in points:
        tight = [a for a in normals if abs(linalg.dot(a, p)) == 1]
        if tight and linalg.rank(tight) == dim:
            out.append(p)
    return _dedupe_symmetric(out)


def polyhedral_from_points(points: Sequence[Sequence]) -> NormDescriptor:
    """The polyhedral norm whose unit ball is the symmetric hull of ``points``.

    Dual vertices come from exhaustive facet enumeration; points that are not
    extreme are dropped.
    """
    pts = _dedupe_symmetric(_vec(p) for p in points)
    if not pts:
        raise InvalidDescriptor("no points")
    dim = len(pts[0])
    if linalg.rank(pts) != dim:
        raise InvalidDescriptor("points do not span the full dimension")
    normals = facet_normals(pts)
    return polyhedral(_extreme_points(pts, normals), normals, dim)


CERTIFIED = "certified"
PLAUSIBLE = "plausible"
REFUTED = "refuted"


def polarity_check(primal: Sequence[Sequence], dual: Sequence[Sequence]) -> str:
    """Decide whether the symmetric hulls of the two lists are polar to each other.

    Necessary conditions (no pairing above 1, every vertex attains 1) are
    checked in any dimension. In dimension <= 3 the facets of the primal hull
    are enumerated and every facet normal must appear in the dual list, which
    certifies hull(dual) = hull(primal)°. Higher dimensions only get
    "plausible".
    """
    v = _dedupe_symmetric(_vec(p) for p in primal)
    d = _dedupe_symmetric(_vec(p) for p in dual)
    if not v or not d:
        raise InvalidDescriptor("empty vertex list")
    dim = len(v[0])
    if linalg.rank(v) != dim or linalg.rank(d) != dim:
        raise InvalidDescriptor("degenerate (not full-dimensional) vertex list")
    for a, b in ((v, d), (d, v)):
        for p in a:
            if max(abs(linalg.dot(p, q)) for q in b) != 1:
                return REFUTED
    if dim > 3:
        return PLAUSIBLE
    dual_set = set(d) | {tuple(-x for x in p) for p in d}
    for a in facet_normals(v):
        if a not in dual_set:
            return REFUTED
    return CERTIFIED


# ---------------------------------------------------------------------------
# gauge LP

@dataclass(frozen=True)
class GaugeResult:
    value: Fraction
    coefficients: tuple[Fraction, ...]  # on dictionary + negated dictionary
    dual_certificate: tuple[Fraction, ...]

    def signed(self) -> tuple[Fraction, ...]:
        """Net coefficient on each original dictionary element."""
        k = len(self.coefficients) // 2
        return tuple(a - b for a, b in zip(self.coefficients[:k], self.coefficients[k:]))


def gauge_lp(dictionary: Sequence[Sequence], target: Sequence) -> GaugeResult:
    """Minkowski gauge of ``target`` w.r.t. the symmetric hull of ``dictionary``."""
    target = [to_fraction(t) if not isinstance(t, Fraction) else t for t in target]
    dim = len(target)
    cols = [list(map(Fraction, c)) for c in dictionary]
    if any(len(c) != dim for c in cols):
        raise DimensionMismatch("dictionary vectors and target differ in length")
    if dim == 0:
        return GaugeResult(Fraction(0), (Fraction(0),) * (2 * len(cols)), ())
    signed = cols + [[-x for x in c] for c in cols]
    a_eq = [[c[i] for c in signed] for i in range(dim)]
    res = solve_lp([1] * len(signed), a_eq, target)
    if res.status != OPTIMAL:
        raise Infeasible("target is outside the span of the dictionary")
    return GaugeResult(res.value, res.x, res.y)


def brute_force_gauge(dictionary: Sequence[Sequence], target: Sequence) -> Fraction:
    """Gauge by enumerating basic solutions (independent oracle for gauge_lp).

    A basic optimal solution of the symmetric problem uses at most one of
    ``c`` and ``-c``, so it suffices to solve ``sum s_j c_j = target`` on every
    linearly independent subset of size rank and minimize ``sum |s_j|``.
    """
    return brute_force_gauges(dictionary, [target])[0]


def brute_force_gauges(dictionary: Sequence[Sequence], targets: Sequence[Sequence]) -> list[Fraction]:
    """:func:`brute_force_gauge` for many targets; the bases are enumerated once."""
    cols = [tuple(map(Fraction, c)) for c in dictionary]
    r = linalg.rank(cols) if cols else 0
    full = bool(cols) and r == len(cols[0])
    bases = []
    for idx in itertools.combinations(range(len(cols)), r):
        sub = [cols[i] for i in idx]
        if full:
            inv = linalg.inverse(linalg.transpose(sub))
            if inv is not None:
                bases.append((sub, inv))
        elif linalg.rank(sub) == r:
            bases.append((sub, None))
    out = []
    for target in targets:
        target = list(map(Fraction, target))
        if all(t == 0 for t in target):
            out.append(Fraction(0))
            continue
        best = None
        for sub, inv in bases:
            s = linalg.matvec(inv, target) if inv is not None else linalg.solve(linalg.transpose(sub), target)
            if s is None:
                continue
            val = sum((abs(x) for x in s), Fraction(0))
            if best is None or val < best:
                best = val
        if best is None:
            raise Infeasible("target is outside the span of the dictionary")
        out.append(best)
    return out


# ---------------------------------------------------------------------------
# distance to an affine subspace

def min_norm_over_affine(desc: NormDescriptor, point: Sequence,
                         subspace_basis: Sequence[Sequence]) -> tuple[NormValue, list]:
    """``min_s ||point + s||`` over ``s`` in the span; returns (value, argmin s)."""
    _check_dim(desc, point)
    basis = [list(map(Fraction, b)) for b in subspace_basis]
    for b in basis:
        _check_dim(desc, b)
    if basis and linalg.rank(basis) != len(basis):
        raise ValueError("subspace basis vectors are not independent")
    point = list(map(Fraction, point))
    dim = desc.dim
    if not basis:
        return norm_eval(desc, point), [Fraction(0)] * dim
    if desc.kind == "l2":
        w2 = [w * w for w in desc.weights]
        gram = [[sum((w * x * y for w, x, y in zip(w2, bi, bj)), Fraction(0)) for bj in basis]
                for bi in basis]
        rhs = [-sum((w * x * p for w, x, p in zip(w2, bi, point)), Fraction(0)) for bi in basis]
        sigma = linalg.solve_square(gram, rhs)
        s = [sum((sg * b[i] for sg, b in zip(sigma, basis)), Fraction(0)) for i in range(dim)]
        return norm_eval(desc, [p + x for p, x in zip(point, s)]), s
    if not is_polyhedral(desc):
        raise UnsupportedKinds("min_norm_over_affine", repr(desc))
    verts = [list(v) for v in primal_vertices(desc)]
    cols = verts + [[-x for x in v] for v in verts]
    free = basis + [[-x for x in b] for b in basis]
    cost = [1] * len(cols) + [0] * len(free)
    # sum t_j v_j - sum sigma_k b_k = point
    a_eq = [[c[i] for c in cols] + [-f[i] for f in free] for i in range(dim)]
    res = solve_lp(cost, a_eq, point)
    if res.status != OPTIMAL:
        raise Infeasible("polyhedral vertices do not span the fiber")
    k = len(basis)
    sig = res.x[len(cols):]
    sigma = [a - b for a, b in zip(sig[:k], sig[k:])]
    s = [sum((sg * b[i] for sg, b in zip(sigma, basis)), Fraction(0)) for i in range(dim)]
    return NormValue.of_exact(res.value), s


# ---------------------------------------------------------------------------
# polygons around a 2-dimensional Euclidean disc

def _circle_point(theta: float, max_den: int) -> tuple[Fraction, Fraction]:
    t = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def _adjacent_normals(points):
    """Normals of the edges of the symmetric polygon through points sorted by angle in [0, pi)."""
    edges = list(zip(points, points[1:])) + [(points[-1], tuple(-x for x in points[0]))]
    return [tuple(linalg.solve_square([p, q], [1, 1])) for p, q in edges]


@lru_cache(maxsize=64)
def polygon_pair(desc: NormDescriptor, k: int = 6) -> tuple[NormDescriptor, NormDescriptor, Fraction]:
    """Rational 2**k-gons sandwiching a 2-dimensional Euclidean unit ball.

    Returns ``(inner, outer, ratio)``. ``inner`` has its vertices on the
    ellipse, so its norm dominates the Euclidean one; ``outer`` is cut out by
    tangent lines at points offset by half a step, so its norm is dominated.
    ``outer <= l2 <= inner <= ratio * outer`` holds with the exact rational
    ``ratio``, which is within rounding of sec(pi / 2**k).
    """
    if desc.kind != "l2" or desc.dim != 2:
        raise UnsupportedKinds("polygon_pair", f"needs a 2-dimensional l2 fiber, got {desc!r}")
    if k < 2:
        raise ValueError("need at least a square (k >= 2)")
    half = 2 ** (k - 1)
    max_den = 64 * 2 ** k
    us = [_circle_point(math.pi * j / half, max_den) for j in range(half)]
    ms = [_circle_point(math.pi * (j + Fraction(1, 2)) / half, max_den) for j in range(half)]
    chord_normals = _adjacent_normals(us)
    corners = _adjacent_normals(ms)
    w = desc.weights
    inner = polyhedral([(u[0] / w[0], u[1] / w[1]) for u in us],
                       [(b[0] * w[0], b[1] * w[1]) for b in chord_normals], 2)
    outer = polyhedral([(c[0] / w[0], c[1] / w[1]) for c in corners],
                       [(m[0] * w[0], m[1] * w[1]) for m in ms], 2)
    ratio = max(abs(linalg.dot(c, b)) for c in corners for b in chord_normals)
    return inner, outer, ratio
