"""Registry of property suites, one per theorem id.

Every case is a work document: the generator writes random instances through
a :class:`DocBuilder` and returns a ``theorem`` assertion naming them; the
checker reads the objects back from the parsed document. Generation and
checking only meet through the document, so a failing case's document
reproduces the failure on its own.

Instance bounds: at most 4 atoms, fiber dimension at most 3, at most 8 ball
vertices, rational entries with numerator and denominator at most 16.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import fibers, linalg
from .document import DocBuilder, WorkDocument, dumps, document_from_json
from .errors import DocumentError, L0Error, NotSummable
from .fibers import NormDescriptor, NormValue
from .hom import (BilinearForm, Homomorphism, bilinear_fiber_norm, bilinear_norm_values, curry,
                  hahn_banach_witness, hom_norm_values, is_quotient_operator, pairing, quotient_dual_check)
from .measure import L0Function, MeasureSpace
from .modules import Element, ModuleSpec, Submodule, pointwise_norm_values, scalar_module, unit_sphere_member
from .pullback import AtomMap, pullback_tensor_check
from .sequences import (FiniteSpaceK, diagonal_check, inj_tens_uc_check, sphere_quotient,
                        uc_module, uc_quotient_tensor_check, vv_iso_check)
from .summability import NOT_SUMMABLE, SUMMABLE, cauchy_check, family_sum, hom_commute_check
from .tensor import (EPS, PI, Representation, Tensor, crossnorm_sandwich_check, elementary,
                     from_representation, hs_norm_squared, injective_norm_values, null_by_dual_pairs,
                     projective_fibers, projective_norm_values, projective_quotient_check,
                     tensor_hom_norm_values, tensor_of_homs)

MAX_ATOMS = 4
MAX_DIM = 3
MAX_ENTRY = 16


# ---------------------------------------------------------------------------
# random instances

def rand_rational(rng: random.Random, num: int = 6, den: int = 4, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if q != 0 or not nonzero:
            return q


def rand_positive(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 4), rng.randint(1, 3))


def rand_space(rng: random.Random, max_atoms: int = 3, prefix: str = "a") -> MeasureSpace:
    n = rng.randint(1, min(max_atoms, MAX_ATOMS))
    return MeasureSpace(tuple((f"{prefix}{i}", rand_positive(rng)) for i in range(n)))


def rand_hull(rng: random.Random, dim: int) -> NormDescriptor:
    """Symmetric hull of a few small integer points (at most 8 signed vertices)."""
    while True:
        pts = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim))
               for _ in range(rng.randint(dim, min(4, dim + 2)))]
        pts = [p for p in pts if any(p)]
        if pts and linalg.rank(pts) == dim:
            return fibers.polyhedral_from_points(pts)


def rand_polyhedral(rng: random.Random, dim: int) -> NormDescriptor:
    kind = rng.choice(["l1", "linf", "hull"] + (["block"] if dim >= 2 else []))
    if kind == "hull" and dim >= 2:
        return rand_hull(rng, dim)
    if kind == "block":
        split = rng.randint(1, dim - 1)
        return fibers.block(rng.choice(["l1", "linf"]),
                            [rand_polyhedral(rng, split), rand_polyhedral(rng, dim - split)])
    return fibers.lp_norm("l1" if kind == "hull" else kind, dim,
                          [rand_positive(rng) for _ in range(dim)])


def rand_dim(rng: random.Random, lo: int = 1, hi: int = 2) -> int:
    # dimension 3 occasionally, to keep exact LPs small
    return MAX_DIM if hi >= MAX_DIM and rng.random() < 0.15 else rng.randint(lo, min(hi, 2))


def rand_module(rng: random.Random, space: MeasureSpace, dims=None, zero_ok: bool = False) -> ModuleSpec:
    out = []
    for k in range(len(space)):
        d = dims[k] if dims is not None else rand_dim(rng, 0 if zero_ok else 1, MAX_DIM)
        out.append(rand_polyhedral(rng, d) if d > 0 else fibers.l1(0))
    return ModuleSpec(space, tuple(out))


def rand_vector(rng: random.Random, n: int, nonzero: bool = False) -> tuple[Fraction, ...]:
    while True:
        v = tuple(rand_rational(rng) for _ in range(n))
        if any(v) or not nonzero or n == 0:
            return v


def rand_element(rng: random.Random, module: ModuleSpec, zero_prob: float = 0.1) -> Element:
    """Random element; with zero_prob = 0 every nonzero fiber gets a nonzero vector."""
    return Element(module, tuple(rand_vector(rng, d, nonzero=zero_prob == 0) if rng.random() >= zero_prob
                                 else (Fraction(0),) * d for d in module.dims))


def rand_matrix(rng: random.Random, r: int, c: int):
    return tuple(rand_vector(rng, c) for _ in range(r))


def rand_tensor(rng: random.Random, left: ModuleSpec, right: ModuleSpec) -> Tensor:
    return Tensor(left, right, tuple(rand_matrix(rng, dl, dr) for dl, dr in zip(left.dims, right.dims)))


def rand_hom(rng: random.Random, source: ModuleSpec, target: ModuleSpec) -> Homomorphism:
    return Homomorphism(source, target, tuple(rand_matrix(rng, dt, ds)
                                              for ds, dt in zip(source.dims, target.dims)))


def rand_quotient(rng: random.Random, space: MeasureSpace) -> Homomorphism:
    """A quotient operator: a coordinate projection followed by an invertible
    map, with the target norm defined as the image of the source ball."""
    src, tgt, mats = [], [], []
    for _ in range(len(space)):
        m = rng.randint(1, 3 if rng.random() < 0.2 else 2)
        k = rng.randint(1, m)
        desc = rand_polyhedral(rng, m)
        while True:
            g = rand_matrix(rng, k, k)
            if linalg.rank(g) == k:
                break
        proj = [[Fraction(int(i == j)) for j in range(m)] for i in range(k)]
        mat = linalg.matmul(g, proj)
        image = [tuple(linalg.matvec(mat, v)) for v in fibers.primal_vertices(desc)]
        image = [p for p in image if any(p)]
        src.append(desc)
        tgt.append(fibers.polyhedral_from_points(image))
        mats.append(tuple(tuple(r) for r in mat))
    return Homomorphism(ModuleSpec(space, tuple(src)), ModuleSpec(space, tuple(tgt)), tuple(mats))


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class Theorem:
    id: str
    summary: str
    generate: Callable[[random.Random, DocBuilder], dict]
    check: Callable[[WorkDocument, dict], tuple[bool, str]]


THEOREMS: dict[str, Theorem] = {}


def _register(tid: str, summary: str, generate, check):
    THEOREMS[tid] = Theorem(tid, summary, generate, check)


def _assertion(tid: str, **refs) -> dict:
    return {"check": "theorem", "theorem": tid, "refs": refs}


def _ref(doc: WorkDocument, a: dict, section: str, key: str):
    refs = a.get("refs", {})
    if key not in refs:
        raise DocumentError(f"missing ref {key!r}", "assertion.refs")
    return doc.get(section, refs[key], f"assertion.refs.{key}")


def _refs(doc: WorkDocument, a: dict, section: str, key: str) -> list:
    names = a.get("refs", {}).get(key)
    if not isinstance(names, list):
        raise DocumentError(f"ref {key!r} must be a list", "assertion.refs")
    return [doc.get(section, n, f"assertion.refs.{key}") for n in names]


def _param(a: dict, key: str, default=None):
    return a.get("refs", {}).get(key, default)


def _fmt(nv: NormValue) -> str:
    return str(nv.exact) if nv.exact is not None else f"{nv.value:.12g}"


def _products(a: list[NormValue], b: list[NormValue]) -> list[Fraction]:
    return [x.exact * y.exact for x, y in zip(a, b)]


# TH-NULL ------------------------------------------------------------------

def _gen_null(rng, b):
    space = rand_space(rng)
    left, right = rand_module(rng, space), rand_module(rng, space)
    pairs = [(rand_element(rng, left), rand_element(rng, right)) for _ in range(rng.randint(1, 3))]
    mode = rng.randrange(3)
    if mode == 0:
        pairs += [(v.scaled(-1), w) for v, w in pairs]
    elif mode == 1:
        v = rand_element(rng, left)
        w1, w2 = rand_element(rng, right), rand_element(rng, right)
        pairs = [(v, w1), (v, w2), (v, -(w1 + w2))]
    if rng.random() < 0.5:
        rng.shuffle(pairs)
    return _assertion("TH-NULL", rep=b.representation(Representation(tuple(pairs))))


def _check_null(doc, a):
    rep = _ref(doc, a, "representations", "rep")
    alpha = from_representation(rep)
    by_matrix = all(linalg.is_zero_matrix(m) for m in alpha.matrices)
    by_duals = null_by_dual_pairs(rep)
    return by_matrix == by_duals, f"matrix-zero={by_matrix} dual-pairs={by_duals}"


_register("TH-NULL", "matrix-zero test agrees with the dual-pair criterion", _gen_null, _check_null)


# TH-PI-ELEM / TH-EPS-ELEM ---------------------------------------------------

def _gen_elem(tid):
    def gen(rng, b):
        space = rand_space(rng)
        left, right = rand_module(rng, space), rand_module(rng, space)
        return _assertion(tid, v=b.element(rand_element(rng, left)), w=b.element(rand_element(rng, right)))
    return gen


def _check_elem(flavor):
    def check(doc, a):
        v, w = _ref(doc, a, "elements", "v"), _ref(doc, a, "elements", "w")
        alpha = elementary(v, w)
        got = projective_norm_values(alpha) if flavor == PI else injective_norm_values(alpha)
        want = _products(pointwise_norm_values(v), pointwise_norm_values(w))
        ok = all(g.exact == x for g, x in zip(got, want))
        return ok, f"{flavor}={[_fmt(g) for g in got]} |v||w|={[str(x) for x in want]}"
    return check


_register("TH-PI-ELEM", "projective norm of v(x)w is |v||w|", _gen_elem("TH-PI-ELEM"), _check_elem(PI))
_register("TH-EPS-ELEM", "injective norm of v(x)w is |v||w|", _gen_elem("TH-EPS-ELEM"), _check_elem(EPS))


# TH-SANDWICH ----------------------------------------------------------------

def _gen_sandwich(rng, b):
    space = rand_space(rng)
    dims_l = [rng.randint(1, 3) for _ in space.ids]
    dims_r = [rng.randint(1, 3) for _ in space.ids]
    left = ModuleSpec(space, tuple(fibers.l2(d, [rand_positive(rng) for _ in range(d)]) for d in dims_l))
    right = ModuleSpec(space, tuple(fibers.l2(d, [rand_positive(rng) for _ in range(d)]) for d in dims_r))
    return _assertion("TH-SANDWICH", t=b.tensor(rand_tensor(rng, left, right)))


def _check_sandwich(doc, a):
    alpha = _ref(doc, a, "tensors", "t")
    rep = crossnorm_sandwich_check(alpha)
    # squared HS from the Gram double sum over the coordinate representation
    gram = []
    for l, r, m in zip(alpha.left.fibers, alpha.right.fibers, alpha.matrices):
        terms = [(i, j, x) for i, row in enumerate(m) for j, x in enumerate(row)]
        gram.append(sum((x * y * (l.weights[i] ** 2 if i == i2 else 0) * (r.weights[j] ** 2 if j == j2 else 0)
                         for i, j, x in terms for i2, j2, y in terms), Fraction(0)))
    hs_ok = list(hs_norm_squared(alpha).values) == gram
    detail = "; ".join(f"({_fmt(e)}, {_fmt(h)}, {_fmt(p)})" for e, h, p in rep.rows)
    return rep.ok and hs_ok, f"{detail} hs2-exact={hs_ok}"


_register("TH-SANDWICH", "eps <= HS <= pi on Euclidean fibers", _gen_sandwich, _check_sandwich)


# TH-PI-DUAL -----------------------------------------------------------------

def _gen_pi_dual(rng, b):
    space = rand_space(rng)
    left, right = rand_module(rng, space), rand_module(rng, space)
    return _assertion("TH-PI-DUAL", t=b.tensor(rand_tensor(rng, left, right)))


def check_projective_certificates(alpha: Tensor) -> tuple[bool, str]:
    """LP certificate |B| <= 1 with <B, A> = pi, and the primal decomposition attains pi."""
    ok = True
    details = []
    for pf, l, r, m in zip(projective_fibers(alpha), alpha.left.fibers, alpha.right.fibers, alpha.matrices):
        cert = pf.certificate
        bn = bilinear_fiber_norm(l, r, cert).exact
        paired = sum((x * y for rb, ra in zip(cert, m) for x, y in zip(rb, ra)), Fraction(0))
        total = linalg.zeros(l.dim, r.dim)
        cost = Fraction(0)
        for x, y in pf.decomposition:
            total = [[t + a * c for t, c in zip(row, y)] for row, a in zip(total, x)]
            cost += fibers.norm_eval(l, x).exact * fibers.norm_eval(r, y).exact
        same = [tuple(row) for row in total] == [tuple(row) for row in m]
        atom_ok = bn <= 1 and paired == pf.value.exact and same and cost == pf.value.exact
        ok = ok and atom_ok
        details.append(f"pi={pf.value.exact} |B|={bn} <B,A>={paired}")
    return ok, "; ".join(details)


def _check_pi_dual(doc, a):
    return check_projective_certificates(_ref(doc, a, "tensors", "t"))


_register("TH-PI-DUAL", "LP dual certificate attains the projective norm", _gen_pi_dual, _check_pi_dual)


# TH-HOM-TENSOR --------------------------------------------------------------

def _gen_hom_tensor(rng, b):
    space = rand_space(rng, 2)
    m1, n1 = rand_module(rng, space), rand_module(rng, space)
    m2 = rand_module(rng, space, [rng.randint(1, 2) for _ in space.ids])
    n2 = rand_module(rng, space, [rng.randint(1, 2) for _ in space.ids])
    t, s = rand_hom(rng, m1, m2), rand_hom(rng, n1, n2)
    a = _assertion("TH-HOM-TENSOR", T=b.hom(t), S=b.hom(s), t=b.tensor(rand_tensor(rng, m1, n1)))
    a["refs"]["flavor"] = rng.choice([PI, EPS])
    return a


def _check_hom_tensor(doc, a):
    t, s = _ref(doc, a, "homs", "T"), _ref(doc, a, "homs", "S")
    alpha = _ref(doc, a, "tensors", "t")
    flavor = _param(a, "flavor", PI)
    got = tensor_hom_norm_values(t, s, flavor)
    want = _products(hom_norm_values(t), hom_norm_values(s))
    ok = all(g.exact == x for g, x in zip(got, want))
    norm = projective_norm_values if flavor == PI else injective_norm_values
    image = norm(tensor_of_homs(t, s, alpha, flavor))
    before = norm(alpha)
    bounded = all(i.exact <= x * n.exact for i, x, n in zip(image, want, before))
    return ok and bounded, f"|T(x)S|={[_fmt(g) for g in got]} |T||S|={[str(x) for x in want]} bounded={bounded}"


_register("TH-HOM-TENSOR", "|T (x) S| = |T||S| for pi and eps", _gen_hom_tensor, _check_hom_tensor)


# TH-QUOT-TENSOR-PI ----------------------------------------------------------

def _gen_quot_tensor(rng, b):
    space = rand_space(rng, 2)
    return _assertion("TH-QUOT-TENSOR-PI", T=b.hom(rand_quotient(rng, space)), S=b.hom(rand_quotient(rng, space)))


def _check_quot_tensor(doc, a):
    t, s = _ref(doc, a, "homs", "T"), _ref(doc, a, "homs", "S")
    if not (is_quotient_operator(t).verdict and is_quotient_operator(s).verdict):
        return False, "input operators are not quotient operators"
    rep = projective_quotient_check(t, s)
    return rep.ok, f"preimage norms {[[str(x) for x in v] for v in rep.preimage_norms]}"


_register("TH-QUOT-TENSOR-PI", "T (x)_pi S of quotient operators is a quotient operator",
          _gen_quot_tensor, _check_quot_tensor)


# TH-VV ----------------------------------------------------------------------

def _gen_vv(rng, b):
    space = rand_space(rng)
    n = rng.randint(1, 3)
    left = ModuleSpec(space, tuple(fibers.l1(n, [rand_positive(rng) for _ in range(n)]) for _ in space.ids))
    right = rand_module(rng, space, [rng.randint(1, 2) for _ in space.ids])
    return _assertion("TH-VV", t=b.tensor(rand_tensor(rng, left, right)))


def _check_vv(doc, a):
    rep = vv_iso_check(_ref(doc, a, "tensors", "t"))
    return rep.equal, f"pi={[_fmt(p) for p in rep.projective]} row-sums={[_fmt(s) for s in rep.row_sums]}"


_register("TH-VV", "l1(I) (x)_pi M is l1(I, M)", _gen_vv, _check_vv)


# TH-SPHERE-QUOT -------------------------------------------------------------

def _gen_sphere(rng, b):
    space = rand_space(rng, 2)
    module = rand_module(rng, space)
    gens = []
    per_atom = [list(fibers.primal_vertices(f)) for f in module.fibers]
    if rng.random() < 0.4 and len(per_atom[0]) > 1:
        # leave out one vertex on the first atom: no longer a quotient
        per_atom[0].pop(rng.randrange(len(per_atom[0])))
    count = max(len(v) for v in per_atom)
    for i in range(count):
        coords = []
        for k, verts in enumerate(per_atom):
            x = verts[i % len(verts)]
            coords.append(tuple(x if rng.random() < 0.5 else [-c for c in x]))
        gens.append(Element(module, tuple(coords)))
    return _assertion("TH-SPHERE-QUOT", generators=[b.element(g) for g in gens])


def _check_sphere(doc, a):
    gens = _refs(doc, a, "elements", "generators")
    got = sphere_quotient(gens).verdict
    module = gens[0].module
    # hull of the generators is the ball iff every ball vertex is +-(a generator)
    want = True
    for k, desc in enumerate(module.fibers):
        have = {g.coords[k] for g in gens} | {tuple(-x for x in g.coords[k]) for g in gens}
        want = want and all(v in have for v in fibers.primal_vertices(desc))
    return got == want, f"quotient={got} hull-is-ball={want}"


_register("TH-SPHERE-QUOT", "l1(G) -> M is a quotient iff G exhausts the sphere vertices",
          _gen_sphere, _check_sphere)


# TH-DIAG --------------------------------------------------------------------

def _gen_diag(rng, b):
    space = rand_space(rng)
    fs = [L0Function(space, rand_vector(rng, len(space))) for _ in range(rng.randint(1, 3))]
    return _assertion("TH-DIAG", functions=[b.function(f) for f in fs])


def _check_diag(doc, a):
    tol = Fraction(_param(a, "tol", "1/10000000"))
    rep = diagonal_check(_refs(doc, a, "functions", "functions"), tol)
    return rep.ok, (f"pi={[_fmt(p) for p in rep.projective]} sum={[str(x) for x in rep.expected_pi]} "
                    f"eps={[_fmt(e) for e in rep.injective]} max={[str(x) for x in rep.expected_eps]}")


_register("TH-DIAG", "diagonal tensors in l2(I) (x) l2(I)", _gen_diag, _check_diag)


# TH-UC-EPS ------------------------------------------------------------------

def _gen_uc_eps(rng, b):
    space = rand_space(rng)
    n = rng.randint(1, 3)
    left = uc_module(FiniteSpaceK.of(n), scalar_module(space))
    right = rand_module(rng, space, [rng.randint(1, 2) for _ in space.ids])
    a = _assertion("TH-UC-EPS", t=b.tensor(rand_tensor(rng, left, right)))
    a["refs"]["K"] = n
    return a


def _k_param(a) -> FiniteSpaceK:
    n = _param(a, "K")
    if not isinstance(n, int) or n < 1:
        raise DocumentError("ref 'K' must be a positive integer", "assertion.refs.K")
    return FiniteSpaceK.of(n)


def _check_uc_eps(doc, a):
    rep = inj_tens_uc_check(_ref(doc, a, "tensors", "t"), _k_param(a))
    return rep.equal, f"eps={[_fmt(e) for e in rep.injective]} max-row={[_fmt(m) for m in rep.max_row]}"


_register("TH-UC-EPS", "UC(K) (x)_eps M is UC(K; M)", _gen_uc_eps, _check_uc_eps)


# TH-UC-QUOT -----------------------------------------------------------------

def _gen_uc_quot(rng, b):
    space = rand_space(rng, 2)
    a = _assertion("TH-UC-QUOT", T=b.hom(rand_quotient(rng, space)))
    a["refs"]["K"] = rng.randint(1, 2)
    return a


def _check_uc_quot(doc, a):
    rep = uc_quotient_tensor_check(_ref(doc, a, "homs", "T"), _k_param(a))
    return rep.ok, f"preimage norms {[[str(x) for x in v] for v in rep.preimage_norms]}"


_register("TH-UC-QUOT", "id (x)_eps T is a quotient operator on UC(K)", _gen_uc_quot, _check_uc_quot)


# TH-PULL-PI / TH-PULL-EPS ---------------------------------------------------

def _gen_pull(tid):
    def gen(rng, b):
        target = rand_space(rng, 2, "y")
        source = rand_space(rng, 4, "x")
        phi = AtomMap(source, target, tuple((x, rng.choice(target.ids)) for x in source.ids))
        left, right = rand_module(rng, target), rand_module(rng, target)
        return _assertion(tid, phi=b.atom_map(phi), t=b.tensor(rand_tensor(rng, left, right)))
    return gen


def _check_pull(flavor):
    def check(doc, a):
        rep = pullback_tensor_check(_ref(doc, a, "maps", "phi"), _ref(doc, a, "tensors", "t"), flavor)
        return rep.equal, f"pulled={[_fmt(p) for p in rep.pulled]} composed={[_fmt(c) for c in rep.composed]}"
    return check


_register("TH-PULL-PI", "pi(phi* alpha) = pi(alpha) o phi", _gen_pull("TH-PULL-PI"), _check_pull(PI))
_register("TH-PULL-EPS", "eps(phi* alpha) = eps(alpha) o phi", _gen_pull("TH-PULL-EPS"), _check_pull(EPS))


# TH-HB ----------------------------------------------------------------------

def _gen_hb(rng, b):
    space = rand_space(rng)
    fs = []
    for _ in space.ids:
        d = rand_dim(rng, 1, MAX_DIM)
        fs.append(fibers.l2(d, [rand_positive(rng) for _ in range(d)]) if rng.random() < 0.3
                  else rand_polyhedral(rng, d))
    return _assertion("TH-HB", v=b.element(rand_element(rng, ModuleSpec(space, tuple(fs)), 0.2)))


def _check_hb(doc, a):
    v = _ref(doc, a, "elements", "v")
    omega = hahn_banach_witness(v)
    paired = pairing(omega, v).values
    ok = True
    for k, (nv, p) in enumerate(zip(pointwise_norm_values(v), paired)):
        if nv.exact is not None and isinstance(p, Fraction):
            ok = ok and p == nv.exact
        else:
            ok = ok and abs(float(p) - nv.value) <= 1e-9
    sphere = unit_sphere_member(omega, Fraction(1, 10**9) if not omega.is_exact else 0)
    return ok and sphere, f"omega(v)={[str(p) for p in paired]} |v|={[_fmt(n) for n in pointwise_norm_values(v)]} sphere={sphere}"


_register("TH-HB", "Hahn-Banach witness omega(v) = |v| on the dual sphere", _gen_hb, _check_hb)


# TH-ANNIH -------------------------------------------------------------------

def _gen_annih(rng, b):
    space = rand_space(rng)
    module = rand_module(rng, space)
    bases = []
    for d in module.dims:
        k = rng.randint(0, d)
        while True:
            basis = [rand_vector(rng, d, nonzero=True) for _ in range(k)]
            if not basis or linalg.rank(basis) == k:
                break
        bases.append(tuple(basis))
    return _assertion("TH-ANNIH", V=b.submodule(Submodule(module, tuple(bases))))


def _check_annih(doc, a):
    rep = quotient_dual_check(_ref(doc, a, "submodules", "V"))
    bad = [(w, r, q) for rows in rep.comparisons for w, r, q in rows if r != q]
    return rep.ok, "restriction = quotient norm on all test functionals" if not bad else f"mismatches {bad[:3]}"


_register("TH-ANNIH", "V* is M*/V^perp isometrically", _gen_annih, _check_annih)


# TH-SUM-CAUCHY --------------------------------------------------------------

def _geometric_terms(rng, n_atoms):
    return [{"form": "geometric", "a": str(rand_rational(rng, nonzero=True)),
             "r": str(Fraction(rng.choice([1, -1]) * rng.randint(1, 3), rng.randint(4, 6)))}
            for _ in range(n_atoms)]


def _gen_sum_cauchy(rng, b):
    space = rand_space(rng)
    module = rand_module(rng, space)
    direction = rand_element(rng, module, 0)
    geo = _geometric_terms(rng, len(space))
    mixed = [dict(t) for t in geo]
    flagged = [k for k in range(len(space)) if rng.random() < 0.5] or [0]
    for k in flagged:
        mixed[k] = {"form": "harmonic", "a": str(rand_rational(rng, nonzero=True))}
    a = _assertion("TH-SUM-CAUCHY", F=b.family(module, direction, geo), G=b.family(module, direction, mixed))
    a["refs"]["tol"] = "1/1000000"
    a["refs"]["horizon"] = 16
    return a


def _closed_form(raw_terms, direction: Element) -> Element:
    """sum_{n>=1} a r^n = a r / (1 - r), times the direction."""
    coords = []
    for t, x in zip(raw_terms, direction.coords):
        a, r = Fraction(t["a"]), Fraction(t["r"])
        coords.append(tuple(a * r / (1 - r) * c for c in x))
    return Element(direction.module, tuple(coords))


def _check_sum_cauchy(doc, a):
    fam, mixed = _ref(doc, a, "families", "F"), _ref(doc, a, "families", "G")
    tol = Fraction(_param(a, "tol", "1/1000000"))
    horizon = _param(a, "horizon", 16)
    raw_f = doc.raw["families"][a["refs"]["F"]]
    raw_g = doc.raw["families"][a["refs"]["G"]]
    direction = doc.get("elements", raw_f["direction"])
    result = family_sum(fam, tol)
    expected = _closed_form(raw_f["atoms"], direction)
    close = all(fibers.norm_eval(d, [x - y for x, y in zip(u, w)]).le(tol)
                for d, u, w in zip(fam.module.fibers, result.value.coords, expected.coords))
    verdicts = cauchy_check(mixed, horizon)
    want = {atom: (NOT_SUMMABLE if t["form"] == "harmonic" and d > 0 else SUMMABLE)
            for atom, t, d in zip(mixed.module.space.ids, raw_g["atoms"], mixed.module.dims)}
    try:
        family_sum(mixed, tol)
        refused = False
    except NotSummable:
        refused = any(v == NOT_SUMMABLE for v in want.values())
    ok = close and verdicts == want and refused
    return ok, f"sum-close={close} verdicts={verdicts} expected={want} mixed-sum-refused={refused}"


_register("TH-SUM-CAUCHY", "Cauchy criterion verdicts and certified sums", _gen_sum_cauchy, _check_sum_cauchy)


# TH-SUM-HOM -----------------------------------------------------------------

def _gen_sum_hom(rng, b):
    space = rand_space(rng)
    module = rand_module(rng, space)
    target = rand_module(rng, space, [rng.randint(1, 2) for _ in space.ids])
    fam = b.family(module, rand_element(rng, module, 0), _geometric_terms(rng, len(space)))
    a = _assertion("TH-SUM-HOM", F=fam, T=b.hom(rand_hom(rng, module, target)))
    a["refs"]["tol"] = "1/1000000"
    return a


def _check_sum_hom(doc, a):
    fam, t = _ref(doc, a, "families", "F"), _ref(doc, a, "homs", "T")
    tol = Fraction(_param(a, "tol", "1/1000000"))
    rep = hom_commute_check(fam, t, tol)
    norms = hom_norm_values(t)
    within = all(fibers.norm_eval(d, [x - y for x, y in zip(u, w)]).le(n.exact * tol)
                 for d, u, w, n in zip(t.target.fibers, rep.image_of_sum.coords, rep.sum_of_images.coords, norms))
    return rep.ok and within, f"commutes={rep.ok} within |T|*tol={within}"


_register("TH-SUM-HOM", "T(sum v_i) = sum T(v_i)", _gen_sum_hom, _check_sum_hom)


# TH-CURRY -------------------------------------------------------------------

def _gen_curry(rng, b):
    space = rand_space(rng)
    left, right = rand_module(rng, space), rand_module(rng, space)
    mats = tuple(rand_matrix(rng, dl, dr) for dl, dr in zip(left.dims, right.dims))
    return _assertion("TH-CURRY", b=b.bilinear(BilinearForm(left, right, mats)))


def _check_curry(doc, a):
    bf = _ref(doc, a, "bilinears", "b")
    got = hom_norm_values(curry(bf))
    want = bilinear_norm_values(bf)
    ok = all(g.compare(w) == 0 and g.exact is not None for g, w in zip(got, want))
    return ok, f"|curry(b)|={[_fmt(g) for g in got]} |b|={[_fmt(w) for w in want]}"


_register("TH-CURRY", "B(M, N) is Hom(M; N*) isometrically", _gen_curry, _check_curry)


# ---------------------------------------------------------------------------
# running cases

@dataclass(frozen=True)
class CaseResult:
    index: int
    ok: bool
    detail: str
    document: str  # compact JSON of the case


def case_rng(theorem_id: str, seed: int, index: int) -> random.Random:
    return random.Random(f"{theorem_id}/{seed}/{index}")


TOLERANT = ("TH-DIAG", "TH-SUM-CAUCHY", "TH-SUM-HOM")


def generate_case(theorem_id: str, seed: int, index: int, tol: Fraction | None = None) -> dict:
    """The case document; ``tol`` overrides the tolerance of suites that take one."""
    th = THEOREMS[theorem_id]
    b = DocBuilder()
    assertion = th.generate(case_rng(theorem_id, seed, index), b)
    if tol is not None and theorem_id in TOLERANT:
        assertion["refs"]["tol"] = str(tol)
    assertion["name"] = f"{theorem_id} seed {seed} case {index}"
    b.assertion(assertion)
    return b.raw


def check_theorem_assertion(doc: WorkDocument, a: dict) -> tuple[bool, str]:
    tid = a.get("theorem")
    if tid not in THEOREMS:
        raise DocumentError(f"unknown theorem id {tid!r}", "assertion.theorem")
    try:
        return THEOREMS[tid].check(doc, a)
    except DocumentError:
        raise
    except (L0Error, AssertionError) as e:
        return False, f"{type(e).__name__}: {e}"


def run_case(theorem_id: str, seed: int, index: int, tol: Fraction | None = None) -> CaseResult:
    raw = generate_case(theorem_id, seed, index, tol)
    text = dumps(raw, compact=True)
    doc = document_from_json(json.loads(text))
    ok, detail = check_theorem_assertion(doc, doc.assertions[0])
    return CaseResult(index, ok, detail, text)


def verify(theorem_id: str, seed: int, cases: int, tol: Fraction | None = None) -> list[CaseResult]:
    if theorem_id not in THEOREMS:
        raise KeyError(theorem_id)
    return [run_case(theorem_id, seed, k, tol) for k in range(cases)]
