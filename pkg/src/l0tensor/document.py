"""JSON work documents: parsing, reference resolution and serialization.

A document is one JSON object. Rationals are strings ``"p/q"`` (or ``"p"``),
objects refer to each other by name, and every error carries its location:
line and column for syntax errors, a path such as ``elements.v.coords[1][0]``
for everything else.

Sections (all optional except ``version``)::

    spaces          name -> {"atoms": [[id, weight], ...]}
    norms           name -> norm object
    modules         name -> {"space": S, "fibers": [norm, ...]} or {"space": S, "fiber": norm}
    functions       name -> {"space": S, "values": [q, ...]}
    elements        name -> {"module": M, "coords": [[q, ...], ...]}
    homs            name -> {"source": M, "target": N, "matrices": [...]}
    bilinears       name -> {"left": M, "right": N, "matrices": [...]}
    tensors         name -> {"left": M, "right": N, "matrices": [...]}
    representations name -> {"left": M, "right": N, "pairs": [[v, w], ...]}
    submodules      name -> {"module": M, "bases": [[[q, ...], ...], ...]}
    maps            name -> {"source": X, "target": Y, "pairs": [[x, y], ...]}
    families        name -> {"module": M, "direction": v, "atoms": [term, ...]}
    assertions      [{"name": ..., "check": ..., ...}, ...]

A norm object is a name from ``norms`` or one of
``{"kind": "l1"|"l2"|"linf", "dim": n, "weights": [...]}``,
``{"kind": "poly", "vertices": [...], "dual_vertices": [...]}``,
``{"kind": "hull", "points": [...]}`` (polar computed) and
``{"kind": "block", "p": "l1"|"linf", "blocks": [norm, ...]}``.

A family term gives the coefficient sequence c_n (n >= 1) multiplying the
direction on one atom: ``{"form": "geometric", "a": q, "r": q}`` for a*r^n,
``{"form": "pseries", "a": q, "p": int}`` for a/n^p, ``{"form": "harmonic",
"a": q}`` for a/n (flagged divergent), ``{"form": "finite", "coefficients":
[...]}`` and ``{"form": "zero"}``. Tail bounds are derived from the form
unless a ``"bound"`` object overrides them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import fibers
from .errors import DocumentError, L0Error
from .fibers import NormDescriptor
from .hom import BilinearForm, Homomorphism
from .measure import L0Function, MeasureSpace
from .modules import Element, ModuleSpec, Submodule, pointwise_norm_values
from .pullback import AtomMap
from .rational import format_rational, parse_rational
from .summability import TailBound, scalar_template_family
from .tensor import Representation, Tensor

VERSION = "l0tensor-doc/1"

SECTIONS = ("spaces", "norms", "modules", "functions", "elements", "homs", "bilinears",
            "tensors", "representations", "submodules", "maps", "families")


@dataclass
class WorkDocument:
    raw: dict
    tables: dict[str, dict[str, Any]] = field(default_factory=dict)
    assertions: list[dict] = field(default_factory=list)

    def get(self, section: str, name, where: str = ""):
        table = self.tables.get(section, {})
        if not isinstance(name, str) or name not in table:
            raise DocumentError(f"unresolved reference {name!r} in {section}", where or section)
        return table[name]

    def find(self, name: str):
        """Look a name up in every section; returns (section, object)."""
        hits = [(s, t[name]) for s, t in self.tables.items() if name in t]
        if not hits:
            raise DocumentError(f"unresolved reference {name!r}")
        if len(hits) > 1:
            raise DocumentError(f"ambiguous reference {name!r} (sections {[s for s, _ in hits]})")
        return hits[0]


# ---------------------------------------------------------------------------
# parsing helpers

def read_rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise DocumentError(f"expected a rational string, got {x!r}", where)
    if isinstance(x, int):
        return Fraction(x)
    try:
        return parse_rational(x)
    except ValueError as e:
        raise DocumentError(str(e), where) from None


def read_vector(xs, where: str) -> tuple[Fraction, ...]:
    if not isinstance(xs, list):
        raise DocumentError("expected a list of rationals", where)
    return tuple(read_rational(x, f"{where}[{i}]") for i, x in enumerate(xs))


def read_matrix(rows, where: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(rows, list):
        raise DocumentError("expected a matrix (list of rows)", where)
    return tuple(read_vector(r, f"{where}[{i}]") for i, r in enumerate(rows))


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise DocumentError("expected a list", where)
    return x


def _obj(x, where: str) -> dict:
    if not isinstance(x, dict):
        raise DocumentError("expected an object", where)
    return x


def _field(obj: dict, key: str, where: str):
    if key not in obj:
        raise DocumentError(f"missing field {key!r}", where)
    return obj[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"expected an integer, got {x!r}", where)
    return x


def _wrap(where: str, fn: Callable, *args):
    """Run a constructor, turning its validation errors into located document errors."""
    try:
        return fn(*args)
    except DocumentError:
        raise
    except (L0Error, ValueError, IndexError, KeyError) as e:
        raise DocumentError(str(e), where) from None


# ---------------------------------------------------------------------------
# section readers

def _read_norm(doc: WorkDocument, obj, where: str) -> NormDescriptor:
    if isinstance(obj, str):
        return doc.get("norms", obj, where)
    obj = _obj(obj, where)
    kind = _field(obj, "kind", where)
    if kind in ("l1", "l2", "linf"):
        dim = _int(_field(obj, "dim", where), f"{where}.dim")
        w = read_vector(obj["weights"], f"{where}.weights") if "weights" in obj else None
        return _wrap(where, fibers.lp_norm, kind, dim, w)
    if kind == "poly":
        v = read_matrix(_field(obj, "vertices", where), f"{where}.vertices")
        d = read_matrix(_field(obj, "dual_vertices", where), f"{where}.dual_vertices")
        dim = _int(obj["dim"], f"{where}.dim") if "dim" in obj else None
        return _wrap(where, fibers.polyhedral, v, d, dim)
    if kind == "hull":
        pts = read_matrix(_field(obj, "points", where), f"{where}.points")
        return _wrap(where, fibers.polyhedral_from_points, pts)
    if kind == "block":
        p = _field(obj, "p", where)
        blocks = [_read_norm(doc, b, f"{where}.blocks[{i}]")
                  for i, b in enumerate(_list(_field(obj, "blocks", where), f"{where}.blocks"))]
        return _wrap(where, fibers.block, p, blocks)
    raise DocumentError(f"unknown norm kind {kind!r}", f"{where}.kind")


def _read_space(doc, obj, where):
    atoms = _list(_field(_obj(obj, where), "atoms", where), f"{where}.atoms")
    pairs = []
    for i, a in enumerate(atoms):
        w = f"{where}.atoms[{i}]"
        if not isinstance(a, list) or len(a) != 2 or not isinstance(a[0], str):
            raise DocumentError("expected [atom_id, weight]", w)
        pairs.append((a[0], read_rational(a[1], f"{w}[1]")))
    return _wrap(where, MeasureSpace, tuple(pairs))


def _read_module(doc, obj, where):
    obj = _obj(obj, where)
    space = doc.get("spaces", _field(obj, "space", where), f"{where}.space")
    if "fiber" in obj:
        return _wrap(where, ModuleSpec.constant, space, _read_norm(doc, obj["fiber"], f"{where}.fiber"))
    fs = _list(_field(obj, "fibers", where), f"{where}.fibers")
    return _wrap(where, ModuleSpec, space,
                 tuple(_read_norm(doc, f, f"{where}.fibers[{i}]") for i, f in enumerate(fs)))


def _read_function(doc, obj, where):
    obj = _obj(obj, where)
    space = doc.get("spaces", _field(obj, "space", where), f"{where}.space")
    return _wrap(where, L0Function, space, read_vector(_field(obj, "values", where), f"{where}.values"))


def _read_element(doc, obj, where):
    obj = _obj(obj, where)
    module = doc.get("modules", _field(obj, "module", where), f"{where}.module")
    return _wrap(where, Element, module, read_matrix(_field(obj, "coords", where), f"{where}.coords"))


def _matrices(obj, where):
    mats = _list(_field(obj, "matrices", where), f"{where}.matrices")
    return tuple(read_matrix(m, f"{where}.matrices[{i}]") for i, m in enumerate(mats))


def _read_hom(doc, obj, where):
    obj = _obj(obj, where)
    src = doc.get("modules", _field(obj, "source", where), f"{where}.source")
    tgt = doc.get("modules", _field(obj, "target", where), f"{where}.target")
    return _wrap(where, Homomorphism.of, src, tgt, _matrices(obj, where))


def _two_modules(doc, obj, where):
    left = doc.get("modules", _field(obj, "left", where), f"{where}.left")
    right = doc.get("modules", _field(obj, "right", where), f"{where}.right")
    return left, right


def _read_bilinear(doc, obj, where):
    obj = _obj(obj, where)
    left, right = _two_modules(doc, obj, where)
    return _wrap(where, BilinearForm.of, left, right, _matrices(obj, where))


def _read_tensor(doc, obj, where):
    obj = _obj(obj, where)
    left, right = _two_modules(doc, obj, where)
    return _wrap(where, Tensor.of, left, right, _matrices(obj, where))


def _read_representation(doc, obj, where):
    obj = _obj(obj, where)
    pairs = []
    for i, p in enumerate(_list(_field(obj, "pairs", where), f"{where}.pairs")):
        w = f"{where}.pairs[{i}]"
        if not isinstance(p, list) or len(p) != 2:
            raise DocumentError("expected [left_element, right_element]", w)
        pairs.append((doc.get("elements", p[0], f"{w}[0]"), doc.get("elements", p[1], f"{w}[1]")))
    return _wrap(where, Representation, tuple(pairs))


def _read_submodule(doc, obj, where):
    obj = _obj(obj, where)
    module = doc.get("modules", _field(obj, "module", where), f"{where}.module")
    bases = _list(_field(obj, "bases", where), f"{where}.bases")
    return _wrap(where, Submodule.of, module, [read_matrix(b, f"{where}.bases[{i}]") for i, b in enumerate(bases)])


def _read_map(doc, obj, where):
    obj = _obj(obj, where)
    src = doc.get("spaces", _field(obj, "source", where), f"{where}.source")
    tgt = doc.get("spaces", _field(obj, "target", where), f"{where}.target")
    pairs = _list(_field(obj, "pairs", where), f"{where}.pairs")
    for i, p in enumerate(pairs):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(a, str) for a in p)):
            raise DocumentError("expected [source_atom, target_atom]", f"{where}.pairs[{i}]")
    return _wrap(where, AtomMap, src, tgt, tuple(tuple(p) for p in pairs))


def _upper_rational(nv) -> Fraction:
    if nv.exact is not None:
        return nv.exact
    if nv.squared is not None:
        # rational upper bound on sqrt(squared)
        r = Fraction(math.sqrt(nv.squared)).limit_denominator(10**6) + Fraction(1, 10**6)
        while r * r < nv.squared:
            r += Fraction(1, 10**6)
        return r
    return Fraction(nv.value) + nv.tol


def _read_bound(obj, where) -> TailBound:
    obj = _obj(obj, where)
    kind = _field(obj, "kind", where)
    if kind == "geometric":
        return _wrap(where, TailBound.geometric, read_rational(_field(obj, "c", where), f"{where}.c"),
                     read_rational(_field(obj, "r", where), f"{where}.r"))
    if kind == "pseries":
        return _wrap(where, TailBound.pseries, read_rational(_field(obj, "c", where), f"{where}.c"),
                     _int(_field(obj, "p", where), f"{where}.p"))
    if kind == "finite":
        return _wrap(where, TailBound.finite, _int(_field(obj, "last", where), f"{where}.last"),
                     read_rational(_field(obj, "c", where), f"{where}.c"))
    if kind == "divergent":
        return TailBound.divergent()
    raise DocumentError(f"unknown bound kind {kind!r}", f"{where}.kind")


def family_term(obj, where, scale: Fraction) -> tuple[Callable[[int], Fraction], TailBound]:
    """Coefficient sequence and derived tail bound for one atom.

    ``scale`` is a rational upper bound on the direction's norm at the atom.
    """
    obj = _obj(obj, where)
    form = _field(obj, "form", where)
    if form == "geometric":
        a = read_rational(_field(obj, "a", where), f"{where}.a")
        r = read_rational(_field(obj, "r", where), f"{where}.r")
        if not abs(r) < 1:
            raise DocumentError("geometric ratio must satisfy |r| < 1", f"{where}.r")
        if r == 0 or a == 0:
            return (lambda n: Fraction(0)), TailBound.finite(0, 0)
        q = abs(r)
        bound = TailBound.geometric(abs(a) * scale * q / (1 - q), q)
        return (lambda n: a * r ** n), bound
    if form == "pseries":
        a = read_rational(_field(obj, "a", where), f"{where}.a")
        p = _int(_field(obj, "p", where), f"{where}.p")
        if p < 2:
            raise DocumentError("p-series exponent must be an integer >= 2", f"{where}.p")
        return (lambda n: a / Fraction(n) ** p), TailBound.pseries(abs(a) * scale / (p - 1), p)
    if form == "harmonic":
        a = read_rational(_field(obj, "a", where), f"{where}.a")
        return (lambda n: a / n), TailBound.divergent()
    if form == "finite":
        cs = read_vector(_field(obj, "coefficients", where), f"{where}.coefficients")
        c = sum((abs(x) for x in cs), Fraction(0)) * scale
        return (lambda n: cs[n - 1] if n <= len(cs) else Fraction(0)), TailBound.finite(len(cs), c)
    if form == "zero":
        return (lambda n: Fraction(0)), TailBound.finite(0, 0)
    raise DocumentError(f"unknown family form {form!r}", f"{where}.form")


def _read_family(doc, obj, where):
    obj = _obj(obj, where)
    module = doc.get("modules", _field(obj, "module", where), f"{where}.module")
    direction = doc.get("elements", _field(obj, "direction", where), f"{where}.direction")
    if direction.module != module:
        raise DocumentError("direction is not in the family's module", f"{where}.direction")
    terms = _list(_field(obj, "atoms", where), f"{where}.atoms")
    if len(terms) != len(module.space):
        raise DocumentError(f"expected {len(module.space)} atom terms", f"{where}.atoms")
    scales = [_upper_rational(nv) for nv in pointwise_norm_values(direction)]
    coeffs, bounds = [], []
    for i, (t, s) in enumerate(zip(terms, scales)):
        w = f"{where}.atoms[{i}]"
        c, b = family_term(t, w, s)
        if isinstance(t, dict) and "bound" in t:
            b = _read_bound(t["bound"], f"{w}.bound")
        coeffs.append(c)
        bounds.append(b)
    return _wrap(where, scalar_template_family, module, direction, coeffs, bounds)


_READERS = {
    "spaces": _read_space, "norms": _read_norm, "modules": _read_module,
    "functions": _read_function, "elements": _read_element, "homs": _read_hom,
    "bilinears": _read_bilinear, "tensors": _read_tensor,
    "representations": _read_representation, "submodules": _read_submodule,
    "maps": _read_map, "families": _read_family,
}


def load_document(text: str) -> WorkDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, f"line {e.lineno} column {e.colno}") from None
    return document_from_json(raw)


def document_from_json(raw) -> WorkDocument:
    raw = _obj(raw, "document")
    if raw.get("version") != VERSION:
        raise DocumentError(f"expected version {VERSION!r}, got {raw.get('version')!r}", "version")
    unknown = set(raw) - set(SECTIONS) - {"version", "assertions"}
    if unknown:
        raise DocumentError(f"unknown sections {sorted(unknown)}", "document")
    doc = WorkDocument(raw)
    for section in SECTIONS:
        table = _obj(raw.get(section, {}), section)
        out: dict[str, Any] = {}
        doc.tables[section] = out
        for name, obj in table.items():
            out[name] = _READERS[section](doc, obj, f"{section}.{name}")
    assertions = _list(raw.get("assertions", []), "assertions")
    for i, a in enumerate(assertions):
        a = _obj(a, f"assertions[{i}]")
        _field(a, "check", f"assertions[{i}]")
        doc.assertions.append(a)
    return doc


# ---------------------------------------------------------------------------
# writing

def rat_json(x) -> str:
    return format_rational(x)


def vec_json(v) -> list[str]:
    return [rat_json(x) for x in v]


def mat_json(m) -> list[list[str]]:
    return [vec_json(r) for r in m]


def norm_json(desc: NormDescriptor) -> dict:
    if desc.kind in ("l1", "l2", "linf"):
        out = {"kind": desc.kind, "dim": desc.dim}
        if any(w != 1 for w in desc.weights):
            out["weights"] = vec_json(desc.weights)
        return out
    if desc.kind == "poly":
        return {"kind": "poly", "dim": desc.dim, "vertices": mat_json(desc.vertices),
                "dual_vertices": mat_json(desc.dual_vertices)}
    return {"kind": "block", "p": desc.block_p, "blocks": [norm_json(b) for b in desc.blocks]}


class DocBuilder:
    """Accumulates named objects into a document dict, sharing spaces and modules."""

    def __init__(self):
        self.raw: dict = {"version": VERSION}
        self._names: dict[tuple[str, Any], str] = {}

    def _put(self, section: str, prefix: str, key, value: dict) -> str:
        if (section, key) in self._names:
            return self._names[(section, key)]
        table = self.raw.setdefault(section, {})
        name = f"{prefix}{len(table)}"
        table[name] = value
        self._names[(section, key)] = name
        return name

    def _put_new(self, section: str, prefix: str, value: dict) -> str:
        table = self.raw.setdefault(section, {})
        name = f"{prefix}{len(table)}"
        table[name] = value
        return name

    def space(self, s: MeasureSpace) -> str:
        return self._put("spaces", "X", s, {"atoms": [[a, rat_json(w)] for a, w in s.atoms]})

    def module(self, m: ModuleSpec) -> str:
        return self._put("modules", "M", m, {"space": self.space(m.space),
                                             "fibers": [norm_json(f) for f in m.fibers]})

    def function(self, f: L0Function) -> str:
        return self._put_new("functions", "f", {"space": self.space(f.space), "values": vec_json(f.values)})

    def element(self, v: Element) -> str:
        return self._put_new("elements", "v", {"module": self.module(v.module), "coords": mat_json(v.coords)})

    def hom(self, t: Homomorphism) -> str:
        return self._put_new("homs", "T", {"source": self.module(t.source), "target": self.module(t.target),
                                           "matrices": [mat_json(m) for m in t.matrices]})

    def bilinear(self, b: BilinearForm) -> str:
        return self._put_new("bilinears", "b", {"left": self.module(b.left), "right": self.module(b.right),
                                                "matrices": [mat_json(m) for m in b.matrices]})

    def tensor(self, t: Tensor) -> str:
        return self._put_new("tensors", "t", {"left": self.module(t.left), "right": self.module(t.right),
                                              "matrices": [mat_json(m) for m in t.matrices]})

    def representation(self, rep: Representation) -> str:
        pairs = [[self.element(v), self.element(w)] for v, w in rep.pairs]
        return self._put_new("representations", "r", {"left": self.module(rep.left),
                                                      "right": self.module(rep.right), "pairs": pairs})

    def submodule(self, sub: Submodule) -> str:
        return self._put_new("submodules", "V", {"module": self.module(sub.module),
                                                 "bases": [mat_json(b) for b in sub.bases]})

    def atom_map(self, phi: AtomMap) -> str:
        return self._put_new("maps", "phi", {"source": self.space(phi.source), "target": self.space(phi.target),
                                             "pairs": [list(p) for p in phi.mapping]})

    def family(self, module: ModuleSpec, direction: Element, terms: list[dict]) -> str:
        return self._put_new("families", "F", {"module": self.module(module),
                                               "direction": self.element(direction), "atoms": terms})

    def assertion(self, a: dict):
        self.raw.setdefault("assertions", []).append(a)

    def dumps(self, compact: bool = False) -> str:
        return dumps(self.raw, compact)


def dumps(raw: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return json.dumps(raw, sort_keys=True, indent=1)
