"""Banach L0(X)-modules in fiberwise (local-basis) coordinates.

Over a finite atomic space a finitely generated module is just a choice of
normed fiber per atom, and an element is one coordinate vector per atom.
Atoms with a zero-dimensional fiber lie outside the support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fibers, linalg
from .errors import DimensionMismatch, NotAPartition, SpaceMismatch
from .fibers import NormDescriptor, NormValue
from .measure import L0Function, MeasureSpace
from .rational import to_fraction


@dataclass(frozen=True)
class ModuleSpec:
    space: MeasureSpace
    fibers: tuple[NormDescriptor, ...]

    def __post_init__(self):
        if len(self.fibers) != len(self.space):
            raise DimensionMismatch(
                f"{len(self.fibers)} fibers for {len(self.space)} atoms")

    @classmethod
    def constant(cls, space: MeasureSpace, desc: NormDescriptor) -> "ModuleSpec":
        return cls(space, (desc,) * len(space))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.fibers)

    def dimensional_decomposition(self) -> dict[int, tuple[str, ...]]:
        """Atoms grouped by local dimension."""
        out: dict[int, list[str]] = {}
        for a, f in zip(self.space.ids, self.fibers):
            out.setdefault(f.dim, []).append(a)
        return {n: tuple(ids) for n, ids in sorted(out.items())}

    def zero(self) -> "Element":
        return Element(self, tuple((Fraction(0),) * d for d in self.dims))

    def element(self, coords: Sequence[Sequence]) -> "Element":
        return Element(self, tuple(tuple(c if isinstance(c, float) else to_fraction(c) for c in v)
                                   for v in coords))

    def constant_element(self, vector: Sequence) -> "Element":
        return self.element([vector] * len(self.space))


def scalar_module(space: MeasureSpace) -> ModuleSpec:
    """L0(X) itself: one-dimensional fibers with the absolute value."""
    return ModuleSpec.constant(space, fibers.l1(1))


@dataclass(frozen=True)
class Element:
    module: ModuleSpec
    coords: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.module.fibers):
            raise DimensionMismatch("one coordinate vector per atom is required")
        for v, f in zip(self.coords, self.module.fibers):
            if len(v) != f.dim:
                raise DimensionMismatch(
                    f"coordinate vector of length {len(v)} in a {f.dim}-dimensional fiber")

    def __add__(self, other: "Element") -> "Element":
        _same_module(self, other)
        return Element(self.module, tuple(tuple(a + b for a, b in zip(u, v))
                                          for u, v in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.module, tuple(tuple(-a for a in v) for v in self.coords))

    def scaled(self, c) -> "Element":
        return Element(self.module, tuple(tuple(c * a for a in v) for v in self.coords))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(a, Fraction) for v in self.coords for a in v)


def _same_module(u: Element, v: Element):
    if u.module != v.module:
        raise SpaceMismatch("elements belong to different modules")


@dataclass(frozen=True)
class Submodule:
    module: ModuleSpec
    bases: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if len(self.bases) != len(self.module.space):
            raise DimensionMismatch("one basis per atom is required")
        for basis, f in zip(self.bases, self.module.fibers):
            if any(len(b) != f.dim for b in basis):
                raise DimensionMismatch("basis vector of the wrong length")
            if basis and linalg.rank(basis) != len(basis):
                raise ValueError("submodule basis vectors must be independent")

    @classmethod
    def of(cls, module: ModuleSpec, bases) -> "Submodule":
        return cls(module, tuple(tuple(tuple(map(to_fraction, b)) for b in basis)
                                 for basis in bases))

    def contains(self, v: Element) -> bool:
        _same_module(v, self.module.zero())
        for basis, x in zip(self.bases, v.coords):
            if any(c != 0 for c in x):
                if not basis or linalg.rank(list(basis) + [x]) != len(basis):
                    return False
        return True


def fiber_norm_value(v: Element, k: int) -> NormValue:
    return fibers.norm_eval(v.module.fibers[k], v.coords[k])


def pointwise_norm_values(v: Element) -> list[NormValue]:
    return [fiber_norm_value(v, k) for k in range(len(v.coords))]


def pointwise_norm(v: Element) -> L0Function:
    return L0Function(v.module.space, tuple(nv.scalar() for nv in pointwise_norm_values(v)))


def scalar_action(f: L0Function, v: Element) -> Element:
    if f.space != v.module.space:
        raise SpaceMismatch("function and element live on different spaces")
    return Element(v.module, tuple(tuple(c * a for a in x) for c, x in zip(f.values, v.coords)))


def sgn(v: Element) -> Element:
    """Per atom, the fiber vector divided by its norm (zero where the norm vanishes)."""
    out = []
    for nv, x in zip(pointwise_norm_values(v), v.coords):
        n = nv.scalar()
        out.append(tuple(a / n for a in x) if n != 0 else x)
    return Element(v.module, tuple(out))


def support(module: ModuleSpec) -> frozenset[str]:
    return frozenset(a for a, f in zip(module.space.ids, module.fibers) if f.dim > 0)


def support_indicator(module: ModuleSpec) -> L0Function:
    return L0Function(module.space, tuple(Fraction(int(f.dim > 0)) for f in module.fibers))


def unit_disc_member(v: Element, tol=0) -> bool:
    return all(nv.le(1, tol) for nv in pointwise_norm_values(v))


def unit_sphere_member(v: Element, tol=0) -> bool:
    for nv in pointwise_norm_values(v):
        if nv.exact is not None and tol == 0:
            if nv.exact not in (0, 1):
                return False
        elif not (abs(nv.value) <= float(tol + nv.tol) or abs(nv.value - 1) <= float(tol + nv.tol)):
            return False
    return True


def glue(parts: Sequence[tuple[Sequence[str], Element]]) -> Element:
    """Element equal to each part's element on that part's atoms."""
    if not parts:
        raise NotAPartition("nothing to glue")
    module = parts[0][1].module
    owner: dict[str, Element] = {}
    for atoms, el in parts:
        if el.module != module:
            raise SpaceMismatch("glued elements must share a module")
        for a in atoms:
            module.space.index(a)
            if a in owner:
                raise NotAPartition(f"atom {a!r} appears in two parts")
            owner[a] = el
    missing = [a for a in module.space.ids if a not in owner]
    if missing:
        raise NotAPartition(f"atoms {missing} are not covered")
    return Element(module, tuple(owner[a].coords[k] for k, a in enumerate(module.space.ids)))


def quotient_norm_values(sub: Submodule, w: Element) -> list[NormValue]:
    _same_module(w, sub.module.zero())
    return [fibers.min_norm_over_affine(desc, x, basis)[0]
            for desc, x, basis in zip(sub.module.fibers, w.coords, sub.bases)]


def quotient_norm(sub: Submodule, w: Element) -> L0Function:
    """|w + V| per atom: distance from w to the submodule."""
    return L0Function(sub.module.space, tuple(nv.scalar() for nv in quotient_norm_values(sub, w)))
