"""Pullback modules along maps between finite atomic spaces.

The fiber of phi*M at x is the fiber of M at phi(x), so pulling back copies
descriptors, coordinate vectors and coefficient matrices. Every target atom
has positive mass, hence phi_# m_X << m_Y holds for any total map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import linalg
from .errors import SpaceMismatch
from .fibers import NormValue
from .hom import Homomorphism
from .measure import L0Function, MeasureSpace
from .modules import Element, ModuleSpec
from .tensor import EPS, PI, Tensor, injective_norm_values, projective_norm_values


@dataclass(frozen=True)
class AtomMap:
    source: MeasureSpace
    target: MeasureSpace
    mapping: tuple[tuple[str, str], ...]

    def __post_init__(self):
        src = [a for a, _ in self.mapping]
        if sorted(src) != sorted(self.source.ids) or len(set(src)) != len(src):
            raise ValueError("an atom map must send every source atom exactly once")
        for _, b in self.mapping:
            self.target.index(b)

    @classmethod
    def of(cls, source: MeasureSpace, target: MeasureSpace, mapping: Mapping[str, str] | Sequence) -> "AtomMap":
        d = dict(mapping.items() if isinstance(mapping, Mapping) else mapping)
        ordered = [(a, d[a]) for a in source.ids if a in d]
        return cls(source, target, tuple(ordered + [(a, b) for a, b in d.items() if a not in source.ids]))

    @classmethod
    def identity(cls, space: MeasureSpace) -> "AtomMap":
        return cls(space, space, tuple((a, a) for a in space.ids))

    def __call__(self, atom: str) -> str:
        return dict(self.mapping)[atom]

    def indices(self) -> list[int]:
        """Target index of every source atom, in source order."""
        d = dict(self.mapping)
        return [self.target.index(d[a]) for a in self.source.ids]

    def then(self, psi: "AtomMap") -> "AtomMap":
        """psi after self, X -> Y -> Z."""
        if psi.source != self.target:
            raise SpaceMismatch("maps do not compose")
        return AtomMap(self.source, psi.target, tuple((a, psi(b)) for a, b in self.mapping))


def _check(phi: AtomMap, space: MeasureSpace):
    if space != phi.target:
        raise SpaceMismatch("object does not live over the map's target")


def pullback_function(phi: AtomMap, f: L0Function) -> L0Function:
    """f o phi"""
    _check(phi, f.space)
    return L0Function(phi.source, tuple(f.values[j] for j in phi.indices()))


def pullback_module(phi: AtomMap, module: ModuleSpec) -> ModuleSpec:
    _check(phi, module.space)
    return ModuleSpec(phi.source, tuple(module.fibers[j] for j in phi.indices()))


def pullback_element(phi: AtomMap, v: Element) -> Element:
    return Element(pullback_module(phi, v.module), tuple(v.coords[j] for j in phi.indices()))


def pullback_hom(phi: AtomMap, t: Homomorphism) -> Homomorphism:
    idx = phi.indices()
    return Homomorphism(pullback_module(phi, t.source), pullback_module(phi, t.target),
                        tuple(t.matrices[j] for j in idx))


def pullback_tensor(phi: AtomMap, alpha: Tensor) -> Tensor:
    idx = phi.indices()
    return Tensor(pullback_module(phi, alpha.left), pullback_module(phi, alpha.right),
                  tuple(alpha.matrices[j] for j in idx))


def I_phi(phi: AtomMap, omega: Element) -> Element:
    """I_phi(phi* omega), an element of (phi*M)* for omega in M*.

    The dual of a pulled-back fiber is the pulled-back dual fiber, so in
    coordinates I_phi copies the functional's vectors.
    """
    return pullback_element(phi, omega)


def i_phi_matrices(phi: AtomMap, module: ModuleSpec) -> list:
    """Coordinate matrix of I_phi at each source atom, from (M_phi(x))* to ((phi*M)_x)*."""
    return [linalg.identity(module.fibers[j].dim) for j in phi.indices()]


def i_phi_is_onto(phi: AtomMap, module: ModuleSpec) -> bool:
    return all(linalg.rank(m) == len(m) for m in i_phi_matrices(phi, module) if m)


@dataclass(frozen=True)
class PullbackReport:
    equal: bool
    pulled: tuple[NormValue, ...]   # norm of phi*alpha over X
    composed: tuple[NormValue, ...]  # norm of alpha over Y, composed with phi


def pullback_tensor_check(phi: AtomMap, alpha: Tensor, flavor: str = PI) -> PullbackReport:
    """norm_X(phi*alpha) against norm_Y(alpha) o phi, computed independently."""
    if flavor not in (PI, EPS):
        raise ValueError(f"flavor must be {PI!r} or {EPS!r}")
    norm = projective_norm_values if flavor == PI else injective_norm_values
    pulled = norm(pullback_tensor(phi, alpha))
    base = norm(alpha)
    composed = [base[j] for j in phi.indices()]
    equal = all(_same(p, c) for p, c in zip(pulled, composed))
    return PullbackReport(equal, tuple(pulled), tuple(composed))


def _same(p: NormValue, c: NormValue) -> bool:
    if p.is_exact and c.is_exact:
        return p.compare(c) == 0
    return abs(p.value - c.value) <= float(p.tol + c.tol)
