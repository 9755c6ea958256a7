"""Finite atomic measure spaces and the ring L0(X) of per-atom functions.

A measure space is an ordered list of atoms with positive rational masses.
Functions on it are stored as one value per atom; ring and lattice
operations are componentwise. The distance uses the normalized measure
(total mass 1) as auxiliary probability, so it stays rational.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SpaceMismatch
from .rational import to_fraction


@dataclass(frozen=True)
class MeasureSpace:
    atoms: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("a measure space needs at least one atom")
        ids = [a for a, _ in self.atoms]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate atom ids in {ids}")
        for a, w in self.atoms:
            if w <= 0:
                raise ValueError(f"atom {a!r} has non-positive weight {w}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, object]]) -> "MeasureSpace":
        return cls(tuple((str(a), to_fraction(w)) for a, w in pairs))

    @classmethod
    def uniform(cls, n: int, prefix: str = "x") -> "MeasureSpace":
        return cls(tuple((f"{prefix}{k}", Fraction(1)) for k in range(n)))

    def __len__(self):
        return len(self.atoms)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.atoms)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for _, w in self.atoms)

    @property
    def total_mass(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def probability_weights(self) -> tuple[Fraction, ...]:
        total = self.total_mass
        return tuple(w / total for w in self.weights)

    def index(self, atom_id: str) -> int:
        try:
            return self.ids.index(atom_id)
        except ValueError:
            raise KeyError(f"unknown atom {atom_id!r}") from None

    def restrict(self, atom_subset: Iterable[str]) -> "MeasureSpace":
        keep = set(atom_subset)
        for a in keep:
            self.index(a)
        return MeasureSpace(tuple(p for p in self.atoms if p[0] in keep))

    def zero(self) -> "L0Function":
        return L0Function(self, (Fraction(0),) * len(self))

    def constant(self, c) -> "L0Function":
        return L0Function(self, (to_fraction(c),) * len(self))


@dataclass(frozen=True)
class L0Function:
    """One value per atom.

    Values are Fractions except where a norm is genuinely irrational (square
    roots of Euclidean quantities); those entries are floats.
    """

    space: MeasureSpace
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.space):
            raise ValueError(
                f"{len(self.values)} values for {len(self.space)} atoms")

    @classmethod
    def of(cls, space: MeasureSpace, values: Sequence) -> "L0Function":
        return cls(space, tuple(v if isinstance(v, float) else to_fraction(v)
                                for v in values))

    def __getitem__(self, atom_id: str):
        return self.values[self.space.index(atom_id)]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def __add__(self, other):
        return l0_combine(self, other, "add")

    def __sub__(self, other):
        return l0_combine(self, other, "sub")

    def __mul__(self, other):
        return l0_combine(self, other, "mul")

    def __neg__(self):
        return L0Function(self.space, tuple(-v for v in self.values))

    def __abs__(self):
        return L0Function(self.space, tuple(abs(v) for v in self.values))

    def le(self, other: "L0Function", tol=0) -> bool:
        _same_space(self, other)
        return all(a <= b + tol for a, b in zip(self.values, other.values))

    def close_to(self, other: "L0Function", tol) -> bool:
        _same_space(self, other)
        return all(abs(a - b) <= tol for a, b in zip(self.values, other.values))


_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "min": min,
    "max": max,
}


def _same_space(f: L0Function, g: L0Function):
    if f.space != g.space:
        raise SpaceMismatch("functions live on different measure spaces")


def l0_combine(f: L0Function, g: L0Function, op: str) -> L0Function:
    _same_space(f, g)
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return L0Function(f.space, tuple(fn(a, b) for a, b in zip(f.values, g.values)))


def l0_distance(f: L0Function, g: L0Function):
    """Sum over atoms of normalized mass times min(|f - g|, 1)."""
    _same_space(f, g)
    return sum((w * min(abs(a - b), 1)
                for w, a, b in zip(f.space.probability_weights, f.values, g.values)),
               Fraction(0))


def indicator(space: MeasureSpace, atom_subset: Iterable[str]) -> L0Function:
    chosen = set(atom_subset)
    for a in chosen:
        space.index(a)
    return L0Function(space, tuple(Fraction(int(a in chosen)) for a in space.ids))


def sup(functions: Sequence[L0Function]) -> L0Function:
    """Order supremum of a finite nonempty family (per-atom max)."""
    out = functions[0]
    for f in functions[1:]:
        out = l0_combine(out, f, "max")
    return out


def inf(functions: Sequence[L0Function]) -> L0Function:
    out = functions[0]
    for f in functions[1:]:
        out = l0_combine(out, f, "min")
    return out
