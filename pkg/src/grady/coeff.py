"""Finite commutative coefficient rings (products of Z/m) and their ideals.

Every coefficient element is a tuple of residues, one per modulus, so all
arithmetic is exact and elements are hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

Residues = tuple[int, ...]


@dataclass(frozen=True)
class CoeffRing:
    """Product of the rings Z/m for the given moduli (each at least 2)."""

    moduli: tuple[int, ...]

    @property
    def zero(self) -> Residues:
        return (0,) * len(self.moduli)

    @property
    def one(self) -> Residues:
        return (1,) * len(self.moduli)

    @property
    def size(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n

    def element(self, values: Iterable[int]) -> Residues:
        vals = tuple(int(v) for v in values)
        if len(vals) != len(self.moduli):
            raise ValueError(f"expected {len(self.moduli)} residues, got {len(vals)}")
        return tuple(v % m for v, m in zip(vals, self.moduli))

    def from_int(self, k: int) -> Residues:
        return tuple(k % m for m in self.moduli)

    def add(self, a: Residues, b: Residues) -> Residues:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def sub(self, a: Residues, b: Residues) -> Residues:
        return tuple((x - y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Residues) -> Residues:
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def mul(self, a: Residues, b: Residues) -> Residues:
        return tuple((x * y) % m for x, y, m in zip(a, b, self.moduli))

    def elements(self) -> list[Residues]:
        return list(product(*[range(m) for m in self.moduli]))


def coeff_ring(moduli: Iterable[int]) -> CoeffRing:
    """Validate moduli and build the product ring."""
    mods = tuple(int(m) for m in moduli)
    if not mods:
        raise ValueError("at least one modulus is required")
    for m in mods:
        if m < 2:
            raise ValueError(f"modulus must be at least 2, got {m}")
    return CoeffRing(mods)


@dataclass(frozen=True)
class Ideal:
    """An ideal of a coefficient ring, stored as its full member set."""

    ring: CoeffRing
    members: frozenset[Residues]


def ideal(ring: CoeffRing, gens: Iterable[Residues]) -> Ideal:
    """Ideal generated by ``gens``: closure under addition and multiplication
    by every ring element."""
    base = {ring.zero}
    for g in gens:
        gg = ring.element(g)
        for r in ring.elements():
            base.add(ring.mul(gg, r))
    members = set(base)
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in base:
                s = ring.add(a, b)
                if s not in members:
                    members.add(s)
                    changed = True
    return Ideal(ring, frozenset(members))


def ideal_identity(I: Ideal) -> Residues | None:
    """The unique element acting as a multiplicative identity on the ideal,
    or None when the ideal is not unital."""
    ring = I.ring
    found = [u for u in sorted(I.members) if all(ring.mul(u, x) == x for x in I.members)]
    if not found:
        return None
    if len(found) > 1:
        raise AssertionError(f"ideal has several identities: {found}")
    return found[0]
