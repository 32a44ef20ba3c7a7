"""Finite groups presented by composition tables, with 0-based element indices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


class GroupTableError(ValueError):
    """The supplied composition table does not describe a group."""


@dataclass(frozen=True)
class FiniteGroup:
    """Finite group on elements ``0..order-1`` with an explicit composition table.

    Instances are built through :func:`finite_group` or :func:`cyclic_group`,
    which check the group axioms exhaustively.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    label: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"FiniteGroup({self.label or self.order})"


def finite_group(table: Iterable[Iterable[int]], label: str = "") -> FiniteGroup:
    """Validate a composition table and package it as a :class:`FiniteGroup`.

    Associativity, the identity laws and the inverse laws are checked on all
    elements; any violation raises :class:`GroupTableError` naming the
    offending entries.
    """
    rows = tuple(tuple(int(x) for x in row) for row in table)
    n = len(rows)
    if n == 0:
        raise GroupTableError("empty composition table")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise GroupTableError(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise GroupTableError(f"entry {x} in row {i} is out of range")
    identity = None
    for e in range(n):
        if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise GroupTableError("no identity element")
    for a in range(n):
        for b in range(n):
            ab = rows[a][b]
            for c in range(n):
                if rows[ab][c] != rows[a][rows[b][c]]:
                    raise GroupTableError(f"associativity fails at ({a}, {b}, {c})")
    inv = []
    for a in range(n):
        found = [b for b in range(n) if rows[a][b] == identity and rows[b][a] == identity]
        if not found:
            raise GroupTableError(f"element {a} has no inverse")
        inv.append(found[0])
    return FiniteGroup(rows, identity, tuple(inv), label)


def cyclic_group(n: int) -> FiniteGroup:
    """Additive group of the integers mod ``n``; element index equals residue."""
    if n < 1:
        raise ValueError(f"group order must be positive, got {n}")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inv = tuple((-a) % n for a in range(n))
    return FiniteGroup(table, 0, inv, f"Z{n}")


def subgroup_closure(group: FiniteGroup, gens: Iterable[int]) -> frozenset[int]:
    """Smallest subgroup of ``group`` containing ``gens``."""
    members = {group.identity}
    queue = []
    for g in gens:
        if not 0 <= g < group.order:
            raise ValueError(f"generator {g} is not a group element")
        if g not in members:
            members.add(g)
            queue.append(g)
    while queue:
        x = queue.pop()
        candidates = [group.inverse(x)]
        candidates.extend(group.op(x, y) for y in list(members))
        candidates.extend(group.op(y, x) for y in list(members))
        for c in candidates:
            if c not in members:
                members.add(c)
                queue.append(c)
    return frozenset(members)


def group_description(group: FiniteGroup) -> dict:
    """JSON-ready description; cyclic groups are recognized and emitted compactly."""
    n = group.order
    if group.table == cyclic_group(n).table:
        return {"type": "cyclic", "n": n}
    return {"type": "table", "table": [list(row) for row in group.table]}


def is_subgroup(group: FiniteGroup, subset: Iterable[int]) -> bool:
    """True iff ``subset`` contains the identity and is closed under the
    group operation and inverses."""
    members = frozenset(subset)
    if not members <= frozenset(group.elements()):
        raise ValueError("subset contains non-elements")
    if group.identity not in members:
        return False
    for a in members:
        if group.inverse(a) not in members:
            return False
        for b in members:
            if group.op(a, b) not in members:
                return False
    return True
