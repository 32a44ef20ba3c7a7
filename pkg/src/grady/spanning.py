"""Additive closure of finite element sets, shared by rings and modules."""

from __future__ import annotations

from typing import Callable, Iterable, TypeVar

T = TypeVar("T")

DEFAULT_CLOSURE_CAP = 2_000_000


class CapExceeded(RuntimeError):
    """A closure grew past the configured element cap."""

    def __init__(self, cap: int):
        super().__init__(f"closure exceeded the cap of {cap} elements")
        self.cap = cap


def additive_span(
    zero: T,
    add: Callable[[T, T], T],
    atoms: Iterable[T],
    cap: int = DEFAULT_CLOSURE_CAP,
) -> frozenset[T]:
    """All finite sums of the atoms (a subgroup, since every atom has finite
    additive order).

    Atoms are absorbed one at a time; after each step the member set is again
    a subgroup, so the new elements are exactly the fresh cosets of the
    atom's multiples.  Total cost is one addition per final member.
    """
    members: set[T] = {zero}
    for u in atoms:
        if u in members:
            continue
        multiples = []
        ku = u
        while ku not in members:
            multiples.append(ku)
            ku = add(ku, u)
        base = list(members)
        for m in multiples:
            for x in base:
                members.add(add(x, m))
        if len(members) > cap:
            raise CapExceeded(cap)
    return frozenset(members)
