"""Structure-constant backend: finite unital group-graded algebras.

A ring is given by a finite basis, a degree for every basis slot and a sparse
multiplication table over a :class:`~grady.coeff.CoeffRing`.  Elements are
coefficient vectors stored as tuples, so they hash and compare exactly.

Each slot may carry a *scale*: slot ``i`` stands for ``scales[i]`` times an
abstract unit, and stored coefficients are canonical representatives modulo
the annihilator of the scale.  With all scales equal to one the ring is the
free module over its coefficient ring; the matrix fixtures use non-trivial
scales to pin ideal-constrained entries to the ideal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coeff import CoeffRing, Residues, ideal, ideal_identity
from .groups import FiniteGroup, cyclic_group
from .spanning import DEFAULT_CLOSURE_CAP, CapExceeded, additive_span

Vec = tuple  # tuple[Residues, ...], one canonical coefficient per basis slot


class RingBuildError(ValueError):
    """A structure-constant description violates a ring invariant."""


class HomogeneityViolation(RingBuildError):
    def __init__(self, i: int, j: int):
        super().__init__(f"product of basis slots {i} and {j} leaves its graded component")
        self.pair = (i, j)


class AssociativityViolation(RingBuildError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"associativity fails on basis triple ({i}, {j}, {k})")
        self.triple = (i, j, k)


class IdentityViolation(RingBuildError):
    pass


class StructureConstantRing:
    """Finite graded algebra with exhaustive build-time validation."""

    capability = "enumerable"

    def __init__(
        self,
        coeff: CoeffRing,
        group: FiniteGroup,
        degrees: Sequence[int],
        table: dict,
        one: dict,
        names: Sequence[str] | None = None,
        scales: Sequence[Residues] | None = None,
        validate: bool = True,
    ):
        self.coeff = coeff
        self.group = group
        self.degrees = tuple(int(d) for d in degrees)
        self.size = len(self.degrees)
        self.names = tuple(names) if names is not None else tuple(f"b{i}" for i in range(self.size))
        self.scales = tuple(scales) if scales is not None else (coeff.one,) * self.size
        if len(self.names) != self.size or len(self.scales) != self.size:
            raise RingBuildError("names/scales length does not match the basis size")
        for d in self.degrees:
            if not 0 <= d < group.order:
                raise RingBuildError(f"degree {d} is not a group element")
        for s in self.scales:
            if s == coeff.zero:
                raise RingBuildError("slot scales must be nonzero")
        self._canon = tuple(self._canonical_map(s) for s in self.scales)
        self._table: dict[tuple[int, int], tuple[tuple[int, Residues], ...]] = {}
        for (i, j), entry in table.items():
            cleaned = []
            for k, c in sorted(entry.items()):
                ck = self._canon_coeff(k, coeff.element(c))
                if ck != coeff.zero:
                    cleaned.append((k, ck))
            if cleaned:
                self._table[(int(i), int(j))] = tuple(cleaned)
        self._zero = tuple(coeff.zero for _ in range(self.size))
        self.one = self.vec(one)
        self._components: dict[int, tuple[int, ...]] = {}
        for g in group.elements():
            self._components[g] = tuple(i for i in range(self.size) if self.degrees[i] == g)
        self._span_cache: dict[int, frozenset] = {}
        if validate:
            self._validate()

    # -- construction helpers -------------------------------------------------

    def _canonical_map(self, scale: Residues):
        if scale == self.coeff.one:
            return None
        classes: dict[Residues, list[Residues]] = {}
        for c in self.coeff.elements():
            classes.setdefault(self.coeff.mul(c, scale), []).append(c)
        return {c: min(members) for members in classes.values() for c in members}

    def _canon_coeff(self, slot: int, c: Residues) -> Residues:
        canon = self._canon[slot]
        return c if canon is None else canon[c]

    def vec(self, sparse: dict) -> Vec:
        """Vector from a sparse ``{slot: coefficient}`` mapping."""
        out = list(self._zero)
        for k, c in sparse.items():
            k = int(k)
            if not 0 <= k < self.size:
                raise RingBuildError(f"slot {k} out of range")
            out[k] = self._canon_coeff(k, self.coeff.element(c))
        return tuple(out)

    def _validate(self) -> None:
        e = self.group.identity
        for i in range(self.size):
            for j in range(self.size):
                entry = self._table.get((i, j), ())
                target = self.group.op(self.degrees[i], self.degrees[j])
                for k, _ in entry:
                    if self.degrees[k] != target:
                        raise HomogeneityViolation(i, j)
        for k, c in enumerate(self.one):
            if c != self.coeff.zero and self.degrees[k] != e:
                raise IdentityViolation("the identity has support outside the identity degree")
        basis = [self.basis_vec(i) for i in range(self.size)]
        for i, b in enumerate(basis):
            if self.multiply(self.one, b) != b or self.multiply(b, self.one) != b:
                raise IdentityViolation(f"the declared identity does not fix basis slot {i}")
        for i in range(self.size):
            for j in range(self.size):
                ij = self.multiply(basis[i], basis[j])
                for k in range(self.size):
                    left = self.multiply(ij, basis[k])
                    right = self.multiply(basis[i], self.multiply(basis[j], basis[k]))
                    if left != right:
                        raise AssociativityViolation(i, j, k)

    # -- element arithmetic ----------------------------------------------------

    def zero_vec(self) -> Vec:
        return self._zero

    def zero_elem(self) -> Vec:
        return self._zero

    def basis_vec(self, i: int) -> Vec:
        out = list(self._zero)
        out[i] = self._canon_coeff(i, self.coeff.one)
        return tuple(out)

    def add(self, a: Vec, b: Vec) -> Vec:
        cadd = self.coeff.add
        return tuple(
            c if canon is None else canon[c]
            for c, canon in zip(map(cadd, a, b), self._canon)
        )

    def neg(self, a: Vec) -> Vec:
        cneg = self.coeff.neg
        return tuple(
            c if canon is None else canon[c]
            for c, canon in zip(map(cneg, a), self._canon)
        )

    def sub(self, a: Vec, b: Vec) -> Vec:
        return self.add(a, self.neg(b))

    def scale(self, c: Residues, a: Vec) -> Vec:
        cmul = self.coeff.mul
        return tuple(
            x if canon is None else canon[x]
            for x, canon in zip((cmul(c, y) for y in a), self._canon)
        )

    def scale_int(self, k: int, a: Vec) -> Vec:
        return self.scale(self.coeff.from_int(k), a)

    def multiply(self, a: Vec, b: Vec) -> Vec:
        coeff = self.coeff
        zero = coeff.zero
        acc = list(self._zero)
        table = self._table
        for i, ca in enumerate(a):
            if ca == zero:
                continue
            for j, cb in enumerate(b):
                if cb == zero:
                    continue
                entry = table.get((i, j))
                if not entry:
                    continue
                c = coeff.mul(ca, cb)
                if c == zero:
                    continue
                for k, ck in entry:
                    acc[k] = coeff.add(acc[k], coeff.mul(c, ck))
        return tuple(
            c if canon is None else canon[c]
            for c, canon in zip(acc, self._canon)
        )

    def is_zero(self, a: Vec) -> bool:
        return a == self._zero

    # -- backend protocol -------------------------------------------------------

    def component_basis(self, g: int) -> tuple[int, ...]:
        return self._components[g]

    def support(self) -> tuple[int, ...]:
        return tuple(g for g in self.group.elements() if self._components[g])

    def component_generators(self, g: int, max_len: int | None = None) -> tuple[list[Vec], bool]:
        return [self.basis_vec(i) for i in self._components[g]], True

    def one_elem(self) -> Vec:
        return self.one

    def sort_key(self, a: Vec):
        return a

    def component_span(self, g: int, cap: int = DEFAULT_CLOSURE_CAP) -> frozenset:
        """All elements of the graded component ``S_g``."""
        if g not in self._span_cache:
            atoms = [
                self.scale(c, self.basis_vec(i))
                for i in self._components[g]
                for c in self.coeff.elements()
            ]
            atoms = [a for a in atoms if not self.is_zero(a)]
            self._span_cache[g] = additive_span(self._zero, self.add, atoms, cap)
        return self._span_cache[g]

    def product_span(self, gs: Sequence[int], cap: int = DEFAULT_CLOSURE_CAP) -> frozenset:
        """The set ``S_g1 S_g2 ... S_gn`` of finite sums of products taken
        componentwise from the listed degrees."""
        prods = [self.basis_vec(i) for i in self._components[gs[0]]]
        for g in gs[1:]:
            nxt = []
            for p in prods:
                for i in self._components[g]:
                    q = self.multiply(p, self.basis_vec(i))
                    if not self.is_zero(q):
                        nxt.append(q)
            prods = nxt
        atoms = []
        seen = set()
        for p in prods:
            for c in self.coeff.elements():
                a = self.scale(c, p)
                if not self.is_zero(a) and a not in seen:
                    seen.add(a)
                    atoms.append(a)
        return additive_span(self._zero, self.add, atoms, cap)

    def element_span(self, elems: Iterable[Vec], cap: int = DEFAULT_CLOSURE_CAP) -> frozenset:
        """Additive span (with coefficient scaling) of arbitrary elements."""
        atoms = []
        seen = set()
        for x in elems:
            for c in self.coeff.elements():
                a = self.scale(c, x)
                if not self.is_zero(a) and a not in seen:
                    seen.add(a)
                    atoms.append(a)
        return additive_span(self._zero, self.add, atoms, cap)

    # -- rendering / description -------------------------------------------------

    def format_element(self, a: Vec) -> str:
        parts = []
        for i, c in enumerate(a):
            if c == self.coeff.zero:
                continue
            cs = "+".join(str(x) for x in c) if len(c) > 1 else str(c[0])
            parts.append(f"{cs}*{self.names[i]}")
        return " + ".join(parts) if parts else "0"

    def sparse_coeffs(self, a: Vec) -> dict[str, list[int]]:
        return {str(i): list(c) for i, c in enumerate(a) if c != self.coeff.zero}

    def describe(self) -> dict:
        from .groups import group_description

        table = []
        for (i, j), entry in sorted(self._table.items()):
            table.append({"i": i, "j": j, "value": {str(k): list(c) for k, c in entry}})
        return {
            "kind": "structure_constants",
            "group": group_description(self.group),
            "coeff": {"moduli": list(self.coeff.moduli)},
            "basis": list(self.names),
            "degrees": list(self.degrees),
            "scales": [list(s) for s in self.scales],
            "one": self.sparse_coeffs(self.one),
            "table": table,
        }


# -- witnessed module closures -----------------------------------------------


@dataclass
class WitnessedModule:
    """Closure of a generating set, with a reconstruction witness per member.

    ``atom_witness`` covers the unary closure (scalings and one-sided
    multiplications of generators); ``member_witness`` covers the additive
    layer, where every member is an earlier member plus a multiple of an
    atom.  ``tags`` carry caller data (for factorizations: the (u, v) pair
    whose product each generator is).
    """

    ring: StructureConstantRing
    gens: tuple[Vec, ...]
    tags: tuple | None
    atom_witness: dict
    member_witness: dict
    members: frozenset


def module_closure(
    ring: StructureConstantRing,
    gens: Sequence[Vec],
    tags: Sequence | None = None,
    left: bool = False,
    right: bool = False,
    cap: int = DEFAULT_CLOSURE_CAP,
) -> WitnessedModule:
    """Smallest set containing ``gens`` that is closed under addition,
    coefficient scaling and (optionally) one-sided multiplication by the
    principal component.  Raises :class:`CapExceeded` past ``cap``."""
    coeff = ring.coeff
    zero = ring.zero_vec()
    gens = tuple(gens)
    if tags is not None and len(tags) != len(gens):
        raise ValueError("tags must parallel gens")
    atom_witness: dict[Vec, tuple] = {}
    queue: deque[Vec] = deque()
    for idx, g in enumerate(gens):
        if ring.is_zero(g) or g in atom_witness:
            continue
        atom_witness[g] = ("gen", idx)
        queue.append(g)
    rbasis = []
    if left or right:
        rbasis = [ring.basis_vec(i) for i in ring.component_basis(ring.group.identity)]
    scalars = [c for c in coeff.elements() if c not in (coeff.zero, coeff.one)]
    while queue:
        x = queue.popleft()
        moves = [(ring.scale(c, x), ("scale", c, x)) for c in scalars]
        if left:
            moves.extend((ring.multiply(r, x), ("lmul", r, x)) for r in rbasis)
        if right:
            moves.extend((ring.multiply(x, r), ("rmul", x, r)) for r in rbasis)
        for y, node in moves:
            if ring.is_zero(y) or y in atom_witness:
                continue
            atom_witness[y] = node
            queue.append(y)
            if len(atom_witness) > cap:
                raise CapExceeded(cap)
    member_witness: dict[Vec, tuple] = {zero: ("zero",)}
    for u in atom_witness:
        if u in member_witness:
            continue
        multiples = []
        k, ku = 1, u
        while ku not in member_witness:
            multiples.append((k, ku))
            k += 1
            ku = ring.add(ku, u)
        base = list(member_witness.keys())
        for k, m in multiples:
            for x in base:
                member_witness[ring.add(x, m)] = ("addmul", x, k, u)
        if len(member_witness) > cap:
            raise CapExceeded(cap)
    return WitnessedModule(
        ring,
        gens,
        tuple(tags) if tags is not None else None,
        atom_witness,
        member_witness,
        frozenset(member_witness),
    )


def module_equal(a: WitnessedModule | frozenset, b: WitnessedModule | frozenset) -> bool:
    """Set equality of the member sets."""
    sa = a.members if isinstance(a, WitnessedModule) else a
    sb = b.members if isinstance(b, WitnessedModule) else b
    return sa == sb


def evaluate_witnesses(wm: WitnessedModule) -> None:
    """Re-evaluate every stored witness and assert it reproduces its member."""
    ring = wm.ring
    atom_value: dict[Vec, Vec] = {}
    for v, node in wm.atom_witness.items():
        kind = node[0]
        if kind == "gen":
            val = wm.gens[node[1]]
        elif kind == "scale":
            val = ring.scale(node[1], atom_value[node[2]])
        elif kind == "lmul":
            val = ring.multiply(node[1], atom_value[node[2]])
        else:
            val = ring.multiply(atom_value[node[1]], node[2])
        atom_value[v] = val
        if val != v:
            raise AssertionError("atom witness does not reproduce its element")
    member_value: dict[Vec, Vec] = {}
    for v, node in wm.member_witness.items():
        if node[0] == "zero":
            val = ring.zero_vec()
        else:
            _, base, k, atom = node
            val = ring.add(member_value[base], ring.scale_int(k, atom_value[atom]))
        member_value[v] = val
        if val != v:
            raise AssertionError("member witness does not reproduce its element")


def factorization_pairs(wm: WitnessedModule, member: Vec) -> tuple[tuple[Vec, Vec], ...]:
    """Express ``member`` as a sum of two-sided products of the tagged
    generator factors: returns pairs (u, v) with sum(u*v) == member."""
    if wm.tags is None:
        raise ValueError("closure was built without factor tags")
    ring = wm.ring
    atom_pairs: dict[Vec, list] = {}
    for v, node in wm.atom_witness.items():
        kind = node[0]
        if kind == "gen":
            pairs = [wm.tags[node[1]]]
        elif kind == "scale":
            pairs = [(ring.scale(node[1], u), w) for u, w in atom_pairs[node[2]]]
        elif kind == "lmul":
            pairs = [(ring.multiply(node[1], u), w) for u, w in atom_pairs[node[2]]]
        else:
            pairs = [(u, ring.multiply(w, node[2])) for u, w in atom_pairs[node[1]]]
        atom_pairs[v] = pairs
    chain = []
    node = wm.member_witness[member]
    while node[0] != "zero":
        _, base, k, atom = node
        chain.append((k, atom))
        node = wm.member_witness[base]
    out = []
    for k, atom in reversed(chain):
        for u, w in atom_pairs[atom]:
            su = wm.ring.scale_int(k, u)
            if not ring.is_zero(su) and not ring.is_zero(w):
                out.append((su, w))
    return tuple(out)


def find_identity(wm: WitnessedModule) -> Vec | None:
    """The two-sided multiplicative identity of the member set, if any.

    Candidates are filtered against the generators first, then verified
    against the full unary closure, which spans the member set additively.
    """
    ring = wm.ring
    if ring.one in wm.members:
        return ring.one
    gens = [g for g in wm.gens if not ring.is_zero(g)]
    survivors = []
    for u in wm.members:
        if ring.is_zero(u):
            continue
        if all(ring.multiply(u, g) == g and ring.multiply(g, u) == g for g in gens):
            survivors.append(u)
    verified = [
        u
        for u in survivors
        if all(
            ring.multiply(u, a) == a and ring.multiply(a, u) == a
            for a in wm.atom_witness
        )
    ]
    if not verified:
        return None
    if len(verified) > 1:
        raise AssertionError("member set has several two-sided identities")
    return verified[0]


# -- fixtures ------------------------------------------------------------------


def trivial_fixture(coeff: CoeffRing, group: FiniteGroup) -> StructureConstantRing:
    """The coefficient ring graded trivially: everything in the identity degree."""
    return StructureConstantRing(
        coeff,
        group,
        degrees=[group.identity],
        table={(0, 0): {0: coeff.one}},
        one={0: coeff.one},
        names=["1"],
    )


def group_ring_fixture(coeff: CoeffRing, group: FiniteGroup) -> StructureConstantRing:
    """The group ring with its canonical grading: one basis slot per group
    element, in its own degree."""
    table = {
        (a, b): {group.op(a, b): coeff.one}
        for a in group.elements()
        for b in group.elements()
    }
    return StructureConstantRing(
        coeff,
        group,
        degrees=list(group.elements()),
        table=table,
        one={group.identity: coeff.one},
        names=[f"u{g}" for g in group.elements()],
    )


_BLOCK_POSITIONS = ((1, 1), (1, 2), (2, 1), (2, 2), (3, 3))


def triangular_matrix_fixture(coeff: CoeffRing, ideal_gens: Sequence[Residues]) -> StructureConstantRing:
    """3x3 matrix ring whose corner entries are pinned to a unital ideal.

    Positions follow the block pattern: the 2x2 top-left block and the (3,3)
    entry hold arbitrary coefficients (degree 0); the remaining positions
    hold ideal entries only (degree 1).  The ideal must have an identity
    different from the ring identity.
    """
    B = ideal(coeff, ideal_gens)
    u = ideal_identity(B)
    if u is None:
        raise ValueError("the ideal has no identity element")
    if u == coeff.one:
        raise ValueError("the ideal identity equals the ring identity")
    positions = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]
    index = {p: n for n, p in enumerate(positions)}
    degrees = [0 if p in _BLOCK_POSITIONS else 1 for p in positions]
    scales = [coeff.one if p in _BLOCK_POSITIONS else u for p in positions]
    names = [f"E{i}{j}" if (i, j) in _BLOCK_POSITIONS else f"E{i}{j}b" for (i, j) in positions]
    table: dict[tuple[int, int], dict[int, Residues]] = {}
    for (a, b) in positions:
        for (c, d) in positions:
            if b != c:
                continue
            value = coeff.mul(scales[index[(a, b)]], scales[index[(c, d)]])
            slot = index[(a, d)]
            # divide the matrix value by the target slot's scale
            quot = next(
                q for q in coeff.elements() if coeff.mul(q, scales[slot]) == value
            )
            table[(index[(a, b)], index[(c, d)])] = {slot: quot}
    one = {index[(i, i)]: coeff.one for i in (1, 2, 3)}
    return StructureConstantRing(
        coeff,
        cyclic_group(2),
        degrees=degrees,
        table=table,
        one=one,
        names=names,
        scales=scales,
    )


def dade6_fixture() -> StructureConstantRing:
    """The triangular matrix fixture over Z/6 with the ideal generated by 2."""
    c6 = CoeffRing((6,))
    return triangular_matrix_fixture(c6, [(2,)])


def nonsymmetric_fixture() -> StructureConstantRing:
    """Two-slot ring over Z/4 whose degree-1 component squares to zero.

    The component S_1 is nonzero but S_1*S_1 = 0, so the grading is not
    symmetric and no epsilon element can serve S_1.
    """
    c4 = CoeffRing((4,))
    return StructureConstantRing(
        c4,
        cyclic_group(2),
        degrees=[0, 1],
        table={
            (0, 0): {0: c4.one},
            (0, 1): {1: c4.one},
            (1, 0): {1: c4.one},
        },
        one={0: c4.one},
        names=["e", "n"],
    )
