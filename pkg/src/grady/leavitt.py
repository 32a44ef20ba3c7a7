"""Leavitt path algebra backend for finite graphs with finite-group gradings.

Elements are finite coefficient combinations of monomials ``alpha * beta^*``
(a real path followed by a reversed ghost path ending at the same vertex).
Products are rewritten to a canonical basis: ghost-real contractions happen
during monomial composition, and for every non-sink vertex the designated
*special* edge (least edge id among its out-edges) orients the relation
``v = sum of f f*`` into a terminating rewrite of special trailing pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .coeff import CoeffRing, Residues
from .groups import FiniteGroup, group_description
from .spanning import CapExceeded

_PATH_ENUM_CAP = 500_000


class GraphError(ValueError):
    """The graph description is malformed."""


class UnverifiedSearch(RuntimeError):
    """A bounded search ended without a verdict; not a proof of absence."""


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (id, source, range)


def directed_graph(vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> DirectedGraph:
    verts = tuple(str(v) for v in vertices)
    if len(set(verts)) != len(verts):
        raise GraphError("duplicate vertex ids")
    vset = set(verts)
    out = []
    seen = set()
    for eid, src, dst in edges:
        eid, src, dst = str(eid), str(src), str(dst)
        if eid in seen:
            raise GraphError(f"duplicate edge id {eid!r}")
        seen.add(eid)
        if src not in vset or dst not in vset:
            raise GraphError(f"edge {eid!r} references unknown vertices")
        out.append((eid, src, dst))
    return DirectedGraph(verts, tuple(out))


class Monomial(NamedTuple):
    """A word ``alpha * beta^*``; both paths end at ``pivot``."""

    alpha: tuple[str, ...]
    beta: tuple[str, ...]
    pivot: str


def monomial_key(m: Monomial):
    return (len(m.alpha) + len(m.beta), m.alpha, m.beta, m.pivot)


@dataclass(frozen=True)
class LpaElement:
    """Canonical-form element: sorted nonzero terms over canonical monomials."""

    terms: tuple[tuple[Monomial, Residues], ...]

    def __bool__(self) -> bool:
        return bool(self.terms)


class LeavittPathAlgebra:
    """Leavitt path algebra of a finite graph with an edge-weight grading."""

    capability = "identity-witness"

    def __init__(
        self,
        graph: DirectedGraph,
        group: FiniteGroup,
        weights: dict[str, int],
        coeff: CoeffRing,
    ):
        self.graph = graph
        self.group = group
        self.coeff = coeff
        self.vertices = tuple(sorted(graph.vertices))
        self.edge_ids = tuple(sorted(e[0] for e in graph.edges))
        self.src = {e[0]: e[1] for e in graph.edges}
        self.dst = {e[0]: e[2] for e in graph.edges}
        self.weight = {}
        for eid in self.edge_ids:
            if eid not in weights:
                raise GraphError(f"edge {eid!r} has no weight")
            w = int(weights[eid])
            if not 0 <= w < group.order:
                raise GraphError(f"weight of edge {eid!r} is not a group element")
            self.weight[eid] = w
        self.out_edges = {v: tuple(e for e in self.edge_ids if self.src[e] == v) for v in self.vertices}
        # the special edge orients the rewrite at each regular vertex
        self.special = {v: out[0] for v, out in self.out_edges.items() if out}
        self.acyclic, self.longest_path = self._cycle_analysis()
        self._degree_table: dict[tuple[str, str], frozenset[int]] | None = None
        self._paths_cache: dict[int, list[tuple[str, tuple[str, ...], str, int]]] = {}
        self._mono_mul_cache: dict[tuple[Monomial, Monomial], dict[Monomial, Residues]] = {}

    # -- graph analysis ---------------------------------------------------------

    def _cycle_analysis(self) -> tuple[bool, int]:
        color = {v: 0 for v in self.vertices}
        acyclic = True

        def visit(v: str) -> None:
            nonlocal acyclic
            color[v] = 1
            for e in self.out_edges[v]:
                w = self.dst[e]
                if color[w] == 1:
                    acyclic = False
                elif color[w] == 0:
                    visit(w)
            color[v] = 2

        for v in self.vertices:
            if color[v] == 0:
                visit(v)
        if not acyclic:
            return False, -1
        depth: dict[str, int] = {}

        def longest_from(v: str) -> int:
            if v not in depth:
                depth[v] = 0
                depth[v] = max(
                    (1 + longest_from(self.dst[e]) for e in self.out_edges[v]),
                    default=0,
                )
            return depth[v]

        return True, max((longest_from(v) for v in self.vertices), default=0)

    # -- paths and degrees --------------------------------------------------------

    def path_weight(self, edges: Sequence[str]) -> int:
        w = self.group.identity
        for e in edges:
            w = self.group.op(w, self.weight[e])
        return w

    def path_degree_table(self) -> dict[tuple[str, str], frozenset[int]]:
        """P(v, w): degrees of all finite paths from v to w (least fixpoint)."""
        if self._degree_table is not None:
            return self._degree_table
        table: dict[tuple[str, str], set[int]] = {}
        for v in self.vertices:
            table.setdefault((v, v), set()).add(self.group.identity)
        changed = True
        while changed:
            changed = False
            for e in self.edge_ids:
                s, t, w = self.src[e], self.dst[e], self.weight[e]
                for (a, b), degs in list(table.items()):
                    if a != t:
                        continue
                    dest = table.setdefault((s, b), set())
                    for d in list(degs):
                        nd = self.group.op(w, d)
                        if nd not in dest:
                            dest.add(nd)
                            changed = True
        self._degree_table = {k: frozenset(v) for k, v in table.items()}
        return self._degree_table

    def component_support(self, g: int) -> tuple[str, ...]:
        """Vertices emitting at least one monomial of degree g."""
        table = self.path_degree_table()
        into: dict[str, set[int]] = {v: set() for v in self.vertices}
        for (_, w), degs in table.items():
            into[w].update(degs)
        out = []
        for v in self.vertices:
            hit = False
            for (a, w), degs in table.items():
                if a != v:
                    continue
                for d1 in degs:
                    for d2 in into[w]:
                        if self.group.op(d1, self.group.inverse(d2)) == g:
                            hit = True
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit:
                out.append(v)
        return tuple(out)

    def support(self) -> tuple[int, ...]:
        return tuple(g for g in self.group.elements() if self.component_support(g))

    def _paths_up_to(self, bound: int) -> list[tuple[str, tuple[str, ...], str, int]]:
        """All paths of length <= bound as (start, edges, end, weight)."""
        if bound in self._paths_cache:
            return self._paths_cache[bound]
        paths = []
        for v in self.vertices:
            queue: deque[tuple[tuple[str, ...], str]] = deque([((), v)])
            while queue:
                edges, end = queue.popleft()
                paths.append((v, edges, end, self.path_weight(edges)))
                if len(paths) > _PATH_ENUM_CAP:
                    raise CapExceeded(_PATH_ENUM_CAP)
                if len(edges) < bound:
                    for e in self.out_edges[end]:
                        queue.append((edges + (e,), self.dst[e]))
        self._paths_cache[bound] = paths
        return paths

    # -- monomials ------------------------------------------------------------------

    def mono_source(self, m: Monomial) -> str:
        return self.src[m.alpha[0]] if m.alpha else m.pivot

    def mono_ghost_source(self, m: Monomial) -> str:
        return self.src[m.beta[0]] if m.beta else m.pivot

    def degree_of(self, m: Monomial) -> int:
        return self.group.op(
            self.path_weight(m.alpha), self.group.inverse(self.path_weight(m.beta))
        )

    def star(self, m: Monomial) -> Monomial:
        return Monomial(m.beta, m.alpha, m.pivot)

    def _is_canonical(self, m: Monomial) -> bool:
        if not m.alpha or not m.beta:
            return True
        last = m.alpha[-1]
        if last != m.beta[-1]:
            return True
        return self.special.get(self.src[last]) != last

    def _normalize_terms(self, terms: dict[Monomial, Residues]) -> dict[Monomial, Residues]:
        zero = self.coeff.zero
        todo = deque(terms.keys())
        while todo:
            m = todo.popleft()
            c = terms.get(m)
            if c is None or c == zero or self._is_canonical(m):
                continue
            del terms[m]
            sigma = m.alpha[-1]
            v = self.src[sigma]
            contracted = Monomial(m.alpha[:-1], m.beta[:-1], v)
            nc = self.coeff.add(terms.get(contracted, zero), c)
            terms[contracted] = nc
            todo.append(contracted)
            for f in self.out_edges[v]:
                if f == sigma:
                    continue
                expanded = Monomial(m.alpha[:-1] + (f,), m.beta[:-1] + (f,), self.dst[f])
                terms[expanded] = self.coeff.sub(terms.get(expanded, zero), c)
        return {m: c for m, c in terms.items() if c != zero}

    def mono_mul(self, m1: Monomial, m2: Monomial) -> dict[Monomial, Residues]:
        """Product of two monomials in canonical form."""
        key = (m1, m2)
        cached = self._mono_mul_cache.get(key)
        if cached is not None:
            return cached
        b1, a2 = m1.beta, m2.alpha
        j1 = self.src[b1[0]] if b1 else m1.pivot
        j2 = self.src[a2[0]] if a2 else m2.pivot
        result: dict[Monomial, Residues] = {}
        if j1 == j2:
            if len(b1) <= len(a2) and a2[: len(b1)] == b1:
                raw = Monomial(m1.alpha + a2[len(b1):], m2.beta, m2.pivot)
            elif b1[: len(a2)] == a2:
                raw = Monomial(m1.alpha, m2.beta + b1[len(a2):], m1.pivot)
            else:
                raw = None
            if raw is not None:
                result = self._normalize_terms({raw: self.coeff.one})
        self._mono_mul_cache[key] = result
        return result

    # -- elements ---------------------------------------------------------------------

    def element(self, terms: dict[Monomial, Residues]) -> LpaElement:
        clean = [(m, c) for m, c in terms.items() if c != self.coeff.zero]
        clean.sort(key=lambda t: monomial_key(t[0]))
        return LpaElement(tuple(clean))

    def zero_elem(self) -> LpaElement:
        return LpaElement(())

    def vertex(self, v: str) -> LpaElement:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return self.element({Monomial((), (), v): self.coeff.one})

    def edge(self, e: str) -> LpaElement:
        return self.element({Monomial((e,), (), self.dst[e]): self.coeff.one})

    def ghost(self, e: str) -> LpaElement:
        return self.element({Monomial((), (e,), self.dst[e]): self.coeff.one})

    def one_elem(self) -> LpaElement:
        return self.element({Monomial((), (), v): self.coeff.one for v in self.vertices})

    def monomial_element(self, m: Monomial, c: Residues | None = None) -> LpaElement:
        return self.element(self._normalize_terms({m: c if c is not None else self.coeff.one}))

    def from_word(self, symbols: Sequence[str]) -> LpaElement:
        """Element of a generator word; ``f`` is an edge, ``f*`` its ghost,
        other symbols are vertices.  Ill-composed words denote zero."""
        acc = None
        for s in symbols:
            if s.endswith("*"):
                atom = self.ghost(s[:-1])
            elif s in self.weight:
                atom = self.edge(s)
            else:
                atom = self.vertex(s)
            acc = atom if acc is None else self.multiply(acc, atom)
        return acc if acc is not None else self.one_elem()

    def normal_form(self, words: Iterable[tuple[Sequence[str], Residues]]) -> LpaElement:
        """Canonical form of a coefficient combination of generator words."""
        total = self.zero_elem()
        for symbols, c in words:
            total = self.add(total, self.scale(c, self.from_word(symbols)))
        return total

    def add(self, x: LpaElement, y: LpaElement) -> LpaElement:
        acc = dict(x.terms)
        zero = self.coeff.zero
        for m, c in y.terms:
            acc[m] = self.coeff.add(acc.get(m, zero), c)
        return self.element(acc)

    def neg(self, x: LpaElement) -> LpaElement:
        return LpaElement(tuple((m, self.coeff.neg(c)) for m, c in x.terms))

    def sub(self, x: LpaElement, y: LpaElement) -> LpaElement:
        return self.add(x, self.neg(y))

    def scale(self, c: Residues, x: LpaElement) -> LpaElement:
        acc = {m: self.coeff.mul(c, cm) for m, cm in x.terms}
        return self.element(acc)

    def scale_int(self, k: int, x: LpaElement) -> LpaElement:
        return self.scale(self.coeff.from_int(k), x)

    def multiply(self, x: LpaElement, y: LpaElement) -> LpaElement:
        acc: dict[Monomial, Residues] = {}
        zero = self.coeff.zero
        for m1, c1 in x.terms:
            for m2, c2 in y.terms:
                c = self.coeff.mul(c1, c2)
                if c == zero:
                    continue
                for m, cm in self.mono_mul(m1, m2).items():
                    acc[m] = self.coeff.add(acc.get(m, zero), self.coeff.mul(c, cm))
        return self.element(acc)

    def is_zero(self, x: LpaElement) -> bool:
        return not x.terms

    def sort_key(self, x: LpaElement):
        return tuple((monomial_key(m), c) for m, c in x.terms)

    # -- graded structure ---------------------------------------------------------------

    @property
    def default_len_bound(self) -> int:
        return 2 * len(self.vertices) * self.group.order

    def monomials_of_degree(self, g: int, len_bound: int) -> tuple[list[Monomial], bool]:
        """Canonical monomials of the given degree with |alpha|+|beta| <= bound.

        The completeness flag is decided by acyclicity alone: on an acyclic
        graph a bound of twice the longest path is exhaustive.
        """
        if len_bound < 0:
            raise ValueError("length bound must be nonnegative")
        paths = self._paths_up_to(len_bound)
        by_end: dict[str, list[tuple[str, tuple[str, ...], str, int]]] = {}
        for p in paths:
            by_end.setdefault(p[2], []).append(p)
        out = []
        for (va, ea, enda, wa) in paths:
            budget = len_bound - len(ea)
            for (vb, eb, endb, wb) in by_end.get(enda, ()):
                if len(eb) > budget:
                    continue
                m = Monomial(ea, eb, enda)
                if not self._is_canonical(m):
                    continue
                if self.group.op(wa, self.group.inverse(wb)) == g:
                    out.append(m)
        out = sorted(set(out), key=monomial_key)
        complete = self.acyclic and len_bound >= 2 * max(self.longest_path, 0)
        if not self.component_support(g):
            complete = True
        return out, complete

    def component_generators(self, g: int, max_len: int | None = None) -> tuple[list[LpaElement], bool]:
        bound = self.default_len_bound if max_len is None else max_len
        monos, complete = self.monomials_of_degree(g, bound)
        return [self.monomial_element(m) for m in monos], complete

    def _find_path_into(self, target: str, target_weight: int) -> tuple[str, ...] | None:
        """Shortest path (any source) ending at target with the given weight."""
        start = (target, self.group.identity)
        if target_weight == self.group.identity:
            return ()
        parents: dict[tuple[str, int], tuple[str, tuple[str, int]]] = {}
        seen = {start}
        queue = deque([start])
        while queue:
            u, d = queue.popleft()
            for e in self.edge_ids:
                if self.dst[e] != u:
                    continue
                state = (self.src[e], self.group.op(self.weight[e], d))
                if state in seen:
                    continue
                seen.add(state)
                parents[state] = (e, (u, d))
                if state[1] == target_weight:
                    path = []
                    cur = state
                    while cur != start:
                        e, prev = parents[cur]
                        path.append(e)
                        cur = prev
                    return tuple(path)
                queue.append(state)
        return None

    def ck2_factorization(self, v: str, g: int, depth_bound: int | None = None) -> list[Monomial]:
        """Degree-g monomials m_i with source v satisfying sum(m_i m_i*) = v.

        The tree expands real paths from v through out-edges; a leaf closes
        when its weight reaches g (ghost part empty) or, at a sink, through a
        ghost completion of matching weight.  Raises UnverifiedSearch when
        the bound is hit or a sink admits no completion.
        """
        if v not in self.component_support(g):
            raise ValueError(f"vertex {v!r} does not support degree {g}")
        bound = self.default_len_bound if depth_bound is None else depth_bound
        leaves: list[Monomial] = []
        queue: deque[tuple[str, tuple[str, ...]]] = deque([(v, ())])
        while queue:
            end, edges = queue.popleft()
            w_alpha = self.path_weight(edges)
            if w_alpha == g:
                leaves.append(Monomial(edges, (), end))
                continue
            out = self.out_edges[end]
            if not out:
                beta = self._find_path_into(
                    end, self.group.op(self.group.inverse(g), w_alpha)
                )
                if beta is None:
                    raise UnverifiedSearch(
                        f"no ghost completion at sink {end!r} for degree {g}"
                    )
                leaves.append(Monomial(edges, beta, end))
                continue
            if len(edges) >= bound:
                raise UnverifiedSearch(f"expansion from {v!r} exceeded depth {bound}")
            for f in out:
                queue.append((self.dst[f], edges + (f,)))
        total = self.zero_elem()
        for m in leaves:
            total = self.add(total, self.multiply(self.monomial_element(m), self.monomial_element(self.star(m))))
        if total != self.vertex(v):
            raise AssertionError("CK2 factorization failed to re-verify")
        return leaves

    # -- rendering / description ----------------------------------------------------------

    def format_monomial(self, m: Monomial) -> str:
        if not m.alpha and not m.beta:
            return m.pivot
        parts = list(m.alpha) + [f"{e}*" for e in reversed(m.beta)]
        return ".".join(parts)

    def format_element(self, x: LpaElement) -> str:
        if not x.terms:
            return "0"
        parts = []
        for m, c in x.terms:
            name = self.format_monomial(m)
            if c == self.coeff.one:
                parts.append(name)
            else:
                cs = "+".join(str(v) for v in c) if len(c) > 1 else str(c[0])
                parts.append(f"{cs}*{name}")
        return " + ".join(parts)

    def describe(self) -> dict:
        return {
            "kind": "leavitt",
            "group": group_description(self.group),
            "coeff": {"moduli": list(self.coeff.moduli)},
            "vertices": list(self.vertices),
            "edges": [
                {"id": e, "src": self.src[e], "dst": self.dst[e], "weight": self.weight[e]}
                for e in self.edge_ids
            ],
        }


# -- fixtures ---------------------------------------------------------------------


def lpa_z4_fixture(coeff: CoeffRing | None = None) -> LeavittPathAlgebra:
    """Two edges into a common sink plus an isolated vertex, graded over Z4
    with both edges in degree 2."""
    from .groups import cyclic_group

    graph = directed_graph(
        ["v1", "v2", "v3", "v4"],
        [("f", "v1", "v2"), ("g", "v3", "v2")],
    )
    return LeavittPathAlgebra(
        graph, cyclic_group(4), {"f": 2, "g": 2}, coeff or CoeffRing((2,))
    )


def lpa_z8_fixture(coeff: CoeffRing | None = None) -> LeavittPathAlgebra:
    """A loop of weight 4, a two-cycle of weight-2 edges and an isolated
    vertex, graded over Z8."""
    from .groups import cyclic_group

    graph = directed_graph(
        ["v1", "v2", "v3", "v4"],
        [("h", "v1", "v1"), ("f", "v2", "v3"), ("g", "v3", "v2")],
    )
    return LeavittPathAlgebra(
        graph, cyclic_group(8), {"h": 4, "f": 2, "g": 2}, coeff or CoeffRing((2,))
    )
