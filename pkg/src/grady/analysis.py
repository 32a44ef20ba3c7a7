"""Backend-neutral grading classification.

Both backends expose the same small protocol: a ``group`` and ``coeff``
attribute, ``support()``, ``component_generators(g, max_len)`` returning a
generator list plus a completeness flag, element arithmetic, ``one_elem()``
and ``zero_elem()``, and a ``capability`` flag("enumerable" for the
structure-constant backend, "identity-witness" for path algebras).

Verdicts are three-state: bounded searches on the path-algebra backend never
silently claim completeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .leavitt import UnverifiedSearch
from .scring import factorization_pairs, find_identity, module_closure
from .spanning import DEFAULT_CLOSURE_CAP

PROVED = "proved"
SAMPLE = "sample-verified"

_COMBO_CAP = 4096


class InternalInconsistency(RuntimeError):
    """Two independent routes to the same verdict disagreed."""


class NoEpsilonIdentity(ValueError):
    """A component ideal cannot supply the required identity element."""

    def __init__(self, g: int, reason: str):
        super().__init__(f"degree {g}: {reason}")
        self.g = g
        self.reason = reason


@dataclass(frozen=True)
class Verdict:
    """Yes/No/Unverified with a free-text note and the bounds that were used."""

    kind: str
    note: str = ""
    status: str = PROVED
    bounds: tuple[tuple[str, int], ...] = ()

    @classmethod
    def yes(cls, note: str = "", status: str = PROVED, bounds: dict | None = None):
        return cls("yes", note, status, tuple(sorted((bounds or {}).items())))

    @classmethod
    def no(cls, note: str = "", status: str = PROVED, bounds: dict | None = None):
        return cls("no", note, status, tuple(sorted((bounds or {}).items())))

    @classmethod
    def unverified(cls, note: str, bounds: dict | None = None):
        return cls("unverified", note, SAMPLE, tuple(sorted((bounds or {}).items())))

    @property
    def decided(self) -> bool:
        return self.kind != "unverified"

    @property
    def is_yes(self) -> bool:
        return self.kind == "yes"

    @property
    def is_no(self) -> bool:
        return self.kind == "no"

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "note": self.note, "status": self.status}
        if self.bounds:
            out["bounds"] = dict(self.bounds)
        return out


@dataclass(frozen=True)
class AnalysisBounds:
    """Verification bounds, echoed verbatim into every report."""

    max_len: int | None = None
    max_depth: int | None = None
    closure_cap: int = DEFAULT_CLOSURE_CAP

    def len_for(self, backend) -> int | None:
        if self.max_len is not None:
            return self.max_len
        return getattr(backend, "default_len_bound", None)

    def depth_for(self, backend) -> int | None:
        if self.max_depth is not None:
            return self.max_depth
        return getattr(backend, "default_len_bound", None)

    def as_dict(self, backend) -> dict:
        return {
            "closure_cap": self.closure_cap,
            "max_len": self.len_for(backend),
            "max_depth": self.depth_for(backend),
        }


@dataclass
class EpsilonEntry:
    """The identity of one component ideal S_g S_{g^-1} with a two-sided
    factorization witness: sum(u_i * v_i) equals the stored value."""

    g: int
    value: object
    factorization: tuple
    zero: bool
    status: str


@dataclass
class EpsilonData:
    backend: object
    entries: dict[int, EpsilonEntry]
    bounds: AnalysisBounds

    def value(self, g: int):
        return self.entries[g].value

    def factorization(self, g: int):
        return self.entries[g].factorization

    def unit(self):
        return self.entries[self.backend.group.identity].value


def compute_epsilon(backend, g: int, bounds: AnalysisBounds | None = None) -> EpsilonEntry:
    """Identity element of the ideal S_g S_{g^-1} with a factorization.

    Raises :class:`NoEpsilonIdentity` when no identity exists and
    :class:`~grady.leavitt.UnverifiedSearch` when a path-algebra search hits
    its bounds without concluding.
    """
    bounds = bounds or AnalysisBounds()
    group = backend.group
    if backend.capability == "enumerable":
        return _epsilon_enumerable(backend, g, bounds)
    return _epsilon_lpa(backend, g, bounds)


def _epsilon_enumerable(ring, g: int, bounds: AnalysisBounds) -> EpsilonEntry:
    group = ring.group
    if not ring.component_basis(g):
        return EpsilonEntry(g, ring.zero_elem(), (), True, PROVED)
    if g == group.identity:
        # S_e S_e contains 1*S_e = S_e, whose identity is 1; by convention the
        # factorization of the identity degree is the single pair (1, 1)
        return EpsilonEntry(g, ring.one, ((ring.one, ring.one),), False, PROVED)
    ginv = group.inverse(g)
    gens, tags = [], []
    for i in ring.component_basis(g):
        u = ring.basis_vec(i)
        for j in ring.component_basis(ginv):
            v = ring.basis_vec(j)
            gens.append(ring.multiply(u, v))
            tags.append((u, v))
    wm = module_closure(ring, gens, tags=tags, cap=bounds.closure_cap)
    ident = find_identity(wm)
    if ident is None:
        raise NoEpsilonIdentity(g, "the ideal S_g S_{g^-1} has no identity serving S_g")
    return EpsilonEntry(g, ident, factorization_pairs(wm, ident), False, PROVED)


def _epsilon_lpa(alg, g: int, bounds: AnalysisBounds) -> EpsilonEntry:
    group = alg.group
    supp = alg.component_support(g)
    if not supp:
        return EpsilonEntry(g, alg.zero_elem(), (), True, PROVED)
    if g == group.identity:
        return EpsilonEntry(g, alg.one_elem(), ((alg.one_elem(), alg.one_elem()),), False, PROVED)
    value = alg.zero_elem()
    for v in supp:
        value = alg.add(value, alg.vertex(v))
    pairs = []
    depth = bounds.depth_for(alg)
    for v in supp:
        for m in alg.ck2_factorization(v, g, depth):
            pairs.append((alg.monomial_element(m), alg.monomial_element(alg.star(m))))
    total = alg.zero_elem()
    for u, w in pairs:
        total = alg.add(total, alg.multiply(u, w))
    if total != value:
        raise AssertionError("factorization does not reproduce the vertex sum")
    # the vertex sum acts as a left unit structurally (every degree-g monomial
    # starts at a support vertex); spot-check on the bounded generator list
    gens, _ = alg.component_generators(g, bounds.len_for(alg))
    right = alg.zero_elem()
    for v in alg.component_support(group.inverse(g)):
        right = alg.add(right, alg.vertex(v))
    for s in gens:
        if alg.multiply(value, s) != s or alg.multiply(s, right) != s:
            raise NoEpsilonIdentity(g, "vertex-sum candidate fails to act as a unit")
    return EpsilonEntry(g, value, tuple(pairs), False, PROVED)


def epsilon_data(backend, bounds: AnalysisBounds | None = None) -> EpsilonData:
    """Epsilon entries for every group element, cross-verified as one- and
    two-sided units on the component generators."""
    bounds = bounds or AnalysisBounds()
    group = backend.group
    entries = {g: compute_epsilon(backend, g, bounds) for g in group.elements()}
    max_len = bounds.len_for(backend)
    for g in group.elements():
        gens, _ = backend.component_generators(g, max_len)
        if entries[g].zero and gens:
            raise NoEpsilonIdentity(g, "zero identity on a nonzero component")
        if not entries[g].zero and not gens and backend.capability == "enumerable":
            raise InternalInconsistency(f"nonzero identity on an empty component {g}")
        right = entries[group.inverse(g)].value
        for s in gens:
            if backend.multiply(entries[g].value, s) != s:
                raise NoEpsilonIdentity(g, "identity fails as a left unit on S_g")
            if backend.multiply(s, right) != s:
                raise NoEpsilonIdentity(g, "identity fails as a right unit on S_g")
    return EpsilonData(backend, entries, bounds)


def check_graded(backend) -> Verdict:
    """Is the product of homogeneous parts supported in the composed degree?"""
    if backend.capability == "enumerable":
        group = backend.group
        for i in range(backend.size):
            for j in range(backend.size):
                prod = backend.multiply(backend.basis_vec(i), backend.basis_vec(j))
                target = group.op(backend.degrees[i], backend.degrees[j])
                for k, c in enumerate(prod):
                    if c != backend.coeff.zero and backend.degrees[k] != target:
                        return Verdict.no(
                            f"basis pair ({i}, {j}) has support outside degree {target}"
                        )
        return Verdict.yes("exhaustive on basis pairs")
    return Verdict.yes(
        "structural: monomial degrees are multiplicative and every rewrite "
        "step preserves them"
    )


def is_symmetrically_graded(backend, eps: EpsilonData | None = None,
                            bounds: AnalysisBounds | None = None) -> Verdict:
    """Does S_g S_{g^-1} S_g = S_g hold for every supported degree?"""
    bounds = bounds or AnalysisBounds()
    if backend.capability == "enumerable":
        group = backend.group
        for g in backend.support():
            triple = backend.product_span([g, group.inverse(g), g], bounds.closure_cap)
            if triple != backend.component_span(g, bounds.closure_cap):
                return Verdict.no(f"S_g S_g^-1 S_g differs from S_g at g={g}")
        return Verdict.yes("set equality checked on every supported degree")
    if eps is not None:
        return Verdict.yes(
            "implied: every component has a two-sided unit from its ideal, "
            "which forces S_g S_g^-1 S_g = S_g"
        )
    return Verdict.unverified("component identities were not established",
                              bounds.as_dict(backend))


def is_epsilon_strong(backend, bounds: AnalysisBounds | None = None):
    """Verdict plus the epsilon data when the ring is epsilon-strong."""
    bounds = bounds or AnalysisBounds()
    try:
        eps = epsilon_data(backend, bounds)
    except NoEpsilonIdentity as exc:
        return Verdict.no(str(exc)), None
    except UnverifiedSearch as exc:
        return Verdict.unverified(str(exc), bounds.as_dict(backend)), None
    return Verdict.yes("identities found and verified for every degree"), eps


def is_nearly_epsilon_strong(eps_verdict: Verdict) -> Verdict:
    """On these finite, unital backends the nearly-epsilon notion coincides
    with the epsilon notion: component ideals with finitely many generators
    are s-unital exactly when they are unital."""
    note = (
        "decided with the epsilon verdict: at this finite scale local units "
        "and a genuine identity coincide on every component ideal"
    )
    if eps_verdict.is_yes:
        return Verdict.yes(note, eps_verdict.status)
    if eps_verdict.is_no:
        return Verdict.no(note, eps_verdict.status)
    return Verdict.unverified(note)


def is_strongly_graded(backend, eps: EpsilonData, bounds: AnalysisBounds | None = None) -> Verdict:
    """Strong grading via the unit criterion, cross-checked exhaustively on
    enumerable backends; disagreement raises InternalInconsistency."""
    bounds = bounds or AnalysisBounds()
    group = backend.group
    one = backend.one_elem()
    shortcut_bad = [g for g in group.elements() if eps.value(g) != one]
    shortcut = not shortcut_bad
    if backend.capability == "enumerable":
        exhaustive_bad = None
        for g, h in product(group.elements(), group.elements()):
            span = backend.product_span([g, h], bounds.closure_cap)
            if span != backend.component_span(group.op(g, h), bounds.closure_cap):
                exhaustive_bad = (g, h)
                break
        if (exhaustive_bad is None) != shortcut:
            raise InternalInconsistency(
                "unit criterion and exhaustive component products disagree: "
                f"missing unit at {shortcut_bad[:1]}, bad pair {exhaustive_bad}"
            )
        if exhaustive_bad is not None:
            return Verdict.no(
                f"S_g S_h != S_gh at (g, h) = {exhaustive_bad}; "
                f"unit criterion agrees (first non-unit identity at g={shortcut_bad[0]})"
            )
        return Verdict.yes("exhaustive component products; unit criterion agrees")
    if shortcut:
        return Verdict.yes("every component identity equals 1")
    return Verdict.no(f"component identity at g={shortcut_bad[0]} differs from 1")


def epsilon_crossed_witness(backend, eps: EpsilonData, g: int,
                            bounds: AnalysisBounds | None = None) -> dict:
    """Search for s in S_g, t in S_{g^-1} with s t = eps_g and t s = eps_{g^-1}.

    Returns a dict with ``outcome`` in {"found", "absent", "unverified"} and
    the witness pair when found.
    """
    bounds = bounds or AnalysisBounds()
    group = backend.group
    ginv = group.inverse(g)
    eg, eh = eps.value(g), eps.value(ginv)
    if g == group.identity:
        return {"outcome": "found", "pair": (backend.one_elem(), backend.one_elem()),
                "note": "identity degree"}
    if eps.entries[g].zero and eps.entries[ginv].zero:
        return {"outcome": "found", "pair": (backend.zero_elem(), backend.zero_elem()),
                "note": "zero component"}
    if backend.capability == "enumerable":
        sg = sorted(backend.component_span(g, bounds.closure_cap))
        sh = sorted(backend.component_span(ginv, bounds.closure_cap))
        for s in sg:
            for t in sh:
                if backend.multiply(s, t) == eg and backend.multiply(t, s) == eh:
                    return {"outcome": "found", "pair": (s, t),
                            "note": f"exhaustive over {len(sg)}x{len(sh)} pairs"}
        return {"outcome": "absent",
                "note": f"exhaustive over {len(sg)}x{len(sh)} pairs"}
    return _lpa_crossed_search(backend, eg, eh, g, ginv, bounds)


def _combo_elements(alg, monos):
    """All coefficient combinations of the given monomials, zero included."""
    scalars = alg.coeff.elements()
    combos = [alg.zero_elem()]
    for m in monos:
        base = alg.monomial_element(m)
        combos = [
            alg.add(prev, alg.scale(c, base)) for prev in combos for c in scalars
        ]
    return combos


def _lpa_crossed_search(alg, eg, eh, g, ginv, bounds: AnalysisBounds) -> dict:
    max_len = bounds.len_for(alg)
    qsize = alg.coeff.size
    tried = 0
    for length in range(1, max_len + 1):
        monos_g, comp_g = alg.monomials_of_degree(g, length)
        monos_h, comp_h = alg.monomials_of_degree(ginv, length)
        if qsize ** len(monos_g) > _COMBO_CAP or qsize ** len(monos_h) > _COMBO_CAP:
            break
        tried = length
        for s in _combo_elements(alg, monos_g):
            for t in _combo_elements(alg, monos_h):
                if alg.multiply(s, t) == eg and alg.multiply(t, s) == eh:
                    return {"outcome": "found", "pair": (s, t),
                            "note": f"monomials up to length {length}"}
        if comp_g and comp_h:
            return {"outcome": "absent",
                    "note": f"exhaustive: complete monomial lists at length {length}"}
    return {"outcome": "unverified",
            "note": f"no witness among combinations of monomials up to length {tried}"}


def is_epsilon_crossed(backend, eps: EpsilonData,
                       bounds: AnalysisBounds | None = None) -> tuple[Verdict, dict]:
    """Epsilon-invertible witnesses for every degree."""
    bounds = bounds or AnalysisBounds()
    results = {}
    for g in backend.group.elements():
        results[g] = epsilon_crossed_witness(backend, eps, g, bounds)
    outcomes = {r["outcome"] for r in results.values()}
    if "absent" in outcomes:
        bad = min(g for g, r in results.items() if r["outcome"] == "absent")
        return Verdict.no(f"no epsilon-invertible element in degree {bad} "
                          f"({results[bad]['note']})"), results
    if "unverified" in outcomes:
        bad = min(g for g, r in results.items() if r["outcome"] == "unverified")
        return Verdict.unverified(f"degree {bad}: {results[bad]['note']}",
                                  bounds.as_dict(backend)), results
    return Verdict.yes("witnesses found for every degree"), results


def component_fg_witness(backend, g: int, bounds: AnalysisBounds | None = None):
    """A finite set generating the degree-g component over the principal
    component, as far as the bounded monomial list can tell."""
    bounds = bounds or AnalysisBounds()
    if backend.capability == "enumerable":
        gens, _ = backend.component_generators(g)
        return list(gens), Verdict.yes("the component basis is finite")
    alg = backend
    test_len = bounds.len_for(alg)
    monos, complete = alg.monomials_of_degree(g, test_len)
    if not monos:
        return [], Verdict.yes("zero component")
    e_monos, _ = alg.monomials_of_degree(alg.group.identity, test_len)
    e_elems = [alg.monomial_element(m) for m in e_monos]
    chosen: list = []
    chosen_elems: list = []
    for m in monos:
        target = alg.monomial_element(m)
        covered = any(
            alg.multiply(a, c) == target for c in chosen_elems for a in e_elems
        )
        if not covered:
            chosen.append(m)
            chosen_elems.append(target)
    status = (
        Verdict.yes("complete monomial list", PROVED)
        if complete
        else Verdict.yes(
            f"covers every monomial up to length {test_len}", SAMPLE,
            bounds.as_dict(alg),
        )
    )
    return [alg.monomial_element(m) for m in chosen], status


@dataclass
class GradingReport:
    backend: object
    bounds: AnalysisBounds
    graded: Verdict
    symmetric: Verdict
    nearly_epsilon_strong: Verdict
    epsilon_strong: Verdict
    strongly_graded: Verdict
    epsilon_crossed: Verdict
    epsilon: EpsilonData | None = None
    crossed_witnesses: dict = field(default_factory=dict)


def grading_report(backend, bounds: AnalysisBounds | None = None) -> GradingReport:
    """Run the full classification ladder on one ring."""
    bounds = bounds or AnalysisBounds()
    graded = check_graded(backend)
    eps_verdict, eps = is_epsilon_strong(backend, bounds)
    symmetric = is_symmetrically_graded(backend, eps, bounds)
    nearly = is_nearly_epsilon_strong(eps_verdict)
    if eps is not None:
        strongly = is_strongly_graded(backend, eps, bounds)
        crossed, witnesses = is_epsilon_crossed(backend, eps, bounds)
    else:
        note = "requires the component identities"
        strongly = Verdict.no("not epsilon-strong, hence not strong "
                              "(strong needs unit component identities)") \
            if eps_verdict.is_no else Verdict.unverified(note)
        crossed = Verdict.no("not epsilon-strong") if eps_verdict.is_no \
            else Verdict.unverified(note)
        witnesses = {}
    return GradingReport(
        backend, bounds, graded, symmetric, nearly, eps_verdict, strongly,
        crossed, eps, witnesses,
    )
