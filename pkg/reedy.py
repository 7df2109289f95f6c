"""Reedy factorizations, sections of codegeneracies and the axiom sweeps.

The sweeps run over every morphism between graphs of a catalog and report
per-axiom pass/fail with the first offending morphism embedded.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from catalog import Bounds, Catalog, enumerate_graphs
from errors import FlavorError, MorphismError
from graphs import (
    Graph,
    contracted_corolla,
    corolla_subgraph,
    degree,
    glued_contraction_source,
    span_subgraph,
    wheel,
)
from models import CheckStatusEnum, FlavorEnum, MorphismClassEnum
from morphisms import (
    CodegeneracySquare,
    GraphMorphism,
    automorphisms,
    classify,
    codegeneracy,
    collapsed_vertices,
    compose,
    hom_set,
    identity,
    in_minus,
    in_plus,
    inverse,
    is_isomorphism,
    is_monomorphism,
    validate,
)
from presheaves import Representable, check_ez_lemma, pullback_check
from schemas import AxiomResult, Counterexample, Report, morphism_json

logger = logging.getLogger("wheelgraph.reedy")

DegreeFunction = Callable[[Graph, FlavorEnum], int]

# test objects for monomorphism checks in the counterexample sweeps
PROBE_BOUNDS = Bounds(max_vertices=2, max_inner=2, max_valence=3, max_legs=2)


# ------------------------------------------------------------
# FACTORIZATION
# ------------------------------------------------------------

def reedy_factorize(
    morphism: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> tuple[GraphMorphism, GraphMorphism]:
    """Return ``(h, g)`` with h in the minus class, g in the plus class and ``g ∘ h = f``."""
    collapsed = collapsed_vertices(morphism)
    if not collapsed:
        return identity(morphism.source), morphism
    h = codegeneracy(morphism.source, collapsed)
    g0 = {h.on_edge(e): morphism.on_edge(e) for e in morphism.source.edges}
    g1 = {
        v: morphism.on_vertex(v) for v in morphism.source.vertices if v not in collapsed
    }
    g = GraphMorphism.build(h.target, morphism.target, g0, g1)
    return h, g


def _composite_f0(second: GraphMorphism, first: GraphMorphism) -> tuple[tuple[str, str], ...]:
    return tuple((e, second.on_edge(k)) for e, k in first.f0)


def all_reedy_factorizations(
    morphism: GraphMorphism, intermediates: Iterable[Graph], flavor: FlavorEnum
) -> list[tuple[GraphMorphism, GraphMorphism]]:
    found = []
    for middle in intermediates:
        plus_maps = [g for g in hom_set(middle, morphism.target, flavor) if in_plus(g)]
        if not plus_maps:
            continue
        for h in hom_set(morphism.source, middle, flavor):
            if not in_minus(h):
                continue
            for g in plus_maps:
                if _composite_f0(g, h) == morphism.f0 and compose(g, h, flavor) == morphism:
                    found.append((h, g))
    return found


def is_single_orbit(
    factorizations: list[tuple[GraphMorphism, GraphMorphism]], flavor: FlavorEnum
) -> bool:
    """All factorizations are ``(i ∘ h, g ∘ i⁻¹)`` for one pair and isomorphisms i."""
    if not factorizations:
        return False
    h0, g0 = factorizations[0]
    orbit = {
        (compose(i, h0, flavor).key, compose(g0, inverse(i), flavor).key)
        for i in automorphisms(h0.target, flavor)
    }
    middle = h0.target
    for h, g in factorizations:
        if h.target != middle:
            return False
        if (h.key, g.key) not in orbit:
            return False
    return len(orbit) == len({(h.key, g.key) for h, g in factorizations})


# ------------------------------------------------------------
# SECTIONS
# ------------------------------------------------------------

def sections(morphism: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheeled_a) -> list[GraphMorphism]:
    unit = identity(morphism.target)
    return [
        g
        for g in hom_set(morphism.target, morphism.source, flavor)
        if _composite_f0(morphism, g) == unit.f0 and compose(morphism, g, flavor) == unit
    ]


def is_split_epimorphism(morphism: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheeled_a) -> bool:
    return bool(sections(morphism, flavor))


def set_section_count(morphism: GraphMorphism) -> int:
    """Number of right inverses of the edge function f0."""
    fibers: dict[str, int] = defaultdict(int)
    for _, k in morphism.f0:
        fibers[k] += 1
    count = 1
    for k in morphism.target.edges:
        count *= fibers.get(k, 0)
    return count


def section_through_edge(morphism: GraphMorphism, edge: str, flavor: FlavorEnum) -> GraphMorphism:
    """A section of a single codegeneracy whose edge image contains ``edge``."""
    if flavor is not FlavorEnum.wheel_free:
        raise FlavorError("Sections through a chosen edge are only constructed without wheels.")
    collapsed = collapsed_vertices(morphism)
    if len(collapsed) != 1 or classify(morphism, flavor) is not MorphismClassEnum.codegeneracy:
        raise MorphismError("Expected a single codegeneracy.")
    source, target = morphism.source, morphism.target
    if edge not in source.edges:
        raise MorphismError(f"Unknown edge {edge!r}.")
    (v,) = collapsed
    (first,), (last,) = source.in_edges(v), source.out_edges(v)
    fused = morphism.on_edge(first)

    back_edges = {k: e for e, k in morphism.f0 if k != fused}
    back_vertices = {}
    for u, part in morphism.f1:
        if part.is_corolla:
            (w,) = part.vertices
            back_vertices[w] = u

    def build(image: str, neighbour: Optional[str]) -> GraphMorphism:
        f0 = {k: e for k, e in back_edges.items()}
        f0[fused] = image
        f1 = {w: corolla_subgraph(u) for w, u in back_vertices.items()}
        if neighbour is not None:
            (w,) = [w for w, u in back_vertices.items() if u == neighbour]
            f1[w] = span_subgraph(source, {neighbour, v})
        return GraphMorphism.build(target, source, f0, f1)

    after = source.target_of(last)
    before = source.source_of(first)
    candidates = []
    if edge == first:
        candidates.append(build(first, after))
    elif edge == last:
        candidates.append(build(last, before))
    else:
        candidates.extend([build(first, after), build(last, before)])
    for candidate in candidates:
        if validate(candidate, flavor) and compose(morphism, candidate, flavor) == identity(target):
            return candidate
    raise MorphismError(f"No section through {edge!r}.")


# ------------------------------------------------------------
# STRONG PUSHOUTS
# ------------------------------------------------------------

def strong_pushout(
    first: GraphMorphism, second: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheel_free
) -> CodegeneracySquare:
    if first.source != second.source:
        raise MorphismError("Codegeneracies must share their source.")
    for s in (first, second):
        if not in_minus(s) or not all(p.is_edge or p.is_corolla for _, p in s.f1):
            raise MorphismError("Expected iterated codegeneracies.")
    if first == second:
        unit = identity(first.target)
        return CodegeneracySquare(first, second, unit, unit)
    v1, v2 = collapsed_vertices(first), collapsed_vertices(second)
    f1 = codegeneracy(first.target, v2 - v1) if v2 - v1 else identity(first.target)
    f2 = codegeneracy(second.target, v1 - v2) if v1 - v2 else identity(second.target)
    if f1.target != f2.target:
        raise MorphismError("Complementary codegeneracies do not meet.")
    square = CodegeneracySquare(first, second, f1, f2)
    if compose(f1, first, flavor) != compose(f2, second, flavor):
        raise MorphismError("Pushout square does not commute.")
    return square


# ------------------------------------------------------------
# SWEEPS
# ------------------------------------------------------------

@dataclass
class _Tally:
    axiom: str
    checked: int = 0
    failures: list[GraphMorphism] = field(default_factory=list)
    detail: Optional[str] = None

    def check(self, ok: bool, witness: Optional[GraphMorphism]) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(witness)

    def result(self) -> AxiomResult:
        status = CheckStatusEnum.failed if self.failures else CheckStatusEnum.passed
        if self.failures:
            logger.warning("%s failed on %d of %d checks", self.axiom, len(self.failures), self.checked)
        first = self.failures[0] if self.failures else None
        return AxiomResult(
            axiom=self.axiom,
            status=status,
            counterexample=morphism_json(first),
            checked_pairs=self.checked,
            failures=len(self.failures),
            detail=self.detail,
        )


def _all_morphisms(catalog: Catalog, jobs: int) -> list[GraphMorphism]:
    return list(catalog.morphisms(jobs))


def _endomorphisms(catalog: Catalog, jobs: int) -> dict[Graph, tuple[GraphMorphism, ...]]:
    table = catalog.hom_table(jobs)
    return {g: table.get(i, i) for i, g in enumerate(catalog.graphs)}


def check_reedy_axioms(
    catalog: Catalog,
    degree_function: DegreeFunction = degree,
    jobs: int = 1,
) -> Report:
    flavor = catalog.flavor
    morphisms = _all_morphisms(catalog, jobs)
    endos = _endomorphisms(catalog, jobs)

    degrees = _Tally("i")
    intersection = _Tally("ii")
    factorization = _Tally("iii")
    minus_rigid = _Tally("iv")
    plus_rigid = _Tally("iv'")

    reachable: dict[int, set[int]] = defaultdict(set)
    reaching: dict[int, set[int]] = defaultdict(set)
    for s, t in catalog.hom_table(jobs).entries:
        reachable[s].add(t)
        reaching[t].add(s)

    def middles(source: Graph, target: Graph) -> list[Graph]:
        s, t = catalog.position(source), catalog.position(target)
        return [catalog.graphs[m] for m in sorted(reachable[s] & reaching[t])]

    for f in morphisms:
        source, target = f.source, f.target
        iso = is_isomorphism(f)
        plus, minus = in_plus(f), in_minus(f)
        low, high = degree_function(source, flavor), degree_function(target, flavor)
        if iso:
            degrees.check(low == high, f)
        elif plus:
            degrees.check(high > low, f)
        elif minus:
            degrees.check(high < low, f)

        intersection.check((plus and minus) == iso, f)

        h, g = reedy_factorize(f, flavor)
        constructed = in_minus(h) and in_plus(g) and compose(g, h, flavor) == f
        pairs = all_reedy_factorizations(f, middles(source, target), flavor)
        factorization.check(constructed and is_single_orbit(pairs, flavor), f)

        if minus:
            for theta in endos[target]:
                if _composite_f0(theta, f) == f.f0 and compose(theta, f, flavor) == f:
                    minus_rigid.check(theta == identity(target), theta)
        if plus:
            for theta in endos[source]:
                if _composite_f0(f, theta) == f.f0 and compose(f, theta, flavor) == f:
                    plus_rigid.check(theta == identity(source), theta)

    report = Report(
        name="reedy",
        flavor=flavor,
        results=[t.result() for t in (degrees, intersection, factorization, minus_rigid, plus_rigid)],
    )
    logger.info(
        "Reedy axioms for %s over %d morphisms: %s",
        flavor.value,
        len(morphisms),
        "pass" if report.passed else "fail",
    )
    return report


def check_ez_gamma(catalog: Catalog, degree_bound: int = 4, jobs: int = 1) -> Report:
    if catalog.flavor is not FlavorEnum.wheel_free:
        raise FlavorError("The EZ structure is checked on the wheel-free category only.")
    flavor = catalog.flavor
    morphisms = _all_morphisms(catalog, jobs)
    probes = catalog.graphs

    classes = _Tally("mono_plus_split_epi_minus")
    factors = _Tally("split_epi_mono_factorization")
    pushouts = _Tally("strong_pushouts")
    determinacy = _Tally("section_determinacy")
    bijection = _Tally("sections_bijection")

    section_sets: dict[GraphMorphism, frozenset] = {}
    for f in morphisms:
        found = sections(f, flavor)
        section_sets[f] = frozenset(g.key for g in found)
        mono = is_monomorphism(f, probes, flavor)
        classes.check(mono == in_plus(f) and bool(found) == in_minus(f), f)

        h, g = reedy_factorize(f, flavor)
        factors.check(
            is_split_epimorphism(h, flavor)
            and is_monomorphism(g, probes, flavor)
            and compose(g, h, flavor) == f,
            f,
        )

        if in_minus(f):
            bijection.check(
                len(found) == set_section_count(f)
                and len({g.f0 for g in found}) == len(found),
                f,
            )

    by_endpoints: dict[tuple[Graph, Graph], list[GraphMorphism]] = defaultdict(list)
    for f in morphisms:
        if in_minus(f):
            by_endpoints[(f.source, f.target)].append(f)
    for group in by_endpoints.values():
        for index, s in enumerate(group):
            for other in group[index + 1:]:
                determinacy.check(section_sets[s] != section_sets[other], other)

    representables = [Representable(y, flavor) for y in catalog.up_to_degree(degree_bound)]
    for graph in catalog.graphs:
        singles = [codegeneracy(graph, [v]) for v in sorted(graph.vertices) if graph.profile(v) == (1, 1)]
        for index, s1 in enumerate(singles):
            for s2 in singles[index:]:
                try:
                    square = strong_pushout(s1, s2, flavor)
                except MorphismError:
                    pushouts.check(False, s2)
                    continue
                ok = all(pullback_check(square, K) for K in representables)
                pushouts.check(ok, s2)

    uniqueness = check_ez_lemma(representables, catalog.up_to_degree(degree_bound))
    report = Report(
        name="ez",
        flavor=flavor,
        results=[t.result() for t in (classes, factors, pushouts, determinacy, bijection)] + [uniqueness],
    )
    logger.info("EZ check over %d morphisms: %s", len(morphisms), "pass" if report.passed else "fail")
    return report


def check_composition_closure(catalog: Catalog, jobs: int = 1) -> Report:
    flavor = catalog.flavor
    table = catalog.hom_table(jobs)
    size = len(catalog.graphs)
    plus_tally = _Tally("plus_closed")
    minus_tally = _Tally("minus_closed")
    iso_tally = _Tally("isomorphisms_in_both")
    valid_tally = _Tally("composites_valid")
    for a in range(size):
        for b in range(size):
            firsts = table.get(a, b)
            if not firsts:
                continue
            for first in firsts:
                if is_isomorphism(first):
                    iso_tally.check(in_plus(first) and in_minus(first), first)
            for c in range(size):
                for second in table.get(b, c):
                    for first in firsts:
                        composite = compose(second, first, flavor)
                        valid_tally.check(bool(validate(composite, flavor)), composite)
                        if in_plus(first) and in_plus(second):
                            plus_tally.check(in_plus(composite), composite)
                        if in_minus(first) and in_minus(second):
                            minus_tally.check(in_minus(composite), composite)
    return Report(
        name="closure",
        flavor=flavor,
        results=[t.result() for t in (plus_tally, minus_tally, iso_tally, valid_tally)],
    )


def check_faithfulness(catalog: Catalog, jobs: int = 1) -> Report:
    """Edge maps determine morphisms. Holds for the wheel-free catalog only."""
    tally = _Tally("faithful")
    table = catalog.hom_table(jobs)
    for pair in sorted(table.entries):
        morphisms = table.entries[pair]
        seen: dict[tuple, GraphMorphism] = {}
        for m in morphisms:
            clash = seen.get(m.f0)
            tally.check(clash is None, m)
            seen[m.f0] = m
    return Report(name="faithfulness", flavor=catalog.flavor, results=[tally.result()])


def check_gamma_compatibility(catalog: Catalog, jobs: int = 1) -> Report:
    """Minus maps out of wheel-free graphs and plus maps into them stay wheel-free."""
    if not catalog.flavor.is_wheeled:
        raise FlavorError("Compatibility is checked from a wheeled catalog.")
    minus_tally = _Tally("minus_fibering")
    plus_tally = _Tally("plus_cofibering")
    gamma = FlavorEnum.wheel_free
    for f in catalog.morphisms(jobs):
        if is_isomorphism(f):
            continue
        if in_minus(f) and f.source.is_wheel_free:
            minus_tally.check(f.target.is_wheel_free and bool(validate(f, gamma)), f)
        if in_plus(f) and f.target.is_wheel_free:
            plus_tally.check(f.source.is_wheel_free and bool(validate(f, gamma)), f)
    return Report(name="compat", flavor=catalog.flavor, results=[minus_tally.result(), plus_tally.result()])


# ------------------------------------------------------------
# WHEELED COUNTEREXAMPLES
# ------------------------------------------------------------

def _sweep_bounds(target: Graph) -> Bounds:
    edges = max(len(target.edges), 1)
    return Bounds(
        max_vertices=min(edges + 1, 4),
        max_inner=edges,
        max_valence=2 * edges,
        max_legs=edges,
    )


def _witness(morphism: GraphMorphism, flavor: FlavorEnum, detail: str) -> Counterexample:
    target = morphism.target
    sweep = enumerate_graphs(flavor, _sweep_bounds(target))
    probes = list(enumerate_graphs(flavor, PROBE_BOUNDS).graphs)
    middles = [g for g in sweep.graphs if len(g.edges) <= len(target.edges)]
    found = sections(morphism, flavor)
    factorizations = 0
    split_mono = 0
    for middle in middles:
        for h in hom_set(morphism.source, middle, flavor):
            for g in hom_set(middle, target, flavor):
                if _composite_f0(g, h) != morphism.f0 or compose(g, h, flavor) != morphism:
                    continue
                factorizations += 1
                if is_split_epimorphism(h, flavor) and is_monomorphism(g, probes, flavor):
                    split_mono += 1
                    logger.warning("Split-epi-mono factorization through %r", middle)
    maps_from_loop = None
    if flavor.allows_loop:
        loop = next(g for g in sweep.graphs if g.is_exceptional_loop)
        maps_from_loop = len(hom_set(loop, morphism.source, flavor))
    return Counterexample(
        flavor=flavor,
        morphism=morphism_json(morphism),
        classification=classify(morphism, flavor).value,
        sections=len(found),
        maps_from_loop=maps_from_loop,
        intermediates_checked=len(middles),
        factorizations=factorizations,
        split_epi_mono_factorizations=split_mono,
        confirmed=not found and split_mono == 0,
        detail=detail,
    )


def witness_gammaw_not_ez(
    flavor: FlavorEnum, n: int = 1, m: int = 1, i: int = 1, j: int = 1
) -> Counterexample:
    if not flavor.is_wheeled:
        raise FlavorError("The wheel-free category is an EZ-category.")
    if flavor is FlavorEnum.wheeled_a:
        contracted = contracted_corolla(1, 1)
        s = codegeneracy(contracted, contracted.vertices)
        record = _witness(s, flavor, "contracted unary corolla onto the exceptional loop")
        two_wheel = wheel(2)
        companion = codegeneracy(two_wheel, ["v2"])
        record.companion = Counterexample(
            flavor=flavor,
            morphism=morphism_json(companion),
            classification=classify(companion, flavor).value,
            sections=len(sections(companion, flavor)),
            detail="two-vertex wheel onto the contracted unary corolla",
        )
        return record
    source = glued_contraction_source(n, m, i, j)
    s = codegeneracy(source, ["y"])
    return _witness(s, flavor, f"glued corolla ({n};{m}) onto its contraction")
