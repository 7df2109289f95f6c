"""Graphical sets: presheaves on the graphical categories, evaluated lazily.

A presheaf exposes ``elements(graph)`` for any labeled graph of its flavor and
``act(morphism, x)`` pulling an element of the target back to the source.
Values are computed on demand and memoized per graph.
"""

from __future__ import annotations

import itertools
import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Optional, Sequence

from catalog import Catalog, canonical_form, canonical_iso
from errors import FlavorError, PresheafError
from graphs import (
    Graph,
    corolla_of,
    corolla_subgraph,
    degree,
    exceptional_edge,
    exceptional_loop,
    unary_vertices,
)
from models import CheckStatusEnum, FlavorEnum
from morphisms import (
    CodegeneracySquare,
    GraphMorphism,
    codegeneracy,
    collapsed_vertices,
    compose,
    hom_set,
    identity,
    inverse,
)
from schemas import AxiomResult, GraphRecord, PresheafRecord, Report

logger = logging.getLogger("wheelgraph.segal")


def element_key(x: Any) -> Any:
    if isinstance(x, GraphMorphism):
        return ("m", x.key)
    if isinstance(x, tuple):
        return ("t", tuple(element_key(item) for item in x))
    return ("s", repr(x))


def _sorted_elements(items: Iterable[Hashable]) -> tuple:
    return tuple(sorted(set(items), key=element_key))


class _UnionFind:
    def __init__(self, items: Iterable[Hashable]) -> None:
        self.parent = {item: item for item in items}

    def find(self, item: Hashable) -> Hashable:
        parent = self.parent
        while parent[item] != item:
            parent[item] = parent[parent[item]]
            item = parent[item]
        return item

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if element_key(rb) < element_key(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra


# ------------------------------------------------------------
# PRESHEAVES
# ------------------------------------------------------------

class Presheaf(ABC):
    flavor: FlavorEnum

    def __init__(self, flavor: FlavorEnum) -> None:
        self.flavor = flavor
        self._values: dict[Graph, tuple] = {}

    def elements(self, graph: Graph) -> tuple:
        if graph not in self._values:
            self._values[graph] = self._compute(graph)
        return self._values[graph]

    @abstractmethod
    def _compute(self, graph: Graph) -> tuple:
        ...

    @abstractmethod
    def act(self, morphism: GraphMorphism, x: Any) -> Any:
        ...


class Representable(Presheaf):
    def __init__(self, graph: Graph, flavor: FlavorEnum) -> None:
        super().__init__(flavor)
        self.graph = graph

    def _compute(self, graph: Graph) -> tuple:
        return hom_set(graph, self.graph, self.flavor)

    def act(self, morphism: GraphMorphism, x: GraphMorphism) -> GraphMorphism:
        return compose(x, morphism, self.flavor)

    def __repr__(self) -> str:
        return f"<Representable {self.graph!r}>"


def representable(graph: Graph, flavor: FlavorEnum) -> Representable:
    return Representable(graph, flavor)


class RestrictedPresheaf(Presheaf):
    """``base`` with its value at the exceptional loop replaced by the empty set."""

    def __init__(self, base: Presheaf) -> None:
        super().__init__(base.flavor)
        self.base = base

    def _compute(self, graph: Graph) -> tuple:
        if graph.is_exceptional_loop:
            return ()
        return self.base.elements(graph)

    def act(self, morphism: GraphMorphism, x: Any) -> Any:
        return self.base.act(morphism, x)


class QuotientPresheaf(Presheaf):
    """The quotient of ``base`` by the congruence generated by ``a ~ b`` in ``base(anchor)``."""

    def __init__(self, base: Presheaf, anchor: Graph, a: Any, b: Any) -> None:
        super().__init__(base.flavor)
        self.base = base
        self.anchor = anchor
        self.a = a
        self.b = b
        self._classes: dict[Graph, dict[Any, Any]] = {}

    def _class_map(self, graph: Graph) -> dict[Any, Any]:
        if graph not in self._classes:
            forest = _UnionFind(self.base.elements(graph))
            for u in hom_set(graph, self.anchor, self.flavor):
                forest.union(self.base.act(u, self.a), self.base.act(u, self.b))
            self._classes[graph] = {x: forest.find(x) for x in forest.parent}
        return self._classes[graph]

    def _compute(self, graph: Graph) -> tuple:
        return _sorted_elements(self._class_map(graph).values())

    def act(self, morphism: GraphMorphism, x: Any) -> Any:
        pulled = self.base.act(morphism, x)
        return self._class_map(morphism.source)[pulled]

    def __repr__(self) -> str:
        return f"<QuotientPresheaf of {self.base!r} at {canonical_form(self.anchor)}>"


# ------------------------------------------------------------
# SEGAL CORES
# ------------------------------------------------------------

@dataclass(frozen=True)
class SegalArrow:
    edge: str
    vertex: str
    polarity: str


@dataclass(frozen=True)
class SegalDiagram:
    graph: Graph
    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    arrows: tuple[SegalArrow, ...]


def segal_diagram(graph: Graph) -> SegalDiagram:
    arrows: list[SegalArrow] = []
    for v in sorted(graph.vertices):
        arrows.extend(SegalArrow(e, v, "in") for e in sorted(graph.in_edges(v)))
        arrows.extend(SegalArrow(e, v, "out") for e in sorted(graph.out_edges(v)))
    return SegalDiagram(
        graph=graph,
        vertices=tuple(sorted(graph.vertices)),
        edges=tuple(sorted(graph.edges)),
        arrows=tuple(arrows),
    )


def corolla_piece(graph: Graph, vertex: str) -> Graph:
    return corolla_of(graph, vertex).graph


def leg_inclusion(graph: Graph, arrow: SegalArrow) -> GraphMorphism:
    """The inclusion of ``↑_e`` into the corolla of the arrow's vertex."""
    view = corolla_of(graph, arrow.vertex)
    copy = view.input_copy if arrow.polarity == "in" else view.output_copy
    return GraphMorphism.build(
        exceptional_edge(arrow.edge), view.graph, {arrow.edge: copy[arrow.edge]}, {}
    )


def vertex_inclusion(graph: Graph, vertex: str) -> GraphMorphism:
    view = corolla_of(graph, vertex)
    legs = {**view.input_legs, **view.output_legs}
    return GraphMorphism.build(view.graph, graph, legs, {vertex: corolla_subgraph(vertex)})


def edge_inclusion(graph: Graph, edge: str) -> GraphMorphism:
    return GraphMorphism.build(exceptional_edge(edge), graph, {edge: edge}, {})


class SegalCore(Presheaf):
    """Colimit over the Segal diagram of the representables of corollas and edges."""

    def __init__(self, graph: Graph, flavor: FlavorEnum) -> None:
        super().__init__(flavor)
        self.graph = graph
        self.diagram = segal_diagram(graph)
        self._classes: dict[Graph, dict[tuple, tuple]] = {}

    def _class_map(self, probe: Graph) -> dict[tuple, tuple]:
        if probe in self._classes:
            return self._classes[probe]
        graph, flavor = self.graph, self.flavor
        tagged: list[tuple] = []
        for v in self.diagram.vertices:
            tagged.extend(("v", v, y) for y in hom_set(probe, corolla_piece(graph, v), flavor))
        for e in self.diagram.edges:
            tagged.extend(("e", e, y) for y in hom_set(probe, exceptional_edge(e), flavor))
        forest = _UnionFind(tagged)
        for arrow in self.diagram.arrows:
            inclusion = leg_inclusion(graph, arrow)
            for y in hom_set(probe, exceptional_edge(arrow.edge), flavor):
                forest.union(("e", arrow.edge, y), ("v", arrow.vertex, compose(inclusion, y, flavor)))
        self._classes[probe] = {item: forest.find(item) for item in tagged}
        return self._classes[probe]

    def _compute(self, graph: Graph) -> tuple:
        return _sorted_elements(self._class_map(graph).values())

    def act(self, morphism: GraphMorphism, x: tuple) -> tuple:
        tag, name, y = x
        return self._class_map(morphism.source)[(tag, name, compose(y, morphism, self.flavor))]

    def core_map(self, x: tuple) -> GraphMorphism:
        """The Segal core inclusion into the representable of the graph."""
        tag, name, y = x
        if tag == "v":
            return compose(vertex_inclusion(self.graph, name), y, self.flavor)
        return compose(edge_inclusion(self.graph, name), y, self.flavor)


def segal_core(graph: Graph, flavor: FlavorEnum) -> SegalCore:
    return SegalCore(graph, flavor)


# ------------------------------------------------------------
# NATURAL TRANSFORMATIONS AND THE SEGAL CONDITION
# ------------------------------------------------------------

def segal_families(K: Presheaf, graph: Graph) -> list[tuple]:
    """Compatible families (x_v in K(C_v), x_e in K(↑_e)) over the Segal diagram."""
    diagram = segal_diagram(graph)
    arrows_at: dict[str, list[SegalArrow]] = {v: [] for v in diagram.vertices}
    for arrow in diagram.arrows:
        arrows_at[arrow.vertex].append(arrow)
    inclusions = {arrow: leg_inclusion(graph, arrow) for arrow in diagram.arrows}
    touched = {arrow.edge for arrow in diagram.arrows}
    families: list[tuple] = []

    def extend(index: int, chosen: dict[str, Any], edge_values: dict[str, Any]) -> None:
        if index == len(diagram.vertices):
            free = [e for e in diagram.edges if e not in touched]
            pools = [K.elements(exceptional_edge(e)) for e in free]
            for values in itertools.product(*pools):
                full = dict(edge_values)
                full.update(zip(free, values))
                families.append(
                    tuple(("v", v, chosen[v]) for v in diagram.vertices)
                    + tuple(("e", e, full[e]) for e in diagram.edges)
                )
            return
        v = diagram.vertices[index]
        for x_v in K.elements(corolla_piece(graph, v)):
            updated = dict(edge_values)
            consistent = True
            for arrow in arrows_at[v]:
                value = K.act(inclusions[arrow], x_v)
                if arrow.edge in updated and updated[arrow.edge] != value:
                    consistent = False
                    break
                updated[arrow.edge] = value
            if consistent:
                chosen[v] = x_v
                extend(index + 1, chosen, updated)
                del chosen[v]

    extend(0, {}, {})
    return families


def presheaf_hom(A: Presheaf, K: Presheaf) -> list:
    if A.flavor is not K.flavor:
        raise PresheafError("Presheaves live over different flavors.")
    if isinstance(A, Representable):
        return list(K.elements(A.graph))
    if isinstance(A, SegalCore):
        return segal_families(K, A.graph)
    raise PresheafError(f"Natural transformations out of {type(A).__name__} are not supported.")


def segal_map(K: Presheaf, graph: Graph, x: Any) -> tuple:
    diagram = segal_diagram(graph)
    return tuple(
        ("v", v, K.act(vertex_inclusion(graph, v), x)) for v in diagram.vertices
    ) + tuple(("e", e, K.act(edge_inclusion(graph, e), x)) for e in diagram.edges)


def segal_bijective(K: Presheaf, graph: Graph) -> bool:
    images = [segal_map(K, graph, x) for x in K.elements(graph)]
    families = segal_families(K, graph)
    if len(set(images)) != len(images) or len(images) != len(families):
        return False
    return set(images) == set(families)


def satisfies_segal(K: Presheaf, graphs: Iterable[Graph]) -> Report:
    results: list[AxiomResult] = []
    for graph in graphs:
        ok = segal_bijective(K, graph)
        if not ok:
            logger.warning("Segal map is not a bijection at %s", canonical_form(graph))
        results.append(
            AxiomResult(
                axiom=f"segal[{canonical_form(graph)}]",
                status=CheckStatusEnum.passed if ok else CheckStatusEnum.failed,
                counterexample=None if ok else GraphRecord.from_graph(graph).model_dump(mode="json"),
                checked_pairs=len(K.elements(graph)),
                failures=0 if ok else 1,
            )
        )
    report = Report(name="segal", flavor=K.flavor, results=results)
    logger.info("Segal check over %d graphs: %s", len(results), "pass" if report.passed else "fail")
    return report


def loop_inclusion() -> GraphMorphism:
    return GraphMorphism.build(exceptional_edge("e0"), exceptional_loop("e0"), {"e0": "e0"}, {})


def horn_wheel_check(K: Presheaf) -> bool:
    """K(↻) -> K(↑) along the inclusion ↑ -> ↻ is a bijection."""
    if K.flavor is not FlavorEnum.wheeled_a:
        raise FlavorError("The wheel horn only exists in the flavor with the exceptional loop.")
    inclusion = loop_inclusion()
    images = [K.act(inclusion, x) for x in K.elements(inclusion.target)]
    return len(set(images)) == len(images) and set(images) == set(K.elements(inclusion.source))


# ------------------------------------------------------------
# DEGENERACIES
# ------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyNormalForm:
    sigma: GraphMorphism
    element: Any


def single_codegeneracies(graph: Graph) -> list[GraphMorphism]:
    return [codegeneracy(graph, [v]) for v in unary_vertices(graph)]


def is_degenerate(K: Presheaf, graph: Graph, x: Any) -> bool:
    for s in single_codegeneracies(graph):
        if any(K.act(s, y) == x for y in K.elements(s.target)):
            return True
    return False


def ez_normal_form(K: Presheaf, graph: Graph, x: Any) -> DegeneracyNormalForm:
    sigma = identity(graph)
    current, element = graph, x
    while True:
        for s in single_codegeneracies(current):
            lift = next((y for y in K.elements(s.target) if K.act(s, y) == element), None)
            if lift is not None:
                sigma = compose(s, sigma, K.flavor)
                current, element = s.target, lift
                break
        else:
            return DegeneracyNormalForm(sigma=sigma, element=element)


def degeneracy_pairs(K: Presheaf, graph: Graph, x: Any) -> list[DegeneracyNormalForm]:
    """Every (σ, y) with σ an iterated codegeneracy, y nondegenerate and σ*y = x."""
    unary = unary_vertices(graph)
    found: list[DegeneracyNormalForm] = []
    for size in range(len(unary) + 1):
        for chosen in itertools.combinations(unary, size):
            sigma = codegeneracy(graph, chosen) if chosen else identity(graph)
            for y in K.elements(sigma.target):
                if K.act(sigma, y) == x and not is_degenerate(K, sigma.target, y):
                    found.append(DegeneracyNormalForm(sigma=sigma, element=y))
    return found


def _form_key(form: DegeneracyNormalForm) -> tuple:
    return form.sigma.key, element_key(form.element)


def normal_form_is_unique(K: Presheaf, graph: Graph, x: Any) -> bool:
    pairs = {_form_key(pair) for pair in degeneracy_pairs(K, graph, x)}
    return pairs == {_form_key(ez_normal_form(K, graph, x))}


def check_ez_lemma(presheaves: Iterable[Presheaf], graphs: Sequence[Graph]) -> AxiomResult:
    """Every element has exactly one (σ, y) with σ a codegeneracy and y nondegenerate."""
    checked = failures = 0
    witness: Optional[dict[str, Any]] = None
    for K in presheaves:
        for graph in graphs:
            for x in K.elements(graph):
                checked += 1
                if normal_form_is_unique(K, graph, x):
                    continue
                failures += 1
                if witness is None:
                    witness = {
                        "presheaf": repr(K),
                        "graph": GraphRecord.from_graph(graph).model_dump(mode="json"),
                        "pairs": len(degeneracy_pairs(K, graph, x)),
                    }
    if failures:
        logger.warning("Normal forms are not unique for %d of %d elements", failures, checked)
    return AxiomResult(
        axiom="ez_normal_form_uniqueness",
        status=CheckStatusEnum.failed if failures else CheckStatusEnum.passed,
        counterexample=witness,
        checked_pairs=checked,
        failures=failures,
    )


def random_quotients(
    bases: Sequence[Presheaf], anchors: Sequence[Graph], count: int, seed: int = 0
) -> list["QuotientPresheaf"]:
    """Quotients of ``bases`` identifying two random elements at a random anchor."""
    rng = random.Random(seed)
    choices = [(K, g) for K in bases for g in anchors if len(K.elements(g)) >= 2]
    if not choices:
        raise PresheafError("No base has two elements at any anchor.")
    quotients = []
    for _ in range(count):
        K, anchor = rng.choice(choices)
        a, b = rng.sample(list(K.elements(anchor)), 2)
        quotients.append(QuotientPresheaf(K, anchor, a, b))
    return quotients


# ------------------------------------------------------------
# PULLBACKS
# ------------------------------------------------------------

def _lifted_codegeneracy(square: CodegeneracySquare, sigma: GraphMorphism) -> Optional[GraphMorphism]:
    collapsed = collapsed_vertices(square.f1) | collapsed_vertices(square.s1)
    rest = collapsed_vertices(sigma) - collapsed
    if not collapsed <= collapsed_vertices(sigma):
        return None
    lifted = codegeneracy(square.target, rest) if rest else identity(square.target)
    if lifted.target != sigma.target:
        return None
    return lifted


def pullback_check(square: CodegeneracySquare, K: Presheaf) -> bool:
    """K(H) -> K(H1) x_{K(G)} K(H2) is a bijection, cross-checked against normal forms."""
    s1, s2, f1, f2 = square.s1, square.s2, square.f1, square.f2
    pullback = {
        (x1, x2)
        for x1 in K.elements(s1.target)
        for x2 in K.elements(s2.target)
        if K.act(s1, x1) == K.act(s2, x2)
    }
    restriction = {x: (K.act(f1, x), K.act(f2, x)) for x in K.elements(square.target)}
    if len(set(restriction.values())) != len(restriction):
        return False
    if set(restriction.values()) != pullback:
        return False
    inverse_map = {pair: x for x, pair in restriction.items()}
    for x1, x2 in pullback:
        form = ez_normal_form(K, square.source, K.act(s1, x1))
        lifted = _lifted_codegeneracy(square, form.sigma)
        if lifted is None:
            return False
        if K.act(lifted, form.element) != inverse_map[(x1, x2)]:
            return False
    return True


# ------------------------------------------------------------
# TABULATION
# ------------------------------------------------------------

def morphism_key(morphism: GraphMorphism) -> str:
    edges = ",".join(f"{e}:{k}" for e, k in morphism.f0)
    # edges alone do not separate wheeled maps
    parts = ",".join(
        f"{v}:{part.kind.value}[{'+'.join(sorted(part.vertices)) or part.edge}]"
        for v, part in morphism.f1
    )
    return f"{canonical_form(morphism.source)}>{canonical_form(morphism.target)}|{edges}|{parts}"


def _to_canonical(morphism: GraphMorphism, flavor: FlavorEnum) -> GraphMorphism:
    source_iso = canonical_iso(morphism.source)
    target_iso = canonical_iso(morphism.target)
    return compose(target_iso, compose(morphism, inverse(source_iso), flavor), flavor)


class TabulatedPresheaf(Presheaf):
    """A presheaf stored on canonical representatives, transported along canonical isomorphisms."""

    def __init__(
        self,
        flavor: FlavorEnum,
        bound: int,
        values: dict[str, Sequence[str]],
        actions: dict[str, dict[str, str]],
    ) -> None:
        super().__init__(flavor)
        self.bound = bound
        self.values = {key: tuple(names) for key, names in values.items()}
        self.actions = actions

    def _compute(self, graph: Graph) -> tuple:
        key = canonical_form(graph)
        if key not in self.values:
            raise PresheafError(f"No tabulated value at {key}.")
        return self.values[key]

    def act(self, morphism: GraphMorphism, x: str) -> str:
        key = morphism_key(_to_canonical(morphism, self.flavor))
        table = self.actions.get(key)
        if table is None or x not in table:
            raise PresheafError(f"No tabulated action for {key} on {x!r}.")
        return table[x]

    def to_record(self) -> PresheafRecord:
        return PresheafRecord(
            bound=self.bound,
            values={key: list(names) for key, names in sorted(self.values.items())},
            actions={key: dict(sorted(table.items())) for key, table in sorted(self.actions.items())},
        )

    @classmethod
    def from_record(cls, record: PresheafRecord, flavor: FlavorEnum) -> "TabulatedPresheaf":
        return cls(flavor, record.bound, record.values, record.actions)


def tabulate(K: Presheaf, catalog: Catalog, bound: Optional[int] = None) -> TabulatedPresheaf:
    graphs = catalog.up_to_degree(bound) if bound is not None else catalog.graphs
    names: dict[Graph, dict[Any, str]] = {}
    values: dict[str, list[str]] = {}
    for graph in graphs:
        labels = {x: f"x{index}" for index, x in enumerate(K.elements(graph))}
        names[graph] = labels
        values[canonical_form(graph)] = list(labels.values())
    actions: dict[str, dict[str, str]] = {}
    for source in graphs:
        for target in graphs:
            for m in hom_set(source, target, K.flavor):
                actions[morphism_key(m)] = {
                    names[target][x]: names[source][K.act(m, x)] for x in K.elements(target)
                }
    effective = bound if bound is not None else max((degree(g, K.flavor) for g in graphs), default=0)
    return TabulatedPresheaf(K.flavor, effective, values, actions)


def validate_functoriality(K: Presheaf, graphs: Sequence[Graph]) -> int:
    """Raise PresheafError on the first violation; return the number of checks."""
    checks = 0
    for graph in graphs:
        unit = identity(graph)
        for x in K.elements(graph):
            checks += 1
            if K.act(unit, x) != x:
                raise PresheafError(f"Identity does not act trivially at {canonical_form(graph)}.")
    for g, m, k in itertools.product(graphs, repeat=3):
        inner = hom_set(g, m, K.flavor)
        if not inner:
            continue
        for outer in hom_set(m, k, K.flavor):
            for first in inner:
                composite = compose(outer, first, K.flavor)
                for x in K.elements(k):
                    checks += 1
                    pulled = K.act(outer, x)
                    if pulled not in K.elements(m):
                        raise PresheafError("Action leaves the value set.")
                    if K.act(composite, x) != K.act(first, pulled):
                        raise PresheafError(
                            f"Composition is not respected along {canonical_form(g)} -> "
                            f"{canonical_form(m)} -> {canonical_form(k)}."
                        )
    logger.info("Functoriality verified with %d checks", checks)
    return checks
