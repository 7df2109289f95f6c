from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from errors import MorphismError
from graphs import (
    Graph,
    Subgraph,
    corolla_subgraph,
    degree,
    edge_subgraph,
    is_subgraph,
    is_valid_in,
    loop_subgraph,
    reduce_unary_vertices,
    span_subgraph,
    subgraph_inputs,
    subgraph_outputs,
    subgraphs_of,
    whole_subgraph,
)
from models import FlavorEnum, MorphismClassEnum, SubgraphKindEnum

logger = logging.getLogger("wheelgraph.morphisms")

# Validation reason codes
UNKNOWN_EDGE = "unknown_edge"
UNKNOWN_VERTEX = "unknown_vertex"
PROFILE_MISMATCH = "profile_mismatch"
IMAGE_NOT_SUBGRAPH = "image_not_subgraph"
OVERLAPPING_IMAGES = "overlapping_images"
CLOSED_EDGE_VIOLATION = "closed_edge_violation"
FLAVOR_VIOLATION = "flavor_violation"


@dataclass(frozen=True)
class GraphMorphism:
    source: Graph
    target: Graph
    f0: tuple[tuple[str, str], ...]
    f1: tuple[tuple[str, Subgraph], ...]

    @classmethod
    def build(
        cls,
        source: Graph,
        target: Graph,
        f0: Mapping[str, str],
        f1: Mapping[str, Subgraph],
    ) -> "GraphMorphism":
        return cls(
            source=source,
            target=target,
            f0=tuple(sorted(f0.items())),
            f1=tuple(sorted(f1.items(), key=lambda item: item[0])),
        )

    @cached_property
    def edge_map(self) -> dict[str, str]:
        return dict(self.f0)

    @cached_property
    def vertex_map(self) -> dict[str, Subgraph]:
        return dict(self.f1)

    def on_edge(self, edge: str) -> str:
        return self.edge_map[edge]

    def on_vertex(self, vertex: str) -> Subgraph:
        return self.vertex_map[vertex]

    @property
    def key(self) -> tuple:
        return (self.f0, tuple((v, s.sort_key()) for v, s in self.f1))

    def __repr__(self) -> str:
        return f"<GraphMorphism f0={dict(self.f0)} f1={dict(self.f1)}>"


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


_VALID = Validation(True)


def _invalid(reason: str, detail: str) -> Validation:
    return Validation(False, reason, detail)


# ------------------------------------------------------------
# IMAGES
# ------------------------------------------------------------

def _image_of_piece(
    morphism: GraphMorphism,
    vertices: frozenset[str],
    inner: frozenset[str],
    flavor: FlavorEnum,
) -> Optional[Subgraph]:
    source, target = morphism.source, morphism.target
    if not vertices:
        (edge,) = inner or source.edges
        if source.is_exceptional_loop:
            return loop_subgraph(target) if target.is_exceptional_loop else None
        return edge_subgraph(morphism.on_edge(edge))

    if any(morphism.on_vertex(v).kind is SubgraphKindEnum.loop for v in vertices):
        if len(vertices) != 1 or not target.is_exceptional_loop:
            return None
        return loop_subgraph(target)

    incident = {
        e for v in vertices for e in source.in_edges(v) | source.out_edges(v)
    }
    legs = incident - inner
    spanning = [v for v in vertices if not morphism.on_vertex(v).is_edge]
    if not spanning:
        if not legs:
            # a wheel of unary vertices collapses onto the exceptional loop
            return loop_subgraph(target) if target.is_exceptional_loop else None
        return edge_subgraph(morphism.on_edge(min(incident)))

    image_vertices: set[str] = set()
    image_inner: set[str] = set()
    for v in spanning:
        part = morphism.on_vertex(v)
        if image_vertices & part.vertices:
            return None
        image_vertices |= part.vertices
        image_inner |= part.inner

    parent = {e: e for e in incident}

    def find(e: str) -> str:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for v in vertices:
        if morphism.on_vertex(v).is_edge:
            (a,), (b,) = source.in_edges(v), source.out_edges(v)
            parent[find(a)] = find(b)
    classes: dict[str, list[str]] = {}
    for e in incident:
        classes.setdefault(find(e), []).append(e)
    for members in classes.values():
        if all(e in inner for e in members):
            image_inner.add(morphism.on_edge(members[0]))

    frozen_vertices = frozenset(image_vertices)
    frozen_inner = frozenset(image_inner)
    if len(frozen_vertices) == 1 and not frozen_inner:
        (vertex,) = frozen_vertices
        candidate = corolla_subgraph(vertex)
    else:
        candidate = span_subgraph(target, frozen_vertices)
        if candidate.inner != frozen_inner:
            return None
    if not is_subgraph(target, candidate, flavor):
        return None
    return candidate


def image_of_subgraph(
    morphism: GraphMorphism,
    subgraph: Subgraph,
    flavor: FlavorEnum = FlavorEnum.wheeled_a,
) -> Optional[Subgraph]:
    if subgraph.kind is SubgraphKindEnum.edge:
        return edge_subgraph(morphism.on_edge(subgraph.edge))
    if subgraph.kind is SubgraphKindEnum.loop:
        return _image_of_piece(morphism, frozenset(), subgraph.inner, flavor)
    return _image_of_piece(morphism, subgraph.vertices, subgraph.inner, flavor)


def image_subgraph(
    morphism: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> Optional[Subgraph]:
    return image_of_subgraph(morphism, whole_subgraph(morphism.source), flavor)


# ------------------------------------------------------------
# VALIDATION
# ------------------------------------------------------------

def validate(
    morphism: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> Validation:
    source, target = morphism.source, morphism.target
    if not is_valid_in(source, flavor) or not is_valid_in(target, flavor):
        return _invalid(FLAVOR_VIOLATION, f"endpoints are not objects of {flavor.value}")
    edge_map = morphism.edge_map
    if set(edge_map) != set(source.edges):
        return _invalid(UNKNOWN_EDGE, "f0 must be defined on every source edge")
    if not set(edge_map.values()) <= target.edges:
        return _invalid(UNKNOWN_EDGE, "f0 lands outside the target edges")
    vertex_map = morphism.vertex_map
    if set(vertex_map) != set(source.vertices):
        return _invalid(UNKNOWN_VERTEX, "f1 must be defined on every source vertex")

    for e in source.closed:
        if not target.is_exceptional_loop or edge_map[e] not in target.closed:
            return _invalid(CLOSED_EDGE_VIOLATION, f"closed edge {e} has no closed image")

    for v in sorted(source.vertices):
        part = vertex_map[v]
        if not is_subgraph(target, part, flavor):
            return _invalid(IMAGE_NOT_SUBGRAPH, f"f1({v}) is not a subgraph of the target")
        ins = source.in_edges(v)
        outs = source.out_edges(v)
        image_ins = [edge_map[e] for e in ins]
        image_outs = [edge_map[e] for e in outs]
        if (
            len(set(image_ins)) != len(ins)
            or set(image_ins) != subgraph_inputs(target, part)
            or len(set(image_outs)) != len(outs)
            or set(image_outs) != subgraph_outputs(target, part)
        ):
            return _invalid(PROFILE_MISMATCH, f"profile of {v} does not match f1({v})")

    spans = [vertex_map[v].vertices for v in source.vertices if not vertex_map[v].is_edge]
    seen: set[str] = set()
    for part_vertices in spans:
        if seen & part_vertices:
            return _invalid(OVERLAPPING_IMAGES, "vertex images share a vertex")
        seen |= part_vertices

    if image_subgraph(morphism, flavor) is None:
        return _invalid(IMAGE_NOT_SUBGRAPH, "the image of the source is not a subgraph")
    return _VALID


# ------------------------------------------------------------
# CONSTRUCTION
# ------------------------------------------------------------

def identity(graph: Graph) -> GraphMorphism:
    return GraphMorphism.build(
        graph,
        graph,
        {e: e for e in graph.edges},
        {v: corolla_subgraph(v) for v in graph.vertices},
    )


def compose(
    second: GraphMorphism,
    first: GraphMorphism,
    flavor: FlavorEnum = FlavorEnum.wheeled_a,
) -> GraphMorphism:
    """Return ``second ∘ first``."""
    if first.target != second.source:
        raise MorphismError("Cannot compose: target of the first map is not the source of the second.")
    f0 = {e: second.on_edge(first.on_edge(e)) for e in first.source.edges}
    f1: dict[str, Subgraph] = {}
    for v, part in first.f1:
        image = image_of_subgraph(second, part, flavor)
        if image is None:
            raise MorphismError(f"Image of f1({v}) is not a subgraph.")
        f1[v] = image
    return GraphMorphism.build(first.source, second.target, f0, f1)


def codegeneracy(graph: Graph, vertices: Iterable[str]) -> GraphMorphism:
    """The iterated codegeneracy G -> G(↑ at every listed vertex)."""
    chosen = frozenset(vertices)
    reduction = reduce_unary_vertices(graph, chosen)
    f1: dict[str, Subgraph] = {}
    for v in graph.vertices:
        if v in chosen:
            (a,) = graph.in_edges(v)
            f1[v] = edge_subgraph(reduction.edge_map[a])
        else:
            f1[v] = corolla_subgraph(v)
    return GraphMorphism.build(graph, reduction.graph, dict(reduction.edge_map), f1)


def inverse(morphism: GraphMorphism) -> GraphMorphism:
    if not is_isomorphism(morphism):
        raise MorphismError("Only isomorphisms have inverses.")
    f0 = {k: e for e, k in morphism.f0}
    f1 = {}
    for v, part in morphism.f1:
        (w,) = part.vertices
        f1[w] = corolla_subgraph(v)
    return GraphMorphism.build(morphism.target, morphism.source, f0, f1)


# ------------------------------------------------------------
# HOM-SETS
# ------------------------------------------------------------

def _search_order(graph: Graph) -> list[str]:
    if not graph.vertices:
        return []
    start = min(graph.vertices)
    order = [start]
    seen = {start}
    index = 0
    while index < len(order):
        v = order[index]
        index += 1
        neighbours = set()
        for e in graph.in_edges(v):
            if (s := graph.source_of(e)) is not None:
                neighbours.add(s)
        for e in graph.out_edges(v):
            if (t := graph.target_of(e)) is not None:
                neighbours.add(t)
        for w in sorted(neighbours - seen):
            seen.add(w)
            order.append(w)
    return order


def _extend(partial: dict[str, str], edges: Sequence[str], images: Sequence[str]) -> Optional[dict[str, str]]:
    extended = dict(partial)
    for e, k in zip(edges, images):
        previous = extended.get(e)
        if previous is not None and previous != k:
            return None
        extended[e] = k
    return extended


@lru_cache(maxsize=None)
def _hom_set(source: Graph, target: Graph, flavor: FlavorEnum) -> tuple[GraphMorphism, ...]:
    found: list[GraphMorphism] = []
    if not source.vertices:
        (edge,) = source.edges
        for k in sorted(target.edges):
            candidate = GraphMorphism.build(source, target, {edge: k}, {})
            if validate(candidate, flavor):
                found.append(candidate)
        return tuple(found)

    by_profile: dict[tuple[int, int], list[tuple[Subgraph, list[str], list[str]]]] = {}
    for part in sorted(subgraphs_of(target, flavor), key=lambda s: s.sort_key()):
        ins = sorted(subgraph_inputs(target, part))
        outs = sorted(subgraph_outputs(target, part))
        by_profile.setdefault((len(ins), len(outs)), []).append((part, ins, outs))

    order = _search_order(source)

    def assign(index: int, f0: dict[str, str], f1: dict[str, Subgraph], used: frozenset[str]) -> None:
        if index == len(order):
            candidate = GraphMorphism.build(source, target, f0, f1)
            if validate(candidate, flavor):
                found.append(candidate)
            return
        v = order[index]
        ins = sorted(source.in_edges(v))
        outs = sorted(source.out_edges(v))
        for part, part_ins, part_outs in by_profile.get((len(ins), len(outs)), []):
            if part.vertices & used:
                continue
            for images_in in itertools.permutations(part_ins):
                after_in = _extend(f0, ins, images_in)
                if after_in is None:
                    continue
                for images_out in itertools.permutations(part_outs):
                    after_out = _extend(after_in, outs, images_out)
                    if after_out is None:
                        continue
                    f1[v] = part
                    assign(index + 1, after_out, f1, used | part.vertices)
                    del f1[v]

    assign(0, {}, {}, frozenset())
    found.sort(key=lambda m: m.key)
    return tuple(found)


def hom_set(
    source: Graph, target: Graph, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> tuple[GraphMorphism, ...]:
    return _hom_set(source, target, flavor)


def clear_hom_cache() -> None:
    _hom_set.cache_clear()


# ------------------------------------------------------------
# CLASSES OF MAPS
# ------------------------------------------------------------

def is_isomorphism(morphism: GraphMorphism) -> bool:
    source, target = morphism.source, morphism.target
    if len(source.edges) != len(target.edges) or len(source.vertices) != len(target.vertices):
        return False
    if len(set(morphism.edge_map.values())) != len(source.edges):
        return False
    if not all(part.is_corolla for _, part in morphism.f1):
        return False
    return image_subgraph(morphism) == whole_subgraph(target)


def isomorphisms_between(
    source: Graph, target: Graph, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> tuple[GraphMorphism, ...]:
    if (
        len(source.vertices) != len(target.vertices)
        or len(source.edges) != len(target.edges)
        or len(source.inner_edges) != len(target.inner_edges)
    ):
        return ()
    return tuple(m for m in hom_set(source, target, flavor) if is_isomorphism(m))


def automorphisms(graph: Graph, flavor: FlavorEnum = FlavorEnum.wheeled_a) -> tuple[GraphMorphism, ...]:
    return isomorphisms_between(graph, graph, flavor)


def in_plus(morphism: GraphMorphism) -> bool:
    return not any(part.is_edge for _, part in morphism.f1)


def in_minus(morphism: GraphMorphism) -> bool:
    if is_isomorphism(morphism):
        return True
    if not morphism.source.vertices:
        return False
    hit: set[str] = set()
    for _, part in morphism.f1:
        if part.is_corolla:
            hit |= part.vertices
        elif not part.is_edge:
            return False
    if hit != set(morphism.target.vertices):
        return False
    # a loop reached only through legs is a contraction, not a collapse
    covered = {morphism.on_edge(e) for e in morphism.source.inner_edges}
    return morphism.target.inner_edges <= covered


def collapsed_vertices(morphism: GraphMorphism) -> frozenset[str]:
    return frozenset(v for v, part in morphism.f1 if part.is_edge)


def classify(
    morphism: GraphMorphism, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> MorphismClassEnum:
    if is_isomorphism(morphism):
        return MorphismClassEnum.isomorphism
    source, target = morphism.source, morphism.target
    if source.is_point and target.is_exceptional_loop:
        return MorphismClassEnum.exceptional_inner_coface
    if in_minus(morphism) and len(collapsed_vertices(morphism)) == 1:
        return MorphismClassEnum.codegeneracy
    if in_plus(morphism) and degree(target, flavor) - degree(source, flavor) == 1:
        if image_subgraph(morphism, flavor) == whole_subgraph(target):
            return MorphismClassEnum.inner_coface
        return MorphismClassEnum.outer_coface
    return MorphismClassEnum.composite


def is_monomorphism(
    morphism: GraphMorphism,
    test_objects: Iterable[Graph],
    flavor: FlavorEnum = FlavorEnum.wheeled_a,
) -> bool:
    """Injectivity of hom(X, -) along the map for every listed test object X.

    Wheeled hom-sets are not faithful on edges (a unary vertex may go to its
    own corolla or to an edge), so colliding edge maps are settled by full
    composites.
    """
    edge_map = morphism.edge_map
    if len(set(edge_map.values())) != len(edge_map):
        return False
    for probe in test_objects:
        seen: dict[tuple, list[GraphMorphism]] = {}
        for a in hom_set(probe, morphism.source, flavor):
            composite = tuple((e, edge_map[k]) for e, k in a.f0)
            clashes = seen.setdefault(composite, [])
            if clashes:
                image = compose(morphism, a, flavor)
                if any(compose(morphism, b, flavor) == image for b in clashes):
                    return False
            clashes.append(a)
    return True


@dataclass(frozen=True)
class CodegeneracySquare:
    """A commuting square ``f1 ∘ s1 = f2 ∘ s2`` of codegeneracies out of a common source."""

    s1: GraphMorphism
    s2: GraphMorphism
    f1: GraphMorphism
    f2: GraphMorphism

    @property
    def source(self) -> Graph:
        return self.s1.source

    @property
    def target(self) -> Graph:
        return self.f1.target
