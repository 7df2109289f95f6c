"""Enumeration of connected graphs up to isomorphism, with canonical forms.

Canonical forms are computed by brute force over vertex orderings, which is
why the module refuses graphs beyond a few vertices.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional

import networkx as nx

from errors import CatalogBoundsError, SubstitutionError
from graphs import (
    Graph,
    Insertion,
    corolla_subgraph,
    degree,
    graph_substitution,
    is_valid_in,
    substitute,
)
from models import CheckStatusEnum, FlavorEnum
from morphisms import GraphMorphism, hom_set
from schemas import AxiomResult, GraphRecord

logger = logging.getLogger("wheelgraph.catalog")

CATALOG_FORMAT_VERSION = 1
MAX_CANONICAL_VERTICES = 4
MAX_CANONICAL_EDGES = 8


@dataclass(frozen=True)
class Bounds:
    max_vertices: int = 3
    max_inner: int = 3
    max_valence: int = 3
    max_legs: int = 3

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.max_vertices, self.max_inner, self.max_valence, self.max_legs)

    def token(self) -> str:
        return ",".join(str(value) for value in self.as_tuple())

    def admits(self, graph: Graph) -> bool:
        if len(graph.vertices) > self.max_vertices:
            return False
        if len(graph.inner_edges - graph.closed) > self.max_inner:
            return False
        if len(graph.legs) > self.max_legs:
            return False
        return all(graph.valence(v) <= self.max_valence for v in graph.vertices)


# ------------------------------------------------------------
# CANONICAL FORMS
# ------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalLabeling:
    key: str
    vertex_map: dict[str, str] = field(hash=False)
    edge_map: dict[str, str] = field(hash=False)


def _check_size(graph: Graph) -> None:
    if len(graph.vertices) > MAX_CANONICAL_VERTICES or len(graph.edges) > MAX_CANONICAL_EDGES:
        raise CatalogBoundsError(
            f"Canonical forms are limited to {MAX_CANONICAL_VERTICES} vertices "
            f"and {MAX_CANONICAL_EDGES} edges."
        )


def _descriptor(graph: Graph, edge: str, index: dict[str, int]) -> tuple[int, int, int]:
    s, t = graph.source_of(edge), graph.target_of(edge)
    return (
        index[s] if s is not None else -1,
        index[t] if t is not None else -1,
        1 if edge in graph.closed else 0,
    )


@lru_cache(maxsize=None)
def canonical_labeling(graph: Graph) -> CanonicalLabeling:
    _check_size(graph)
    best: Optional[tuple] = None
    best_order: tuple[str, ...] = ()
    for order in itertools.permutations(sorted(graph.vertices)):
        index = {v: position for position, v in enumerate(order)}
        table = tuple(sorted(_descriptor(graph, e, index) for e in graph.edges))
        if best is None or table < best:
            best, best_order = table, order
    index = {v: position for position, v in enumerate(best_order)}
    ranked = sorted(graph.edges, key=lambda e: (_descriptor(graph, e, index), e))
    key = f"{len(graph.vertices)}|" + ";".join(
        f"{s},{t},{c}" for s, t, c in (best or ())
    )
    return CanonicalLabeling(
        key=key,
        vertex_map={v: f"v{position}" for v, position in index.items()},
        edge_map={e: f"e{position}" for position, e in enumerate(ranked)},
    )


def canonical_form(graph: Graph) -> str:
    return canonical_labeling(graph).key


def canonical_representative(graph: Graph) -> Graph:
    labeling = canonical_labeling(graph)
    edges = {
        labeling.edge_map[e]: (
            labeling.vertex_map[s] if (s := graph.source_of(e)) is not None else None,
            labeling.vertex_map[t] if (t := graph.target_of(e)) is not None else None,
        )
        for e in graph.edges
    }
    return Graph.build(
        labeling.vertex_map.values(),
        edges,
        closed=(labeling.edge_map[e] for e in graph.closed),
    )


def canonical_iso(graph: Graph) -> GraphMorphism:
    """The relabeling isomorphism from ``graph`` onto its canonical representative."""
    labeling = canonical_labeling(graph)
    return GraphMorphism.build(
        graph,
        canonical_representative(graph),
        labeling.edge_map,
        {v: corolla_subgraph(w) for v, w in labeling.vertex_map.items()},
    )


def _as_networkx(graph: Graph) -> nx.MultiDiGraph:
    digraph = nx.MultiDiGraph()
    digraph.add_nodes_from(graph.vertices, kind="vertex")
    for e in graph.edges:
        src, tgt = graph.source_of(e), graph.target_of(e)
        if e in graph.closed:
            digraph.add_node(("loop", e), kind="loop")
            digraph.add_edge(("loop", e), ("loop", e))
            continue
        if src is None and tgt is None:
            digraph.add_node(("bare", e), kind="bare")
            continue
        if src is None:
            src = ("in", e)
            digraph.add_node(src, kind="in")
        if tgt is None:
            tgt = ("out", e)
            digraph.add_node(tgt, kind="out")
        digraph.add_edge(src, tgt)
    return digraph


def are_isomorphic(first: Graph, second: Graph) -> bool:
    """Isomorphism test through networkx, independent of the canonical forms."""
    return nx.is_isomorphic(
        _as_networkx(first),
        _as_networkx(second),
        node_match=lambda a, b: a["kind"] == b["kind"],
    )


# ------------------------------------------------------------
# ENUMERATION
# ------------------------------------------------------------

def _inner_edge_choices(vertex_count: int, max_inner: int, allow_self_loops: bool):
    pairs = [
        (a, b)
        for a in range(vertex_count)
        for b in range(vertex_count)
        if allow_self_loops or a != b
    ]
    for size in range(max_inner + 1):
        yield from itertools.combinations_with_replacement(pairs, size)


def _leg_choices(
    vertex_count: int,
    inner: tuple[tuple[int, int], ...],
    bounds: Bounds,
):
    options = []
    for v in range(vertex_count):
        used = sum(1 for a, _ in inner if a == v) + sum(1 for _, b in inner if b == v)
        room = bounds.max_valence - used
        if room < 0:
            return
        options.append(
            [(a, b) for a in range(room + 1) for b in range(room + 1 - a)]
        )
    for choice in itertools.product(*options):
        if sum(a + b for a, b in choice) <= bounds.max_legs:
            yield choice


def _assemble(
    vertex_count: int,
    inner: tuple[tuple[int, int], ...],
    legs: tuple[tuple[int, int], ...],
) -> Graph:
    vertices = [f"v{index}" for index in range(vertex_count)]
    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    for position, (a, b) in enumerate(inner):
        edges[f"e{position}"] = (vertices[a], vertices[b])
    for v, (ins, outs) in enumerate(legs):
        for index in range(ins):
            edges[f"i{v}_{index}"] = (None, vertices[v])
        for index in range(outs):
            edges[f"o{v}_{index}"] = (vertices[v], None)
    return Graph.build(vertices, edges)


def iter_candidate_graphs(flavor: FlavorEnum, bounds: Bounds) -> Iterator[Graph]:
    yield Graph.build([], {"e0": (None, None)})
    if flavor.allows_loop:
        yield Graph.build([], {"e0": (None, None)}, closed=["e0"])
    for vertex_count in range(1, bounds.max_vertices + 1):
        for inner in _inner_edge_choices(vertex_count, bounds.max_inner, flavor.is_wheeled):
            if vertex_count - 1 > len(inner):
                continue
            for legs in _leg_choices(vertex_count, inner, bounds):
                yield _assemble(vertex_count, inner, legs)


def _sort_key(graph: Graph, flavor: FlavorEnum) -> tuple:
    return (degree(graph, flavor), len(graph.vertices), len(graph.edges), canonical_form(graph))


def enumerate_graphs(flavor: FlavorEnum, bounds: Bounds) -> "Catalog":
    if bounds.max_vertices > MAX_CANONICAL_VERTICES:
        raise CatalogBoundsError(
            f"Catalog bounds exceed {MAX_CANONICAL_VERTICES} vertices."
        )
    if bounds.max_inner + bounds.max_legs > MAX_CANONICAL_EDGES:
        raise CatalogBoundsError(f"Catalog bounds exceed {MAX_CANONICAL_EDGES} edges.")
    found: dict[str, Graph] = {}
    candidates = 0
    for candidate in iter_candidate_graphs(flavor, bounds):
        candidates += 1
        if not is_valid_in(candidate, flavor):
            continue
        key = canonical_form(candidate)
        if key not in found:
            found[key] = canonical_representative(candidate)
    graphs = sorted(found.values(), key=lambda g: _sort_key(g, flavor))
    logger.info(
        "Enumerated %d graphs for %s from %d candidates (bounds %s)",
        len(graphs),
        flavor.value,
        candidates,
        bounds.token(),
    )
    return Catalog(flavor=flavor, bounds=bounds, graphs=tuple(graphs))


# ------------------------------------------------------------
# CATALOG
# ------------------------------------------------------------

@dataclass
class HomTable:
    flavor: FlavorEnum
    entries: dict[tuple[int, int], tuple[GraphMorphism, ...]]

    def get(self, source: int, target: int) -> tuple[GraphMorphism, ...]:
        return self.entries.get((source, target), ())

    def morphisms(self) -> Iterator[GraphMorphism]:
        for pair in sorted(self.entries):
            yield from self.entries[pair]

    @property
    def total(self) -> int:
        return sum(len(morphisms) for morphisms in self.entries.values())


@dataclass
class Catalog:
    flavor: FlavorEnum
    bounds: Bounds
    graphs: tuple[Graph, ...]
    _index: dict[str, int] = field(default_factory=dict, repr=False)
    _table: Optional[HomTable] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self._index = {canonical_form(g): position for position, g in enumerate(self.graphs)}

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)

    def __contains__(self, graph: object) -> bool:
        return isinstance(graph, Graph) and canonical_form(graph) in self._index

    def position(self, graph: Graph) -> int:
        key = canonical_form(graph)
        if key not in self._index:
            raise CatalogBoundsError(f"Graph {graph!r} lies outside the catalog bounds.")
        return self._index[key]

    def representative(self, graph: Graph) -> Graph:
        return self.graphs[self.position(graph)]

    def up_to_degree(self, bound: int) -> tuple[Graph, ...]:
        return tuple(g for g in self.graphs if degree(g, self.flavor) <= bound)

    def hom(self, source: Graph, target: Graph) -> tuple[GraphMorphism, ...]:
        return hom_set(source, target, self.flavor)

    def hom_table(self, jobs: int = 1) -> HomTable:
        if self._table is None:
            from workers import build_hom_table

            self._table = build_hom_table(self, jobs)
        return self._table

    def morphisms(self, jobs: int = 1) -> Iterator[GraphMorphism]:
        return self.hom_table(jobs).morphisms()

    def subcatalog(self, predicate) -> "Catalog":
        return Catalog(
            flavor=self.flavor,
            bounds=self.bounds,
            graphs=tuple(g for g in self.graphs if predicate(g)),
        )


# ------------------------------------------------------------
# SUBSTITUTION LAWS
# ------------------------------------------------------------

def _pair_legs(legs: Iterable[str], edges: Iterable[str]) -> dict[str, str]:
    return dict(zip(sorted(legs), sorted(edges)))


def _fitting_insertion(piece: Graph, inputs: frozenset[str], outputs: frozenset[str]) -> Optional[Insertion]:
    if len(piece.inputs) != len(inputs) or len(piece.outputs) != len(outputs):
        return None
    if piece.is_exceptional_edge and inputs & outputs:
        return None
    return Insertion(piece, _pair_legs(piece.inputs, inputs), _pair_legs(piece.outputs, outputs))


def same_shape(first: Graph, second: Graph) -> bool:
    small = all(
        len(g.vertices) <= MAX_CANONICAL_VERTICES and len(g.edges) <= MAX_CANONICAL_EDGES
        for g in (first, second)
    )
    if small:
        return canonical_form(first) == canonical_form(second)
    return are_isomorphic(first, second)


def staged_substitutions(
    host: Graph, vertex: str, piece: Graph, inner_vertex: str, inner: Graph
) -> Optional[tuple[Graph, Graph]]:
    """``(G(H_v))(K_w)`` and ``G((H(K_w))_v)``, or None when the profiles do not fit."""
    outer = _fitting_insertion(piece, host.in_edges(vertex), host.out_edges(vertex))
    nested_insertion = _fitting_insertion(
        inner, piece.in_edges(inner_vertex), piece.out_edges(inner_vertex)
    )
    if outer is None or nested_insertion is None:
        return None

    first = graph_substitution(host, {vertex: outer})
    legs = {**outer.inputs, **outer.outputs}

    def moved(edge: str) -> str:
        if edge in piece.inner_edges:
            return first.inner_map[(vertex, edge)]
        return first.edge_map[legs[edge]]

    left = substitute(
        first.graph,
        {
            first.vertex_map[(vertex, inner_vertex)]: Insertion(
                inner,
                {leg: moved(e) for leg, e in nested_insertion.inputs.items()},
                {leg: moved(e) for leg, e in nested_insertion.outputs.items()},
            )
        },
    )

    nested = graph_substitution(piece, {inner_vertex: nested_insertion})
    rename = nested.edge_map
    right = substitute(
        host,
        {
            vertex: Insertion(
                nested.graph,
                {rename[leg]: e for leg, e in outer.inputs.items()},
                {rename[leg]: e for leg, e in outer.outputs.items()},
            )
        },
    )
    return left, right


def check_substitution_associativity(hosts: Iterable[Graph], pieces: Iterable[Graph]) -> AxiomResult:
    """Two-stage substitution agrees with one-shot substitution, up to isomorphism.

    Legs are matched to edges in sorted order; ↑ is never inserted at a vertex
    carrying a self-incident edge.
    """
    by_profile: dict[tuple[int, int], list[Graph]] = {}
    for piece in pieces:
        if not piece.is_exceptional_loop:
            by_profile.setdefault((len(piece.inputs), len(piece.outputs)), []).append(piece)
    checked = failures = 0
    witness: Optional[dict] = None
    for host in hosts:
        if host.closed:
            continue
        for v in sorted(host.vertices):
            for piece in by_profile.get(host.profile(v), []):
                for w in sorted(piece.vertices):
                    for inner in by_profile.get(piece.profile(w), []):
                        try:
                            staged = staged_substitutions(host, v, piece, w, inner)
                        except SubstitutionError:
                            staged = None
                            ok = False
                        else:
                            if staged is None:
                                continue
                            ok = same_shape(*staged)
                        checked += 1
                        if ok:
                            continue
                        failures += 1
                        if witness is None:
                            witness = {
                                "host": GraphRecord.from_graph(host).model_dump(mode="json"),
                                "vertex": v,
                                "piece": GraphRecord.from_graph(piece).model_dump(mode="json"),
                                "inner_vertex": w,
                                "inner": GraphRecord.from_graph(inner).model_dump(mode="json"),
                            }
    if failures:
        logger.warning("Substitution associativity failed on %d of %d cases", failures, checked)
    else:
        logger.info("Substitution associativity holds on %d cases", checked)
    return AxiomResult(
        axiom="substitution_associativity",
        status=CheckStatusEnum.failed if failures else CheckStatusEnum.passed,
        counterexample=witness,
        checked_pairs=checked,
        failures=failures,
    )
