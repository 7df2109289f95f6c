"""Connected graphs for the wheel-free and wheeled graphical categories.

A graph is a finite set of vertices and edges with partial ``src``/``tgt``
maps. An edge without ``src`` enters the graph from outside (an input), an
edge without ``tgt`` leaves it (an output); the exceptional edge has neither
and is both. Closed edges carry no endpoints at all and occur only in the
exceptional loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

import networkx as nx

from errors import FlavorError, InvalidGraphError, SubstitutionError
from models import FlavorEnum, SubgraphKindEnum

POINT_VERTEX = "v"


@dataclass(frozen=True)
class Graph:
    vertices: frozenset[str]
    edges: frozenset[str]
    src: tuple[tuple[str, str], ...] = ()
    tgt: tuple[tuple[str, str], ...] = ()
    closed: frozenset[str] = frozenset()

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        edges: Mapping[str, tuple[Optional[str], Optional[str]]],
        closed: Iterable[str] = (),
    ) -> "Graph":
        src = tuple(sorted((e, s) for e, (s, _) in edges.items() if s is not None))
        tgt = tuple(sorted((e, t) for e, (_, t) in edges.items() if t is not None))
        return cls(
            vertices=frozenset(vertices),
            edges=frozenset(edges),
            src=src,
            tgt=tgt,
            closed=frozenset(closed),
        )

    @cached_property
    def _src(self) -> dict[str, str]:
        return dict(self.src)

    @cached_property
    def _tgt(self) -> dict[str, str]:
        return dict(self.tgt)

    def source_of(self, edge: str) -> Optional[str]:
        return self._src.get(edge)

    def target_of(self, edge: str) -> Optional[str]:
        return self._tgt.get(edge)

    @cached_property
    def inputs(self) -> frozenset[str]:
        return frozenset(
            e for e in self.edges if e not in self.closed and e not in self._src
        )

    @cached_property
    def outputs(self) -> frozenset[str]:
        return frozenset(
            e for e in self.edges if e not in self.closed and e not in self._tgt
        )

    @cached_property
    def inner_edges(self) -> frozenset[str]:
        return frozenset(
            e for e in self.edges if e in self.closed or (e in self._src and e in self._tgt)
        )

    @cached_property
    def legs(self) -> frozenset[str]:
        return self.inputs | self.outputs

    @cached_property
    def s_inp(self) -> frozenset[str]:
        return self.inner_edges | self.inputs

    @cached_property
    def s_out(self) -> frozenset[str]:
        return self.inner_edges | self.outputs

    @cached_property
    def _in_edges(self) -> dict[str, frozenset[str]]:
        table: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e, v in self.tgt:
            table[v].add(e)
        return {v: frozenset(es) for v, es in table.items()}

    @cached_property
    def _out_edges(self) -> dict[str, frozenset[str]]:
        table: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e, v in self.src:
            table[v].add(e)
        return {v: frozenset(es) for v, es in table.items()}

    def in_edges(self, vertex: str) -> frozenset[str]:
        return self._in_edges[vertex]

    def out_edges(self, vertex: str) -> frozenset[str]:
        return self._out_edges[vertex]

    def valence(self, vertex: str) -> int:
        return len(self.in_edges(vertex)) + len(self.out_edges(vertex))

    def self_loops(self, vertex: str) -> frozenset[str]:
        return self.in_edges(vertex) & self.out_edges(vertex)

    def profile(self, vertex: str) -> tuple[int, int]:
        return len(self.in_edges(vertex)), len(self.out_edges(vertex))

    @property
    def is_exceptional_edge(self) -> bool:
        return not self.vertices and len(self.edges) == 1 and not self.closed

    @property
    def is_exceptional_loop(self) -> bool:
        return not self.vertices and len(self.edges) == 1 and bool(self.closed)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1 and not self.edges

    @cached_property
    def is_wheel_free(self) -> bool:
        if self.closed:
            return False
        if any(self.source_of(e) == self.target_of(e) for e in self.inner_edges):
            return False
        digraph = nx.MultiDiGraph()
        digraph.add_nodes_from(self.vertices)
        digraph.add_edges_from(
            (self._src[e], self._tgt[e]) for e in self.inner_edges
        )
        return nx.is_directed_acyclic_graph(digraph)

    @cached_property
    def is_connected(self) -> bool:
        if not self.vertices:
            return len(self.edges) == 1
        for e in self.edges:
            if e in self.closed or (e not in self._src and e not in self._tgt):
                return False
        underlying = nx.MultiGraph()
        underlying.add_nodes_from(self.vertices)
        underlying.add_edges_from(
            (self._src[e], self._tgt[e]) for e in self.inner_edges
        )
        return nx.is_connected(underlying)

    def __repr__(self) -> str:
        return (
            f"<Graph vertices={len(self.vertices)} edges={len(self.edges)} "
            f"inner={len(self.inner_edges)} closed={len(self.closed)}>"
        )


# ------------------------------------------------------------
# VALIDATION
# ------------------------------------------------------------

def check_graph(graph: Graph, flavor: FlavorEnum) -> Graph:
    for e, v in itertools.chain(graph.src, graph.tgt):
        if e not in graph.edges:
            raise InvalidGraphError(f"Incidence on unknown edge {e!r}.")
        if v not in graph.vertices:
            raise InvalidGraphError(f"Edge {e!r} attached to unknown vertex {v!r}.")
    for e in graph.closed:
        if e not in graph.edges:
            raise InvalidGraphError(f"Closed marker on unknown edge {e!r}.")
        if graph.source_of(e) is not None or graph.target_of(e) is not None:
            raise InvalidGraphError(f"Closed edge {e!r} must not have endpoints.")
    if graph.closed and not graph.is_exceptional_loop:
        raise InvalidGraphError("Closed edges occur only in the exceptional loop.")
    if not graph.is_connected:
        raise InvalidGraphError("Graph is not connected.")
    if graph.is_exceptional_loop and not flavor.allows_loop:
        raise FlavorError(f"The exceptional loop is not an object of {flavor.value}.")
    if flavor is FlavorEnum.wheel_free and not graph.is_wheel_free:
        raise InvalidGraphError("Graph has a directed cycle or self-incident edge.")
    return graph


def is_valid_in(graph: Graph, flavor: FlavorEnum) -> bool:
    try:
        check_graph(graph, flavor)
    except InvalidGraphError:
        return False
    except FlavorError:
        return False
    return True


# ------------------------------------------------------------
# CONSTRUCTORS
# ------------------------------------------------------------

def make_corolla(n: int, m: int, vertex: str = POINT_VERTEX) -> Graph:
    if n < 0 or m < 0:
        raise InvalidGraphError("Corolla arities must be non-negative.")
    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    for index in range(1, n + 1):
        edges[f"i{index}"] = (None, vertex)
    for index in range(1, m + 1):
        edges[f"o{index}"] = (vertex, None)
    return Graph.build([vertex], edges)


def point(vertex: str = POINT_VERTEX) -> Graph:
    return make_corolla(0, 0, vertex)


def exceptional_edge(name: str = "e") -> Graph:
    return Graph.build([], {name: (None, None)})


def exceptional_loop(
    name: str = "e", flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> Graph:
    if not flavor.allows_loop:
        raise FlavorError(f"The exceptional loop is not an object of {flavor.value}.")
    return Graph.build([], {name: (None, None)}, closed=[name])


def linear_graph(length: int) -> Graph:
    """Chain v1 -> v2 -> ... of unary vertices with edges e0 ... e{length}."""
    if length < 1:
        return exceptional_edge("e0")
    vertices = [f"v{index}" for index in range(1, length + 1)]
    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    for index in range(length + 1):
        source = vertices[index - 1] if index >= 1 else None
        target = vertices[index] if index < length else None
        edges[f"e{index}"] = (source, target)
    return Graph.build(vertices, edges)


def wheel(length: int) -> Graph:
    """Directed cycle of ``length`` unary vertices, no legs."""
    if length < 1:
        raise InvalidGraphError("A wheel needs at least one vertex.")
    vertices = [f"v{index}" for index in range(1, length + 1)]
    edges = {
        f"e{index}": (vertices[index - 1], vertices[index % length])
        for index in range(1, length + 1)
    }
    return Graph.build(vertices, edges)


def glued_contraction_source(n: int, m: int, i: int = 1, j: int = 1) -> Graph:
    """C(n;m) with its j-th output fed through a unary vertex into its i-th input."""
    if not (1 <= i <= n and 1 <= j <= m):
        raise InvalidGraphError("Glued corolla needs 1 <= i <= n and 1 <= j <= m.")
    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    for index in range(1, n + 1):
        edges[f"i{index}"] = ("y" if index == i else None, "x")
    for index in range(1, m + 1):
        edges[f"o{index}"] = ("x", "y" if index == j else None)
    return Graph.build(["x", "y"], edges)


def contract(
    graph: Graph,
    input_edge: str,
    output_edge: str,
    flavor: FlavorEnum = FlavorEnum.wheeled_a,
) -> Graph:
    """Fuse an input leg with an output leg; the fused edge keeps the input's name."""
    if not flavor.is_wheeled:
        raise FlavorError("Contraction is only available in wheeled flavors.")
    if input_edge not in graph.inputs:
        raise InvalidGraphError(f"{input_edge!r} is not an input of the graph.")
    if output_edge not in graph.outputs:
        raise InvalidGraphError(f"{output_edge!r} is not an output of the graph.")
    if graph.is_exceptional_edge:
        if input_edge != output_edge:
            raise InvalidGraphError("The exceptional edge contracts only with itself.")
        return exceptional_loop(input_edge, flavor)
    if input_edge == output_edge:
        raise InvalidGraphError("Input and output of a contraction must differ.")
    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    for e in graph.edges:
        if e == output_edge:
            continue
        edges[e] = (graph.source_of(e), graph.target_of(e))
    edges[input_edge] = (graph.source_of(output_edge), graph.target_of(input_edge))
    return Graph.build(graph.vertices, edges)


def contracted_corolla(n: int, m: int, i: int = 1, j: int = 1) -> Graph:
    corolla = make_corolla(n, m)
    return contract(corolla, f"i{i}", f"o{j}")


def relabel(
    graph: Graph,
    vertex_map: Mapping[str, str],
    edge_map: Mapping[str, str],
) -> Graph:
    edges = {
        edge_map[e]: (
            vertex_map[s] if (s := graph.source_of(e)) is not None else None,
            vertex_map[t] if (t := graph.target_of(e)) is not None else None,
        )
        for e in graph.edges
    }
    return Graph.build(
        (vertex_map[v] for v in graph.vertices),
        edges,
        closed=(edge_map[e] for e in graph.closed),
    )


# ------------------------------------------------------------
# DEGREE
# ------------------------------------------------------------

def degree(graph: Graph, flavor: FlavorEnum) -> int:
    if flavor is FlavorEnum.wheel_free:
        return len(graph.vertices)
    if graph.is_exceptional_edge:
        return 0
    if graph.is_point:
        return 1
    return len(graph.vertices) + len(graph.inner_edges) + 1


def degree_prime(graph: Graph, flavor: FlavorEnum = FlavorEnum.wheeled_a) -> int:
    return len(graph.vertices) + len(graph.inner_edges)


# ------------------------------------------------------------
# SUBGRAPHS
# ------------------------------------------------------------

@dataclass(frozen=True)
class Subgraph:
    kind: SubgraphKindEnum
    vertices: frozenset[str] = frozenset()
    inner: frozenset[str] = frozenset()
    edge: Optional[str] = None

    @property
    def is_edge(self) -> bool:
        return self.kind is SubgraphKindEnum.edge

    @property
    def is_corolla(self) -> bool:
        return self.kind is SubgraphKindEnum.corolla

    def sort_key(self) -> tuple:
        return (
            self.kind.value,
            tuple(sorted(self.vertices)),
            tuple(sorted(self.inner)),
            self.edge or "",
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgraph):
            return NotImplemented
        return self.sort_key() == other.sort_key()

    def __hash__(self) -> int:
        return hash(self.sort_key())

    def __repr__(self) -> str:
        if self.kind in (SubgraphKindEnum.edge, SubgraphKindEnum.loop):
            return f"<Subgraph {self.kind.value} {self.edge}>"
        return f"<Subgraph {self.kind.value} {sorted(self.vertices)}>"


def edge_subgraph(edge: str) -> Subgraph:
    return Subgraph(kind=SubgraphKindEnum.edge, edge=edge)


def loop_subgraph(graph: Graph) -> Subgraph:
    if not graph.is_exceptional_loop:
        raise InvalidGraphError("Only the exceptional loop has itself as loop subgraph.")
    (edge,) = graph.edges
    return Subgraph(kind=SubgraphKindEnum.loop, inner=frozenset([edge]), edge=edge)


def corolla_subgraph(vertex: str) -> Subgraph:
    return Subgraph(kind=SubgraphKindEnum.corolla, vertices=frozenset([vertex]))


def span_subgraph(graph: Graph, vertices: Iterable[str]) -> Subgraph:
    chosen = frozenset(vertices)
    if not chosen:
        raise InvalidGraphError("A span needs at least one vertex.")
    inner = frozenset(
        e
        for e in graph.inner_edges
        if graph.source_of(e) in chosen and graph.target_of(e) in chosen
    )
    if len(chosen) == 1 and not inner:
        (vertex,) = chosen
        return corolla_subgraph(vertex)
    return Subgraph(kind=SubgraphKindEnum.span, vertices=chosen, inner=inner)


def whole_subgraph(graph: Graph) -> Subgraph:
    if graph.is_exceptional_loop:
        return loop_subgraph(graph)
    if graph.is_exceptional_edge:
        (edge,) = graph.edges
        return edge_subgraph(edge)
    return span_subgraph(graph, graph.vertices)


def subgraph_inputs(graph: Graph, subgraph: Subgraph) -> frozenset[str]:
    if subgraph.kind is SubgraphKindEnum.edge:
        return frozenset([subgraph.edge])
    if subgraph.kind is SubgraphKindEnum.loop:
        return frozenset()
    return frozenset(
        e
        for v in subgraph.vertices
        for e in graph.in_edges(v)
        if e not in subgraph.inner
    )


def subgraph_outputs(graph: Graph, subgraph: Subgraph) -> frozenset[str]:
    if subgraph.kind is SubgraphKindEnum.edge:
        return frozenset([subgraph.edge])
    if subgraph.kind is SubgraphKindEnum.loop:
        return frozenset()
    return frozenset(
        e
        for v in subgraph.vertices
        for e in graph.out_edges(v)
        if e not in subgraph.inner
    )


def _span_is_connected(graph: Graph, vertices: frozenset[str], inner: frozenset[str]) -> bool:
    underlying = nx.MultiGraph()
    underlying.add_nodes_from(vertices)
    underlying.add_edges_from((graph.source_of(e), graph.target_of(e)) for e in inner)
    return nx.is_connected(underlying)


def _span_is_convex(graph: Graph, vertices: frozenset[str], inner: frozenset[str]) -> bool:
    # every directed excursion b -> outside -> a must close up inside the span (a ~> b)
    outside = nx.MultiDiGraph()
    outside.add_nodes_from(graph.vertices - vertices)
    inside = nx.MultiDiGraph()
    inside.add_nodes_from(vertices)
    for e in graph.inner_edges - graph.closed:
        s, t = graph.source_of(e), graph.target_of(e)
        if s not in vertices and t not in vertices:
            outside.add_edge(s, t)
        elif e in inner:
            inside.add_edge(s, t)
    for b in vertices:
        for e in graph.out_edges(b):
            z = graph.target_of(e)
            if z is None or z in vertices:
                continue
            for y in nx.descendants(outside, z) | {z}:
                for f in graph.out_edges(y):
                    a = graph.target_of(f)
                    if a in vertices and not nx.has_path(inside, a, b):
                        return False
    return True


def is_subgraph(
    graph: Graph, subgraph: Subgraph, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> bool:
    """Membership test for ``subgraph`` in ``graph``.

    Spans must be connected and convex in every flavor, including the wheeled
    ones, so a wheel-free graph has the same subgraphs in all three categories.
    """
    kind = subgraph.kind
    if kind is SubgraphKindEnum.edge:
        return subgraph.edge in graph.edges
    if kind is SubgraphKindEnum.loop:
        return flavor.allows_loop and graph.is_exceptional_loop and subgraph.edge in graph.edges
    if not subgraph.vertices or not subgraph.vertices <= graph.vertices:
        return False
    if kind is SubgraphKindEnum.corolla:
        return len(subgraph.vertices) == 1 and not subgraph.inner
    if span_subgraph(graph, subgraph.vertices) != subgraph:
        return False
    if not _span_is_connected(graph, subgraph.vertices, subgraph.inner):
        return False
    return _span_is_convex(graph, subgraph.vertices, subgraph.inner)


def subgraphs_of(
    graph: Graph, flavor: FlavorEnum = FlavorEnum.wheeled_a
) -> frozenset[Subgraph]:
    found: set[Subgraph] = {edge_subgraph(e) for e in graph.edges}
    if graph.is_exceptional_loop:
        found.add(loop_subgraph(graph))
        return frozenset(found)
    found.update(corolla_subgraph(v) for v in graph.vertices)
    ordered = sorted(graph.vertices)
    for size in range(1, len(ordered) + 1):
        for chosen in itertools.combinations(ordered, size):
            candidate = span_subgraph(graph, chosen)
            if candidate.kind is SubgraphKindEnum.span and is_subgraph(
                graph, candidate, flavor
            ):
                found.add(candidate)
    return frozenset(found)


@dataclass(frozen=True)
class SubgraphView:
    """A subgraph as a graph of its own, with leg correspondences back to the host."""

    graph: Graph
    input_legs: Mapping[str, str]
    output_legs: Mapping[str, str]
    input_copy: Mapping[str, str]
    output_copy: Mapping[str, str]


def subgraph_as_graph(graph: Graph, subgraph: Subgraph) -> SubgraphView:
    if subgraph.kind is SubgraphKindEnum.edge:
        edge = subgraph.edge
        return SubgraphView(
            graph=exceptional_edge(edge),
            input_legs={edge: edge},
            output_legs={edge: edge},
            input_copy={edge: edge},
            output_copy={edge: edge},
        )
    if subgraph.kind is SubgraphKindEnum.loop:
        return SubgraphView(graph, {}, {}, {}, {})
    vertices = subgraph.vertices
    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    input_legs: dict[str, str] = {}
    output_legs: dict[str, str] = {}
    input_copy: dict[str, str] = {}
    output_copy: dict[str, str] = {}
    incident = {
        e
        for v in vertices
        for e in graph.in_edges(v) | graph.out_edges(v)
    }
    for e in sorted(incident):
        s, t = graph.source_of(e), graph.target_of(e)
        s_in = s in vertices
        t_in = t in vertices
        if e in subgraph.inner:
            edges[e] = (s, t)
            input_copy[e] = e
            output_copy[e] = e
        elif s_in and t_in:
            # split edge: one output leg at s and one input leg at t
            out_name, in_name = f"{e}:out", f"{e}:in"
            edges[out_name] = (s, None)
            edges[in_name] = (None, t)
            output_legs[out_name] = e
            input_legs[in_name] = e
            output_copy[e] = out_name
            input_copy[e] = in_name
        elif t_in:
            edges[e] = (None, t)
            input_legs[e] = e
            input_copy[e] = e
        else:
            edges[e] = (s, None)
            output_legs[e] = e
            output_copy[e] = e
    return SubgraphView(
        graph=Graph.build(vertices, edges),
        input_legs=input_legs,
        output_legs=output_legs,
        input_copy=input_copy,
        output_copy=output_copy,
    )


def corolla_of(graph: Graph, vertex: str) -> SubgraphView:
    return subgraph_as_graph(graph, corolla_subgraph(vertex))


# ------------------------------------------------------------
# SUBSTITUTION
# ------------------------------------------------------------

@dataclass(frozen=True)
class Insertion:
    """A graph placed into a vertex: legs of ``graph`` -> edges at the vertex."""

    graph: Graph
    inputs: Mapping[str, str]
    outputs: Mapping[str, str]


@dataclass(frozen=True)
class Substitution:
    graph: Graph
    edge_map: Mapping[str, str]
    vertex_map: Mapping[tuple[str, str], str]
    inner_map: Mapping[tuple[str, str], str]


def corolla_insertion(graph: Graph, vertex: str) -> Insertion:
    view = corolla_of(graph, vertex)
    return Insertion(view.graph, dict(view.input_legs), dict(view.output_legs))


def edge_insertion(graph: Graph, vertex: str, name: str = "e") -> Insertion:
    ins, outs = graph.in_edges(vertex), graph.out_edges(vertex)
    if len(ins) != 1 or len(outs) != 1:
        raise SubstitutionError(f"Vertex {vertex!r} is not a (1;1)-vertex.")
    (a,), (b,) = ins, outs
    return Insertion(exceptional_edge(name), {name: a}, {name: b})


def _check_boundary(graph: Graph, vertex: str, insertion: Insertion) -> None:
    inserted = insertion.graph
    if dict(insertion.inputs).keys() != set(inserted.inputs) or dict(
        insertion.outputs
    ).keys() != set(inserted.outputs):
        raise SubstitutionError(
            f"Boundary correspondence at {vertex!r} must cover every leg of the inserted graph."
        )
    if sorted(insertion.inputs.values()) != sorted(graph.in_edges(vertex)):
        raise SubstitutionError(f"Input profile mismatch at vertex {vertex!r}.")
    if sorted(insertion.outputs.values()) != sorted(graph.out_edges(vertex)):
        raise SubstitutionError(f"Output profile mismatch at vertex {vertex!r}.")


def _vertex_name(vertex: str, inner_vertex: str, inserted: Graph) -> str:
    if len(inserted.vertices) == 1:
        return vertex
    return f"{vertex}.{inner_vertex}"


def graph_substitution(
    graph: Graph,
    assignment: Mapping[str, Insertion],
    flavor: Optional[FlavorEnum] = None,
) -> Substitution:
    for vertex, insertion in assignment.items():
        if vertex not in graph.vertices:
            raise SubstitutionError(f"Unknown vertex {vertex!r}.")
        if insertion.graph.is_exceptional_loop:
            if graph.in_edges(vertex) or graph.out_edges(vertex):
                raise SubstitutionError("The exceptional loop only fills a (0;0)-vertex.")
            if flavor is not None and not flavor.allows_loop:
                raise FlavorError(f"The exceptional loop is not an object of {flavor.value}.")
            (loop_edge,) = insertion.graph.edges
            name = f"{vertex}.{loop_edge}"
            return Substitution(
                graph=exceptional_loop(name),
                edge_map={},
                vertex_map={},
                inner_map={(vertex, loop_edge): name},
            )
        _check_boundary(graph, vertex, insertion)

    unary = {v for v, ins in assignment.items() if ins.graph.is_exceptional_edge}
    parent = {e: e for e in graph.edges}

    def find(e: str) -> str:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for v in unary:
        (a,), (b,) = graph.in_edges(v), graph.out_edges(v)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    classes: dict[str, list[str]] = {}
    for e in graph.edges:
        classes.setdefault(find(e), []).append(e)

    def resolve_source(e: str) -> Optional[str]:
        s = graph.source_of(e)
        if s is None or s not in assignment:
            return s
        inserted = assignment[s]
        leg = next(y for y, g in inserted.outputs.items() if g == e)
        return _vertex_name(s, inserted.graph.source_of(leg), inserted.graph)

    def resolve_target(e: str) -> Optional[str]:
        t = graph.target_of(e)
        if t is None or t not in assignment:
            return t
        inserted = assignment[t]
        leg = next(y for y, g in inserted.inputs.items() if g == e)
        return _vertex_name(t, inserted.graph.target_of(leg), inserted.graph)

    edges: dict[str, tuple[Optional[str], Optional[str]]] = {}
    closed: list[str] = []
    edge_map: dict[str, str] = {}
    for members in classes.values():
        name = min(members)
        starts = [
            e for e in members
            if graph.source_of(e) is None or graph.source_of(e) not in unary
        ]
        ends = [
            e for e in members
            if graph.target_of(e) is None or graph.target_of(e) not in unary
        ]
        if graph.closed & set(members):
            closed.append(name)
            edges[name] = (None, None)
        elif not starts:
            closed.append(name)
            edges[name] = (None, None)
        else:
            edges[name] = (resolve_source(starts[0]), resolve_target(ends[0]))
        for e in members:
            edge_map[e] = name

    vertices: list[str] = []
    vertex_map: dict[tuple[str, str], str] = {}
    inner_map: dict[tuple[str, str], str] = {}
    for v in graph.vertices:
        if v in unary:
            continue
        if v not in assignment:
            vertices.append(v)
            vertex_map[(v, v)] = v
            continue
        inserted = assignment[v].graph
        for h in inserted.vertices:
            name = _vertex_name(v, h, inserted)
            vertices.append(name)
            vertex_map[(v, h)] = name
        for e in inserted.inner_edges:
            name = f"{v}.{e}"
            edges[name] = (
                _vertex_name(v, inserted.source_of(e), inserted),
                _vertex_name(v, inserted.target_of(e), inserted),
            )
            inner_map[(v, e)] = name

    result = Graph.build(vertices, edges, closed=closed)
    if flavor is not None:
        check_graph(result, flavor)
    return Substitution(result, edge_map, vertex_map, inner_map)


def substitute(
    graph: Graph,
    assignment: Mapping[str, Insertion],
    flavor: Optional[FlavorEnum] = None,
) -> Graph:
    return graph_substitution(graph, assignment, flavor).graph


def reduce_unary_vertices(graph: Graph, vertices: Iterable[str]) -> Substitution:
    """Insert the exceptional edge at every listed (1;1)-vertex."""
    return graph_substitution(
        graph, {v: edge_insertion(graph, v) for v in vertices}
    )


def unary_vertices(graph: Graph) -> list[str]:
    return sorted(v for v in graph.vertices if graph.profile(v) == (1, 1))
