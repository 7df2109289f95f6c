from __future__ import annotations

from hypothesis import given, settings, strategies as st

from catalog import Bounds, are_isomorphic, canonical_form, canonical_representative, enumerate_graphs
from graphs import Graph, Insertion, corolla_insertion, linear_graph, relabel, substitute
from models import FlavorEnum
from morphisms import compose, identity, in_minus, in_plus, validate
from reedy import reedy_factorize

WHEELED = enumerate_graphs(FlavorEnum.wheeled_a, Bounds(2, 1, 2, 2))
GAMMA = enumerate_graphs(FlavorEnum.wheel_free, Bounds(2, 1, 2, 2))
CATALOGS = {catalog.flavor: catalog for catalog in (WHEELED, GAMMA)}
MORPHISMS = {flavor: list(catalog.morphisms()) for flavor, catalog in CATALOGS.items()}

graphs = st.sampled_from(WHEELED.graphs + GAMMA.graphs)
flavors = st.sampled_from(sorted(CATALOGS, key=lambda f: f.value))


def shuffled(graph: Graph, vertex_order: list[str], edge_order: list[str]) -> Graph:
    return relabel(
        graph,
        {v: f"x{index}" for index, v in enumerate(vertex_order)},
        {e: f"y{index}" for index, e in enumerate(edge_order)},
    )


@st.composite
def relabelings(draw):
    graph = draw(graphs)
    vertex_order = draw(st.permutations(sorted(graph.vertices)))
    edge_order = draw(st.permutations(sorted(graph.edges)))
    return graph, shuffled(graph, vertex_order, edge_order)


@st.composite
def composable(draw, length: int):
    flavor = draw(flavors)
    pool = MORPHISMS[flavor]
    chain = [draw(st.sampled_from(pool))]
    for _ in range(length - 1):
        nexts = [m for m in pool if m.source == chain[-1].target]
        chain.append(draw(st.sampled_from(nexts)))
    return flavor, chain


@settings(max_examples=60, deadline=None)
@given(relabelings())
def test_canonical_form_is_relabeling_invariant(pair):
    graph, renamed = pair
    assert canonical_form(graph) == canonical_form(renamed)
    assert canonical_representative(graph) == canonical_representative(renamed)
    assert are_isomorphic(graph, renamed)


@settings(max_examples=60, deadline=None)
@given(composable(3))
def test_composition_is_associative(drawn):
    flavor, (f, g, h) = drawn
    assert compose(h, compose(g, f, flavor), flavor) == compose(compose(h, g, flavor), f, flavor)


@settings(max_examples=60, deadline=None)
@given(composable(1))
def test_identities_are_units(drawn):
    flavor, (f,) = drawn
    assert compose(f, identity(f.source), flavor) == f
    assert compose(identity(f.target), f, flavor) == f


@settings(max_examples=60, deadline=None)
@given(composable(2))
def test_composites_stay_valid(drawn):
    flavor, (f, g) = drawn
    assert validate(compose(g, f, flavor), flavor)


@settings(max_examples=60, deadline=None)
@given(composable(1))
def test_reedy_factorization_recomposes(drawn):
    flavor, (f,) = drawn
    h, g = reedy_factorize(f, flavor)
    assert in_minus(h) and in_plus(g)
    assert compose(g, h, flavor) == f


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_substituting_own_corollas_is_identity(graph):
    if not graph.vertices:
        return
    assignment = {v: corolla_insertion(graph, v) for v in graph.vertices}
    assert substitute(graph, assignment) == graph


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GAMMA.graphs))
def test_chain_insertion_adds_inner_edges_and_stays_wheel_free(graph):
    unary = [v for v in sorted(graph.vertices) if len(graph.in_edges(v)) == 1 == len(graph.out_edges(v))]
    assignment = {}
    for v in unary:
        (a,), (b,) = graph.in_edges(v), graph.out_edges(v)
        assignment[v] = Insertion(linear_graph(2), {"e0": a}, {"e2": b})
    result = substitute(graph, assignment, FlavorEnum.wheel_free)
    assert len(result.inner_edges) == len(graph.inner_edges) + len(unary)
    assert result.is_wheel_free
