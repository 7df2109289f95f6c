from __future__ import annotations

import pytest

from catalog import Bounds, check_substitution_associativity, enumerate_graphs, same_shape, staged_substitutions
from errors import FlavorError, InvalidGraphError, SubstitutionError
from graphs import (
    Graph,
    Insertion,
    check_graph,
    contract,
    contracted_corolla,
    corolla_insertion,
    corolla_subgraph,
    degree,
    degree_prime,
    exceptional_edge,
    exceptional_loop,
    glued_contraction_source,
    is_subgraph,
    linear_graph,
    make_corolla,
    point,
    reduce_unary_vertices,
    span_subgraph,
    subgraph_as_graph,
    subgraphs_of,
    substitute,
    wheel,
)
from models import FlavorEnum, SubgraphKindEnum


def build_chain(names: tuple[str, str], edges: tuple[str, str, str]) -> Graph:
    first, second = names
    e_in, e_mid, e_out = edges
    return Graph.build(
        [first, second],
        {e_in: (None, first), e_mid: (first, second), e_out: (second, None)},
    )


def test_corolla_boundary() -> None:
    corolla = make_corolla(2, 1)
    assert corolla.inputs == {"i1", "i2"}
    assert corolla.outputs == {"o1"}
    assert not corolla.inner_edges
    assert corolla.profile("v") == (2, 1)


def test_exceptional_edge_is_input_and_output() -> None:
    edge = exceptional_edge("e")
    assert edge.inputs == edge.outputs == {"e"}
    assert edge.is_exceptional_edge
    assert not edge.is_exceptional_loop


def test_exceptional_loop_has_empty_boundary() -> None:
    loop = exceptional_loop("e")
    assert loop.is_exceptional_loop
    assert not loop.legs
    assert loop.inner_edges == {"e"}


def test_exceptional_loop_only_in_flavor_a() -> None:
    with pytest.raises(FlavorError):
        exceptional_loop("e", FlavorEnum.wheeled_b)
    with pytest.raises(FlavorError):
        check_graph(exceptional_loop("e"), FlavorEnum.wheel_free)


def test_wheels_rejected_without_wheels() -> None:
    assert not wheel(2).is_wheel_free
    assert not contracted_corolla(1, 1).is_wheel_free
    with pytest.raises(InvalidGraphError):
        check_graph(wheel(2), FlavorEnum.wheel_free)
    assert check_graph(wheel(2), FlavorEnum.wheeled_b) == wheel(2)


def test_disconnected_graph_rejected() -> None:
    graph = Graph.build(["a", "b"], {"e": (None, "a"), "f": ("b", None)})
    with pytest.raises(InvalidGraphError):
        check_graph(graph, FlavorEnum.wheeled_a)


def test_closed_edge_outside_loop_rejected() -> None:
    graph = Graph.build(["a"], {"e": (None, None), "f": ("a", None)}, closed=["e"])
    with pytest.raises(InvalidGraphError):
        check_graph(graph, FlavorEnum.wheeled_a)


def test_contraction_of_corolla() -> None:
    contracted = contracted_corolla(1, 1)
    assert contracted.self_loops("v") == {"i1"}
    assert not contracted.legs
    assert contract(exceptional_edge("e"), "e", "e") == exceptional_loop("e")


def test_contraction_needs_wheels() -> None:
    with pytest.raises(FlavorError):
        contract(make_corolla(1, 1), "i1", "o1", FlavorEnum.wheel_free)


def test_glued_contraction_source_shape() -> None:
    glued = glued_contraction_source(1, 1)
    assert glued.vertices == {"x", "y"}
    assert glued.inner_edges == {"i1", "o1"}
    assert glued.profile("y") == (1, 1)
    with pytest.raises(InvalidGraphError):
        glued_contraction_source(1, 1, i=2)


def test_degree_functions() -> None:
    gamma, wheeled = FlavorEnum.wheel_free, FlavorEnum.wheeled_a
    assert degree(linear_graph(2), gamma) == 2
    assert degree(exceptional_edge(), wheeled) == 0
    assert degree(point(), wheeled) == 1
    assert degree(exceptional_loop(), wheeled) == 2
    assert degree(linear_graph(2), wheeled) == 2 + 1 + 1
    assert degree_prime(point()) == degree_prime(exceptional_loop()) == 1


@pytest.mark.parametrize("flavor", list(FlavorEnum))
def test_span_convexity_in_every_flavor(flavor: FlavorEnum) -> None:
    graph = Graph.build(
        ["a", "b", "c"],
        {"i": (None, "a"), "ab": ("a", "b"), "bc": ("b", "c"), "ac": ("a", "c"), "o": ("c", None)},
    )
    # {a, c} skips b, which sits on a directed path between them
    assert not is_subgraph(graph, span_subgraph(graph, ["a", "c"]), flavor)
    assert is_subgraph(graph, span_subgraph(graph, ["a", "b"]), flavor)


def test_subgraphs_of_loop() -> None:
    kinds = {part.kind for part in subgraphs_of(exceptional_loop(), FlavorEnum.wheeled_a)}
    assert kinds == {SubgraphKindEnum.edge, SubgraphKindEnum.loop}


def test_corolla_view_splits_self_loop() -> None:
    view = subgraph_as_graph(contracted_corolla(1, 1), span_subgraph(contracted_corolla(1, 1), ["v"]))
    assert view.graph == contracted_corolla(1, 1)
    split = subgraph_as_graph(contracted_corolla(1, 1), corolla_subgraph("v"))
    assert split.graph.inputs == {"i1:in"}
    assert split.graph.outputs == {"i1:out"}
    assert split.input_legs == {"i1:in": "i1"}


def test_substitution_unit() -> None:
    graph = linear_graph(2)
    for v in graph.vertices:
        assert substitute(graph, {v: corolla_insertion(graph, v)}) == graph


def test_nested_substitution_names_vertices_by_path() -> None:
    host = linear_graph(2)
    middle = build_chain(("h1", "h2"), ("a0", "a1", "a2"))
    inner = build_chain(("p", "q"), ("k0", "k1", "k2"))

    staged = substitute(host, {"v1": Insertion(middle, {"a0": "e0"}, {"a2": "e1"})})
    left = substitute(staged, {"v1.h1": Insertion(inner, {"k0": "e0"}, {"k2": "v1.a1"})})

    nested = substitute(middle, {"h1": Insertion(inner, {"k0": "a0"}, {"k2": "a1"})})
    right = substitute(host, {"v1": Insertion(nested, {"a0": "e0"}, {"a2": "e1"})})

    assert left == right
    assert left.vertices == {"v1.h1.p", "v1.h1.q", "v1.h2", "v2"}


def test_substitution_profile_mismatch() -> None:
    with pytest.raises(SubstitutionError):
        substitute(make_corolla(1, 1), {"v": corolla_insertion(make_corolla(2, 1), "v")})


def test_edge_insertion_reduces_unary_vertex() -> None:
    reduction = reduce_unary_vertices(linear_graph(2), ["v1"])
    assert reduction.graph.vertices == {"v2"}
    assert reduction.graph.inputs == {"e0"}
    assert reduction.edge_map["e1"] == "e0"


def test_reducing_a_wheel_closes_it() -> None:
    reduction = reduce_unary_vertices(contracted_corolla(1, 1), ["v"])
    assert reduction.graph == exceptional_loop("i1")


def test_loop_fills_a_point_only_in_flavor_a() -> None:
    filled = substitute(point(), {"v": Insertion(exceptional_loop("e"), {}, {})})
    assert filled == exceptional_loop("v.e")
    with pytest.raises(FlavorError):
        substitute(point(), {"v": Insertion(exceptional_loop("e"), {}, {})}, FlavorEnum.wheeled_b)
    with pytest.raises(SubstitutionError):
        substitute(make_corolla(1, 0), {"v": Insertion(exceptional_loop("e"), {}, {})})


@pytest.mark.parametrize(
    "flavor, host_bounds, piece_bounds",
    [
        (FlavorEnum.wheel_free, Bounds(3, 2, 2, 2), Bounds(2, 1, 2, 2)),
        (FlavorEnum.wheeled_a, Bounds(2, 1, 2, 2), Bounds(2, 1, 2, 2)),
    ],
)
def test_substitution_is_associative_over_catalog(flavor, host_bounds, piece_bounds) -> None:
    hosts = enumerate_graphs(flavor, host_bounds).graphs
    pieces = enumerate_graphs(flavor, piece_bounds).graphs
    result = check_substitution_associativity(hosts, pieces)
    assert result.passed, result.counterexample
    assert result.checked_pairs > 0


def test_staged_substitution_through_unary_reduction() -> None:
    host = linear_graph(3)
    piece = linear_graph(2)
    left, right = staged_substitutions(host, "v2", piece, "v1", exceptional_edge("x"))
    assert left.vertices == {"v1", "v2.v2", "v3"}
    assert len(left.inner_edges) == len(right.inner_edges) == 2
    assert right.vertices == {"v1", "v2", "v3"}
    assert same_shape(left, right)


def test_staged_substitution_rejects_profile_mismatch() -> None:
    assert staged_substitutions(linear_graph(2), "v1", make_corolla(2, 1), "v", make_corolla(1, 1)) is None
