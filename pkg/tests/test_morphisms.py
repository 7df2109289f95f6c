from __future__ import annotations

import pytest

from errors import MorphismError
from graphs import (
    contracted_corolla,
    corolla_subgraph,
    edge_subgraph,
    exceptional_edge,
    exceptional_loop,
    linear_graph,
    make_corolla,
    point,
    span_subgraph,
    wheel,
)
from models import FlavorEnum, MorphismClassEnum, SubgraphKindEnum
from morphisms import (
    CLOSED_EDGE_VIOLATION,
    PROFILE_MISMATCH,
    GraphMorphism,
    automorphisms,
    classify,
    codegeneracy,
    compose,
    hom_set,
    identity,
    image_subgraph,
    in_minus,
    in_plus,
    inverse,
    is_isomorphism,
    is_monomorphism,
    validate,
)
from reedy import set_section_count, sections


def build_inner_coface() -> GraphMorphism:
    chain = linear_graph(2)
    return GraphMorphism.build(
        make_corolla(1, 1),
        chain,
        {"i1": "e0", "o1": "e2"},
        {"v": span_subgraph(chain, ["v1", "v2"])},
    )


def build_outer_coface() -> GraphMorphism:
    return GraphMorphism.build(
        make_corolla(1, 1),
        linear_graph(2),
        {"i1": "e0", "o1": "e1"},
        {"v": corolla_subgraph("v1")},
    )


def test_identity_is_valid_isomorphism() -> None:
    unit = identity(make_corolla(2, 1))
    assert validate(unit)
    assert is_isomorphism(unit)
    assert in_plus(unit) and in_minus(unit)
    assert classify(unit) is MorphismClassEnum.isomorphism


def test_profile_mismatch_is_reported() -> None:
    bad = GraphMorphism.build(
        make_corolla(1, 1),
        make_corolla(2, 1),
        {"i1": "i1", "o1": "o1"},
        {"v": corolla_subgraph("v")},
    )
    result = validate(bad)
    assert not result
    assert result.reason == PROFILE_MISMATCH


def test_closed_edge_needs_closed_image() -> None:
    bad = GraphMorphism.build(exceptional_loop("e"), exceptional_edge("e"), {"e": "e"}, {})
    result = validate(bad)
    assert result.reason == CLOSED_EDGE_VIOLATION


def test_compose_rejects_mismatched_endpoints() -> None:
    with pytest.raises(MorphismError):
        compose(identity(make_corolla(1, 1)), identity(make_corolla(2, 1)))


def test_codegeneracy_of_unary_corolla_hits_exceptional_edge() -> None:
    s = codegeneracy(make_corolla(1, 1), ["v"])
    assert s.target.is_exceptional_edge
    assert s.on_vertex("v") == edge_subgraph("i1")
    assert validate(s)
    assert classify(s) is MorphismClassEnum.codegeneracy
    assert in_minus(s) and not in_plus(s)


def test_codegeneracy_of_chain_has_two_sections() -> None:
    s = codegeneracy(linear_graph(2), ["v1"])
    assert s.target.edges == {"e0", "e2"}
    assert len(sections(s, FlavorEnum.wheel_free)) == 2
    assert set_section_count(s) == 2


def test_inner_and_outer_cofaces_in_gamma() -> None:
    gamma = FlavorEnum.wheel_free
    inner = build_inner_coface()
    outer = build_outer_coface()
    assert validate(inner, gamma) and validate(outer, gamma)
    assert classify(inner, gamma) is MorphismClassEnum.inner_coface
    assert classify(outer, gamma) is MorphismClassEnum.outer_coface
    assert image_subgraph(outer, gamma) == corolla_subgraph("v1")


def test_codegeneracy_after_inner_coface_is_isomorphism() -> None:
    inner = build_inner_coface()
    s = codegeneracy(linear_graph(2), ["v1"])
    composite = compose(s, inner, FlavorEnum.wheel_free)
    assert is_isomorphism(composite)
    assert composite.on_vertex("v") == corolla_subgraph("v2")


def test_point_into_loop_is_exceptional_inner_coface() -> None:
    maps = hom_set(point(), exceptional_loop("e"), FlavorEnum.wheeled_a)
    assert len(maps) == 1
    (only,) = maps
    assert only.on_vertex("v").kind is SubgraphKindEnum.loop
    assert classify(only) is MorphismClassEnum.exceptional_inner_coface
    assert in_plus(only)


def test_no_map_from_loop_into_contracted_corolla() -> None:
    assert hom_set(exceptional_loop("e"), contracted_corolla(1, 1), FlavorEnum.wheeled_a) == ()


def test_swap_automorphism_of_binary_corolla() -> None:
    corolla = make_corolla(2, 1)
    autos = automorphisms(corolla)
    assert len(autos) == 2
    (swap,) = [a for a in autos if a != identity(corolla)]
    assert swap.on_edge("i1") == "i2"
    assert inverse(swap) == swap
    assert compose(swap, swap) == identity(corolla)


def test_inverse_rejects_non_isomorphism() -> None:
    with pytest.raises(MorphismError):
        inverse(codegeneracy(make_corolla(1, 1), ["v"]))


def test_unary_vertex_has_two_maps_into_contracted_corolla() -> None:
    # the vertex goes to its own corolla or collapses onto the loop edge
    maps = hom_set(make_corolla(1, 1), contracted_corolla(1, 1), FlavorEnum.wheeled_a)
    assert len(maps) == 2
    assert len({m.f0 for m in maps}) == 1
    kinds = sorted(m.on_vertex("v").kind.value for m in maps)
    assert kinds == ["corolla", "edge"]


def test_contracted_corolla_onto_loop_is_not_mono() -> None:
    s = codegeneracy(contracted_corolla(1, 1), ["v"])
    assert s.target.is_exceptional_loop
    assert classify(s) is MorphismClassEnum.codegeneracy
    assert not is_monomorphism(s, [make_corolla(1, 1), wheel(2)])


def test_identity_is_mono_and_codegeneracy_is_not() -> None:
    chain = linear_graph(2)
    probes = [exceptional_edge("e"), make_corolla(1, 1)]
    assert is_monomorphism(identity(chain), probes, FlavorEnum.wheel_free)
    assert not is_monomorphism(codegeneracy(chain, ["v1"]), probes, FlavorEnum.wheel_free)
