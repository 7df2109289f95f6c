from __future__ import annotations

import pytest

from catalog import Bounds, are_isomorphic, enumerate_graphs
from errors import FlavorError, MorphismError
from graphs import (
    contracted_corolla,
    degree_prime,
    linear_graph,
    make_corolla,
    span_subgraph,
)
from models import FlavorEnum, MorphismClassEnum
from morphisms import (
    codegeneracy,
    compose,
    hom_set,
    identity,
    in_minus,
    in_plus,
)
from presheaves import Representable, pullback_check
from reedy import (
    all_reedy_factorizations,
    check_composition_closure,
    check_ez_gamma,
    check_faithfulness,
    check_gamma_compatibility,
    check_reedy_axioms,
    reedy_factorize,
    is_single_orbit,
    section_through_edge,
    sections,
    strong_pushout,
    witness_gammaw_not_ez,
)


TINY = Bounds(max_vertices=1, max_inner=1, max_valence=2, max_legs=2)
SMALL_GAMMA = Bounds(max_vertices=2, max_inner=1, max_valence=2, max_legs=2)


def build_catalog(flavor: FlavorEnum, bounds: Bounds = TINY):
    return enumerate_graphs(flavor, bounds)


@pytest.mark.parametrize("flavor", list(FlavorEnum))
def test_reedy_axioms_hold(flavor: FlavorEnum) -> None:
    bounds = SMALL_GAMMA if flavor is FlavorEnum.wheel_free else TINY
    report = check_reedy_axioms(build_catalog(flavor, bounds))
    assert report.passed, [r for r in report.results if not r.passed]
    assert report.result("iii").checked_pairs > 0


@pytest.mark.parametrize(
    "flavor, bounds", [(FlavorEnum.wheel_free, SMALL_GAMMA), (FlavorEnum.wheeled_a, TINY), (FlavorEnum.wheeled_b, TINY)]
)
def test_every_map_has_one_factorization_class(flavor: FlavorEnum, bounds: Bounds) -> None:
    catalog = build_catalog(flavor, bounds)
    for f in catalog.morphisms():
        pairs = all_reedy_factorizations(f, catalog.graphs, flavor)
        assert is_single_orbit(pairs, flavor), f
        h, _ = reedy_factorize(f, flavor)
        assert are_isomorphic(pairs[0][0].target, h.target)


def test_factorizations_through_a_chain_codegeneracy() -> None:
    catalog = build_catalog(FlavorEnum.wheel_free, SMALL_GAMMA)
    s = codegeneracy(linear_graph(2), ["v1"])
    (representative,) = [g for g in catalog.graphs if are_isomorphic(g, make_corolla(1, 1))]
    pairs = all_reedy_factorizations(s, catalog.graphs, FlavorEnum.wheel_free)
    assert pairs
    assert {h.target for h, _ in pairs} == {representative}
    assert all(in_minus(h) and in_plus(g) for h, g in pairs)


def test_degree_without_offset_breaks_on_point_into_loop() -> None:
    report = check_reedy_axioms(build_catalog(FlavorEnum.wheeled_a), degree_prime)
    result = report.result("i")
    assert not result.passed
    assert result.failures == 1
    assert result.counterexample["source"]["edges"] == []
    assert result.counterexample["f1"] == {"v0": {"loop": "e0"}}


def test_degree_without_offset_is_fine_without_loop() -> None:
    report = check_reedy_axioms(build_catalog(FlavorEnum.wheeled_b), degree_prime)
    assert report.result("i").passed


def test_factorization_of_collapsing_map() -> None:
    target = contracted_corolla(1, 1)
    maps = hom_set(make_corolla(1, 1), target, FlavorEnum.wheeled_a)
    (collapsing,) = [m for m in maps if m.on_vertex("v").is_edge]
    h, g = reedy_factorize(collapsing)
    assert h.target.is_exceptional_edge
    assert in_minus(h) and in_plus(g)
    assert compose(g, h) == collapsing


def test_factorization_of_plus_map_is_trivial() -> None:
    corolla = make_corolla(1, 1)
    h, g = reedy_factorize(identity(corolla))
    assert h == identity(corolla)
    assert g == identity(corolla)


def test_ez_structure_on_gamma() -> None:
    report = check_ez_gamma(build_catalog(FlavorEnum.wheel_free, SMALL_GAMMA), degree_bound=2)
    assert report.passed, [r for r in report.results if not r.passed]
    assert report.result("strong_pushouts").checked_pairs > 0
    assert report.result("ez_normal_form_uniqueness").checked_pairs > 0


def test_ez_check_refuses_wheeled_catalog() -> None:
    with pytest.raises(FlavorError):
        check_ez_gamma(build_catalog(FlavorEnum.wheeled_b))


@pytest.mark.parametrize("flavor", [FlavorEnum.wheel_free, FlavorEnum.wheeled_a])
def test_composition_closure(flavor: FlavorEnum) -> None:
    report = check_composition_closure(build_catalog(flavor))
    assert report.passed


def test_faithfulness_holds_without_wheels_only() -> None:
    assert check_faithfulness(build_catalog(FlavorEnum.wheel_free, SMALL_GAMMA)).passed
    wheeled = check_faithfulness(build_catalog(FlavorEnum.wheeled_a))
    assert not wheeled.passed


def test_gamma_compatibility() -> None:
    assert check_gamma_compatibility(build_catalog(FlavorEnum.wheeled_a)).passed
    with pytest.raises(FlavorError):
        check_gamma_compatibility(build_catalog(FlavorEnum.wheel_free))


def test_sections_through_chosen_edge() -> None:
    chain = linear_graph(2)
    s = codegeneracy(chain, ["v1"])
    first = section_through_edge(s, "e0", FlavorEnum.wheel_free)
    last = section_through_edge(s, "e1", FlavorEnum.wheel_free)
    assert first.on_edge("e0") == "e0"
    assert first.on_vertex("v2") == span_subgraph(chain, ["v1", "v2"])
    assert last.on_edge("e0") == "e1"
    for section in (first, last):
        assert compose(s, section, FlavorEnum.wheel_free) == identity(s.target)
    assert {first.key, last.key} == {g.key for g in sections(s, FlavorEnum.wheel_free)}


def test_section_through_edge_rejections() -> None:
    s = codegeneracy(linear_graph(2), ["v1"])
    with pytest.raises(FlavorError):
        section_through_edge(s, "e0", FlavorEnum.wheeled_a)
    with pytest.raises(MorphismError):
        section_through_edge(identity(linear_graph(2)), "e0", FlavorEnum.wheel_free)
    with pytest.raises(MorphismError):
        section_through_edge(s, "nope", FlavorEnum.wheel_free)


def test_strong_pushout_of_chain_codegeneracies() -> None:
    chain = linear_graph(2)
    s1 = codegeneracy(chain, ["v1"])
    s2 = codegeneracy(chain, ["v2"])
    square = strong_pushout(s1, s2)
    assert square.target.is_exceptional_edge
    assert compose(square.f1, s1) == compose(square.f2, s2)
    K = Representable(linear_graph(1), FlavorEnum.wheel_free)
    assert pullback_check(square, K)


def test_strong_pushout_needs_common_source() -> None:
    with pytest.raises(MorphismError):
        strong_pushout(
            codegeneracy(linear_graph(2), ["v1"]),
            codegeneracy(make_corolla(1, 1), ["v"]),
        )


def test_wheeled_a_witness() -> None:
    record = witness_gammaw_not_ez(FlavorEnum.wheeled_a)
    assert record.confirmed
    assert record.sections == 0
    assert record.maps_from_loop == 0
    assert record.classification == MorphismClassEnum.codegeneracy.value
    assert record.split_epi_mono_factorizations == 0
    assert record.companion is not None
    assert record.companion.sections == 0


def test_wheeled_b_witness() -> None:
    record = witness_gammaw_not_ez(FlavorEnum.wheeled_b)
    assert record.confirmed
    assert record.sections == 0
    assert record.maps_from_loop is None
    assert record.factorizations >= 1


def test_gamma_has_no_witness() -> None:
    with pytest.raises(FlavorError):
        witness_gammaw_not_ez(FlavorEnum.wheel_free)
