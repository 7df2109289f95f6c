from __future__ import annotations

import pytest

from catalog import Bounds, canonical_form, enumerate_graphs
from errors import FlavorError, PresheafError
from graphs import (
    contracted_corolla,
    exceptional_edge,
    exceptional_loop,
    linear_graph,
    make_corolla,
)
from models import FlavorEnum
from morphisms import hom_set, identity
from presheaves import (
    QuotientPresheaf,
    Representable,
    RestrictedPresheaf,
    TabulatedPresheaf,
    check_ez_lemma,
    degeneracy_pairs,
    ez_normal_form,
    horn_wheel_check,
    is_degenerate,
    presheaf_hom,
    random_quotients,
    satisfies_segal,
    segal_bijective,
    segal_core,
    segal_families,
    tabulate,
    validate_functoriality,
)
from properads import end_properad, matrix_end, nerve


GAMMA = FlavorEnum.wheel_free
WHEELED = FlavorEnum.wheeled_a
TINY = Bounds(max_vertices=1, max_inner=1, max_valence=2, max_legs=2)
SMALL_GAMMA = Bounds(max_vertices=2, max_inner=1, max_valence=2, max_legs=2)


def test_segal_core_of_edge_is_representable() -> None:
    core = segal_core(exceptional_edge("e"), GAMMA)
    probe = exceptional_edge("x")
    assert len(core.elements(probe)) == len(Representable(exceptional_edge("e"), GAMMA).elements(probe)) == 1


def test_segal_core_of_loop_is_empty_at_loop() -> None:
    core = segal_core(exceptional_loop("e0"), WHEELED)
    loop = exceptional_loop("z")
    assert core.elements(loop) == ()
    assert Representable(exceptional_edge("e0"), WHEELED).elements(loop) == ()
    assert len(core.elements(exceptional_edge("x"))) == 1


def test_segal_core_of_corolla_matches_representable() -> None:
    corolla = make_corolla(2, 1)
    core = segal_core(corolla, GAMMA)
    images = {core.core_map(x).key for x in core.elements(corolla)}
    assert images == {m.key for m in hom_set(corolla, corolla, GAMMA)}


def test_segal_core_of_chain_glues_along_inner_edge() -> None:
    chain = linear_graph(2)
    core = segal_core(chain, GAMMA)
    # the two corollas share e1, so ↑ sees three edges rather than four
    assert len(core.elements(exceptional_edge("x"))) == 3


def test_presheaf_hom_out_of_representable() -> None:
    K = nerve(end_properad([0, 1]), GAMMA)
    corolla = make_corolla(1, 1)
    assert presheaf_hom(Representable(corolla, GAMMA), K) == list(K.elements(corolla))


def test_presheaf_hom_rejects_mixed_flavors() -> None:
    with pytest.raises(PresheafError):
        presheaf_hom(Representable(make_corolla(1, 1), GAMMA), nerve(matrix_end(2), WHEELED))


def test_nerve_of_functions_is_segal() -> None:
    K = nerve(end_properad([0, 1]), GAMMA)
    report = satisfies_segal(K, enumerate_graphs(GAMMA, SMALL_GAMMA).graphs)
    assert report.passed
    assert len(segal_families(K, linear_graph(2))) == 16


def test_restricting_matrix_nerve_breaks_segal_only_at_loop() -> None:
    graphs = enumerate_graphs(WHEELED, TINY).graphs
    assert satisfies_segal(nerve(matrix_end(2), WHEELED), graphs).passed
    restricted = satisfies_segal(RestrictedPresheaf(nerve(matrix_end(2), WHEELED)), graphs)
    failed = [r.axiom for r in restricted.results if not r.passed]
    assert failed == [f"segal[{canonical_form(exceptional_loop('e0'))}]"]


def test_segal_at_contracted_corolla() -> None:
    K = nerve(matrix_end(2), WHEELED)
    assert segal_bijective(K, contracted_corolla(1, 1))


def test_wheel_horn() -> None:
    K = nerve(matrix_end(2), WHEELED)
    assert horn_wheel_check(K)
    assert not horn_wheel_check(RestrictedPresheaf(K))
    with pytest.raises(FlavorError):
        horn_wheel_check(nerve(matrix_end(2), FlavorEnum.wheeled_b))


def test_normal_form_of_degenerate_map() -> None:
    chain = linear_graph(2)
    K = Representable(make_corolla(1, 1), GAMMA)
    (x,) = [
        m for m in K.elements(chain)
        if m.on_vertex("v1").is_edge and m.on_vertex("v2").is_corolla
    ]
    assert is_degenerate(K, chain, x)
    form = ez_normal_form(K, chain, x)
    assert form.sigma.target.vertices == {"v2"}
    assert not is_degenerate(K, form.sigma.target, form.element)
    pairs = degeneracy_pairs(K, chain, x)
    assert len(pairs) == 1
    assert pairs[0].sigma == form.sigma
    assert pairs[0].element == form.element


def test_identity_is_nondegenerate() -> None:
    corolla = make_corolla(1, 1)
    K = Representable(corolla, GAMMA)
    form = ez_normal_form(K, corolla, identity(corolla))
    assert form.sigma == identity(corolla)


def test_tabulated_presheaf_round_trip() -> None:
    catalog = enumerate_graphs(GAMMA, SMALL_GAMMA)
    K = Representable(make_corolla(1, 1), GAMMA)
    table = tabulate(K, catalog)
    record = table.to_record()
    restored = TabulatedPresheaf.from_record(record, GAMMA)
    assert restored.to_record() == record
    assert validate_functoriality(restored, catalog.graphs) > 0
    chain = linear_graph(2)
    assert len(restored.elements(chain)) == len(K.elements(chain)) == 4


def test_tabulated_presheaf_outside_bound() -> None:
    table = tabulate(Representable(make_corolla(1, 1), GAMMA), enumerate_graphs(GAMMA, Bounds(1, 0, 2, 2)))
    with pytest.raises(PresheafError):
        table.elements(linear_graph(2))


def test_tabulation_separates_wheeled_maps_with_equal_edges() -> None:
    catalog = enumerate_graphs(WHEELED, TINY)
    K = Representable(contracted_corolla(1, 1), WHEELED)
    table = tabulate(K, catalog)
    assert validate_functoriality(table, catalog.graphs) > 0


def test_quotient_presheaf_is_functorial() -> None:
    corolla = make_corolla(1, 1)
    base = Representable(corolla, GAMMA)
    edge = exceptional_edge("e")
    a, b = base.elements(edge)
    Q = QuotientPresheaf(base, edge, a, b)
    assert len(Q.elements(edge)) == 1
    assert len(Q.elements(corolla)) == 2
    assert validate_functoriality(Q, [edge, corolla, linear_graph(2)]) > 0


def build_bases(graphs) -> list[Representable]:
    return [Representable(g, GAMMA) for g in graphs if g.vertices]


def test_normal_forms_are_unique_for_representables_and_nerves() -> None:
    graphs = enumerate_graphs(GAMMA, SMALL_GAMMA).graphs
    presheaves = build_bases(graphs) + [
        nerve(end_properad([0, 1]), GAMMA),
        nerve(matrix_end(2), GAMMA),
    ]
    result = check_ez_lemma(presheaves, graphs)
    assert result.passed, result.counterexample
    assert result.checked_pairs > 0


def test_normal_forms_are_unique_for_random_quotients() -> None:
    graphs = enumerate_graphs(GAMMA, SMALL_GAMMA).graphs
    quotients = random_quotients(build_bases(graphs), graphs, 50, seed=7)
    assert len(quotients) == 50
    assert any(len(Q.elements(Q.anchor)) < len(Q.base.elements(Q.anchor)) for Q in quotients)
    result = check_ez_lemma(quotients, graphs)
    assert result.passed, result.counterexample
    for Q in quotients[:5]:
        assert validate_functoriality(Q, graphs) > 0


def test_random_quotients_are_reproducible() -> None:
    graphs = enumerate_graphs(GAMMA, SMALL_GAMMA).graphs

    def draw(seed: int) -> list[tuple]:
        return [
            (canonical_form(Q.anchor), Q.a.key, Q.b.key)
            for Q in random_quotients(build_bases(graphs), graphs, 10, seed=seed)
        ]

    assert draw(3) == draw(3)


def test_random_quotients_need_two_elements() -> None:
    edge = exceptional_edge("e")
    with pytest.raises(PresheafError):
        random_quotients([Representable(edge, GAMMA)], [edge], 1)
