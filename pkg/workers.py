from __future__ import annotations

import logging
from multiprocessing import Pool
from typing import TYPE_CHECKING, Callable, Iterable, Sequence, TypeVar

from models import FlavorEnum
from morphisms import GraphMorphism, hom_set

if TYPE_CHECKING:
    from catalog import Catalog, HomTable

logger = logging.getLogger("wheelgraph.workers")

T = TypeVar("T")
R = TypeVar("R")


def _homs_from(
    payload: tuple[FlavorEnum, int, object, Sequence[object]],
) -> list[tuple[int, int, tuple[GraphMorphism, ...]]]:
    flavor, source_index, source, targets = payload
    rows = []
    for target_index, target in enumerate(targets):
        morphisms = hom_set(source, target, flavor)
        if morphisms:
            rows.append((source_index, target_index, morphisms))
    return rows


def parallel_map(function: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Map in order; a pool is only started for ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with Pool(processes=jobs) as pool:
        return pool.map(function, items)


def build_hom_table(catalog: "Catalog", jobs: int = 1) -> "HomTable":
    from catalog import HomTable

    graphs = catalog.graphs
    payloads = [(catalog.flavor, index, g, graphs) for index, g in enumerate(graphs)]
    entries: dict[tuple[int, int], tuple[GraphMorphism, ...]] = {}
    for rows in parallel_map(_homs_from, payloads, jobs):
        for source_index, target_index, morphisms in rows:
            entries[(source_index, target_index)] = morphisms
    table = HomTable(flavor=catalog.flavor, entries=entries)
    logger.info(
        "Built hom table for %s: %d graphs, %d morphisms (jobs=%d)",
        catalog.flavor.value,
        len(graphs),
        table.total,
        jobs,
    )
    return table
