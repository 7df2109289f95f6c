"""Persistence of enumerated catalogs in the ``catalog_entries`` table."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from sqlalchemy import func
from sqlmodel import Session, delete, select

from catalog import CATALOG_FORMAT_VERSION, Bounds, Catalog, canonical_form, enumerate_graphs
from graphs import degree
from models import CatalogEntry, FlavorEnum
from schemas import CatalogLine, GraphRecord

logger = logging.getLogger("wheelgraph.cache")


@dataclass(frozen=True)
class CacheInfo:
    cache_key: str
    flavor: str
    entries: int


def cache_key(flavor: FlavorEnum, bounds: Bounds) -> str:
    token = f"{flavor.value}|{bounds.token()}|{CATALOG_FORMAT_VERSION}"
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


def load_catalog(session: Session, flavor: FlavorEnum, bounds: Bounds) -> Optional[Catalog]:
    key = cache_key(flavor, bounds)
    rows = session.exec(
        select(CatalogEntry).where(CatalogEntry.cache_key == key).order_by(CatalogEntry.position)
    ).all()
    if not rows:
        return None
    graphs = tuple(GraphRecord.model_validate_json(row.graph_json).to_graph(flavor) for row in rows)
    logger.info("Loaded %d cached graphs for %s", len(graphs), flavor.value)
    return Catalog(flavor=flavor, bounds=bounds, graphs=graphs)


def store_catalog(session: Session, catalog: Catalog) -> str:
    key = cache_key(catalog.flavor, catalog.bounds)
    session.execute(delete(CatalogEntry).where(CatalogEntry.cache_key == key))
    for position, graph in enumerate(catalog.graphs):
        session.add(
            CatalogEntry(
                cache_key=key,
                flavor=catalog.flavor.value,
                position=position,
                canonical_key=canonical_form(graph),
                graph_json=GraphRecord.from_graph(graph).model_dump_json(),
                vertex_count=len(graph.vertices),
                edge_count=len(graph.edges),
                degree=degree(graph, catalog.flavor),
            )
        )
    session.commit()
    logger.info("Stored %d graphs for %s under %s", len(catalog), catalog.flavor.value, key[:12])
    return key


def get_or_build_catalog(
    session: Optional[Session], flavor: FlavorEnum, bounds: Bounds
) -> Catalog:
    if session is None:
        return enumerate_graphs(flavor, bounds)
    cached = load_catalog(session, flavor, bounds)
    if cached is not None:
        return cached
    catalog = enumerate_graphs(flavor, bounds)
    store_catalog(session, catalog)
    return catalog


def cache_info(session: Session) -> list[CacheInfo]:
    rows = session.exec(
        select(CatalogEntry.cache_key, CatalogEntry.flavor, func.count(CatalogEntry.id))
        .group_by(CatalogEntry.cache_key, CatalogEntry.flavor)
        .order_by(CatalogEntry.flavor, CatalogEntry.cache_key)
    ).all()
    return [CacheInfo(cache_key=key, flavor=flavor, entries=count) for key, flavor, count in rows]


def catalog_lines(catalog: Catalog) -> list[CatalogLine]:
    return [
        CatalogLine(
            key=canonical_form(graph),
            position=position,
            degree=degree(graph, catalog.flavor),
            graph=GraphRecord.from_graph(graph, catalog.flavor),
        )
        for position, graph in enumerate(catalog.graphs)
    ]


def export_jsonl(catalog: Catalog, path: Path) -> Path:
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for line in catalog_lines(catalog):
            handle.write(json.dumps(line.model_dump(mode="json"), sort_keys=True))
            handle.write("\n")
    logger.info("Exported %d graphs to %s", len(catalog), path)
    return path
