import json
import tempfile
import unittest
from pathlib import Path

from sqlmodel import Session, select

from catalog import Bounds, canonical_form, enumerate_graphs
from catalog_cache import cache_info, cache_key, export_jsonl, get_or_build_catalog, load_catalog, store_catalog
from database import cache_url, get_engine
from models import CatalogEntry, FlavorEnum

TINY = Bounds(max_vertices=1, max_inner=1, max_valence=2, max_legs=2)


class CatalogCacheTests(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.root = Path(self.tmp.name)
        engine = get_engine(str(self.root / "cache.sqlite"))
        self.addCleanup(engine.dispose)
        self.session = Session(engine)
        self.addCleanup(self.session.close)

    def test_cache_url_accepts_paths_and_urls(self) -> None:
        self.assertEqual(cache_url("sqlite:///x.db"), "sqlite:///x.db")
        self.assertTrue(cache_url("x.db").startswith("sqlite:///"))

    def test_keys_depend_on_flavor_and_bounds(self) -> None:
        self.assertNotEqual(cache_key(FlavorEnum.wheeled_a, TINY), cache_key(FlavorEnum.wheeled_b, TINY))
        self.assertNotEqual(
            cache_key(FlavorEnum.wheeled_a, TINY), cache_key(FlavorEnum.wheeled_a, Bounds(1, 0, 2, 2))
        )

    def test_store_then_load_preserves_order(self) -> None:
        catalog = enumerate_graphs(FlavorEnum.wheeled_a, TINY)
        self.assertIsNone(load_catalog(self.session, FlavorEnum.wheeled_a, TINY))
        store_catalog(self.session, catalog)
        loaded = load_catalog(self.session, FlavorEnum.wheeled_a, TINY)
        self.assertIsNotNone(loaded)
        self.assertEqual(
            [canonical_form(g) for g in loaded.graphs], [canonical_form(g) for g in catalog.graphs]
        )

    def test_storing_twice_replaces_rows(self) -> None:
        catalog = enumerate_graphs(FlavorEnum.wheeled_b, TINY)
        store_catalog(self.session, catalog)
        store_catalog(self.session, catalog)
        rows = self.session.exec(select(CatalogEntry)).all()
        self.assertEqual(len(catalog), 8)
        self.assertEqual(len(rows), 8)

    def test_get_or_build_populates_cache_once(self) -> None:
        first = get_or_build_catalog(self.session, FlavorEnum.wheel_free, Bounds(1, 0, 2, 2))
        second = get_or_build_catalog(self.session, FlavorEnum.wheel_free, Bounds(1, 0, 2, 2))
        self.assertEqual(len(first), 7)
        self.assertEqual(first.graphs, second.graphs)
        (info,) = cache_info(self.session)
        self.assertEqual(info.flavor, FlavorEnum.wheel_free.value)
        self.assertEqual(info.entries, 7)

    def test_get_or_build_without_session(self) -> None:
        self.assertEqual(len(get_or_build_catalog(None, FlavorEnum.wheeled_a, TINY)), 9)

    def test_export_jsonl_writes_one_line_per_graph(self) -> None:
        catalog = enumerate_graphs(FlavorEnum.wheeled_a, TINY)
        path = export_jsonl(catalog, self.root / "out" / "catalog.jsonl")
        lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 9)
        first = json.loads(lines[0])
        self.assertEqual(first["position"], 0)
        self.assertEqual(first["key"], canonical_form(catalog.graphs[0]))


if __name__ == "__main__":
    unittest.main()
