#!/usr/bin/env python3
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from catalog_cache import export_jsonl, get_or_build_catalog  # noqa: E402
from database import get_engine  # noqa: E402
from logging_config import configure_logging  # noqa: E402
from models import FlavorEnum  # noqa: E402
from settings import get_settings  # noqa: E402
from sqlmodel import Session  # noqa: E402


def main() -> int:
    configure_logging()
    settings = get_settings()
    for flavor in FlavorEnum:
        if settings.catalog_cache:
            with Session(get_engine(settings.catalog_cache)) as session:
                catalog = get_or_build_catalog(session, flavor, settings.bounds)
        else:
            catalog = get_or_build_catalog(None, flavor, settings.bounds)
        path = export_jsonl(catalog, Path(settings.export_dir) / f"catalog_{flavor.value}.jsonl")
        print(f"Catalogo esportato: {path} ({len(catalog)} grafi)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
