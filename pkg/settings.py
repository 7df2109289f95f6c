from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from catalog import Bounds


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        return default


@dataclass(frozen=True)
class Settings:
    catalog_cache: Optional[str]
    jobs: int
    bounds: Bounds
    export_dir: str


def get_settings() -> Settings:
    return Settings(
        catalog_cache=os.getenv("WHEELGRAPH_CATALOG_CACHE") or None,
        jobs=max(1, _int_env("WHEELGRAPH_JOBS", 1)),
        bounds=Bounds(
            max_vertices=_int_env("WHEELGRAPH_MAX_VERTICES", 3),
            max_inner=_int_env("WHEELGRAPH_MAX_INNER", 3),
            max_valence=_int_env("WHEELGRAPH_MAX_VALENCE", 3),
            max_legs=_int_env("WHEELGRAPH_MAX_LEGS", 3),
        ),
        export_dir=os.getenv("WHEELGRAPH_EXPORT_DIR", "exports"),
    )
