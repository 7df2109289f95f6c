from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from sqlalchemy.engine import Engine, make_url
from sqlmodel import Session, SQLModel, create_engine

import models  # noqa: F401  registers the cache table


def cache_url(location: str) -> str:
    """Accept either a SQLAlchemy URL or a bare filesystem path."""
    if "://" in location:
        return location
    return f"sqlite:///{Path(location).expanduser()}"


@lru_cache(maxsize=None)
def get_engine(location: str) -> Engine:
    url = cache_url(location)
    connect_args = {}
    if make_url(url).drivername == "sqlite":
        connect_args = {"check_same_thread": False}
    engine = create_engine(url, connect_args=connect_args)
    SQLModel.metadata.create_all(engine)
    return engine


def get_session(location: str):
    with Session(get_engine(location)) as session:
        yield session
