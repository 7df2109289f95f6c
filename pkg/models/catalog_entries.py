from __future__ import annotations

from datetime import datetime
from typing import Optional

from sqlalchemy import UniqueConstraint
from sqlmodel import Field, SQLModel


class CatalogEntry(SQLModel, table=True):
    __tablename__ = "catalog_entries"
    __table_args__ = (
        UniqueConstraint("cache_key", "position", name="uq_catalog_entries_key_position"),
    )

    id: Optional[int] = Field(default=None, primary_key=True)

    # sha256 of flavor, bounds and format version
    cache_key: str = Field(max_length=64, index=True)
    flavor: str = Field(max_length=20)
    position: int

    canonical_key: str
    graph_json: str

    vertex_count: int = Field(default=0)
    edge_count: int = Field(default=0)
    degree: int = Field(default=0)

    created_at: datetime = Field(default_factory=datetime.utcnow)

    def __repr__(self) -> str:
        return f"<CatalogEntry id={self.id} position={self.position} flavor={self.flavor}>"
