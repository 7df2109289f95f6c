from __future__ import annotations


class GraphError(ValueError):
    """Base class for every domain error raised by the engine."""


class InvalidGraphError(GraphError):
    pass


class SubstitutionError(GraphError):
    pass


class FlavorError(GraphError):
    pass


class MorphismError(GraphError):
    pass


class CatalogBoundsError(GraphError):
    pass


class PresheafError(GraphError):
    pass


class ProperadError(GraphError):
    pass
