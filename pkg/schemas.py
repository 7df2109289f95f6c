from typing import Any, Optional

from pydantic import BaseModel, Field, computed_field, field_validator

from errors import InvalidGraphError, MorphismError
from graphs import (
    Graph,
    Subgraph,
    check_graph,
    corolla_subgraph,
    edge_subgraph,
    loop_subgraph,
    span_subgraph,
)
from models import CheckStatusEnum, FlavorEnum, SubgraphKindEnum
from morphisms import GraphMorphism


# ---------- GRAPHS ----------

class EdgeRecord(BaseModel):
    id: str
    src: Optional[str] = None
    tgt: Optional[str] = None
    closed: bool = False


class GraphRecord(BaseModel):
    flavor: Optional[FlavorEnum] = None
    vertices: list[str] = Field(default_factory=list)
    edges: list[EdgeRecord] = Field(default_factory=list)

    @field_validator("flavor", mode="before")
    @classmethod
    def _parse_flavor(cls, value: Any) -> Any:
        if isinstance(value, str):
            return FlavorEnum.parse(value)
        return value

    def to_graph(self, flavor: Optional[FlavorEnum] = None) -> Graph:
        ids = [edge.id for edge in self.edges]
        if len(set(ids)) != len(ids):
            raise InvalidGraphError("Duplicate edge id in graph record.")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidGraphError("Duplicate vertex id in graph record.")
        graph = Graph.build(
            self.vertices,
            {edge.id: (edge.src, edge.tgt) for edge in self.edges},
            closed=[edge.id for edge in self.edges if edge.closed],
        )
        return check_graph(graph, flavor or self.flavor or FlavorEnum.wheeled_a)

    @classmethod
    def from_graph(cls, graph: Graph, flavor: Optional[FlavorEnum] = None) -> "GraphRecord":
        return cls(
            flavor=flavor,
            vertices=sorted(graph.vertices),
            edges=[
                EdgeRecord(
                    id=e,
                    src=graph.source_of(e),
                    tgt=graph.target_of(e),
                    closed=e in graph.closed,
                )
                for e in sorted(graph.edges)
            ],
        )


# ---------- MORPHISMS ----------

def subgraph_to_json(subgraph: Subgraph) -> dict[str, Any]:
    if subgraph.kind is SubgraphKindEnum.edge:
        return {"edge": subgraph.edge}
    if subgraph.kind is SubgraphKindEnum.loop:
        return {"loop": subgraph.edge}
    if subgraph.kind is SubgraphKindEnum.corolla:
        (vertex,) = subgraph.vertices
        return {"corolla": vertex}
    return {"span": sorted(subgraph.vertices)}


def subgraph_from_json(graph: Graph, value: dict[str, Any]) -> Subgraph:
    if len(value) != 1:
        raise MorphismError(f"Subgraph record must have exactly one kind: {value!r}")
    ((kind, payload),) = value.items()
    if kind == "edge":
        return edge_subgraph(payload)
    if kind == "loop":
        return loop_subgraph(graph)
    if kind == "corolla":
        return corolla_subgraph(payload)
    if kind == "span":
        if isinstance(payload, str):
            payload = [payload]
        return span_subgraph(graph, payload)
    raise MorphismError(f"Unknown subgraph kind {kind!r}.")


class MorphismRecord(BaseModel):
    flavor: Optional[FlavorEnum] = None
    source: GraphRecord
    target: GraphRecord
    f0: dict[str, str]
    f1: dict[str, dict[str, Any]] = Field(default_factory=dict)

    @field_validator("flavor", mode="before")
    @classmethod
    def _parse_flavor(cls, value: Any) -> Any:
        if isinstance(value, str):
            return FlavorEnum.parse(value)
        return value

    def resolved_flavor(self) -> FlavorEnum:
        return self.flavor or self.source.flavor or FlavorEnum.wheeled_a

    def to_morphism(self) -> GraphMorphism:
        flavor = self.resolved_flavor()
        source = self.source.to_graph(flavor)
        target = self.target.to_graph(flavor)
        f1 = {v: subgraph_from_json(target, value) for v, value in self.f1.items()}
        return GraphMorphism.build(source, target, self.f0, f1)

    @classmethod
    def from_morphism(
        cls, morphism: GraphMorphism, flavor: Optional[FlavorEnum] = None
    ) -> "MorphismRecord":
        return cls(
            flavor=flavor,
            source=GraphRecord.from_graph(morphism.source),
            target=GraphRecord.from_graph(morphism.target),
            f0=dict(morphism.f0),
            f1={v: subgraph_to_json(part) for v, part in morphism.f1},
        )


def morphism_json(morphism: Optional[GraphMorphism]) -> Optional[dict[str, Any]]:
    if morphism is None:
        return None
    return MorphismRecord.from_morphism(morphism).model_dump(mode="json", exclude_none=True)


# ---------- REPORTS ----------

class AxiomResult(BaseModel):
    axiom: str
    status: CheckStatusEnum
    counterexample: Optional[dict[str, Any]] = None
    checked_pairs: int = 0
    failures: int = 0
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status is CheckStatusEnum.passed


class Report(BaseModel):
    name: str
    flavor: Optional[FlavorEnum] = None
    results: list[AxiomResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def result(self, axiom: str) -> AxiomResult:
        for result in self.results:
            if result.axiom == axiom:
                return result
        raise KeyError(axiom)


class Counterexample(BaseModel):
    flavor: FlavorEnum
    morphism: dict[str, Any]
    classification: str
    sections: int
    maps_from_loop: Optional[int] = None
    intermediates_checked: int = 0
    factorizations: int = 0
    split_epi_mono_factorizations: int = 0
    confirmed: bool = False
    detail: Optional[str] = None
    companion: Optional["Counterexample"] = None


Counterexample.model_rebuild()


# ---------- PRESHEAVES / CATALOG ----------

class PresheafRecord(BaseModel):
    bound: int
    values: dict[str, list[str]] = Field(default_factory=dict)
    actions: dict[str, dict[str, str]] = Field(default_factory=dict)


class CatalogLine(BaseModel):
    key: str
    position: int
    degree: int
    graph: GraphRecord
