"""Finite one-colored properads as graph algebras, and their nerves.

An operation names its inputs and outputs by edges; the payload is stored in
the sorted order of those names, so relabeling permutes the payload.
"""

from __future__ import annotations

import itertools
import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from errors import GraphError, ProperadError
from graphs import (
    Graph,
    Insertion,
    graph_substitution,
    subgraph_as_graph,
)
from models import CheckStatusEnum, FlavorEnum, SubgraphKindEnum
from morphisms import GraphMorphism
from presheaves import Presheaf
from schemas import AxiomResult, GraphRecord, Report

logger = logging.getLogger("wheelgraph.properads")


@dataclass(frozen=True)
class Operation:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    payload: tuple

    def __repr__(self) -> str:
        return f"<Operation {list(self.inputs)} -> {list(self.outputs)}>"


def _check_slots(graph: Graph, vertex: str, op: Operation) -> None:
    if op.inputs != tuple(sorted(graph.in_edges(vertex))) or op.outputs != tuple(
        sorted(graph.out_edges(vertex))
    ):
        raise ProperadError(f"Decoration at {vertex!r} does not match its incidences.")


class FiniteProperad(ABC):
    name: str
    flavors: frozenset[FlavorEnum]

    @abstractmethod
    def payloads(self, n: int, m: int) -> Iterable[tuple]:
        ...

    @abstractmethod
    def random_payload(self, n: int, m: int, rng: random.Random) -> tuple:
        ...

    @abstractmethod
    def unit(self, input_name: str, output_name: str) -> Operation:
        ...

    @abstractmethod
    def _reorder(
        self,
        payload: tuple,
        old_inputs: Sequence[str],
        old_outputs: Sequence[str],
        new_inputs: Sequence[str],
        new_outputs: Sequence[str],
    ) -> tuple:
        ...

    @abstractmethod
    def _evaluate(self, graph: Graph, decoration: Mapping[str, Operation], order: Sequence[str]) -> tuple:
        ...

    @abstractmethod
    def loop_value(self) -> tuple:
        ...

    def operations(self, inputs: Sequence[str], outputs: Sequence[str]) -> tuple[Operation, ...]:
        ins, outs = tuple(sorted(inputs)), tuple(sorted(outputs))
        return tuple(Operation(ins, outs, p) for p in self.payloads(len(ins), len(outs)))

    def random_operation(self, inputs: Sequence[str], outputs: Sequence[str], rng: random.Random) -> Operation:
        ins, outs = tuple(sorted(inputs)), tuple(sorted(outputs))
        return Operation(ins, outs, self.random_payload(len(ins), len(outs), rng))

    def relabel(
        self,
        op: Operation,
        inputs: Mapping[str, str],
        outputs: Mapping[str, str],
    ) -> Operation:
        renamed_in = [inputs[name] for name in op.inputs]
        renamed_out = [outputs[name] for name in op.outputs]
        new_in, new_out = tuple(sorted(renamed_in)), tuple(sorted(renamed_out))
        payload = self._reorder(op.payload, renamed_in, renamed_out, new_in, new_out)
        return Operation(new_in, new_out, payload)

    def evaluate(
        self,
        graph: Graph,
        decoration: Mapping[str, Operation],
        order: Optional[Sequence[str]] = None,
    ) -> Operation:
        if graph.is_exceptional_edge:
            (edge,) = graph.edges
            return self.unit(edge, edge)
        if graph.is_exceptional_loop:
            return Operation((), (), self.loop_value())
        for v in graph.vertices:
            _check_slots(graph, v, decoration[v])
        sequence = list(order) if order is not None else sorted(graph.vertices)
        if sorted(sequence) != sorted(graph.vertices):
            raise ProperadError("Evaluation order must list every vertex once.")
        payload = self._evaluate(graph, decoration, sequence)
        return Operation(tuple(sorted(graph.inputs)), tuple(sorted(graph.outputs)), payload)

    def nerve_elements(self, graph: Graph) -> tuple[tuple[Operation, ...], ...]:
        if not graph.vertices:
            return ((),)
        pools = [
            self.operations(graph.in_edges(v), graph.out_edges(v)) for v in sorted(graph.vertices)
        ]
        return tuple(itertools.product(*pools))


# ------------------------------------------------------------
# ENDOMORPHISMS OF A FINITE SET
# ------------------------------------------------------------

class EndProperad(FiniteProperad):
    """Functions X^n -> X^m composed along wheel-free graphs."""

    flavors = frozenset([FlavorEnum.wheel_free])

    def __init__(self, values: Sequence[Any]) -> None:
        if not values:
            raise ProperadError("The endomorphism properad needs a nonempty set.")
        self.values = tuple(values)
        self.name = f"end{len(self.values)}"
        self._position = {x: index for index, x in enumerate(self.values)}

    def _index(self, assignment: Sequence[Any]) -> int:
        index = 0
        for x in assignment:
            index = index * len(self.values) + self._position[x]
        return index

    def payloads(self, n: int, m: int) -> Iterable[tuple]:
        rows = len(self.values) ** n
        columns = list(itertools.product(self.values, repeat=m))
        return itertools.product(columns, repeat=rows)

    def random_payload(self, n: int, m: int, rng: random.Random) -> tuple:
        return tuple(
            tuple(rng.choice(self.values) for _ in range(m)) for _ in range(len(self.values) ** n)
        )

    def unit(self, input_name: str, output_name: str) -> Operation:
        return Operation((input_name,), (output_name,), tuple((x,) for x in self.values))

    def loop_value(self) -> tuple:
        raise ProperadError("Functions on a bare set have no trace.")

    def _reorder(self, payload, old_inputs, old_outputs, new_inputs, new_outputs) -> tuple:
        rows = []
        for assignment in itertools.product(self.values, repeat=len(new_inputs)):
            env = dict(zip(new_inputs, assignment))
            out = payload[self._index([env[name] for name in old_inputs])]
            out_env = dict(zip(old_outputs, out))
            rows.append(tuple(out_env[name] for name in new_outputs))
        return tuple(rows)

    def _evaluate(self, graph, decoration, order) -> tuple:
        if not graph.is_wheel_free:
            raise ProperadError("Functions compose only along wheel-free graphs.")
        position = {v: index for index, v in enumerate(order)}
        for e in graph.inner_edges:
            if position[graph.source_of(e)] >= position[graph.target_of(e)]:
                raise ProperadError("Evaluation order is not topological.")
        inputs, outputs = sorted(graph.inputs), sorted(graph.outputs)
        rows = []
        for assignment in itertools.product(self.values, repeat=len(inputs)):
            env = dict(zip(inputs, assignment))
            for v in order:
                op = decoration[v]
                out = op.payload[self._index([env[e] for e in op.inputs])]
                env.update(zip(op.outputs, out))
            rows.append(tuple(env[o] for o in outputs))
        return tuple(rows)

    def topological_order(self, graph: Graph) -> list[str]:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(graph.vertices)
        digraph.add_edges_from((graph.source_of(e), graph.target_of(e)) for e in graph.inner_edges)
        return list(nx.lexicographical_topological_sort(digraph))

    def evaluate(self, graph, decoration, order=None) -> Operation:
        if order is None and graph.vertices:
            order = self.topological_order(graph)
        return super().evaluate(graph, decoration, order)


def end_properad(values: Sequence[Any], flavor: FlavorEnum = FlavorEnum.wheel_free) -> EndProperad:
    if flavor.is_wheeled:
        raise ProperadError("Bare functions carry no trace; use a wheeled example instead.")
    return EndProperad(values)


# ------------------------------------------------------------
# BOOLEAN MATRICES
# ------------------------------------------------------------

class MatrixProperad(FiniteProperad):
    """Boolean tensors with axes outputs then inputs, contracted over inner and closed edges."""

    flavors = frozenset([FlavorEnum.wheel_free, FlavorEnum.wheeled_a, FlavorEnum.wheeled_b])

    def __init__(self, k: int) -> None:
        if k < 1:
            raise ProperadError("Matrix dimension must be positive.")
        self.k = k
        self.name = f"matrixend{k}"

    def tensor(self, op: Operation) -> np.ndarray:
        shape = (self.k,) * (len(op.outputs) + len(op.inputs))
        return np.array(op.payload, dtype=bool).reshape(shape)

    @staticmethod
    def _flatten(array: np.ndarray) -> tuple:
        return tuple(bool(x) for x in np.asarray(array, dtype=bool).reshape(-1))

    def payloads(self, n: int, m: int) -> Iterable[tuple]:
        return itertools.product((False, True), repeat=self.k ** (n + m))

    def random_payload(self, n: int, m: int, rng: random.Random) -> tuple:
        return tuple(rng.random() < 0.5 for _ in range(self.k ** (n + m)))

    def unit(self, input_name: str, output_name: str) -> Operation:
        return Operation((input_name,), (output_name,), self._flatten(np.eye(self.k, dtype=bool)))

    def loop_value(self) -> tuple:
        return (bool(np.trace(np.eye(self.k, dtype=np.int64)) > 0),)

    def _reorder(self, payload, old_inputs, old_outputs, new_inputs, new_outputs) -> tuple:
        old_axes = list(old_outputs) + list(old_inputs)
        old_polarity = ["out"] * len(old_outputs) + ["in"] * len(old_inputs)
        position = {(p, name): index for index, (p, name) in enumerate(zip(old_polarity, old_axes))}
        permutation = [position[("out", name)] for name in new_outputs] + [
            position[("in", name)] for name in new_inputs
        ]
        shape = (self.k,) * len(old_axes)
        array = np.array(payload, dtype=bool).reshape(shape)
        return self._flatten(np.transpose(array, permutation))

    def _evaluate(self, graph, decoration, order) -> tuple:
        label = {e: index for index, e in enumerate(sorted(graph.edges))}
        operands: list[Any] = []
        for v in order:
            op = decoration[v]
            operands.append(self.tensor(op).astype(np.int64))
            operands.append([label[e] for e in op.outputs] + [label[e] for e in op.inputs])
        result_axes = [label[o] for o in sorted(graph.outputs)] + [label[i] for i in sorted(graph.inputs)]
        contracted = np.einsum(*operands, result_axes)
        return self._flatten(np.asarray(contracted) > 0)


def matrix_end(k: int) -> MatrixProperad:
    return MatrixProperad(k)


# ------------------------------------------------------------
# NEGATIVE CONTROL
# ------------------------------------------------------------

class CorruptedProperad(FiniteProperad):
    """Delegates to ``base`` but swaps the first two outputs of every evaluation."""

    def __init__(self, base: FiniteProperad) -> None:
        self.base = base
        self.name = f"corrupted-{base.name}"
        self.flavors = base.flavors

    def payloads(self, n, m):
        return self.base.payloads(n, m)

    def random_payload(self, n, m, rng):
        return self.base.random_payload(n, m, rng)

    def unit(self, input_name, output_name):
        return self.base.unit(input_name, output_name)

    def loop_value(self):
        return self.base.loop_value()

    def _reorder(self, payload, old_inputs, old_outputs, new_inputs, new_outputs):
        return self.base._reorder(payload, old_inputs, old_outputs, new_inputs, new_outputs)

    def _evaluate(self, graph, decoration, order):
        return self.base._evaluate(graph, decoration, order)

    def evaluate(self, graph, decoration, order=None) -> Operation:
        result = self.base.evaluate(graph, decoration, order)
        if not graph.vertices or len(result.outputs) < 2:
            return result
        first, second = result.outputs[0], result.outputs[1]
        swap = {name: name for name in result.outputs}
        swap[first], swap[second] = second, first
        return self.relabel(result, {name: name for name in result.inputs}, swap)


def corrupted(base: FiniteProperad) -> CorruptedProperad:
    return CorruptedProperad(base)


# ------------------------------------------------------------
# AXIOMS
# ------------------------------------------------------------

def _decoration_json(decoration: Mapping[str, Operation]) -> dict[str, Any]:
    return {
        v: {"inputs": list(op.inputs), "outputs": list(op.outputs), "payload": repr(op.payload)}
        for v, op in sorted(decoration.items())
    }


def _witness(graph: Graph, decoration: Mapping[str, Operation]) -> dict[str, Any]:
    return {
        "graph": GraphRecord.from_graph(graph).model_dump(mode="json"),
        "decoration": _decoration_json(decoration),
    }


def _random_decoration(P: FiniteProperad, graph: Graph, rng: random.Random) -> dict[str, Operation]:
    return {
        v: P.random_operation(graph.in_edges(v), graph.out_edges(v), rng)
        for v in sorted(graph.vertices)
    }


def _substitution_agrees(
    P: FiniteProperad,
    graph: Graph,
    vertex: str,
    inserted: Graph,
    flavor: FlavorEnum,
    rng: random.Random,
) -> Optional[dict[str, Any]]:
    """Compare one-shot evaluation with evaluation of the inserted piece first."""
    insertion = Insertion(
        inserted,
        dict(zip(sorted(inserted.inputs), sorted(graph.in_edges(vertex)))),
        dict(zip(sorted(inserted.outputs), sorted(graph.out_edges(vertex)))),
    )
    try:
        sub = graph_substitution(graph, {vertex: insertion}, flavor)
    except GraphError:
        return None
    result = sub.graph
    if result.is_exceptional_loop:
        return None
    decoration = _random_decoration(P, result, rng)
    whole = P.evaluate(result, decoration)

    def host_name(x: str) -> str:
        if x in inserted.inner_edges:
            return sub.inner_map[(vertex, x)]
        leg = insertion.inputs.get(x) if x in inserted.inputs else insertion.outputs[x]
        return sub.edge_map[leg]

    inner_decoration = {}
    for h in inserted.vertices:
        op = decoration[sub.vertex_map[(vertex, h)]]
        ins = {host_name(x): x for x in inserted.in_edges(h)}
        outs = {host_name(x): x for x in inserted.out_edges(h)}
        inner_decoration[h] = P.relabel(op, ins, outs)
    piece = P.evaluate(inserted, inner_decoration)
    outer = {vertex: P.relabel(piece, dict(insertion.inputs), dict(insertion.outputs))}
    for u in graph.vertices - {vertex}:
        op = decoration[sub.vertex_map[(u, u)]]
        ins = {sub.edge_map[g]: g for g in graph.in_edges(u)}
        outs = {sub.edge_map[g]: g for g in graph.out_edges(u)}
        outer[u] = P.relabel(op, ins, outs)
    staged = P.evaluate(graph, outer)
    staged = P.relabel(
        staged,
        {g: sub.edge_map[g] for g in staged.inputs},
        {g: sub.edge_map[g] for g in staged.outputs},
    )
    if staged == whole:
        return None
    return _witness(result, decoration)


def check_algebra_axioms(
    P: FiniteProperad,
    graphs: Sequence[Graph],
    flavor: FlavorEnum,
    samples: int = 8,
    seed: int = 0,
) -> Report:
    rng = random.Random(seed)
    results: list[AxiomResult] = []

    unit_checked, unit_failures, unit_witness = 0, 0, None
    for graph in graphs:
        if len(graph.vertices) != 1 or graph.inner_edges:
            continue
        (v,) = graph.vertices
        pool = P.operations(graph.in_edges(v), graph.out_edges(v))
        for op in itertools.islice(pool, samples):
            unit_checked += 1
            if P.evaluate(graph, {v: op}) != op:
                unit_failures += 1
                unit_witness = unit_witness or _witness(graph, {v: op})
    results.append(_result("unit", unit_checked, unit_failures, unit_witness))

    sub_checked, sub_failures, sub_witness = 0, 0, None
    for graph in graphs:
        for v in sorted(graph.vertices):
            profile = graph.profile(v)
            candidates = [
                h for h in graphs
                if (len(h.inputs), len(h.outputs)) == profile and not h.is_exceptional_loop
            ][:samples]
            for inserted in candidates:
                sub_checked += 1
                witness = _substitution_agrees(P, graph, v, inserted, flavor, rng)
                if witness is not None:
                    sub_failures += 1
                    sub_witness = sub_witness or witness
    results.append(_result("substitution", sub_checked, sub_failures, sub_witness))

    if isinstance(P, EndProperad):
        order_checked, order_failures, order_witness = 0, 0, None
        for graph in graphs:
            if len(graph.vertices) < 2 or not graph.is_wheel_free:
                continue
            digraph = nx.DiGraph()
            digraph.add_nodes_from(graph.vertices)
            digraph.add_edges_from((graph.source_of(e), graph.target_of(e)) for e in graph.inner_edges)
            orders = list(itertools.islice(nx.all_topological_sorts(digraph), 2))
            if len(orders) < 2:
                continue
            decoration = _random_decoration(P, graph, rng)
            order_checked += 1
            if P.evaluate(graph, decoration, orders[0]) != P.evaluate(graph, decoration, orders[1]):
                order_failures += 1
                order_witness = order_witness or _witness(graph, decoration)
        results.append(_result("order_independence", order_checked, order_failures, order_witness))

    return Report(name=f"algebra[{P.name}]", flavor=flavor, results=results)


def _result(axiom: str, checked: int, failures: int, witness: Optional[dict[str, Any]]) -> AxiomResult:
    if failures:
        logger.warning("%s failed on %d of %d samples", axiom, failures, checked)
    return AxiomResult(
        axiom=axiom,
        status=CheckStatusEnum.failed if failures else CheckStatusEnum.passed,
        counterexample=witness,
        checked_pairs=checked,
        failures=failures,
    )


# ------------------------------------------------------------
# NERVE
# ------------------------------------------------------------

class NervePresheaf(Presheaf):
    """NP(G): decorations of G by operations named after the incident edges."""

    def __init__(self, properad: FiniteProperad, flavor: FlavorEnum) -> None:
        if flavor not in properad.flavors:
            raise ProperadError(f"{properad.name} is not an algebra over {flavor.value}.")
        super().__init__(flavor)
        self.properad = properad

    def _compute(self, graph: Graph) -> tuple:
        return self.properad.nerve_elements(graph)

    def act(self, morphism: GraphMorphism, x: tuple) -> tuple:
        P = self.properad
        source, target = morphism.source, morphism.target
        decoration = dict(zip(sorted(target.vertices), x))
        pulled = []
        for v in sorted(source.vertices):
            part = morphism.on_vertex(v)
            if part.kind is SubgraphKindEnum.edge:
                (a,), (b,) = source.in_edges(v), source.out_edges(v)
                pulled.append(P.unit(a, b))
                continue
            if part.kind is SubgraphKindEnum.loop:
                pulled.append(P.evaluate(target, {}))
                continue
            view = subgraph_as_graph(target, part)
            local = {
                w: P.relabel(decoration[w], view.input_copy, view.output_copy)
                for w in part.vertices
            }
            value = P.evaluate(view.graph, local)
            back_in = {morphism.on_edge(a): a for a in source.in_edges(v)}
            back_out = {morphism.on_edge(b): b for b in source.out_edges(v)}
            pulled.append(
                P.relabel(
                    value,
                    {leg: back_in[edge] for leg, edge in view.input_legs.items()},
                    {leg: back_out[edge] for leg, edge in view.output_legs.items()},
                )
            )
        return tuple(pulled)


def nerve(properad: FiniteProperad, flavor: FlavorEnum) -> NervePresheaf:
    return NervePresheaf(properad, flavor)
