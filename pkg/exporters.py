"""Jinja2 rendering of graphs (Graphviz DOT) and of check reports (plain text)."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from graphs import Graph
from schemas import Counterexample, Report

TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"


@lru_cache(maxsize=1)
def get_environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["quote"] = _quote
    return env


def _quote(value: Any) -> str:
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def dot_context(graph: Graph, name: str = "G") -> dict[str, Any]:
    """Legs end on invisible phantom nodes; a closed edge loops on its own phantom."""
    phantoms: list[str] = []
    arrows: list[dict[str, str]] = []
    for e in sorted(graph.edges):
        src, tgt = graph.source_of(e), graph.target_of(e)
        if e in graph.closed:
            node = f"loop:{e}"
            phantoms.append(node)
            arrows.append({"src": node, "tgt": node, "label": e})
            continue
        if src is None:
            src = f"in:{e}"
            phantoms.append(src)
        if tgt is None:
            tgt = f"out:{e}"
            phantoms.append(tgt)
        arrows.append({"src": src, "tgt": tgt, "label": e})
    return {
        "name": name,
        "vertices": sorted(graph.vertices),
        "phantoms": phantoms,
        "arrows": arrows,
    }


def render_dot(graph: Graph, name: str = "G") -> str:
    return get_environment().get_template("graph.dot.j2").render(**dot_context(graph, name))


def render_report(report: Report) -> str:
    return get_environment().get_template("report.txt.j2").render(report=report)


def render_counterexample(record: Counterexample) -> str:
    return get_environment().get_template("counterexample.txt.j2").render(record=record)


def write_dot(graph: Graph, directory: str, filename: Optional[str] = None) -> Path:
    path = Path(directory).expanduser()
    path.mkdir(parents=True, exist_ok=True)
    target = path / (filename or "graph.dot")
    target.write_text(render_dot(graph, target.stem), encoding="utf-8")
    return target
