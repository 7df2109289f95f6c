from __future__ import annotations

from pathlib import Path

from exporters import dot_context, render_counterexample, render_dot, render_report, write_dot
from graphs import exceptional_loop, make_corolla
from models import CheckStatusEnum, FlavorEnum
from reedy import witness_gammaw_not_ez
from schemas import AxiomResult, Report


def build_report(status: CheckStatusEnum) -> Report:
    return Report(
        name="reedy",
        flavor=FlavorEnum.wheeled_a,
        results=[AxiomResult(axiom="i", status=status, checked_pairs=3, failures=int(status is CheckStatusEnum.failed))],
    )


def test_dot_context_adds_phantoms_for_legs() -> None:
    context = dot_context(make_corolla(2, 1))
    assert context["vertices"] == ["v"]
    assert sorted(context["phantoms"]) == ["in:i1", "in:i2", "out:o1"]
    assert {"src": "v", "tgt": "out:o1", "label": "o1"} in context["arrows"]


def test_closed_loop_is_drawn_on_its_own_phantom() -> None:
    context = dot_context(exceptional_loop("e"))
    assert context["phantoms"] == ["loop:e"]
    assert context["arrows"] == [{"src": "loop:e", "tgt": "loop:e", "label": "e"}]


def test_render_dot_quotes_names() -> None:
    text = render_dot(make_corolla(1, 1), 'odd "name"')
    assert text.startswith('digraph "odd \\"name\\""')


def test_write_dot(tmp_path: Path) -> None:
    path = write_dot(make_corolla(1, 1), str(tmp_path / "dots"), "c11.dot")
    assert path.read_text(encoding="utf-8") == render_dot(make_corolla(1, 1), "c11")


def test_render_report_marks_status() -> None:
    assert render_report(build_report(CheckStatusEnum.passed)).startswith("reedy [")
    assert "FAIL" in render_report(build_report(CheckStatusEnum.failed)).splitlines()[0]


def test_render_counterexample() -> None:
    text = render_counterexample(witness_gammaw_not_ez(FlavorEnum.wheeled_a))
    assert text.strip()
