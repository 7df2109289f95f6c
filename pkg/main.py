"""Command-line entry point for the graphical-category engine.

Exit codes: 0 when every check passes, 1 on any axiom failure, 2 on usage
errors (bad flags, unreadable or invalid input files).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

from pydantic import ValidationError
from sqlmodel import Session

from catalog import Bounds, Catalog, canonical_form
from catalog_cache import catalog_lines, export_jsonl, get_or_build_catalog
from database import get_engine
from errors import GraphError
from exporters import render_counterexample, render_dot, render_report, write_dot
from graphs import Graph, degree, degree_prime
from logging_config import configure_logging
from models import CheckStatusEnum, FlavorEnum
from morphisms import classify, compose, hom_set, validate
from presheaves import Presheaf, RestrictedPresheaf, horn_wheel_check, satisfies_segal
from properads import FiniteProperad, check_algebra_axioms, end_properad, matrix_end, nerve
from reedy import (
    check_composition_closure,
    check_ez_gamma,
    check_faithfulness,
    check_gamma_compatibility,
    check_reedy_axioms,
    reedy_factorize,
    section_through_edge,
    sections,
    set_section_count,
    witness_gammaw_not_ez,
)
from schemas import AxiomResult, GraphRecord, MorphismRecord, Report, morphism_json
from settings import get_settings

logger = logging.getLogger("wheelgraph.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

PROPERADS = ("end2", "matrixend2")


class UsageError(Exception):
    pass


# ------------------------------------------------------------
# INPUT / OUTPUT
# ------------------------------------------------------------

def _read_graph(path: str, flavor: Optional[FlavorEnum]) -> tuple[Graph, FlavorEnum]:
    record = GraphRecord.model_validate_json(Path(path).read_text(encoding="utf-8"))
    resolved = flavor or record.flavor or FlavorEnum.wheeled_a
    return record.to_graph(resolved), resolved


def _read_morphism(path: str, flavor: Optional[FlavorEnum]):
    record = MorphismRecord.model_validate_json(Path(path).read_text(encoding="utf-8"))
    if flavor is not None:
        record.flavor = flavor
    resolved = record.resolved_flavor()
    morphism = record.to_morphism()
    check = validate(morphism, resolved)
    if not check:
        raise UsageError(f"invalid morphism ({check.reason}): {check.detail}")
    return morphism, resolved


def _emit(args: argparse.Namespace, payload: Any, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_report(args: argparse.Namespace, report: Report) -> int:
    _emit(args, report.model_dump(mode="json"), render_report(report))
    return EXIT_OK if report.passed else EXIT_FAILURE


def _bounds(args: argparse.Namespace) -> Bounds:
    defaults = get_settings().bounds
    return Bounds(
        max_vertices=args.max_vertices if args.max_vertices is not None else defaults.max_vertices,
        max_inner=args.max_inner if args.max_inner is not None else defaults.max_inner,
        max_valence=args.max_valence if args.max_valence is not None else defaults.max_valence,
        max_legs=args.max_legs if args.max_legs is not None else defaults.max_legs,
    )


@contextmanager
def _cache_session(args: argparse.Namespace) -> Iterator[Optional[Session]]:
    location = args.catalog_cache or get_settings().catalog_cache
    if not location:
        yield None
        return
    with Session(get_engine(location)) as session:
        yield session


def _catalog(args: argparse.Namespace, flavor: FlavorEnum) -> Catalog:
    with _cache_session(args) as session:
        return get_or_build_catalog(session, flavor, _bounds(args))


def _jobs(args: argparse.Namespace) -> int:
    return max(1, args.jobs if args.jobs is not None else get_settings().jobs)


def _properad(name: str, flavor: FlavorEnum) -> FiniteProperad:
    if name == "end2":
        return end_properad([0, 1], flavor)
    return matrix_end(2)


# ------------------------------------------------------------
# COMMANDS
# ------------------------------------------------------------

def cmd_enumerate(args: argparse.Namespace) -> int:
    catalog = _catalog(args, args.flavor)
    lines = catalog_lines(catalog)
    payload = {
        "flavor": catalog.flavor.value,
        "bounds": dict(zip(("max_vertices", "max_inner", "max_valence", "max_legs"), catalog.bounds.as_tuple())),
        "count": len(lines),
        "graphs": [line.model_dump(mode="json") for line in lines],
    }
    text = "\n".join(f"{line.position:4d}  deg={line.degree:<3d} {line.key}" for line in lines)
    _emit(args, payload, f"{len(lines)} graphs ({catalog.flavor.value})\n{text}")
    return EXIT_OK


def cmd_hom(args: argparse.Namespace) -> int:
    source, flavor = _read_graph(args.source, args.flavor)
    target, _ = _read_graph(args.target, flavor)
    morphisms = hom_set(source, target, flavor)
    rows = [
        {"classification": classify(m, flavor).value, "morphism": morphism_json(m)}
        for m in morphisms
    ]
    text = "\n".join(
        f"{row['classification']:<26} f0={json.dumps(row['morphism']['f0'], sort_keys=True)}" for row in rows
    )
    _emit(args, {"flavor": flavor.value, "count": len(rows), "morphisms": rows}, f"{len(rows)} morphisms\n{text}")
    return EXIT_OK


def cmd_factor(args: argparse.Namespace) -> int:
    morphism, flavor = _read_morphism(args.map, args.flavor)
    h, g = reedy_factorize(morphism, flavor)
    verified = compose(g, h, flavor) == morphism
    payload = {
        "flavor": flavor.value,
        "classification": classify(morphism, flavor).value,
        "minus": morphism_json(h),
        "plus": morphism_json(g),
        "middle": canonical_form(h.target),
        "verified": verified,
    }
    text = (
        f"{payload['classification']} factors through {payload['middle']}\n"
        f"  minus: {classify(h, flavor).value}\n"
        f"  plus:  {classify(g, flavor).value}\n"
        f"  verified: {'yes' if verified else 'no'}"
    )
    _emit(args, payload, text)
    return EXIT_OK if verified else EXIT_FAILURE


def cmd_sections(args: argparse.Namespace) -> int:
    morphism, flavor = _read_morphism(args.map, args.flavor)
    if args.through_edge:
        found = [section_through_edge(morphism, args.through_edge, flavor)]
    else:
        found = sections(morphism, flavor)
    payload = {
        "flavor": flavor.value,
        "count": len(found),
        "set_sections": set_section_count(morphism),
        "sections": [morphism_json(s) for s in found],
    }
    text = "\n".join(
        [f"{len(found)} sections"]
        + [f"  f0={json.dumps(dict(s.f0), sort_keys=True)}" for s in found]
    )
    _emit(args, payload, text)
    return EXIT_OK


def _segal_presheaf(args: argparse.Namespace, flavor: FlavorEnum) -> Presheaf:
    K: Presheaf = nerve(_properad(args.properad, flavor), flavor)
    if args.empty_at_loop:
        K = RestrictedPresheaf(K)
    return K


def cmd_check(args: argparse.Namespace) -> int:
    flavor: FlavorEnum = args.flavor
    jobs = _jobs(args)
    if args.suite == "compat" and not flavor.is_wheeled:
        raise UsageError("check compat runs over a wheeled catalog")
    if args.suite == "ez" and flavor is not FlavorEnum.wheel_free:
        raise UsageError("check ez runs over the wheel-free catalog")
    catalog = _catalog(args, flavor)
    if args.suite == "reedy":
        degree_function = degree_prime if args.degree == "prime" else degree
        report = check_reedy_axioms(catalog, degree_function, jobs)
    elif args.suite == "ez":
        report = check_ez_gamma(catalog, args.bound, jobs)
    elif args.suite == "segal":
        K = _segal_presheaf(args, flavor)
        report = satisfies_segal(K, catalog.up_to_degree(args.bound))
    elif args.suite == "closure":
        report = check_composition_closure(catalog, jobs)
        if flavor is FlavorEnum.wheel_free:
            faithful = check_faithfulness(catalog, jobs)
            report = Report(name="closure", flavor=flavor, results=report.results + faithful.results)
    else:
        report = check_gamma_compatibility(catalog, jobs)
    return _emit_report(args, report)


def cmd_nerve(args: argparse.Namespace) -> int:
    flavor: FlavorEnum = args.flavor
    properad = _properad(args.properad, flavor)
    catalog = _catalog(args, flavor)
    graphs = catalog.up_to_degree(args.bound)
    K = nerve(properad, flavor)
    results = list(satisfies_segal(K, graphs).results)
    results.extend(check_algebra_axioms(properad, graphs, flavor).results)
    if flavor.allows_loop:
        ok = horn_wheel_check(K)
        results.append(
            AxiomResult(
                axiom="wheel_horn",
                status=CheckStatusEnum.passed if ok else CheckStatusEnum.failed,
                checked_pairs=1,
                failures=0 if ok else 1,
            )
        )
    return _emit_report(args, Report(name=f"nerve[{properad.name}]", flavor=flavor, results=results))


def cmd_witness(args: argparse.Namespace) -> int:
    record = witness_gammaw_not_ez(args.flavor, args.n, args.m)
    _emit(args, record.model_dump(mode="json"), render_counterexample(record))
    return EXIT_OK if record.confirmed else EXIT_FAILURE


def cmd_export(args: argparse.Namespace) -> int:
    export_dir = args.output_dir or get_settings().export_dir
    if args.kind == "dot":
        if not args.graph:
            raise UsageError("export dot needs a GRAPH.json argument")
        graph, _ = _read_graph(args.graph, args.flavor)
        if args.stdout:
            sys.stdout.write(render_dot(graph, Path(args.graph).stem))
            return EXIT_OK
        path = write_dot(graph, export_dir, f"{Path(args.graph).stem}.dot")
    else:
        flavor = args.flavor or FlavorEnum.wheeled_a
        catalog = _catalog(args, flavor)
        path = export_jsonl(catalog, Path(export_dir) / f"catalog_{flavor.value}.jsonl")
    _emit(args, {"path": str(path)}, f"written {path}")
    return EXIT_OK


# ------------------------------------------------------------
# PARSER
# ------------------------------------------------------------

def _add_bounds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-vertices", type=int)
    parser.add_argument("--max-inner", type=int)
    parser.add_argument("--max-valence", type=int)
    parser.add_argument("--max-legs", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wheelgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--catalog-cache", help="SQLite path or database URL for the catalog cache")
    parser.add_argument("--jobs", type=int, help="worker processes for hom-table builds")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    commands = parser.add_subparsers(dest="command", required=True)

    enumerate_parser = commands.add_parser("enumerate", help="list connected graphs up to isomorphism")
    enumerate_parser.add_argument("--flavor", type=FlavorEnum.parse, default=FlavorEnum.wheeled_a)
    _add_bounds(enumerate_parser)
    enumerate_parser.set_defaults(handler=cmd_enumerate)

    hom_parser = commands.add_parser("hom", help="list graphical maps between two graphs")
    hom_parser.add_argument("source")
    hom_parser.add_argument("target")
    hom_parser.add_argument("--flavor", type=FlavorEnum.parse)
    hom_parser.set_defaults(handler=cmd_hom)

    factor_parser = commands.add_parser("factor", help="factor a map as minus then plus")
    factor_parser.add_argument("map")
    factor_parser.add_argument("--flavor", type=FlavorEnum.parse)
    factor_parser.set_defaults(handler=cmd_factor)

    sections_parser = commands.add_parser("sections", help="list sections of a map")
    sections_parser.add_argument("map")
    sections_parser.add_argument("--through-edge")
    sections_parser.add_argument("--flavor", type=FlavorEnum.parse)
    sections_parser.set_defaults(handler=cmd_sections)

    check_parser = commands.add_parser("check", help="run an axiom sweep over a catalog")
    check_parser.add_argument("suite", choices=("reedy", "ez", "segal", "closure", "compat"))
    check_parser.add_argument("--flavor", type=FlavorEnum.parse, default=FlavorEnum.wheeled_a)
    check_parser.add_argument("--degree", choices=("standard", "prime"), default="standard")
    check_parser.add_argument("--bound", type=int, default=4, help="degree bound for probes and Segal graphs")
    check_parser.add_argument("--properad", choices=PROPERADS, default="matrixend2")
    check_parser.add_argument("--empty-at-loop", action="store_true")
    _add_bounds(check_parser)
    check_parser.set_defaults(handler=cmd_check)

    nerve_parser = commands.add_parser("nerve", help="Segal and algebra checks for a nerve")
    nerve_parser.add_argument("--properad", choices=PROPERADS, default="matrixend2")
    nerve_parser.add_argument("--bound", type=int, default=3)
    nerve_parser.add_argument("--flavor", type=FlavorEnum.parse)
    _add_bounds(nerve_parser)
    nerve_parser.set_defaults(handler=cmd_nerve)

    witness_parser = commands.add_parser("witness", help="certify a wheeled counterexample")
    witness_parser.add_argument("kind", choices=("not-ez",))
    witness_parser.add_argument("--flavor", type=FlavorEnum.parse, default=FlavorEnum.wheeled_a)
    witness_parser.add_argument("--n", type=int, default=1)
    witness_parser.add_argument("--m", type=int, default=1)
    witness_parser.set_defaults(handler=cmd_witness)

    export_parser = commands.add_parser("export", help="render a graph or dump a catalog")
    export_parser.add_argument("kind", choices=("dot", "jsonl"))
    export_parser.add_argument("graph", nargs="?")
    export_parser.add_argument("--flavor", type=FlavorEnum.parse)
    export_parser.add_argument("--output-dir")
    export_parser.add_argument("--stdout", action="store_true", help="print DOT instead of writing a file")
    _add_bounds(export_parser)
    export_parser.set_defaults(handler=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    configure_logging(sys.stderr)
    if args.command == "nerve" and args.flavor is None:
        args.flavor = FlavorEnum.wheel_free if args.properad == "end2" else FlavorEnum.wheeled_a
    try:
        return args.handler(args)
    except (GraphError, ValidationError, UsageError, OSError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        logger.debug("%s failed: %s", args.command, message)
        sys.stderr.write(f"error: {message}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
