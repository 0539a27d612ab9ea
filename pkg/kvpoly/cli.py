#!/usr/bin/env python3
"""
kvpoly CLI

  kv compute <file> [--json]          bracket, partition polynomial, P(G) and counts
  kv oracle <file> [--compare]        skein-expansion evaluation
  kv partitions <file>                partition classes and their signatures
  kv circuits <file>                  knot-theoretic circuits and the twisting number
  kv twist <file> --arc L --sign S    insert a curl and print the new diagram
  kv check [dir] [--json]             corpus manifest and acceptance properties
  kv config show|set|path|reset       settings at ~/.kvpoly/config.yaml
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import argcomplete
from rich.console import Console
from rich.table import Table

from .core import utils
from .core.config import DEFAULT_PATH, ConfigManager
from .core.corpus import CorpusError, default_corpus_dir, load_manifest
from .core.diagram import Diagram, DiagramError, circuits, insert_curl, load_diagram, serialize_diagram
from .core.invariant import braces, compute_report, partition_classes
from .core.laurent import PolynomialError
from .core.orientation import circuit_self_writhe, orientation_to_dict, twisting_number
from .core.properties import CheckSettings, run_checks
from .core.skein import ExpansionLimitError, oracle_bracket

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_CAP = 3

console = Console()


def load_or_exit(path: str) -> Diagram:
    """
    Load a diagram file, exiting with the input-error code on failure.

    Args:
        path: Diagram file path
    """
    try:
        return load_diagram(path)
    except (DiagramError, FileNotFoundError) as e:
        logger.error(f"Cannot load {path}: {e}")
        utils.error(str(e))
        sys.exit(EXIT_INPUT)


def compute_command(config: ConfigManager, path: str, as_json: bool = False, workers: int = 1) -> None:
    """Print the invariant report of a diagram as text or JSON."""
    d = load_or_exit(path)
    report = compute_report(d, workers=workers)

    if as_json:
        print(json.dumps(report.to_dict(), indent=config.get_int("output.json_indent")))
        return

    rows = [
        ("bracket", report.bracket),
        ("braces", report.braces),
        ("normalized", report.normalized),
        ("twist", report.twist),
        ("c", report.c),
        ("v", report.v),
        ("crossings", report.crossings),
        ("diagram_components", report.diagram_components),
        ("separable", str(report.separable).lower()),
    ]
    for name, value in rows:
        print(f"{name:<20}{value}")


def oracle_command(config: ConfigManager, path: str, compare: bool = False, cap: Optional[int] = None) -> None:
    """
    Evaluate a diagram by skein expansion.

    Args:
        config: Configuration manager instance
        path: Diagram file path
        compare: Also run the state sum and report whether both agree
        cap: Crossing cap (defaults to ``oracle.cap``)
    """
    d = load_or_exit(path)
    cap = config.get_oracle_cap() if cap is None else cap
    try:
        value = oracle_bracket(d, cap=cap)
    except ExpansionLimitError as e:
        logger.error(str(e))
        utils.error(f"{e} (raise it with --cap)")
        sys.exit(EXIT_CAP)

    print(value)
    if compare:
        state_sum = compute_report(d).bracket
        if state_sum == value:
            utils.success("Oracle and state sum are equal")
        else:
            utils.error(f"Oracle and state sum differ: state sum gives {state_sum}")
            sys.exit(EXIT_FAILURE)


def partitions_command(path: str) -> None:
    """List partition classes with their marks, signatures and orbit sizes."""
    d = load_or_exit(path)
    classes = partition_classes(d)
    if not classes:
        utils.warning("Diagram is not separable: it has no partitions")
    else:
        table = Table(title=f"Partitions ({len(classes)})")
        table.add_column("#", justify="right")
        table.add_column("Marks")
        table.add_column("Signature")
        table.add_column("Orientations", justify="right")
        for i, partition in enumerate(classes):
            marks = " ".join(f"{index}:{mark.value[0].upper()}" for index, mark in partition.marks)
            table.add_row(str(i), marks or "(null)", str(partition.signature), str(partition.size))
            logger.debug(f"Partition {i} representative: {orientation_to_dict(d, partition.representative)}")
        console.print(table)
    print(f"{{G}} = {braces(d)}")


def circuits_command(path: str) -> None:
    """List knot-theoretic circuits and the twisting number."""
    d = load_or_exit(path)
    found = circuits(d)
    table = Table(title=f"Circuits ({len(found)})")
    table.add_column("Circuit")
    table.add_column("Arcs")
    table.add_column("Vertex passages", justify="right")
    table.add_column("Self-writhe", justify="right")
    for circuit in found:
        arcs = " ".join(map(str, circuit.arcs)) or "(bare loop)"
        table.add_row(
            circuit.name, arcs, str(circuit.vertex_passages), str(circuit_self_writhe(d, circuit))
        )
    console.print(table)
    print(f"t = {twisting_number(d)}")


def twist_command(path: str, arc: int, sign: int) -> None:
    """Print the diagram with a curl spliced into ``arc``."""
    d = load_or_exit(path)
    try:
        curled = insert_curl(d, arc, sign)
    except DiagramError as e:
        utils.error(str(e))
        sys.exit(EXIT_INPUT)
    print(serialize_diagram(curled), end="")


def check_command(config: ConfigManager, directory: Optional[str], as_json: bool = False) -> None:
    """
    Run the corpus manifest comparison and the acceptance properties.

    Exits with 1 if anything fails and 2 if the corpus cannot be loaded.
    """
    corpus_dir = directory or str(default_corpus_dir())
    try:
        entries = load_manifest(corpus_dir)
    except CorpusError as e:
        logger.error(f"Corpus error: {e}")
        utils.error(str(e))
        sys.exit(EXIT_INPUT)

    settings = CheckSettings.from_config(config)
    if not as_json:
        utils.info(f"Checking {len(entries)} entries in {corpus_dir} (seed {settings.seed})")
    results = run_checks(entries, settings)
    failed = [result for result in results if not result.passed]

    if as_json:
        indent = config.get_int("output.json_indent")
        print(json.dumps([result.to_dict() for result in results], indent=indent))
    else:
        table = Table(title=f"kv check {corpus_dir}")
        table.add_column("Check")
        table.add_column("Result")
        table.add_column("Detail", overflow="fold")
        for result in results:
            status = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
            table.add_row(result.name, status, result.detail)
        console.print(table)
        if failed:
            utils.error(f"{len(failed)} of {len(results)} checks failed")
        else:
            utils.success(f"All {len(results)} checks passed")

    if failed:
        sys.exit(EXIT_FAILURE)


def config_command(config: ConfigManager, action: str, args: List[str]) -> None:
    """
    Handle configuration commands.

    Args:
        config: Configuration manager instance
        action: Action to perform (show, set, path, reset)
        args: Additional arguments
    """
    if action == "show":
        print(json.dumps(config.config, indent=2, sort_keys=True))

    elif action == "set":
        if len(args) != 2:
            utils.error("Usage: kv config set <key> <value>")
            sys.exit(EXIT_INPUT)
        try:
            config.set(args[0], args[1])
        except ValueError as e:
            utils.error(str(e))
            sys.exit(EXIT_INPUT)
        utils.success("Configuration updated")

    elif action == "path":
        print(config.path)

    elif action == "reset":
        config.reset()
        utils.success(f"Configuration reset to defaults at {config.path}")


def _sign(value: str) -> int:
    sign = int(value)
    if sign not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be +1 or -1")
    return sign


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kv", description="Kauffman-Vogel polynomial of rigid-vertex graph diagrams"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")
    parser.add_argument("--log-file", help="Log to file")
    parser.add_argument("--config", default=DEFAULT_PATH, help="Config file path")

    sub = parser.add_subparsers(dest="cmd", help="Commands")

    p_compute = sub.add_parser("compute", help="Compute [G], {G}, P(G) and counts")
    p_compute.add_argument("file", help="Diagram file")
    p_compute.add_argument("--json", action="store_true", help="Print JSON")
    p_compute.add_argument("--workers", type=int, default=1, help="Threads for the state sum")

    p_oracle = sub.add_parser("oracle", help="Evaluate [G] by skein expansion")
    p_oracle.add_argument("file", help="Diagram file")
    p_oracle.add_argument("--compare", action="store_true", help="Compare with the state sum")
    p_oracle.add_argument("--cap", type=int, help="Maximum crossings to expand")

    p_partitions = sub.add_parser("partitions", help="List partitions and {G}")
    p_partitions.add_argument("file", help="Diagram file")

    p_circuits = sub.add_parser("circuits", help="List circuits and the twisting number")
    p_circuits.add_argument("file", help="Diagram file")

    p_twist = sub.add_parser("twist", help="Insert a curl into an arc")
    p_twist.add_argument("file", help="Diagram file")
    p_twist.add_argument("--arc", type=int, required=True, help="Arc label (0 for a bare loop)")
    p_twist.add_argument("--sign", type=_sign, required=True, help="Curl sign, +1 or -1")

    p_check = sub.add_parser("check", help="Check a corpus and the acceptance properties")
    p_check.add_argument("dir", nargs="?", help="Corpus directory (defaults to the shipped corpus)")
    p_check.add_argument("--json", action="store_true", help="Print JSON")

    p_conf = sub.add_parser("config", help="Manage configuration")
    p_conf.add_argument("action", choices=["show", "set", "path", "reset"], help="Action to perform")
    p_conf.add_argument("args", nargs="*", help="Action arguments")

    return parser


def main(argv: Optional[List[str]] = None) -> None:
    """Main CLI entry point."""
    parser = build_parser()
    argcomplete.autocomplete(parser)
    args = parser.parse_args(argv)

    log_level = "DEBUG" if args.verbose else "INFO"
    utils.setup_logging(log_level, args.log_file)

    config = ConfigManager(args.config)

    try:
        if args.cmd == "compute":
            compute_command(config, args.file, as_json=args.json, workers=args.workers)
        elif args.cmd == "oracle":
            oracle_command(config, args.file, compare=args.compare, cap=args.cap)
        elif args.cmd == "partitions":
            partitions_command(args.file)
        elif args.cmd == "circuits":
            circuits_command(args.file)
        elif args.cmd == "twist":
            twist_command(args.file, args.arc, args.sign)
        elif args.cmd == "check":
            check_command(config, args.dir, as_json=args.json)
        elif args.cmd == "config":
            config_command(config, args.action, args.args)
        else:
            parser.print_help()
    except PolynomialError as e:
        logger.error(f"Polynomial error: {e}", exc_info=True)
        utils.error(str(e))
        sys.exit(EXIT_INPUT)


if __name__ == "__main__":
    main()
