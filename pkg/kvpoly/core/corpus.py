"""
kvpoly Corpus

Loads a directory of diagram files described by ``manifest.json`` and checks
computed invariants against the expected values recorded there.

Manifest format (JSON array)::

    [
      {
        "name": "curl_positive",
        "file": "curl_positive.kv",
        "tags": ["knot", "one-crossing"],
        "expected": {"bracket": "A", "twist": 1},
        "provenance": {"bracket": "hand expansion", "twist": "hand trace"}
      }
    ]
"""

import json
import logging
import pathlib
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from .diagram import Diagram, DiagramError, load_diagram
from .invariant import compute_report
from .laurent import LaurentPolynomial, PolynomialError, lp_parse

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"

TAGS = ("planar", "knot", "link", "non-separable", "one-crossing", "graph")

POLYNOMIAL_FIELDS = ("bracket", "braces", "normalized")
INTEGER_FIELDS = ("twist", "c", "v", "crossings", "diagram_components")
BOOLEAN_FIELDS = ("separable",)
EXPECTED_FIELDS = POLYNOMIAL_FIELDS + INTEGER_FIELDS + BOOLEAN_FIELDS


class CorpusError(ValueError):
    """Raised for a missing or invalid manifest, a missing or unparseable diagram file or an empty corpus."""


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one corpus entry comparison or acceptance property."""

    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class CorpusEntry:
    """One diagram of the corpus with its expected report fields."""

    name: str
    path: pathlib.Path
    tags: Tuple[str, ...] = ()
    expected: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, str] = field(default_factory=dict)
    diagram: Optional[Diagram] = field(default=None, compare=False, repr=False)

    def load(self) -> Diagram:
        if self.diagram is not None:
            return self.diagram
        return load_diagram(self.path)

    def has_tag(self, tag: str) -> bool:
        return tag in self.tags


def _parse_expected(name: str, raw: Any) -> Dict[str, Any]:
    if not isinstance(raw, dict):
        raise CorpusError(f"Entry '{name}': expected must be an object")
    expected: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in EXPECTED_FIELDS:
            raise CorpusError(f"Entry '{name}': unknown expected field '{key}'")
        if key in POLYNOMIAL_FIELDS:
            try:
                expected[key] = lp_parse(str(value))
            except PolynomialError as e:
                raise CorpusError(f"Entry '{name}': bad polynomial for '{key}': {e}") from e
        elif key in INTEGER_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise CorpusError(f"Entry '{name}': '{key}' must be an integer")
            expected[key] = value
        else:
            if not isinstance(value, bool):
                raise CorpusError(f"Entry '{name}': '{key}' must be true or false")
            expected[key] = value
    return expected


def _parse_entry(directory: pathlib.Path, raw: Any, index: int) -> CorpusEntry:
    if not isinstance(raw, dict):
        raise CorpusError(f"Manifest entry {index} is not an object")
    for key in ("name", "file"):
        if not isinstance(raw.get(key), str) or not raw[key]:
            raise CorpusError(f"Manifest entry {index} is missing '{key}'")
    name = raw["name"]

    path = directory / raw["file"]
    if not path.is_file():
        raise CorpusError(f"Entry '{name}': diagram file not found: {path}")
    try:
        diagram = load_diagram(path)
    except DiagramError as e:
        raise CorpusError(f"Entry '{name}': invalid diagram: {e}") from e

    raw_tags = raw.get("tags", [])
    if not isinstance(raw_tags, list) or not all(isinstance(tag, str) for tag in raw_tags):
        raise CorpusError(f"Entry '{name}': tags must be a list of strings")
    tags = tuple(raw_tags)
    unknown = [tag for tag in tags if tag not in TAGS]
    if unknown:
        raise CorpusError(f"Entry '{name}': unknown tag(s) {', '.join(unknown)}")

    expected = _parse_expected(name, raw.get("expected", {}))
    provenance = raw.get("provenance", {})
    if not isinstance(provenance, dict):
        raise CorpusError(f"Entry '{name}': provenance must be an object")
    missing = [key for key in expected if not provenance.get(key)]
    if missing:
        raise CorpusError(f"Entry '{name}': no provenance for {', '.join(missing)}")

    return CorpusEntry(name, path, tags, expected, {k: str(v) for k, v in provenance.items()}, diagram)


def load_manifest(directory: Union[str, pathlib.Path]) -> List[CorpusEntry]:
    """
    Load and validate a corpus directory.

    Args:
        directory: Directory containing manifest.json and diagram files

    Returns:
        Entries sorted by name

    Raises:
        CorpusError: If the manifest is missing, unreadable, malformed or empty, a
            diagram file is missing or invalid, or an expected value lacks provenance
    """
    directory = pathlib.Path(directory).expanduser()
    manifest = directory / MANIFEST_NAME
    if not manifest.is_file():
        raise CorpusError(f"No {MANIFEST_NAME} in {directory}")

    try:
        with open(manifest, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise CorpusError(f"Invalid JSON in {manifest}: {e}") from e
    except UnicodeDecodeError as e:
        raise CorpusError(f"{manifest} is not valid UTF-8: {e.reason} at byte {e.start}") from e
    except OSError as e:
        raise CorpusError(f"Cannot read {manifest}: {e}") from e

    if not isinstance(data, list):
        raise CorpusError(f"{manifest} must contain a JSON array")
    if not data:
        raise CorpusError(f"Corpus in {directory} is empty")

    entries = [_parse_entry(directory, raw, i) for i, raw in enumerate(data)]
    names = [entry.name for entry in entries]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise CorpusError(f"Duplicate entry name(s): {', '.join(duplicates)}")

    logger.info(f"Loaded {len(entries)} corpus entries from {directory}")
    return sorted(entries, key=lambda entry: entry.name)


def default_corpus_dir() -> pathlib.Path:
    """Directory of the corpus shipped with the package."""
    return pathlib.Path(__file__).resolve().parent.parent / "corpus"


def _show(value: Any) -> str:
    if isinstance(value, LaurentPolynomial):
        return f"'{value}'"
    return repr(value)


def check_entry(entry: CorpusEntry, workers: int = 1) -> CheckResult:
    """
    Compare the computed report of an entry with its expected fields.

    Diagram errors are reported as a failed result rather than raised.
    """
    name = f"entry:{entry.name}"
    try:
        report = compute_report(entry.load(), workers=workers)
    except (DiagramError, FileNotFoundError) as e:
        logger.error(f"Corpus entry {entry.name} failed to load: {e}")
        return CheckResult(name, False, str(e))

    mismatches = []
    for key, want in entry.expected.items():
        got = getattr(report, key)
        if got != want:
            mismatches.append(f"{key}: expected {_show(want)}, got {_show(got)}")

    if mismatches:
        logger.warning(f"Corpus entry {entry.name}: {'; '.join(mismatches)}")
        return CheckResult(name, False, "; ".join(mismatches))
    return CheckResult(name, True, f"{len(entry.expected)} field(s) match")
