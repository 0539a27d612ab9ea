"""Shared fixtures for kvpoly tests"""

import random

import pytest

from kvpoly.core.corpus import default_corpus_dir
from kvpoly.core.diagram import load_diagram, parse_diagram, random_diagram


@pytest.fixture
def corpus_dir():
    """Directory of the shipped corpus"""
    return default_corpus_dir()


@pytest.fixture
def corpus(corpus_dir):
    """Load a shipped corpus diagram by entry name"""

    def _load(name):
        return load_diagram(corpus_dir / f"{name}.kv")

    return _load


@pytest.fixture
def diagram():
    """Parse diagram text, with ", " accepted as a line separator"""

    def _parse(text):
        return parse_diagram(text.replace(", ", "\n"))

    return _parse


@pytest.fixture
def diagram_file(tmp_path):
    """Write diagram text to a file and return its path"""

    def _write(text, name="diagram.kv"):
        path = tmp_path / name
        path.write_text(text.replace(", ", "\n") + "\n")
        return path

    return _write


@pytest.fixture
def sample_diagrams(corpus_dir):
    """Every shipped corpus diagram followed by seeded random diagrams of 1 to 5 nodes"""
    shipped = [load_diagram(path) for path in sorted(corpus_dir.glob("*.kv"))]
    rng = random.Random(7)
    generated = [random_diagram(rng, nodes) for nodes in range(1, 6) for _ in range(4)]
    return shipped + generated
