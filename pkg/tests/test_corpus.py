"""Tests for kvpoly corpus loading and entry checks"""

import json

import pytest

from kvpoly.core.corpus import (
    CorpusEntry,
    CorpusError,
    check_entry,
    load_manifest,
)
from kvpoly.core.laurent import lp_parse

SHIPPED = [
    "bigon",
    "bigon_loops",
    "crossed_vertex",
    "curl_negative",
    "curl_positive",
    "figure_eight",
    "hopf",
    "hopf_vertex_kinks",
    "nonseparable",
    "three_loops",
    "trefoil_minus",
    "trefoil_plus",
    "two_loops",
    "unknot_loop",
    "vertex_figure_eight",
]


def write_corpus(directory, entries, files=None):
    """Write a manifest and diagram files into a directory"""
    for name, text in (files or {"curl.kv": "X 2 2 1 1\n"}).items():
        (directory / name).write_text(text)
    (directory / "manifest.json").write_text(json.dumps(entries))
    return directory


def curl_entry(**overrides):
    entry = {
        "name": "curl",
        "file": "curl.kv",
        "tags": ["knot"],
        "expected": {"bracket": "A", "twist": 1},
        "provenance": {"bracket": "hand expansion", "twist": "hand trace"},
    }
    entry.update(overrides)
    return entry


class TestShippedCorpus:
    """Test suite for the corpus shipped with the package"""

    def test_loads_sorted(self, corpus_dir):
        """Test that every shipped entry loads, sorted by name"""
        entries = load_manifest(corpus_dir)
        assert [entry.name for entry in entries] == SHIPPED

    def test_every_expected_value_has_provenance(self, corpus_dir):
        """Test provenance coverage"""
        for entry in load_manifest(corpus_dir):
            assert entry.expected
            assert set(entry.expected) <= set(entry.provenance)

    @pytest.mark.parametrize("name", SHIPPED)
    def test_entry_passes(self, corpus_dir, name):
        """Test that each shipped entry matches its manifest"""
        entry = next(e for e in load_manifest(corpus_dir) if e.name == name)
        result = check_entry(entry)
        assert result.passed, result.detail
        assert result.name == f"entry:{name}"


class TestLoadManifest:
    """Test suite for load_manifest validation"""

    def test_valid(self, tmp_path):
        """Test a minimal valid corpus"""
        entries = load_manifest(write_corpus(tmp_path, [curl_entry()]))
        assert len(entries) == 1
        assert entries[0].expected == {"bracket": lp_parse("A"), "twist": 1}
        assert entries[0].has_tag("knot")
        assert entries[0].load().n_crossings == 1

    def test_missing_manifest(self, tmp_path):
        """Test a directory without manifest.json"""
        with pytest.raises(CorpusError, match="manifest.json"):
            load_manifest(tmp_path)

    def test_empty_corpus(self, tmp_path):
        """Test that an empty manifest is an error"""
        with pytest.raises(CorpusError, match="empty"):
            load_manifest(write_corpus(tmp_path, []))

    def test_invalid_json(self, tmp_path):
        """Test a manifest that is not JSON"""
        (tmp_path / "manifest.json").write_text("{not json")
        with pytest.raises(CorpusError, match="Invalid JSON"):
            load_manifest(tmp_path)

    def test_not_an_array(self, tmp_path):
        """Test a manifest whose top level is an object"""
        (tmp_path / "manifest.json").write_text('{"name": "x"}')
        with pytest.raises(CorpusError, match="array"):
            load_manifest(tmp_path)

    @pytest.mark.parametrize(
        "overrides,message",
        [
            ({"file": "absent.kv"}, "not found"),
            ({"name": ""}, "missing 'name'"),
            ({"tags": ["torus"]}, "unknown tag"),
            ({"expected": {"colour": 1}, "provenance": {"colour": "x"}}, "unknown expected field"),
            ({"provenance": {"bracket": "hand expansion"}}, "no provenance for twist"),
            ({"expected": {"bracket": "A^(1/2)"}, "provenance": {"bracket": "x"}}, "bad polynomial"),
            ({"expected": {"twist": "1"}, "provenance": {"twist": "x"}}, "must be an integer"),
            ({"expected": {"separable": 1}, "provenance": {"separable": "x"}}, "true or false"),
            ({"expected": "bracket"}, "expected must be an object"),
            ({"tags": "knot"}, "tags must be a list"),
            ({"tags": [1]}, "tags must be a list"),
            ({"provenance": "hand expansion"}, "provenance must be an object"),
        ],
    )
    def test_invalid_entry(self, tmp_path, overrides, message):
        """Test each entry validation rule"""
        with pytest.raises(CorpusError, match=message):
            load_manifest(write_corpus(tmp_path, [curl_entry(**overrides)]))

    def test_duplicate_names(self, tmp_path):
        """Test that entry names must be unique"""
        with pytest.raises(CorpusError, match="Duplicate"):
            load_manifest(write_corpus(tmp_path, [curl_entry(), curl_entry()]))

    def test_unparseable_diagram(self, tmp_path):
        """Test that a diagram file that does not parse is a corpus error"""
        write_corpus(tmp_path, [curl_entry()], files={"curl.kv": "X 1 2 3\n"})
        with pytest.raises(CorpusError, match="invalid diagram"):
            load_manifest(tmp_path)

    def test_manifest_not_utf8(self, tmp_path):
        """Test that undecodable manifest bytes are a corpus error"""
        (tmp_path / "manifest.json").write_bytes(b'[{"name": "\xff"}]')
        with pytest.raises(CorpusError, match="not valid UTF-8"):
            load_manifest(tmp_path)

    def test_entry_keeps_parsed_diagram(self, tmp_path):
        """Test that the diagram parsed while loading is reused"""
        entry = load_manifest(write_corpus(tmp_path, [curl_entry()]))[0]
        (tmp_path / "curl.kv").write_text("O\n")
        assert entry.load().n_crossings == 1


class TestCheckEntry:
    """Test suite for check_entry"""

    def test_corrupted_expected_value(self, tmp_path):
        """Test that a wrong expected value fails with a readable detail"""
        write_corpus(tmp_path, [curl_entry(expected={"bracket": "A^2"}, provenance={"bracket": "x"})])
        result = check_entry(load_manifest(tmp_path)[0])
        assert not result.passed
        assert "bracket: expected 'A^2', got 'A'" in result.detail

    def test_broken_diagram_file(self, tmp_path):
        """Test that an unparseable diagram is a failed result"""
        path = tmp_path / "bad.kv"
        path.write_text("X 1 2 3\n")
        result = check_entry(CorpusEntry("bad", path))
        assert not result.passed
        assert "line 1" in result.detail

    def test_to_dict(self, tmp_path):
        """Test the JSON form of a result"""
        write_corpus(tmp_path, [curl_entry()])
        result = check_entry(load_manifest(tmp_path)[0])
        assert result.to_dict() == {"name": "entry:curl", "passed": True, "detail": "2 field(s) match"}
