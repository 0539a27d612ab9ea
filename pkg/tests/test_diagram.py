"""Tests for the kvpoly diagram model"""

import random

import networkx as nx
import pytest

from kvpoly.core.diagram import (
    Diagram,
    DiagramError,
    Node,
    NodeKind,
    add_bare_loop,
    circuits,
    component_units,
    diagram_components,
    disjoint_union,
    graph_components,
    graph_edges,
    insert_curl,
    load_diagram,
    mirror,
    parse_diagram,
    random_diagram,
    serialize_diagram,
    smooth_A,
    smooth_B,
    vertexify,
)


class TestParsing:
    """Test suite for the diagram text format"""

    def test_parse_crossings_and_loops(self):
        """Test a mix of directives with comments and blank lines"""
        d = parse_diagram("# hopf plus a loop\nX 4 1 3 2\n\nx 2 3 1 4  # lower case\nO\n")
        assert d.n_crossings == 2
        assert d.n_vertices == 0
        assert d.bare_loops == 1
        assert d.nodes[1] == Node(NodeKind.CROSSING, (2, 3, 1, 4))

    def test_bare_loop_only(self):
        """Test that a single O is a valid diagram"""
        d = parse_diagram("O")
        assert d.nodes == ()
        assert d.bare_loops == 1

    @pytest.mark.parametrize(
        "text,line",
        [
            ("X 1 2 3", 1),
            ("O\nQ 1 2 3 4", 2),
            ("O\n\nV 1 2 a 2", 3),
            ("X 1 1 2 2\nV 0 3 3 4", 2),
            ("O extra", 1),
        ],
    )
    def test_malformed_line_reports_number(self, text, line):
        """Test that malformed lines carry their line number"""
        with pytest.raises(DiagramError) as excinfo:
            parse_diagram(text)
        assert excinfo.value.line_number == line
        assert f"line {line}" in str(excinfo.value)

    def test_label_appearing_once(self):
        """Test that a dangling label is reported at its line"""
        with pytest.raises(DiagramError, match="appears 1 time"):
            parse_diagram("X 1 2 3 4\nV 1 2 3 5")

    def test_label_appearing_three_times(self):
        """Test that an over-used label is reported at its last line"""
        with pytest.raises(DiagramError) as excinfo:
            parse_diagram("X 1 1 2 2\nV 1 3 3 4\nV 4 5 5 6\nV 6 7 7 8")
        assert excinfo.value.line_number == 2

    @pytest.mark.parametrize("text", ["", "# nothing here\n", "   \n"])
    def test_empty_diagram(self, text):
        """Test that an empty diagram is rejected"""
        with pytest.raises(DiagramError, match="Empty"):
            parse_diagram(text)

    def test_serialize_round_trip(self):
        """Test that serialized text parses back to the same diagram"""
        d = parse_diagram("V 1 1 2 3\nX 2 4 4 3\nO\nO")
        assert serialize_diagram(d) == "V 1 1 2 3\nX 2 4 4 3\nO\nO\n"
        assert parse_diagram(serialize_diagram(d)) == d


class TestLoadDiagram:
    """Test suite for load_diagram"""

    def test_load(self, diagram_file):
        """Test loading a diagram file"""
        d = load_diagram(diagram_file("X 2 2 1 1"))
        assert d.n_crossings == 1

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises FileNotFoundError"""
        with pytest.raises(FileNotFoundError):
            load_diagram(tmp_path / "absent.kv")

    def test_error_names_file(self, diagram_file):
        """Test that errors carry the file name and line number"""
        path = diagram_file("O, X 1 2 3", name="broken.kv")
        with pytest.raises(DiagramError) as excinfo:
            load_diagram(path)
        assert "broken.kv" in str(excinfo.value)
        assert excinfo.value.line_number == 2

    def test_invalid_utf8(self, tmp_path):
        """Test that undecodable bytes are a DiagramError naming the file"""
        path = tmp_path / "binary.kv"
        path.write_bytes(b"# \xff\xfe\nO\n")
        with pytest.raises(DiagramError, match="binary.kv: not valid UTF-8"):
            load_diagram(path)

    def test_directory(self, tmp_path):
        """Test that a directory path is a DiagramError rather than an OSError"""
        folder = tmp_path / "folder.kv"
        folder.mkdir()
        with pytest.raises(DiagramError, match="folder.kv: cannot read file"):
            load_diagram(folder)


class TestDiagramModel:
    """Test suite for Diagram validation and accessors"""

    def test_direct_construction_validates(self):
        """Test that constructing an invalid Diagram raises"""
        with pytest.raises(DiagramError):
            Diagram((Node(NodeKind.VERTEX, (1, 2, 3, 4)),))
        with pytest.raises(DiagramError):
            Diagram((), 0)
        with pytest.raises(DiagramError):
            Diagram((), -1)

    def test_arc_ends_and_partner(self, diagram):
        """Test occurrence lookup"""
        d = diagram("X 4 1 3 2, X 2 3 1 4")
        assert d.arc_ends(4) == ((0, 0), (1, 3))
        assert d.partner((0, 0)) == (1, 3)
        assert d.label_at((1, 2)) == 1
        assert d.labels == [1, 2, 3, 4]
        assert d.max_label == 4

    def test_unknown_arc(self, diagram):
        """Test that an unknown arc raises DiagramError"""
        with pytest.raises(DiagramError, match="Unknown arc"):
            diagram("X 2 2 1 1").arc_ends(9)

    def test_indices(self, diagram):
        """Test crossing and vertex index lists"""
        d = diagram("X 1 2 3 4, V 1 2 3 4")
        assert d.crossing_indices == [0]
        assert d.vertex_indices == [1]


class TestStructure:
    """Test suite for edges, circuits and components"""

    def test_graph_edges_of_vertex_figure_eight(self, diagram):
        """Test that a one-vertex graph has two open edges"""
        edges = graph_edges(diagram("V 1 1 2 2"))
        assert [edge.name for edge in edges] == ["e1", "e2"]
        assert edges[0].ends == ((0, 0), (0, 1))
        assert not edges[0].is_closed

    def test_graph_edges_of_hopf(self, diagram):
        """Test that each Hopf component is one closed edge"""
        edges = graph_edges(diagram("X 4 1 3 2, X 2 3 1 4"))
        assert [edge.arcs for edge in edges] == [(1, 2), (3, 4)]
        assert all(edge.is_closed for edge in edges)

    def test_bare_loop_edge(self):
        """Test that bare loops appear as their own edges and circuits"""
        d = parse_diagram("O\nO")
        assert [edge.name for edge in graph_edges(d)] == ["o0", "o1"]
        assert [circuit.name for circuit in circuits(d)] == ["o0", "o1"]

    def test_circuit_through_vertex(self, diagram):
        """Test that the vertex figure-eight is one circuit with two passages"""
        found = circuits(diagram("V 1 1 2 2"))
        assert len(found) == 1
        assert found[0].vertex_passages == 2
        assert set(found[0].arcs) == {1, 2}

    def test_odd_circuit(self, diagram):
        """Test circuits that pass a vertex once"""
        found = circuits(diagram("X 1 2 3 4, V 1 2 3 4"))
        assert [c.vertex_passages for c in found] == [1, 1]
        assert [c.name for c in found] == ["k1", "k2"]

    def test_bigon_loops_single_circuit(self, corpus):
        """Test a circuit through both vertices of the looped bigon"""
        found = circuits(corpus("bigon_loops"))
        assert len(found) == 1
        assert found[0].vertex_passages == 4

    @pytest.mark.parametrize(
        "name,c,dcount",
        [("hopf", 2, 1), ("two_loops", 2, 2), ("nonseparable", 1, 1), ("hopf_vertex_kinks", 2, 1)],
    )
    def test_components(self, corpus, name, c, dcount):
        """Test graph and diagram component counts"""
        d = corpus(name)
        assert graph_components(d) == c
        assert diagram_components(d) == dcount

    def test_components_match_networkx_union(self, corpus):
        """Test that component units partition every arc and loop"""
        d = disjoint_union(corpus("hopf"), corpus("two_loops"))
        groups = component_units(d, join_crossings=True)
        units = sorted(unit for group in groups for unit in group)
        assert units == sorted([("arc", label) for label in d.labels] + [("loop", 0), ("loop", 1)])
        assert len(groups) == 3


class TestMoves:
    """Test suite for smoothing, vertexification and curls"""

    def test_smoothings_of_positive_curl(self, corpus):
        """Test that the curl's smoothings give two loops and one loop"""
        d = corpus("curl_positive")
        assert smooth_A(d, 0) == Diagram((), 2)
        assert smooth_B(d, 0) == Diagram((), 1)

    def test_smoothings_of_negative_curl(self, corpus):
        """Test the mirror-image counts"""
        d = corpus("curl_negative")
        assert smooth_A(d, 0) == Diagram((), 1)
        assert smooth_B(d, 0) == Diagram((), 2)

    def test_smooth_keeps_smallest_label(self, diagram):
        """Test that merged arcs are relabelled to the smallest member"""
        d = diagram("X 1 2 3 4, V 1 2 3 4")
        assert serialize_diagram(smooth_A(d, 0)) == "V 1 1 3 3\n"
        assert serialize_diagram(smooth_B(d, 0)) == "V 1 2 2 1\n"

    def test_smooth_vertex_rejected(self, diagram):
        """Test that a vertex cannot be smoothed"""
        with pytest.raises(DiagramError, match="vertex"):
            smooth_A(diagram("X 1 2 3 4, V 1 2 3 4"), 1)

    def test_smooth_out_of_range(self, diagram):
        """Test a bad node index"""
        with pytest.raises(DiagramError, match="out of range"):
            smooth_B(diagram("X 2 2 1 1"), 3)

    def test_vertexify(self, corpus):
        """Test that vertexify keeps the slots"""
        d = vertexify(corpus("curl_positive"), 0)
        assert serialize_diagram(d) == "V 2 2 1 1\n"

    def test_curl_on_bare_loop(self):
        """Test curls on a bare loop"""
        d = parse_diagram("O")
        assert serialize_diagram(insert_curl(d, 0, 1)) == "X 2 2 1 1\n"
        assert serialize_diagram(insert_curl(d, 0, -1)) == "X 1 2 2 1\n"

    def test_curl_on_arc(self, corpus):
        """Test a curl spliced into an arc"""
        d = insert_curl(corpus("curl_positive"), 1, 1)
        assert serialize_diagram(d) == "X 2 2 1 3\nX 4 4 1 3\n"

    def test_curl_errors(self, corpus):
        """Test invalid curl requests"""
        d = corpus("curl_positive")
        with pytest.raises(DiagramError):
            insert_curl(d, 1, 2)
        with pytest.raises(DiagramError):
            insert_curl(d, 7, 1)
        with pytest.raises(DiagramError):
            insert_curl(d, 0, 1)

    def test_disjoint_union_shifts_labels(self, corpus):
        """Test that the second diagram is relabelled above the first"""
        d = disjoint_union(corpus("curl_positive"), corpus("hopf"))
        assert d.labels == [1, 2, 3, 4, 5, 6]
        assert d.n_crossings == 3

    def test_add_bare_loop(self, corpus):
        """Test adding a loop"""
        assert add_bare_loop(corpus("hopf")).bare_loops == 1

    def test_mirror(self, corpus):
        """Test that mirror rotates crossings and leaves vertices"""
        d = mirror(corpus("nonseparable"))
        assert serialize_diagram(d) == "X 2 3 4 1\nV 1 2 3 4\n"


class TestRandomDiagram:
    """Test suite for random_diagram"""

    def test_valid_and_seeded(self):
        """Test that random diagrams are valid and reproducible"""
        first = [random_diagram(random.Random(7), n) for n in range(1, 6)]
        second = [random_diagram(random.Random(7), n) for n in range(1, 6)]
        assert first == second
        for n, d in enumerate(first, 1):
            assert len(d.nodes) == n
            assert len(d.labels) == 2 * n

    def test_all_crossings(self):
        """Test vertex_ratio 0 gives only crossings"""
        d = random_diagram(random.Random(1), 4, vertex_ratio=0.0)
        assert d.n_vertices == 0

    def test_component_count_matches_networkx(self):
        """Test graph_components against a direct networkx construction"""
        rng = random.Random(3)
        for _ in range(10):
            d = random_diagram(rng, rng.randint(1, 5))
            g = nx.Graph()
            g.add_nodes_from(d.labels)
            for node in d.nodes:
                g.add_edge(node.slots[0], node.slots[2])
                g.add_edge(node.slots[1], node.slots[3])
                if node.is_vertex:
                    g.add_edge(node.slots[0], node.slots[1])
            assert graph_components(d) == nx.number_connected_components(g) + d.bare_loops


class TestStructuralInvariants:
    """Test suite for invariants over the corpus and seeded random diagrams"""

    def test_circuits_are_unions_of_edges(self, sample_diagrams):
        """Test that each graph edge lies in exactly one circuit and circuits are covered by edges"""
        for d in sample_diagrams:
            found = circuits(d)
            owner = {label: k for k, circuit in enumerate(found) for label in circuit.arcs}
            assert sorted(owner) == d.labels

            covered = {k: [] for k in range(len(found))}
            for edge in graph_edges(d):
                if edge.bare_loop is not None:
                    assert any(c.bare_loop == edge.bare_loop for c in found)
                    continue
                holders = {owner[label] for label in edge.arcs}
                assert len(holders) == 1
                covered[holders.pop()].extend(edge.arcs)

            for k, circuit in enumerate(found):
                assert sorted(covered[k]) == sorted(circuit.arcs)

    def test_graph_components_at_least_diagram_components(self, sample_diagrams):
        """Test that joining strands at crossings never adds components"""
        for d in sample_diagrams:
            assert graph_components(d) >= diagram_components(d)

    def test_moves_remove_one_crossing(self, sample_diagrams):
        """Test that smoothing or vertexifying any crossing removes exactly that crossing"""
        for d in sample_diagrams:
            for index in d.crossing_indices:
                for move in (smooth_A, smooth_B):
                    result = move(d, index)
                    assert result.n_crossings == d.n_crossings - 1
                    assert result.n_vertices == d.n_vertices
                vertexified = vertexify(d, index)
                assert vertexified.n_crossings == d.n_crossings - 1
                assert vertexified.n_vertices == d.n_vertices + 1

    @pytest.mark.parametrize("sign,smooth", [(1, smooth_B), (-1, smooth_A)])
    def test_curl_then_matching_smoothing(self, sample_diagrams, sign, smooth):
        """Test that undoing a curl with its loop-free smoothing restores the diagram"""
        for d in sample_diagrams:
            arcs = d.labels + ([0] if d.bare_loops else [])
            for arc in arcs:
                curled = insert_curl(d, arc, sign)
                undone = smooth(curled, len(curled.nodes) - 1)
                assert len(circuits(undone)) == len(circuits(d))
                assert undone == d
