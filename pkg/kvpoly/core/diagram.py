"""
kvpoly Diagram Model

Extended PD codes for 4-valent rigid-vertex graph diagrams: parsing, validation,
serialization, editing moves and the quotient structures over arcs.

Slots are stored 0-based internally. Slot pairs (0, 2) and (1, 3) are the two
strands through a node; at a crossing (0, 2) is the under-strand.
"""

import logging
import pathlib
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx  # type: ignore

logger = logging.getLogger(__name__)

# (node index, slot index)
Dart = Tuple[int, int]
# ("arc", label) or ("loop", bare loop index)
Unit = Tuple[str, int]


class DiagramError(ValueError):
    """Raised for malformed or invalid diagrams and illegal editing requests."""

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")


class NodeKind(str, Enum):
    """Node kinds and their directive letters."""

    CROSSING = "X"
    VERTEX = "V"


@dataclass(frozen=True)
class Node:
    """A crossing or rigid vertex with four arc labels in counterclockwise order."""

    kind: NodeKind
    slots: Tuple[int, int, int, int]

    @property
    def is_crossing(self) -> bool:
        return self.kind is NodeKind.CROSSING

    @property
    def is_vertex(self) -> bool:
        return self.kind is NodeKind.VERTEX

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.slots)])


def opposite(slot: int) -> int:
    """Slot on the other end of the strand through a node."""
    return (slot + 2) % 4


@dataclass(frozen=True)
class Diagram:
    """
    Immutable diagram: ordered nodes plus a count of bare loops.

    Construction validates that every arc label occurs exactly twice and that
    the diagram is nonempty.
    """

    nodes: Tuple[Node, ...] = ()
    bare_loops: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if self.bare_loops < 0:
            raise DiagramError("Bare loop count cannot be negative")
        if not self.nodes and self.bare_loops == 0:
            raise DiagramError("Empty diagram")
        counts: Counter = Counter()
        for node in self.nodes:
            if len(node.slots) != 4:
                raise DiagramError(f"Node {node} does not have four slots")
            for label in node.slots:
                if isinstance(label, bool) or not isinstance(label, int) or label <= 0:
                    raise DiagramError(f"Arc label {label!r} is not a positive integer")
            counts.update(node.slots)
        bad = sorted(label for label, count in counts.items() if count != 2)
        if bad:
            raise DiagramError(
                f"Arc label {bad[0]} appears {counts[bad[0]]} time(s), expected 2"
            )

    @cached_property
    def _ends(self) -> Dict[int, Tuple[Dart, Dart]]:
        darts: Dict[int, List[Dart]] = {}
        for i, node in enumerate(self.nodes):
            for s, label in enumerate(node.slots):
                darts.setdefault(label, []).append((i, s))
        return {label: (pair[0], pair[1]) for label, pair in darts.items()}

    @property
    def labels(self) -> List[int]:
        return sorted(self._ends)

    @property
    def max_label(self) -> int:
        return max(self._ends, default=0)

    def arc_ends(self, label: int) -> Tuple[Dart, Dart]:
        """
        Both slot occurrences of an arc, ordered by (node, slot).

        Raises:
            DiagramError: If the arc does not exist
        """
        try:
            return self._ends[label]
        except KeyError:
            raise DiagramError(f"Unknown arc {label}") from None

    def label_at(self, dart: Dart) -> int:
        return self.nodes[dart[0]].slots[dart[1]]

    def partner(self, dart: Dart) -> Dart:
        """The other end of the arc leaving through ``dart``."""
        first, second = self._ends[self.label_at(dart)]
        return second if dart == first else first

    @property
    def crossing_indices(self) -> List[int]:
        return [i for i, node in enumerate(self.nodes) if node.is_crossing]

    @property
    def vertex_indices(self) -> List[int]:
        return [i for i, node in enumerate(self.nodes) if node.is_vertex]

    @property
    def n_crossings(self) -> int:
        return len(self.crossing_indices)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_indices)

    def __str__(self) -> str:
        return serialize_diagram(self).strip().replace("\n", ", ")


@dataclass(frozen=True)
class GraphEdge:
    """
    Arcs glued straight through crossings only.

    ``directions[k]`` is True when the canonical traversal runs along
    ``arcs[k]`` from its first occurrence to its second. ``ends`` holds the two
    vertex slots of an open edge and is None for a closed strand or bare loop.
    """

    arcs: Tuple[int, ...]
    directions: Tuple[bool, ...]
    ends: Optional[Tuple[Dart, Dart]] = None
    bare_loop: Optional[int] = None

    @property
    def is_closed(self) -> bool:
        return self.ends is None

    @property
    def name(self) -> str:
        if self.bare_loop is not None:
            return f"o{self.bare_loop}"
        return f"e{min(self.arcs)}"


@dataclass(frozen=True)
class Circuit:
    """Knot-theoretic circuit: arcs glued straight through every node."""

    arcs: Tuple[int, ...]
    directions: Tuple[bool, ...]
    vertex_passages: int = 0
    bare_loop: Optional[int] = None

    @property
    def name(self) -> str:
        if self.bare_loop is not None:
            return f"o{self.bare_loop}"
        return f"k{min(self.arcs)}"


def parse_diagram(text: str) -> Diagram:
    """
    Parse the diagram text format.

    Directives, one per line: ``X a b c d`` (crossing, under-strand a-c),
    ``V a b c d`` (rigid vertex), ``O`` (bare loop). ``#`` starts a comment.

    Args:
        text: Diagram source

    Returns:
        Validated diagram

    Raises:
        DiagramError: On malformed lines, bad label multiplicity or empty input
    """
    nodes: List[Node] = []
    node_lines: List[int] = []
    bare_loops = 0

    for line_number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive = tokens[0].upper()

        if directive == "O":
            if len(tokens) != 1:
                raise DiagramError("'O' takes no arguments", line_number)
            bare_loops += 1
            continue

        if directive not in ("X", "V"):
            raise DiagramError(f"Unknown directive '{tokens[0]}'", line_number)
        if len(tokens) != 5:
            raise DiagramError(
                f"'{directive}' needs 4 arc labels, got {len(tokens) - 1}", line_number
            )
        try:
            slots = tuple(int(token) for token in tokens[1:])
        except ValueError:
            raise DiagramError(f"Non-integer arc label in '{line}'", line_number) from None
        if any(label <= 0 for label in slots):
            raise DiagramError("Arc labels must be positive integers", line_number)
        nodes.append(Node(NodeKind(directive), slots))  # type: ignore[arg-type]
        node_lines.append(line_number)

    occurrences: Dict[int, List[int]] = {}
    for node, line_number in zip(nodes, node_lines):
        for label in node.slots:
            occurrences.setdefault(label, []).append(line_number)
    for label in sorted(occurrences):
        lines = occurrences[label]
        if len(lines) != 2:
            raise DiagramError(
                f"Arc label {label} appears {len(lines)} time(s), expected 2",
                lines[-1] if len(lines) > 2 else lines[0],
            )

    if not nodes and bare_loops == 0:
        raise DiagramError("Empty diagram")

    diagram = Diagram(tuple(nodes), bare_loops)
    logger.debug(
        f"Parsed diagram: {diagram.n_crossings} crossings, "
        f"{diagram.n_vertices} vertices, {bare_loops} bare loops"
    )
    return diagram


def load_diagram(path: Union[str, pathlib.Path]) -> Diagram:
    """
    Read and parse a diagram file.

    Raises:
        FileNotFoundError: If the file does not exist
        DiagramError: If the file cannot be read as UTF-8 text or its contents are
            invalid (message names the file)
    """
    path = pathlib.Path(path).expanduser()
    if not path.exists():
        raise FileNotFoundError(f"Diagram file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        logger.error(f"Diagram {path} is not UTF-8: {e}")
        raise DiagramError(f"{path.name}: not valid UTF-8 text ({e.reason} at byte {e.start})") from e
    except OSError as e:
        logger.error(f"Cannot read diagram {path}: {e}")
        raise DiagramError(f"{path.name}: cannot read file ({e.strerror or e})") from e
    try:
        return parse_diagram(text)
    except DiagramError as e:
        logger.error(f"Invalid diagram in {path}: {e}")
        error = DiagramError(f"{path.name}: {e}")
        error.line_number = e.line_number
        raise error from e


def serialize_diagram(d: Diagram) -> str:
    """Canonical text: nodes in stored order, then one ``O`` line per bare loop."""
    lines = [str(node) for node in d.nodes]
    lines.extend("O" for _ in range(d.bare_loops))
    return "\n".join(lines) + "\n"


def _walk(d: Diagram, start: Dart, stop_at_vertices: bool) -> Tuple[List[int], List[bool], Dart, int]:
    """
    Follow arcs from ``start`` (a dart the path leaves through).

    The walk passes straight through crossings, and through vertices unless
    ``stop_at_vertices`` is set. It ends on reaching a vertex (when stopping)
    or on returning to ``start``.

    Returns:
        (arcs, directions, final dart reached, vertex passages)
    """
    arcs: List[int] = []
    directions: List[bool] = []
    passages = 0
    dart = start
    while True:
        label = d.label_at(dart)
        arcs.append(label)
        directions.append(dart == d.arc_ends(label)[0])
        arrival = d.partner(dart)
        node = d.nodes[arrival[0]]
        if node.is_vertex:
            if stop_at_vertices:
                return arcs, directions, arrival, passages
            passages += 1
        dart = (arrival[0], opposite(arrival[1]))
        if dart == start:
            return arcs, directions, arrival, passages


def graph_edges(d: Diagram) -> List[GraphEdge]:
    """
    Arc classes glued through crossings only.

    Open edges run between two vertex slots and are traversed from the smaller
    one; closed strands start at the smallest arc; each bare loop is its own
    closed edge.
    """
    edges: List[GraphEdge] = []
    seen: Set[int] = set()

    for v in d.vertex_indices:
        for s in range(4):
            start = (v, s)
            if d.label_at(start) in seen:
                continue
            arcs, directions, end, _ = _walk(d, start, stop_at_vertices=True)
            seen.update(arcs)
            edges.append(GraphEdge(tuple(arcs), tuple(directions), (start, end)))

    for label in d.labels:
        if label in seen:
            continue
        arcs, directions, _, _ = _walk(d, d.arc_ends(label)[0], stop_at_vertices=True)
        seen.update(arcs)
        edges.append(GraphEdge(tuple(arcs), tuple(directions)))

    edges.extend(GraphEdge((), (), bare_loop=k) for k in range(d.bare_loops))
    return edges


def circuits(d: Diagram) -> List[Circuit]:
    """Knot-theoretic circuits; bare loops are circuits with no arcs or passages."""
    result: List[Circuit] = []
    seen: Set[int] = set()
    for label in d.labels:
        if label in seen:
            continue
        arcs, directions, _, passages = _walk(
            d, d.arc_ends(label)[0], stop_at_vertices=False
        )
        seen.update(arcs)
        result.append(Circuit(tuple(arcs), tuple(directions), passages))
    result.extend(Circuit((), (), bare_loop=k) for k in range(d.bare_loops))
    return result


def _unit_graph(d: Diagram, join_crossings: bool) -> nx.Graph:
    """
    Graph on arcs and bare loops; vertices join all four incident arcs,
    crossings join all four only when ``join_crossings`` is set.
    """
    g = nx.Graph()
    g.add_nodes_from(("arc", label) for label in d.labels)
    g.add_nodes_from(("loop", k) for k in range(d.bare_loops))
    for node in d.nodes:
        a, b, c, e = (("arc", label) for label in node.slots)
        g.add_edge(a, c)
        g.add_edge(b, e)
        if node.is_vertex or join_crossings:
            g.add_edge(a, b)
    return g


def component_units(d: Diagram, join_crossings: bool) -> List[FrozenSet[Unit]]:
    """
    Connected groups of arcs and bare loops, sorted by their smallest unit.

    Args:
        d: Diagram
        join_crossings: False for graph components, True for diagram components
    """
    groups = nx.connected_components(_unit_graph(d, join_crossings))
    return sorted((frozenset(group) for group in groups), key=min)


def graph_components(d: Diagram) -> int:
    """Components of the abstract graph: crossings do not join their strands."""
    return nx.number_connected_components(_unit_graph(d, join_crossings=False))


def diagram_components(d: Diagram) -> int:
    """Components of the planar graph obtained by turning crossings into vertices."""
    return nx.number_connected_components(_unit_graph(d, join_crossings=True))


def _require_crossing(d: Diagram, index: int) -> Node:
    if not 0 <= index < len(d.nodes):
        raise DiagramError(f"Node index {index} out of range (0..{len(d.nodes) - 1})")
    node = d.nodes[index]
    if not node.is_crossing:
        raise DiagramError(f"Node {index} is a vertex, not a crossing")
    return node


def _smooth(d: Diagram, index: int, joins: Sequence[Tuple[int, int]]) -> Diagram:
    node = _require_crossing(d, index)
    g = nx.Graph()
    g.add_nodes_from(node.slots)
    for s, t in joins:
        g.add_edge(node.slots[s], node.slots[t])

    remaining = tuple(n for i, n in enumerate(d.nodes) if i != index)
    still_used = {label for n in remaining for label in n.slots}
    relabel: Dict[int, int] = {}
    new_loops = 0
    for group in nx.connected_components(g):
        if still_used.isdisjoint(group):
            new_loops += 1
            continue
        keep = min(group)
        relabel.update((label, keep) for label in group)

    nodes = tuple(
        Node(n.kind, tuple(relabel.get(label, label) for label in n.slots))  # type: ignore[arg-type]
        for n in remaining
    )
    return Diagram(nodes, d.bare_loops + new_loops)


def smooth_A(d: Diagram, index: int) -> Diagram:
    """
    A-smoothing: remove the crossing and join slots (1,2) and (3,4).

    Merged arcs keep their smallest label; a join closing on itself becomes a bare loop.

    Raises:
        DiagramError: If the index is out of range or names a vertex
    """
    return _smooth(d, index, [(0, 1), (2, 3)])


def smooth_B(d: Diagram, index: int) -> Diagram:
    """A^-1-smoothing: remove the crossing and join slots (1,4) and (2,3)."""
    return _smooth(d, index, [(0, 3), (1, 2)])


def vertexify(d: Diagram, index: int) -> Diagram:
    """Turn a crossing into a rigid vertex with the same slots."""
    node = _require_crossing(d, index)
    nodes = list(d.nodes)
    nodes[index] = Node(NodeKind.VERTEX, node.slots)
    return Diagram(tuple(nodes), d.bare_loops)


def insert_curl(d: Diagram, arc: int, sign: int) -> Diagram:
    """
    Splice a one-crossing curl into an arc (Reidemeister I twist).

    Arc 0 addresses a bare loop. With fresh labels n1 < n2 the curl is
    ``X n2 n2 L n1`` for sign +1 and ``X n1 n2 n2 L`` for sign -1, where L keeps
    its first occurrence and its second occurrence becomes n1. On a bare loop
    the curls are ``X n2 n2 n1 n1`` and ``X n1 n2 n2 n1``.

    Args:
        d: Diagram
        arc: Arc label, or 0 for a bare loop
        sign: +1 or -1

    Returns:
        Diagram with one more crossing

    Raises:
        DiagramError: On unknown arc or invalid sign
    """
    if sign not in (1, -1):
        raise DiagramError(f"Curl sign must be +1 or -1, got {sign}")
    n1, n2 = d.max_label + 1, d.max_label + 2

    if arc == 0:
        if d.bare_loops == 0:
            raise DiagramError("Arc 0 names a bare loop but the diagram has none")
        slots = (n2, n2, n1, n1) if sign == 1 else (n1, n2, n2, n1)
        return Diagram(d.nodes + (Node(NodeKind.CROSSING, slots),), d.bare_loops - 1)

    _, (i, s) = d.arc_ends(arc)
    nodes = list(d.nodes)
    patched = list(nodes[i].slots)
    patched[s] = n1
    nodes[i] = Node(nodes[i].kind, tuple(patched))  # type: ignore[arg-type]
    slots = (n2, n2, arc, n1) if sign == 1 else (n1, n2, n2, arc)
    nodes.append(Node(NodeKind.CROSSING, slots))
    logger.debug(f"Inserted {'+' if sign == 1 else '-'} curl on arc {arc}")
    return Diagram(tuple(nodes), d.bare_loops)


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    """Place two diagrams side by side; d2's labels are shifted above d1's."""
    offset = d1.max_label
    shifted = tuple(
        Node(n.kind, tuple(label + offset for label in n.slots))  # type: ignore[arg-type]
        for n in d2.nodes
    )
    return Diagram(d1.nodes + shifted, d1.bare_loops + d2.bare_loops)


def add_bare_loop(d: Diagram) -> Diagram:
    return Diagram(d.nodes, d.bare_loops + 1)


def mirror(d: Diagram) -> Diagram:
    """Swap over and under at every crossing by rotating its slots one step."""
    nodes = tuple(
        Node(n.kind, n.slots[1:] + n.slots[:1]) if n.is_crossing else n  # type: ignore[arg-type]
        for n in d.nodes
    )
    return Diagram(nodes, d.bare_loops)


def random_diagram(
    rng: random.Random,
    nodes: int,
    vertex_ratio: float = 0.5,
    loop_chance: float = 0.1,
) -> Diagram:
    """
    Random combinatorially valid diagram (planar realizability not enforced).

    The 4n slots are paired by a random perfect matching; each node is a vertex
    with probability ``vertex_ratio``.
    """
    darts = [(i, s) for i in range(nodes) for s in range(4)]
    rng.shuffle(darts)
    slots = [[0] * 4 for _ in range(nodes)]
    for label, k in enumerate(range(0, len(darts), 2), 1):
        for i, s in darts[k : k + 2]:
            slots[i][s] = label
    built = tuple(
        Node(
            NodeKind.VERTEX if rng.random() < vertex_ratio else NodeKind.CROSSING,
            tuple(node_slots),  # type: ignore[arg-type]
        )
        for node_slots in slots
    )
    loops = 1 if nodes == 0 or rng.random() < loop_chance else 0
    return Diagram(built, loops)
