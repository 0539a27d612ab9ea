"""
kvpoly Hyperbolic Orientations

Enumeration of hyperbolic orientations, crossing signs, writhe, the state sum
over orientations, separability and the twisting number.
"""

import itertools
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Tuple

from .diagram import Circuit, Dart, Diagram, DiagramError, circuits, graph_components, graph_edges
from .laurent import LaurentPolynomial
from .unionfind import ParityUnionFind

logger = logging.getLogger(__name__)

# Crossing sign keyed by (slot the under-strand enters, slot the over-strand enters).
SIGN_TABLE: Dict[Tuple[int, int], int] = {
    (0, 3): 1,
    (0, 1): -1,
    (2, 1): 1,
    (2, 3): -1,
}

# Parity between "points into the node" at two slots of one node.
CROSSING_RULES = ((0, 2, 1), (1, 3, 1))
VERTEX_RULES = ((0, 2, 0), (1, 3, 0), (0, 1, 1))


@dataclass(frozen=True)
class OrientationAssignment:
    """
    Direction of every arc and bare loop.

    An arc's direction is True when it runs from its first occurrence to its
    second (see ``Diagram.arc_ends``).
    """

    arcs: Tuple[Tuple[int, bool], ...]
    loops: Tuple[bool, ...] = ()

    @cached_property
    def _lookup(self) -> Dict[int, bool]:
        return dict(self.arcs)

    def direction(self, label: int) -> bool:
        return self._lookup[label]

    def points_in(self, d: Diagram, dart: Dart) -> bool:
        """Whether the arc at ``dart`` points into its node there."""
        label = d.label_at(dart)
        return self.direction(label) == (dart == d.arc_ends(label)[1])

    def reversed(self, labels: Iterable[int] = (), loops: Iterable[int] = ()) -> "OrientationAssignment":
        """Copy with the given arcs and bare loops reversed."""
        flip_arcs = set(labels)
        flip_loops = set(loops)
        return OrientationAssignment(
            tuple((label, direction ^ (label in flip_arcs)) for label, direction in self.arcs),
            tuple(direction ^ (k in flip_loops) for k, direction in enumerate(self.loops)),
        )


@dataclass(frozen=True)
class HyperbolicSet:
    """All hyperbolic orientations of a diagram; empty when the diagram is not separable."""

    orientations: Tuple[OrientationAssignment, ...]
    components: int

    def __len__(self) -> int:
        return len(self.orientations)

    def __iter__(self) -> Iterator[OrientationAssignment]:
        return iter(self.orientations)

    def __bool__(self) -> bool:
        return bool(self.orientations)


def _occurrence_flip(d: Diagram, dart: Dart) -> int:
    # points_in(dart) == direction xor (dart is the first occurrence)
    return int(dart == d.arc_ends(d.label_at(dart))[0])


def enumerate_hyperbolic(d: Diagram) -> HyperbolicSet:
    """
    Enumerate hyperbolic orientations by parity propagation.

    At crossings each strand passes straight through; at vertices the slots
    alternate in/out around the node. A contradiction gives the empty set,
    otherwise every graph component contributes a free choice of two.

    Args:
        d: Diagram

    Returns:
        HyperbolicSet with 0 or 2^c orientations
    """
    c = graph_components(d)
    uf = ParityUnionFind(d.labels)

    for i, node in enumerate(d.nodes):
        rules = CROSSING_RULES if node.is_crossing else VERTEX_RULES
        for s, t, relation in rules:
            x, y = (i, s), (i, t)
            parity = relation ^ _occurrence_flip(d, x) ^ _occurrence_flip(d, y)
            if not uf.union(d.label_at(x), d.label_at(y), parity):
                logger.debug(f"No hyperbolic orientation: conflict at node {i} ({node})")
                return HyperbolicSet((), c)

    roots = uf.roots()
    if len(roots) + d.bare_loops != c:
        logger.warning(f"Free choices {len(roots) + d.bare_loops} differ from c = {c}")

    offsets = {label: uf.find(label) for label in d.labels}
    orientations: List[OrientationAssignment] = []
    for bits in itertools.product((False, True), repeat=len(roots) + d.bare_loops):
        root_bits = dict(zip(roots, bits))
        arcs = tuple(
            (label, root_bits[root] ^ bool(parity))
            for label, (root, parity) in offsets.items()
        )
        orientations.append(OrientationAssignment(arcs, tuple(bits[len(roots):])))

    logger.debug(f"Found {len(orientations)} hyperbolic orientations (c = {c})")
    return HyperbolicSet(tuple(orientations), c)


def is_separable(d: Diagram) -> bool:
    """True iff the diagram has a hyperbolic orientation."""
    return bool(enumerate_hyperbolic(d))


def crossing_sign(d: Diagram, h: OrientationAssignment, index: int) -> int:
    """
    Sign of a crossing under an orientation, read from SIGN_TABLE.

    Raises:
        DiagramError: If the node is a vertex or the index is out of range
    """
    if not 0 <= index < len(d.nodes):
        raise DiagramError(f"Node index {index} out of range")
    if not d.nodes[index].is_crossing:
        raise DiagramError(f"Node {index} is a vertex, not a crossing")
    under = 0 if h.points_in(d, (index, 0)) else 2
    over = 1 if h.points_in(d, (index, 1)) else 3
    return SIGN_TABLE[(under, over)]


def writhe(d: Diagram, h: OrientationAssignment) -> int:
    """Sum of crossing signs."""
    return sum(crossing_sign(d, h, i) for i in d.crossing_indices)


def hyperbolic_state_sum(d: Diagram, workers: int = 1) -> LaurentPolynomial:
    """
    Sum of A^writhe over all hyperbolic orientations; zero when there are none.

    Writhes are summed as a multiset, so the result is order-independent and
    identical for every worker count. The thread pool mirrors the check runner;
    writhe evaluation holds the GIL, so more workers do not make it faster.

    Args:
        d: Diagram
        workers: Threads used to evaluate writhes
    """
    hyperbolic = enumerate_hyperbolic(d)
    if workers > 1 and len(hyperbolic) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            writhes = list(executor.map(lambda h: writhe(d, h), hyperbolic))
    else:
        writhes = [writhe(d, h) for h in hyperbolic]
    return LaurentPolynomial(Counter(writhes))


def _circuit_orientation(circuit: Circuit, reverse: bool) -> OrientationAssignment:
    return OrientationAssignment(
        tuple((label, direction ^ reverse) for label, direction in zip(circuit.arcs, circuit.directions))
    )


def circuit_self_writhe(d: Diagram, circuit: Circuit, reverse: bool = False) -> int:
    """
    Writhe of one circuit: signs of the crossings whose two strands both lie on it.

    Args:
        d: Diagram
        circuit: Circuit from ``circuits(d)``
        reverse: Traverse the circuit the other way (the result does not change)
    """
    if not circuit.arcs:
        return 0
    members = set(circuit.arcs)
    h = _circuit_orientation(circuit, reverse)
    return sum(
        crossing_sign(d, h, i)
        for i in d.crossing_indices
        if d.nodes[i].slots[0] in members and d.nodes[i].slots[1] in members
    )


def twisting_number(d: Diagram, reverse: bool = False) -> int:
    """Sum of the self-writhes of all circuits."""
    return sum(circuit_self_writhe(d, circuit, reverse) for circuit in circuits(d))


def orientation_to_dict(d: Diagram, h: OrientationAssignment) -> Dict[str, str]:
    """Edge name -> "+" (along the canonical traversal) or "-" for debug output."""
    result: Dict[str, str] = {}
    for edge in graph_edges(d):
        if edge.bare_loop is not None:
            along = h.loops[edge.bare_loop]
        else:
            along = h.direction(edge.arcs[0]) == edge.directions[0]
        result[edge.name] = "+" if along else "-"
    return result
